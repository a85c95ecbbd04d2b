// SPDX-License-Identifier: Apache-2.0
//
// Secrecy-rate maximization: a multi-antenna transmitter reaches a legitimate
// receiver through an M-element reflecting surface while an eavesdropper
// listens. The objective is
//
//   f(w, Phi) = (1 + |h_l^H Phi G w|^2 / s_l) / (1 + |h_e^H Phi G w|^2 / s_e)
//
// and for fixed w it equals (v^H Y_l v) / (v^H Y_e v) with
// Y_i = (1/M) I + z_i z_i^H, z_i = diag(h_i^H) G w / sigma_i.

#pragma once

#include <vector>

#include "aogd/phase.hpp"
#include "aogd/solver.hpp"

namespace aogd::secrecy {

struct SecrecyInstance {
    ComplexMatrix G;  // M x N_t, transmitter -> surface
    ComplexVector h_l;  // surface -> legitimate receiver
    ComplexVector h_e;  // surface -> eavesdropper
    double sigma2_l = 1.0;
    double sigma2_e = 1.0;
    double power = 1.0;  // watts

    Eigen::Index m() const noexcept { return G.rows(); }
    Eigen::Index n_t() const noexcept { return G.cols(); }
    void validate() const;
};

/// Y_i = scale * I + z_i z_i^H, kept in factored form; dense Y on request.
struct SecrecyQuadratics {
    double scale = 0.0;  // 1/M
    ComplexVector z_l;
    ComplexVector z_e;

    ComplexMatrix Y_l() const;
    ComplexMatrix Y_e() const;
};

// Beamformer maximizing f for fixed phases, scaled to |w|^2 = P.
ComplexVector optimal_beamformer(const SecrecyInstance& inst, const UnitModulusVector& v);

SecrecyQuadratics build_quadratics(const SecrecyInstance& inst, const ComplexVector& w);

// Objective evaluated directly from the channels.
double raw_objective(const SecrecyInstance& inst, const ComplexVector& w,
                     const UnitModulusVector& v);

double ratio_objective(const SecrecyQuadratics& q, const UnitModulusVector& v);

// d/dtheta of ratio_objective(q, u_map(theta)).
RealVector gradient_theta(const SecrecyQuadratics& q, const PhaseVector& theta);

// 2 * d ratio / d conj(v), so that d f = Re{g^H dv}.
ComplexVector wirtinger_gradient(const SecrecyQuadratics& q, const UnitModulusVector& v);

// max(log2(f), 0)
double secrecy_rate(double objective_value);

// One in-order sweep of exact per-element maximization. When `objective_trace`
// is given, the objective after every element update is appended to it.
UnitModulusVector elementwise_bcd_sweep(const SecrecyQuadratics& q, const UnitModulusVector& v,
                                        std::vector<double>* objective_trace = nullptr);

/// Two-block adapter: Q is the beamformer, objective is -f.
class SecrecyProblem {
public:
    struct Block {
        ComplexVector w;
        SecrecyQuadratics quads;
    };

    explicit SecrecyProblem(SecrecyInstance inst);

    const SecrecyInstance& instance() const noexcept { return inst_; }

    Block initial_block(const PhaseVector& theta) const;
    Block update_block(const PhaseVector& theta, const Block& previous) const;
    double evaluate(const Block& q, const PhaseVector& theta) const;
    RealVector gradient_theta(const Block& q, const PhaseVector& theta) const;

private:
    SecrecyInstance inst_;
};

static_assert(TwoBlockProblem<SecrecyProblem>);

/// gamma0 = 1e-3, beta = 0.5, c = 5e-5, xi = 1e-6, at most 5000 iterations.
SolverOptions default_options();

}  // namespace aogd::secrecy
