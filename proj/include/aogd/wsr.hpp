// SPDX-License-Identifier: Apache-2.0
//
// Weighted sum-rate maximization for a multi-user downlink assisted by a
// reflecting surface. The beamformers are handled through the closed-form
// fractional-programming surrogate
//
//   f2(p, q, W, v) = sum_k [ w_k log(1 + p_k) - w_k p_k
//                            + 2 sqrt(w_k (1 + p_k)) Re{conj(q_k) h_k^H w_k}
//                            - |q_k|^2 (sum_i |h_k^H w_i|^2 + sigma^2) ]
//
// where h_k^H = h_{d,k}^H + v^H H_{r,k} is the effective channel of user k.
// For fixed (p, q, W) the v-dependent part of f2 is -f4(v) with
// f4(v) = v^H R v - 2 Re{v^H e}.
//
// Users are indexed from 0.

#pragma once

#include <vector>

#include "aogd/phase.hpp"
#include "aogd/solver.hpp"

namespace aogd::wsr {

struct WsrInstance {
    std::vector<ComplexVector> h_d;  // K entries, length N_t (AP -> user)
    std::vector<ComplexVector> h_r;  // K entries, length M (surface -> user)
    ComplexMatrix G;                 // M x N_t (AP -> surface)
    std::vector<ComplexMatrix> H_r;  // cached diag(h_r[k]^H) G
    RealVector omega;                // user weights
    double sigma2_0 = 1.0;
    double power = 1.0;  // watts

    // Fills H_r and validates.
    static WsrInstance make(std::vector<ComplexVector> h_d, std::vector<ComplexVector> h_r,
                            ComplexMatrix G, RealVector omega, double sigma2_0, double power);

    Eigen::Index k() const noexcept { return static_cast<Eigen::Index>(h_d.size()); }
    Eigen::Index m() const noexcept { return G.rows(); }
    Eigen::Index n_t() const noexcept { return G.cols(); }
    void validate() const;
};

struct FpState {
    RealVector p;
    ComplexVector q;
    ComplexMatrix W;  // N_t x K, column k is user k's beamformer

    static FpState zeros(const WsrInstance& inst);
};

struct WsrQuadratics {
    ComplexMatrix R;
    ComplexVector e;
    std::vector<std::vector<ComplexVector>> a_bar;  // [i][k] = H_{r,k} w_i
    std::vector<std::vector<Complex>> b_bar;        // [i][k] = h_{d,k}^H w_i
};

// Columns are h_{d,k} + H_{r,k}^H v, so that column_k^H w = h_k^H w.
ComplexMatrix effective_channels(const WsrInstance& inst, const UnitModulusVector& v);

double sinr(const WsrInstance& inst, const ComplexMatrix& W, const UnitModulusVector& v,
            Eigen::Index k);
RealVector sinr_all(const WsrInstance& inst, const ComplexMatrix& W, const UnitModulusVector& v);

// Natural-log weighted sum rate.
double wsr_objective(const WsrInstance& inst, const ComplexMatrix& W, const UnitModulusVector& v);

RealVector update_p(const WsrInstance& inst, const ComplexMatrix& W, const UnitModulusVector& v);
ComplexVector update_q(const WsrInstance& inst, const RealVector& p, const ComplexMatrix& W,
                       const UnitModulusVector& v);
double f2_eval(const WsrInstance& inst, const RealVector& p, const ComplexVector& q,
               const ComplexMatrix& W, const UnitModulusVector& v);

// One projected-gradient ascent step on f2 in W with step 1/L, L the largest
// eigenvalue of sum_i |q_i|^2 h_i h_i^H (times 1.01), then scaling onto the
// total power ball.
ComplexMatrix update_w_prox(const WsrInstance& inst, const RealVector& p, const ComplexVector& q,
                            const UnitModulusVector& v, const ComplexMatrix& W_prev);

// Equal-power maximum-ratio beamformers towards the effective channels.
ComplexMatrix mrt_beamformers(const WsrInstance& inst, const UnitModulusVector& v);

struct FpLoopReport {
    std::vector<double> f2_trace;  // f2 after every W update and every (p, q) refresh
    int cycles = 0;
};

// Cycles p -> q -> W until the normalized f2 increment is below xi1 or
// max_inner cycles ran. The returned state has (p, q) refreshed for its W, so
// f2 of the result equals the weighted sum rate. An all-zero W is replaced by
// mrt_beamformers first.
FpState fp_inner_loop(const WsrInstance& inst, const UnitModulusVector& v, const FpState& state0,
                      double xi1, int max_inner, FpLoopReport* report = nullptr);

WsrQuadratics build_r_e(const WsrInstance& inst, const RealVector& p, const ComplexVector& q,
                        const ComplexMatrix& W);

double f4_eval(const WsrQuadratics& q, const UnitModulusVector& v);

RealVector gradient_theta_f4(const WsrQuadratics& q, const PhaseVector& theta);

// 2 * d f4 / d conj(v) = 2 (R v - e)
ComplexVector wirtinger_gradient_f4(const WsrQuadratics& q, const UnitModulusVector& v);

// One in-order sweep of exact per-element minimization of f4. When
// `objective_trace` is given, f4 after every element update is appended.
UnitModulusVector elementwise_bcd_v(const WsrQuadratics& q, const UnitModulusVector& v,
                                    std::vector<double>* objective_trace = nullptr);

/// Two-block adapter: Q is the converged FP state, objective is -WSR and the
/// phase gradient is that of f4 built from the state.
class WsrProblem {
public:
    struct Block {
        FpState state;
        WsrQuadratics quads;
    };

    WsrProblem(WsrInstance inst, const SolverOptions& opts, bool warm_start = true);

    const WsrInstance& instance() const noexcept { return inst_; }

    Block initial_block(const PhaseVector& theta) const;
    Block update_block(const PhaseVector& theta, const Block& previous) const;
    double evaluate(const Block& q, const PhaseVector& theta) const;
    RealVector gradient_theta(const Block& q, const PhaseVector& theta) const;

private:
    WsrInstance inst_;
    double xi1_;
    int max_inner_;
    bool warm_start_;
};

static_assert(TwoBlockProblem<WsrProblem>);

/// gamma0 = 100, beta = 0.5, c = 1e-4, xi1 = 1e-5, xi2 = 1e-3, max_inner = 500.
SolverOptions default_options();

}  // namespace aogd::wsr
