// SPDX-License-Identifier: Apache-2.0

#include "aogd/wsr.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace aogd::wsr {

WsrInstance WsrInstance::make(std::vector<ComplexVector> h_d, std::vector<ComplexVector> h_r,
                              ComplexMatrix G, RealVector omega, double sigma2_0, double power) {
    WsrInstance inst;
    inst.h_d = std::move(h_d);
    inst.h_r = std::move(h_r);
    inst.G = std::move(G);
    inst.omega = std::move(omega);
    inst.sigma2_0 = sigma2_0;
    inst.power = power;
    if (inst.h_r.size() != inst.h_d.size()) {
        throw std::invalid_argument("wsr: direct and reflected channel counts differ");
    }
    inst.H_r.reserve(inst.h_r.size());
    for (const auto& hr : inst.h_r) {
        if (hr.size() != inst.G.rows()) throw std::invalid_argument("wsr: h_r length != M");
        inst.H_r.emplace_back(hr.conjugate().asDiagonal() * inst.G);
    }
    inst.validate();
    return inst;
}

void WsrInstance::validate() const {
    const auto kk = h_d.size();
    if (kk == 0) throw std::invalid_argument("wsr: need at least one user");
    if (h_r.size() != kk || H_r.size() != kk || static_cast<std::size_t>(omega.size()) != kk) {
        throw std::invalid_argument("wsr: per-user arrays disagree in length");
    }
    if (G.rows() == 0 || G.cols() == 0) throw std::invalid_argument("wsr: empty G");
    for (std::size_t k = 0; k < kk; ++k) {
        if (h_d[k].size() != G.cols() || h_r[k].size() != G.rows() || H_r[k].rows() != G.rows() ||
            H_r[k].cols() != G.cols()) {
            throw std::invalid_argument("wsr: channel dimensions disagree");
        }
        if (!all_finite(h_d[k]) || !all_finite(h_r[k])) {
            throw std::invalid_argument("wsr: non-finite channel entries");
        }
    }
    if ((omega.array() < 0.0).any() || !(omega.maxCoeff() > 0.0)) {
        throw std::invalid_argument("wsr: weights must be >= 0 with at least one positive");
    }
    if (!(sigma2_0 > 0.0) || !(power > 0.0) || !std::isfinite(sigma2_0) || !std::isfinite(power)) {
        throw std::invalid_argument("wsr: noise and power must be positive and finite");
    }
}

FpState FpState::zeros(const WsrInstance& inst) {
    return {RealVector::Zero(inst.k()), ComplexVector::Zero(inst.k()),
            ComplexMatrix::Zero(inst.n_t(), inst.k())};
}

ComplexMatrix effective_channels(const WsrInstance& inst, const UnitModulusVector& v) {
    if (v.size() != inst.m()) throw std::invalid_argument("wsr: phase vector size mismatch");
    ComplexMatrix c(inst.n_t(), inst.k());
    for (Eigen::Index k = 0; k < inst.k(); ++k) {
        c.col(k) = inst.h_d[k] + inst.H_r[k].adjoint() * v.v();
    }
    return c;
}

namespace {

void check_w(const WsrInstance& inst, const ComplexMatrix& W) {
    if (W.rows() != inst.n_t() || W.cols() != inst.k()) {
        throw std::invalid_argument("wsr: beamformer matrix must be N_t x K");
    }
}

// S(k, i) = h_k^H w_i
ComplexMatrix gram(const ComplexMatrix& channels, const ComplexMatrix& W) {
    return channels.adjoint() * W;
}

RealVector sinr_from_gram(const ComplexMatrix& s, double sigma2) {
    RealVector out(s.rows());
    for (Eigen::Index k = 0; k < s.rows(); ++k) {
        const double total = s.row(k).squaredNorm();
        const double signal = std::norm(s(k, k));
        out(k) = signal / (total - signal + sigma2);
    }
    return out;
}

}  // namespace

RealVector sinr_all(const WsrInstance& inst, const ComplexMatrix& W, const UnitModulusVector& v) {
    check_w(inst, W);
    return sinr_from_gram(gram(effective_channels(inst, v), W), inst.sigma2_0);
}

double sinr(const WsrInstance& inst, const ComplexMatrix& W, const UnitModulusVector& v,
            Eigen::Index k) {
    if (k < 0 || k >= inst.k()) throw std::out_of_range("wsr: user index out of range");
    return sinr_all(inst, W, v)(k);
}

double wsr_objective(const WsrInstance& inst, const ComplexMatrix& W, const UnitModulusVector& v) {
    const RealVector g = sinr_all(inst, W, v);
    double total = 0.0;
    for (Eigen::Index k = 0; k < g.size(); ++k) {
        total += inst.omega(k) * std::log1p(g(k));
    }
    return total;
}

RealVector update_p(const WsrInstance& inst, const ComplexMatrix& W, const UnitModulusVector& v) {
    return sinr_all(inst, W, v);
}

ComplexVector update_q(const WsrInstance& inst, const RealVector& p, const ComplexMatrix& W,
                       const UnitModulusVector& v) {
    check_w(inst, W);
    const ComplexMatrix s = gram(effective_channels(inst, v), W);
    ComplexVector q(inst.k());
    for (Eigen::Index k = 0; k < inst.k(); ++k) {
        const double amp = std::sqrt(inst.omega(k) * (1.0 + p(k)));
        q(k) = amp * s(k, k) / (s.row(k).squaredNorm() + inst.sigma2_0);
    }
    return q;
}

double f2_eval(const WsrInstance& inst, const RealVector& p, const ComplexVector& q,
               const ComplexMatrix& W, const UnitModulusVector& v) {
    check_w(inst, W);
    const ComplexMatrix s = gram(effective_channels(inst, v), W);
    double total = 0.0;
    for (Eigen::Index k = 0; k < inst.k(); ++k) {
        const double om = inst.omega(k);
        const double amp = std::sqrt(om * (1.0 + p(k)));
        total += om * std::log1p(p(k)) - om * p(k) +
                 2.0 * amp * (std::conj(q(k)) * s(k, k)).real() -
                 std::norm(q(k)) * (s.row(k).squaredNorm() + inst.sigma2_0);
    }
    return total;
}

namespace {

ComplexMatrix project_power(ComplexMatrix W, double power) {
    const double total = W.squaredNorm();
    if (total > power) {
        W *= std::sqrt(power / total);
    }
    return W;
}

}  // namespace

ComplexMatrix update_w_prox(const WsrInstance& inst, const RealVector& p, const ComplexVector& q,
                            const UnitModulusVector& v, const ComplexMatrix& W_prev) {
    check_w(inst, W_prev);
    const ComplexMatrix c = effective_channels(inst, v);
    const Eigen::Index nt = inst.n_t();

    // f2 in W: sum_k 2 Re{b_k^H w_k} - w_k^H D w_k + const
    ComplexMatrix d = ComplexMatrix::Zero(nt, nt);
    ComplexMatrix b(nt, inst.k());
    for (Eigen::Index k = 0; k < inst.k(); ++k) {
        d.noalias() += std::norm(q(k)) * c.col(k) * c.col(k).adjoint();
        b.col(k) = std::sqrt(inst.omega(k) * (1.0 + p(k))) * q(k) * c.col(k);
    }
    double lipschitz = 0.0;
    if (d.norm() > 0.0) {
        lipschitz = 1.01 * power_iteration(d, 1e-10, 5000).value;
    }
    const double step = lipschitz > 1e-12 ? 1.0 / lipschitz : 1.0;
    ComplexMatrix W = W_prev + step * (b - d * W_prev);
    return project_power(std::move(W), inst.power);
}

ComplexMatrix mrt_beamformers(const WsrInstance& inst, const UnitModulusVector& v) {
    const ComplexMatrix c = effective_channels(inst, v);
    ComplexMatrix W(inst.n_t(), inst.k());
    const double per_user = inst.power / static_cast<double>(inst.k());
    for (Eigen::Index k = 0; k < inst.k(); ++k) {
        const double n = c.col(k).norm();
        if (n > 0.0) {
            W.col(k) = std::sqrt(per_user) * c.col(k) / n;
        } else {
            W.col(k).setZero();
            W(0, k) = std::sqrt(per_user);
        }
    }
    return W;
}

FpState fp_inner_loop(const WsrInstance& inst, const UnitModulusVector& v, const FpState& state0,
                      double xi1, int max_inner, FpLoopReport* report) {
    if (max_inner < 1) throw std::invalid_argument("fp_inner_loop: max_inner must be >= 1");
    check_w(inst, state0.W);
    FpState s;
    s.W = state0.W.squaredNorm() > 0.0 ? project_power(state0.W, inst.power)
                                        : mrt_beamformers(inst, v);
    s.p = update_p(inst, s.W, v);
    s.q = update_q(inst, s.p, s.W, v);
    double f_prev = f2_eval(inst, s.p, s.q, s.W, v);
    if (!std::isfinite(f_prev)) throw NumericError("fp_inner_loop: non-finite f2");
    if (report != nullptr) report->f2_trace.push_back(f_prev);

    for (int cycle = 1; cycle <= max_inner; ++cycle) {
        s.W = update_w_prox(inst, s.p, s.q, v, s.W);
        if (report != nullptr) report->f2_trace.push_back(f2_eval(inst, s.p, s.q, s.W, v));
        s.p = update_p(inst, s.W, v);
        s.q = update_q(inst, s.p, s.W, v);
        const double f = f2_eval(inst, s.p, s.q, s.W, v);
        if (!std::isfinite(f)) throw NumericError("fp_inner_loop: non-finite f2");
        if (report != nullptr) {
            report->f2_trace.push_back(f);
            report->cycles = cycle;
        }
        if (normalized_increment(f, f_prev) < xi1) break;
        f_prev = f;
    }
    return s;
}

WsrQuadratics build_r_e(const WsrInstance& inst, const RealVector& p, const ComplexVector& q,
                        const ComplexMatrix& W) {
    check_w(inst, W);
    const Eigen::Index kk = inst.k();
    const Eigen::Index m = inst.m();
    WsrQuadratics out;
    out.R = ComplexMatrix::Zero(m, m);
    out.e = ComplexVector::Zero(m);
    out.a_bar.assign(kk, std::vector<ComplexVector>(kk));
    out.b_bar.assign(kk, std::vector<Complex>(kk));

    for (Eigen::Index k = 0; k < kk; ++k) {
        const ComplexMatrix a_k = inst.H_r[k] * W;  // column i is a_bar[i][k]
        const double q2 = std::norm(q(k));
        out.R.noalias() += q2 * a_k * a_k.adjoint();
        const double amp = std::sqrt(inst.omega(k) * (1.0 + p(k)));
        out.e += amp * std::conj(q(k)) * a_k.col(k);
        for (Eigen::Index i = 0; i < kk; ++i) {
            const Complex b_ik = inst.h_d[k].dot(W.col(i));
            out.a_bar[i][k] = a_k.col(i);
            out.b_bar[i][k] = b_ik;
            out.e -= q2 * std::conj(b_ik) * a_k.col(i);
        }
    }
    out.R = 0.5 * (out.R + out.R.adjoint()).eval();
    return out;
}

double f4_eval(const WsrQuadratics& q, const UnitModulusVector& v) {
    const ComplexVector& x = v.v();
    return x.dot(q.R * x).real() - 2.0 * x.dot(q.e).real();
}

RealVector gradient_theta_f4(const WsrQuadratics& q, const PhaseVector& theta) {
    const ComplexVector v = u_map(theta).v();
    const ComplexVector r = q.R * v - q.e;
    RealVector g(v.size());
    for (Eigen::Index k = 0; k < v.size(); ++k) {
        g(k) = 2.0 * (std::conj(r(k)) * (-kJ * v(k))).real();
    }
    return g;
}

ComplexVector wirtinger_gradient_f4(const WsrQuadratics& q, const UnitModulusVector& v) {
    return 2.0 * (q.R * v.v() - q.e);
}

UnitModulusVector elementwise_bcd_v(const WsrQuadratics& q, const UnitModulusVector& v,
                                    std::vector<double>* objective_trace) {
    ComplexVector x = v.v();
    ComplexVector rx = q.R * x;
    double f = 0.0;
    if (objective_trace != nullptr) f = x.dot(rx).real() - 2.0 * x.dot(q.e).real();

    for (Eigen::Index m = 0; m < x.size(); ++m) {
        // f4 as a function of x_m alone is const - 2 Re{conj(x_m) c_m}
        const Complex c_m = q.e(m) - (rx(m) - q.R(m, m) * x(m));
        const double mag = std::abs(c_m);
        if (mag > 0.0) {
            const Complex next = c_m / mag;
            const Complex delta = next - x(m);
            if (delta != Complex(0.0, 0.0)) {
                rx += q.R.col(m) * delta;
                x(m) = next;
            }
        }
        if (objective_trace != nullptr) {
            f = x.dot(rx).real() - 2.0 * x.dot(q.e).real();
            objective_trace->push_back(f);
        }
    }
    return UnitModulusVector::project(x);
}

WsrProblem::WsrProblem(WsrInstance inst, const SolverOptions& opts, bool warm_start)
    : inst_(std::move(inst)), xi1_(opts.xi1), max_inner_(opts.max_inner), warm_start_(warm_start) {
    inst_.validate();
}

WsrProblem::Block WsrProblem::initial_block(const PhaseVector&) const {
    FpState s = FpState::zeros(inst_);
    WsrQuadratics quads = build_r_e(inst_, s.p, s.q, s.W);
    return {std::move(s), std::move(quads)};
}

WsrProblem::Block WsrProblem::update_block(const PhaseVector& theta, const Block& previous) const {
    const UnitModulusVector v = u_map(theta);
    const FpState start = warm_start_ ? previous.state : FpState::zeros(inst_);
    FpState s = fp_inner_loop(inst_, v, start, xi1_, max_inner_);
    WsrQuadratics quads = build_r_e(inst_, s.p, s.q, s.W);
    return {std::move(s), std::move(quads)};
}

double WsrProblem::evaluate(const Block& q, const PhaseVector& theta) const {
    return -wsr_objective(inst_, q.state.W, u_map(theta));
}

RealVector WsrProblem::gradient_theta(const Block& q, const PhaseVector& theta) const {
    return gradient_theta_f4(q.quads, theta);
}

SolverOptions default_options() {
    SolverOptions o;
    o.gamma0 = 100.0;
    o.beta = 0.5;
    o.c = 1e-4;
    o.xi1 = 1e-5;
    o.xi2 = 1e-3;
    o.xi = 1e-3;
    o.max_inner = 500;
    return o;
}

}  // namespace aogd::wsr
