// SPDX-License-Identifier: Apache-2.0
//
// Phase-update strategies that can be swapped inside the same alternating
// loop: gradient steps (tailored, Armijo-Goldstein, Barzilai-Borwein),
// element-wise block coordinate descent, and Riemannian descent run to
// convergence on the phase subproblem.

#pragma once

#include <chrono>
#include <string_view>

#include "aogd/manifold.hpp"
#include "aogd/secrecy.hpp"
#include "aogd/solver.hpp"
#include "aogd/wsr.hpp"

namespace aogd {

enum class Method { aogd, ag, bb, bcd, manifold };

std::string_view to_string(Method m);
Method method_from_string(std::string_view name);

/// Alternating loop where the phase block is replaced by `update(q, theta)`.
/// Trace records carry step = 0 and backtracks = 0; the gradient norms are
/// those of the phase gradient at (Q_t, theta_t).
template <TwoBlockProblem P, typename Update>
SolveResult<P> solve_with_phase_update(const P& problem, const PhaseVector& theta0,
                                       const SolverOptions& opts, Update&& update,
                                       double stop_tol = -1.0) {
    opts.validate();
    const double tol = stop_tol > 0.0 ? stop_tol : opts.xi;
    const auto start = std::chrono::steady_clock::now();

    PhaseVector theta = theta0;
    typename P::Block q = problem.initial_block(theta);
    IterationTrace trace;
    for (int t = 0; t < opts.max_iterations; ++t) {
        q = problem.update_block(theta, q);
        const double f_after_q = problem.evaluate(q, theta);
        const RealVector grad = problem.gradient_theta(q, theta);
        if (!std::isfinite(f_after_q) || !all_finite(grad)) {
            detail::throw_numeric("non-finite objective or gradient", t);
        }
        PhaseVector next = update(q, theta);
        IterationRecord rec;
        rec.iteration = t;
        rec.objective_after_q = f_after_q;
        rec.objective = problem.evaluate(q, next);
        rec.grad_norm = grad.norm();
        rec.grad_max_norm = grad.size() > 0 ? grad.cwiseAbs().maxCoeff() : 0.0;
        rec.elapsed_ms = detail::elapsed_ms_since(start);
        if (!std::isfinite(rec.objective)) {
            detail::throw_numeric("objective after phase update is not finite", t);
        }
        const double f_prev = trace.empty() ? 0.0 : trace.back().objective;
        trace.records.push_back(rec);
        theta = std::move(next);
        if (t >= 1 && normalized_increment(rec.objective, f_prev) < tol) {
            trace.converged = true;
            break;
        }
    }
    return {std::move(theta), std::move(q), std::move(trace)};
}

namespace secrecy {

/// Phase subproblem with the beamformer frozen (minimizes -ratio).
class PhaseSubproblem {
public:
    struct Block {};

    explicit PhaseSubproblem(SecrecyQuadratics quads) : quads_(std::move(quads)) {}

    Block initial_block(const PhaseVector&) const { return {}; }
    Block update_block(const PhaseVector&, const Block& b) const { return b; }
    double evaluate(const Block&, const PhaseVector& theta) const;
    RealVector gradient_theta(const Block&, const PhaseVector& theta) const;

    double evaluate(const UnitModulusVector& v) const;
    ComplexVector euclidean_gradient(const UnitModulusVector& v) const;

private:
    SecrecyQuadratics quads_;
};

}  // namespace secrecy

namespace wsr {

/// f4 with (R, e) frozen.
class F4Subproblem {
public:
    struct Block {};

    explicit F4Subproblem(WsrQuadratics quads) : quads_(std::move(quads)) {}

    Block initial_block(const PhaseVector&) const { return {}; }
    Block update_block(const PhaseVector&, const Block& b) const { return b; }
    double evaluate(const Block&, const PhaseVector& theta) const;
    RealVector gradient_theta(const Block&, const PhaseVector& theta) const;

    double evaluate(const UnitModulusVector& v) const;
    ComplexVector euclidean_gradient(const UnitModulusVector& v) const;

private:
    WsrQuadratics quads_;
};

}  // namespace wsr

static_assert(TwoBlockProblem<secrecy::PhaseSubproblem>);
static_assert(manifold::VProblem<secrecy::PhaseSubproblem>);
static_assert(TwoBlockProblem<wsr::F4Subproblem>);
static_assert(manifold::VProblem<wsr::F4Subproblem>);

struct RunResult {
    PhaseVector theta;      // wrapped into [0, 2*pi)
    IterationTrace trace;   // minimization orientation
    double objective = 0.0;     // secrecy: f ratio; WSR: natural-log sum rate
    double metric_bits = 0.0;   // secrecy rate or WSR in bits/s/Hz
};

// Manifold inner solves start from initial_step = opts.gamma0 unless
// `manifold_opts` is given.
RunResult run_secrecy(const secrecy::SecrecyInstance& inst, const PhaseVector& theta0,
                      const SolverOptions& opts, Method method);
RunResult run_secrecy(const secrecy::SecrecyInstance& inst, const PhaseVector& theta0,
                      const SolverOptions& opts, Method method,
                      const manifold::ManifoldOptions& manifold_opts);

RunResult run_wsr(const wsr::WsrInstance& inst, const PhaseVector& theta0,
                  const SolverOptions& opts, Method method, bool warm_start = true);
RunResult run_wsr(const wsr::WsrInstance& inst, const PhaseVector& theta0,
                  const SolverOptions& opts, Method method, bool warm_start,
                  const manifold::ManifoldOptions& manifold_opts);

}  // namespace aogd
