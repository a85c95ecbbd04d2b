// SPDX-License-Identifier: Apache-2.0
//
// Alternating optimization with a gradient step on the phase block.
//
// Each iteration t updates the conventional block Q with the phases fixed,
// then moves the phases along the negative gradient. The framework always
// minimizes; maximization problems register negated objectives.
//
// Step-size rules:
//   tailored  accept the largest gamma0 * beta^m with
//             f(U(theta - gamma g), Q_t) <= f(U(theta), Q_{t-1}) - c gamma |g|^2
//             i.e. decrease is measured against the previous *iteration*.
//   ag        classic Armijo-Goldstein, reference f(U(theta), Q_t).
//   bb        safeguarded Barzilai-Borwein step, no line search.
// At t = 0 the guard is skipped and gamma0 is taken directly (halved only if
// the trial objective is not finite).

#pragma once

#include <chrono>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "aogd/phase.hpp"

namespace aogd {

struct SolverOptions {
    double gamma0 = 1e-3;
    double beta = 0.5;
    double c = 5e-5;
    double xi = 1e-6;   // outer stop: normalized objective increment
    double xi1 = 1e-5;  // inner (FP) stop, WSR only
    double xi2 = 1e-3;  // outer stop, WSR only
    int max_iterations = 1000;
    int max_backtracks = 60;
    int max_inner = 500;
    std::uint64_t rng_seed = 1;
    // BB safeguard box, as multiples of gamma0.
    double bb_min_factor = 1e-8;
    double bb_max_factor = 1e4;

    // Throws std::invalid_argument when a field is out of range.
    void validate() const;
};

enum class StepRule { tailored, ag, bb };

std::string_view to_string(StepRule rule);
StepRule step_rule_from_string(std::string_view name);

struct IterationRecord {
    int iteration = 0;
    double objective_after_q = 0.0;  // f(U(theta_t), Q_t)
    double objective = 0.0;          // f(U(theta_{t+1}), Q_t)
    double step = 0.0;
    int backtracks = 0;
    double grad_norm = 0.0;      // Euclidean norm of grad_theta f(Q_t, theta_t)
    double grad_max_norm = 0.0;  // max-norm of the same gradient
    double elapsed_ms = 0.0;     // cumulative
    bool stalled = false;
};

struct IterationTrace {
    std::vector<IterationRecord> records;
    bool converged = false;

    bool empty() const noexcept { return records.empty(); }
    const IterationRecord& back() const { return records.back(); }
    double final_objective() const { return records.back().objective; }
    // Smallest gradient max-norm seen along the run.
    double min_grad_max_norm() const;
};

/// Capabilities a two-block problem exposes to the solver.
template <typename P>
concept TwoBlockProblem = requires(const P& p, const typename P::Block& q, const PhaseVector& th) {
    typename P::Block;
    { p.initial_block(th) } -> std::same_as<typename P::Block>;
    { p.update_block(th, q) } -> std::same_as<typename P::Block>;
    { p.evaluate(q, th) } -> std::convertible_to<double>;
    { p.gradient_theta(q, th) } -> std::same_as<RealVector>;
};

struct StepResult {
    double gamma = 0.0;
    PhaseVector theta_next;
    int backtracks = 0;
    bool stalled = false;
    double objective = 0.0;  // objective at theta_next
};

PhaseVector gradient_step(const PhaseVector& theta, const RealVector& grad, double gamma);

// Largest gamma0 * beta^m (m < max_backtracks) with
// f_at(theta - gamma * grad) <= reference - c * gamma * |grad|^2.
// Exhaustion returns a zero step flagged as stalled.
template <typename Eval>
StepResult armijo_backtrack(Eval&& f_at, const PhaseVector& theta, const RealVector& grad,
                            double reference, const SolverOptions& opts) {
    const double g2 = grad.squaredNorm();
    double gamma = opts.gamma0;
    for (int m = 0; m < opts.max_backtracks; ++m) {
        PhaseVector trial = gradient_step(theta, grad, gamma);
        const double f = f_at(trial);
        if (f <= reference - opts.c * gamma * g2) {  // false for NaN
            return {gamma, std::move(trial), m, false, f};
        }
        gamma *= opts.beta;
    }
    return {0.0, theta, opts.max_backtracks, true, f_at(theta)};
}

template <TwoBlockProblem P>
StepResult tailored_backtrack(const P& problem, const PhaseVector& theta,
                              const typename P::Block& q, const RealVector& grad,
                              double f_prev_iteration, const SolverOptions& opts) {
    return armijo_backtrack([&](const PhaseVector& th) { return problem.evaluate(q, th); },
                            theta, grad, f_prev_iteration, opts);
}

template <TwoBlockProblem P>
StepResult ag_backtrack(const P& problem, const PhaseVector& theta, const typename P::Block& q,
                        const RealVector& grad, const SolverOptions& opts) {
    const double current = problem.evaluate(q, theta);
    return armijo_backtrack([&](const PhaseVector& th) { return problem.evaluate(q, th); },
                            theta, grad, current, opts);
}

// Safeguarded BB1 step (s.s)/(s.y), clamped into [gamma_min, gamma_max];
// gamma_min when s.y <= 0.
double bb_step(const PhaseVector& theta_t, const PhaseVector& theta_prev, const RealVector& grad_t,
               const RealVector& grad_prev, double gamma_min, double gamma_max);

// |f - f_prev| / max(|f_prev|, 1e-12)
double normalized_increment(double f, double f_prev);

template <TwoBlockProblem P>
struct SolveResult {
    PhaseVector theta;
    typename P::Block block;
    IterationTrace trace;
};

namespace detail {

inline double elapsed_ms_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
        .count();
}

// gamma0 with halving until the trial objective is finite.
template <typename Eval>
StepResult unguarded_step(Eval&& f_at, const PhaseVector& theta, const RealVector& grad,
                          double gamma, const SolverOptions& opts) {
    for (int m = 0; m < opts.max_backtracks; ++m) {
        PhaseVector trial = gradient_step(theta, grad, gamma);
        const double f = f_at(trial);
        if (std::isfinite(f)) {
            return {gamma, std::move(trial), m, false, f};
        }
        gamma *= 0.5;
    }
    return {0.0, theta, opts.max_backtracks, true, f_at(theta)};
}

[[noreturn]] void throw_numeric(std::string_view what, int iteration);

}  // namespace detail

/// Runs the alternating scheme until the normalized objective increment drops
/// below `stop_tol` (opts.xi when negative) or max_iterations is reached.
template <TwoBlockProblem P>
SolveResult<P> solve(const P& problem, const PhaseVector& theta0, const SolverOptions& opts,
                     StepRule rule, double stop_tol = -1.0) {
    opts.validate();
    const double tol = stop_tol > 0.0 ? stop_tol : opts.xi;
    const auto start = std::chrono::steady_clock::now();

    PhaseVector theta = theta0;
    PhaseVector theta_prev;
    RealVector grad_prev;
    typename P::Block q = problem.initial_block(theta);
    IterationTrace trace;

    for (int t = 0; t < opts.max_iterations; ++t) {
        q = problem.update_block(theta, q);
        const double f_after_q = problem.evaluate(q, theta);
        if (!std::isfinite(f_after_q)) {
            detail::throw_numeric("objective after block update is not finite", t);
        }
        RealVector grad = problem.gradient_theta(q, theta);
        if (!all_finite(grad)) {
            detail::throw_numeric("phase gradient is not finite", t);
        }

        auto f_at = [&](const PhaseVector& th) { return problem.evaluate(q, th); };
        StepResult step;
        if (t == 0) {
            step = detail::unguarded_step(f_at, theta, grad, opts.gamma0, opts);
        } else {
            switch (rule) {
                case StepRule::tailored:
                    step = armijo_backtrack(f_at, theta, grad, trace.back().objective, opts);
                    break;
                case StepRule::ag:
                    step = armijo_backtrack(f_at, theta, grad, f_after_q, opts);
                    break;
                case StepRule::bb: {
                    const double gamma =
                        bb_step(theta, theta_prev, grad, grad_prev, opts.bb_min_factor * opts.gamma0,
                                opts.bb_max_factor * opts.gamma0);
                    step = detail::unguarded_step(f_at, theta, grad, gamma, opts);
                    break;
                }
            }
        }
        if (!std::isfinite(step.objective)) {
            detail::throw_numeric("objective after phase step is not finite", t);
        }

        IterationRecord rec;
        rec.iteration = t;
        rec.objective_after_q = f_after_q;
        rec.objective = step.objective;
        rec.step = step.gamma;
        rec.backtracks = step.backtracks;
        rec.grad_norm = grad.norm();
        rec.grad_max_norm = grad.size() > 0 ? grad.cwiseAbs().maxCoeff() : 0.0;
        rec.stalled = step.stalled;
        rec.elapsed_ms = detail::elapsed_ms_since(start);

        const double f_prev = trace.empty() ? 0.0 : trace.back().objective;
        trace.records.push_back(rec);

        theta_prev = std::move(theta);
        grad_prev = std::move(grad);
        theta = std::move(step.theta_next);

        if (t >= 1 && normalized_increment(rec.objective, f_prev) < tol) {
            trace.converged = true;
            break;
        }
    }
    return {std::move(theta), std::move(q), std::move(trace)};
}

/// Max-norm of grad_theta f at (q, theta); first-order stationarity diagnostic
/// for the phase block.
template <TwoBlockProblem P>
double stationarity_residual(const P& problem, const typename P::Block& q,
                             const PhaseVector& theta) {
    const RealVector g = problem.gradient_theta(q, theta);
    return g.size() > 0 ? g.cwiseAbs().maxCoeff() : 0.0;
}

}  // namespace aogd
