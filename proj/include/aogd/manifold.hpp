// SPDX-License-Identifier: Apache-2.0
//
// First-order Riemannian descent on the product of M unit circles.

#pragma once

#include <algorithm>
#include <cmath>
#include <concepts>
#include <vector>

#include "aogd/phase.hpp"

namespace aogd::manifold {

/// d with Re{d_k conj(v_k)} = 0 for every k.
struct TangentVector {
    ComplexVector d;
};

// Removes the radial part of the Euclidean gradient entry-wise.
TangentVector riemannian_gradient(const ComplexVector& euclidean_grad_v,
                                  const UnitModulusVector& v);

// (v_k + step d_k) / |v_k + step d_k|; the step is halved on radial collision.
UnitModulusVector retract(const UnitModulusVector& v, const TangentVector& d, double step);

// Largest |Re{d_k conj(v_k)}|.
double tangency_residual(const TangentVector& d, const UnitModulusVector& v);

/// Problem expressed directly in v (minimization): objective and Euclidean
/// gradient g = 2 df/d conj(v).
template <typename P>
concept VProblem = requires(const P& p, const UnitModulusVector& v) {
    { p.evaluate(v) } -> std::convertible_to<double>;
    { p.euclidean_gradient(v) } -> std::same_as<ComplexVector>;
};

struct ManifoldOptions {
    double xi = 1e-6;         // normalized objective increment
    double grad_tol = 1e-8;   // Riemannian gradient norm
    int max_iterations = 1000;
    int max_backtracks = 60;
    double c = 1e-4;
    double beta = 0.5;
    double initial_step = 1.0;
};

struct ManifoldTrace {
    std::vector<double> objective;  // objective[0] is the start value
    std::vector<double> grad_norm;
    int iterations = 0;
};

struct ManifoldResult {
    UnitModulusVector v;
    ManifoldTrace trace;
};

// Armijo backtracking along the retraction curve; the first trial step of
// each iteration is twice the previously accepted one.
template <VProblem P>
ManifoldResult manifold_solve(const P& problem, const UnitModulusVector& v0,
                              const ManifoldOptions& opts = {}) {
    UnitModulusVector v = v0;
    double f = problem.evaluate(v);
    ManifoldTrace trace;
    trace.objective.push_back(f);
    double step0 = opts.initial_step;

    for (int it = 0; it < opts.max_iterations; ++it) {
        const TangentVector grad = riemannian_gradient(problem.euclidean_gradient(v), v);
        const double gnorm2 = grad.d.squaredNorm();
        trace.grad_norm.push_back(std::sqrt(gnorm2));
        if (std::sqrt(gnorm2) < opts.grad_tol) break;

        const TangentVector descent{-grad.d};
        double step = step0;
        bool accepted = false;
        UnitModulusVector trial;
        double f_trial = f;
        for (int m = 0; m < opts.max_backtracks; ++m) {
            trial = retract(v, descent, step);
            f_trial = problem.evaluate(trial);
            if (f_trial <= f - opts.c * step * gnorm2) {
                accepted = true;
                break;
            }
            step *= opts.beta;
        }
        if (!accepted) break;

        const double f_prev = f;
        v = std::move(trial);
        f = f_trial;
        trace.objective.push_back(f);
        trace.iterations = it + 1;
        step0 = 2.0 * step;
        if (std::abs(f - f_prev) / std::max(std::abs(f_prev), 1e-12) < opts.xi) break;
    }
    return {std::move(v), std::move(trace)};
}

}  // namespace aogd::manifold
