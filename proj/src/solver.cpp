// SPDX-License-Identifier: Apache-2.0

#include "aogd/solver.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace aogd {

void SolverOptions::validate() const {
    if (!(gamma0 > 0.0)) throw std::invalid_argument("gamma0 must be > 0");
    if (!(beta > 0.0 && beta < 1.0)) throw std::invalid_argument("beta must lie in (0, 1)");
    if (!(c > 0.0 && c < 1.0)) throw std::invalid_argument("c must lie in (0, 1)");
    if (!(xi > 0.0) || !(xi1 > 0.0) || !(xi2 > 0.0)) {
        throw std::invalid_argument("tolerances must be > 0");
    }
    if (max_iterations < 1) throw std::invalid_argument("max_iterations must be >= 1");
    if (max_backtracks < 1) throw std::invalid_argument("max_backtracks must be >= 1");
    if (max_inner < 1) throw std::invalid_argument("max_inner must be >= 1");
    if (!(bb_min_factor > 0.0) || bb_max_factor < bb_min_factor) {
        throw std::invalid_argument("invalid BB safeguard box");
    }
}

std::string_view to_string(StepRule rule) {
    switch (rule) {
        case StepRule::tailored: return "tailored";
        case StepRule::ag: return "ag";
        case StepRule::bb: return "bb";
    }
    return "?";
}

StepRule step_rule_from_string(std::string_view name) {
    if (name == "tailored" || name == "aogd") return StepRule::tailored;
    if (name == "ag") return StepRule::ag;
    if (name == "bb") return StepRule::bb;
    throw std::invalid_argument("unknown step rule: " + std::string(name));
}

double IterationTrace::min_grad_max_norm() const {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& r : records) {
        best = std::min(best, r.grad_max_norm);
    }
    return best;
}

PhaseVector gradient_step(const PhaseVector& theta, const RealVector& grad, double gamma) {
    return PhaseVector(theta.theta - gamma * grad);
}

double bb_step(const PhaseVector& theta_t, const PhaseVector& theta_prev, const RealVector& grad_t,
               const RealVector& grad_prev, double gamma_min, double gamma_max) {
    const RealVector s = theta_t.theta - theta_prev.theta;
    const RealVector y = grad_t - grad_prev;
    const double sy = s.dot(y);
    if (!(sy > 0.0)) {
        return gamma_min;
    }
    return std::clamp(s.squaredNorm() / sy, gamma_min, gamma_max);
}

double normalized_increment(double f, double f_prev) {
    return std::abs(f - f_prev) / std::max(std::abs(f_prev), 1e-12);
}

namespace detail {
void throw_numeric(std::string_view what, int iteration) {
    throw NumericError(std::string(what) + " (iteration " + std::to_string(iteration) + ")");
}
}  // namespace detail

}  // namespace aogd
