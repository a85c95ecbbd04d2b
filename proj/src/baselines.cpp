// SPDX-License-Identifier: Apache-2.0

#include "aogd/baselines.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace aogd {

std::string_view to_string(Method m) {
    switch (m) {
        case Method::aogd: return "aogd";
        case Method::ag: return "ag";
        case Method::bb: return "bb";
        case Method::bcd: return "bcd";
        case Method::manifold: return "manifold";
    }
    return "?";
}

Method method_from_string(std::string_view name) {
    if (name == "aogd") return Method::aogd;
    if (name == "ag") return Method::ag;
    if (name == "bb") return Method::bb;
    if (name == "bcd") return Method::bcd;
    if (name == "manifold") return Method::manifold;
    throw std::invalid_argument("unknown method: " + std::string(name));
}

namespace secrecy {

double PhaseSubproblem::evaluate(const Block&, const PhaseVector& theta) const {
    return -ratio_objective(quads_, u_map(theta));
}
RealVector PhaseSubproblem::gradient_theta(const Block&, const PhaseVector& theta) const {
    return -secrecy::gradient_theta(quads_, theta);
}
double PhaseSubproblem::evaluate(const UnitModulusVector& v) const {
    return -ratio_objective(quads_, v);
}
ComplexVector PhaseSubproblem::euclidean_gradient(const UnitModulusVector& v) const {
    return -wirtinger_gradient(quads_, v);
}

}  // namespace secrecy

namespace wsr {

double F4Subproblem::evaluate(const Block&, const PhaseVector& theta) const {
    return f4_eval(quads_, u_map(theta));
}
RealVector F4Subproblem::gradient_theta(const Block&, const PhaseVector& theta) const {
    return gradient_theta_f4(quads_, theta);
}
double F4Subproblem::evaluate(const UnitModulusVector& v) const { return f4_eval(quads_, v); }
ComplexVector F4Subproblem::euclidean_gradient(const UnitModulusVector& v) const {
    return wirtinger_gradient_f4(quads_, v);
}

}  // namespace wsr

namespace {

template <TwoBlockProblem P, typename BcdUpdate, typename ManifoldUpdate>
SolveResult<P> dispatch(const P& problem, const PhaseVector& theta0, const SolverOptions& opts,
                        Method method, double stop_tol, BcdUpdate&& bcd,
                        ManifoldUpdate&& manifold_update) {
    switch (method) {
        case Method::aogd: return solve(problem, theta0, opts, StepRule::tailored, stop_tol);
        case Method::ag: return solve(problem, theta0, opts, StepRule::ag, stop_tol);
        case Method::bb: return solve(problem, theta0, opts, StepRule::bb, stop_tol);
        case Method::bcd: return solve_with_phase_update(problem, theta0, opts, bcd, stop_tol);
        case Method::manifold:
            return solve_with_phase_update(problem, theta0, opts, manifold_update, stop_tol);
    }
    throw std::invalid_argument("unknown method");
}

manifold::ManifoldOptions default_manifold_options(const SolverOptions& opts, double xi) {
    manifold::ManifoldOptions m;
    m.xi = xi;
    m.initial_step = opts.gamma0;
    m.max_iterations = opts.max_iterations;
    m.c = opts.c;
    m.beta = opts.beta;
    m.max_backtracks = opts.max_backtracks;
    return m;
}

}  // namespace

RunResult run_secrecy(const secrecy::SecrecyInstance& inst, const PhaseVector& theta0,
                      const SolverOptions& opts, Method method) {
    return run_secrecy(inst, theta0, opts, method, default_manifold_options(opts, opts.xi));
}

RunResult run_secrecy(const secrecy::SecrecyInstance& inst, const PhaseVector& theta0,
                      const SolverOptions& opts, Method method,
                      const manifold::ManifoldOptions& manifold_opts) {
    const secrecy::SecrecyProblem problem(inst);
    using Block = secrecy::SecrecyProblem::Block;
    auto bcd = [](const Block& q, const PhaseVector& theta) {
        return secrecy::elementwise_bcd_sweep(q.quads, u_map(theta)).angles();
    };
    auto riemannian = [&](const Block& q, const PhaseVector& theta) {
        const secrecy::PhaseSubproblem sub(q.quads);
        return manifold::manifold_solve(sub, u_map(theta), manifold_opts).v.angles();
    };
    auto result = dispatch(problem, theta0, opts, method, opts.xi, bcd, riemannian);

    RunResult out;
    out.objective = -result.trace.final_objective();
    out.metric_bits = secrecy::secrecy_rate(out.objective);
    out.theta = wrap_phases(result.theta);
    out.trace = std::move(result.trace);
    return out;
}

RunResult run_wsr(const wsr::WsrInstance& inst, const PhaseVector& theta0,
                  const SolverOptions& opts, Method method, bool warm_start) {
    return run_wsr(inst, theta0, opts, method, warm_start,
                   default_manifold_options(opts, 1e-6));
}

RunResult run_wsr(const wsr::WsrInstance& inst, const PhaseVector& theta0,
                  const SolverOptions& opts, Method method, bool warm_start,
                  const manifold::ManifoldOptions& manifold_opts) {
    const wsr::WsrProblem problem(inst, opts, warm_start);
    using Block = wsr::WsrProblem::Block;
    auto bcd = [](const Block& q, const PhaseVector& theta) {
        return wsr::elementwise_bcd_v(q.quads, u_map(theta)).angles();
    };
    auto riemannian = [&](const Block& q, const PhaseVector& theta) {
        const wsr::F4Subproblem sub(q.quads);
        return manifold::manifold_solve(sub, u_map(theta), manifold_opts).v.angles();
    };
    auto result = dispatch(problem, theta0, opts, method, opts.xi2, bcd, riemannian);

    RunResult out;
    out.objective = -result.trace.final_objective();
    out.metric_bits = out.objective / std::numbers::ln2;
    out.theta = wrap_phases(result.theta);
    out.trace = std::move(result.trace);
    return out;
}

}  // namespace aogd
