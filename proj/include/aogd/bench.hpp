// SPDX-License-Identifier: Apache-2.0
//
// Experiment drivers behind the aogd_bench command-line tool: convergence
// traces, sweeps over the surface size, timing runs and a brute-force phase
// grid for tiny surfaces. Every driver returns rows in a fixed order that
// does not depend on the number of worker threads.

#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "aogd/baselines.hpp"
#include "aogd/sim.hpp"

namespace aogd::bench {

inline constexpr std::string_view kToolVersion = "0.1.0";

enum class Experiment { convergence, m_sweep_secrecy, m_sweep_wsr, timing, oracle };
enum class App { secrecy, wsr };

std::string_view to_string(Experiment e);
std::string_view to_string(App a);
App app_from_string(std::string_view name);

struct ExperimentSpec {
    Experiment kind = Experiment::convergence;
    App app = App::secrecy;
    sim::ScenarioConfig scenario;
    SolverOptions options;
    std::vector<Method> methods;
    std::vector<int> m_list;
    int realizations = 1;
    std::uint64_t seed = 1;
    std::string out_path;
    int threads = 1;
    bool record_clock = true;  // false writes elapsed_ms = 0 everywhere
    bool warm_start = true;    // WSR FP state carried across outer iterations
    bool per_realization = false;  // sweep/timing: also emit one row per realization

    // Throws std::invalid_argument on empty lists or a non-positive count.
    void validate() const;
};

// Defaults for the given kind: app, scenario preset and solver options.
ExperimentSpec default_spec(Experiment kind, App app);

/// One CSV row. Text fields carry "mean"/"std"/"median" summaries and the
/// "error" marker; non-applicable numbers are NaN and print as "nan".
struct Row {
    std::string experiment;
    std::string method;
    int m = 0;
    std::string realization;
    std::string iteration;
    double objective = 0.0;
    double metric_bits = 0.0;
    double step_size = 0.0;
    double backtracks = 0.0;
    double grad_norm = 0.0;
    double elapsed_ms = 0.0;
};

struct ExperimentResult {
    std::vector<Row> rows;
    int tasks = 0;
    int failures = 0;
};

// One row per (method, realization, iteration).
ExperimentResult run_convergence(const ExperimentSpec& spec);
// Per (method, M): a "mean" data row (objective, metric_bits, elapsed_ms are
// means over successful realizations) followed by its "std" row.
ExperimentResult run_m_sweep(const ExperimentSpec& spec);
// Per (method, M): "median" and "mean" rows of the wall time. One untimed
// warm-up run per (method, M) precedes the measured runs.
ExperimentResult run_timing(const ExperimentSpec& spec);
ExperimentResult run_experiment(const ExperimentSpec& spec);

// Instance and starting point for one realization (used by all drivers).
secrecy::SecrecyInstance secrecy_instance(const ExperimentSpec& spec, int m, int realization);
wsr::WsrInstance wsr_instance(const ExperimentSpec& spec, int m, int realization);
PhaseVector initial_phases(const ExperimentSpec& spec, int m, int realization);

RunResult run_method(const ExperimentSpec& spec, Method method, int m, int realization);

// '#'-prefixed lines: tool version, experiment, seed, solver options and the
// resolved scenario. The thread count is deliberately left out.
std::string header_block(const ExperimentSpec& spec);
std::string format_number(double x);
std::string to_csv(const ExperimentSpec& spec, const ExperimentResult& result);
// Writes a fresh file (truncating any previous content).
void write_text_file(const std::string& path, const std::string& text);

struct Series {
    std::string name;
    std::vector<double> x;
    std::vector<double> y;
};
std::string svg_line_chart(const std::string& title, const std::string& x_label,
                           const std::string& y_label, const std::vector<Series>& series);
// Chart matching the experiment kind (median trace, mean metric or median time).
std::string experiment_svg(const ExperimentSpec& spec, const ExperimentResult& result);

/// Exhaustive grid over [0, 2*pi)^M, M <= 3.
struct OracleResult {
    double objective = 0.0;
    PhaseVector theta;
};

// Maximizes the secrecy objective with the beamformer optimal at each grid
// point (largest generalized eigenvalue of the rank-one pencil, computed
// from its 2 x 2 projection).
OracleResult brute_force_secrecy(const secrecy::SecrecyInstance& inst, int grid_points);
// Minimizes f4 with (R, e) fixed.
OracleResult brute_force_f4(const wsr::WsrQuadratics& quads, int grid_points);
// Optimal secrecy objective for fixed phases, independent of numerics.hpp.
double secrecy_grid_value(const secrecy::SecrecyInstance& inst, const UnitModulusVector& v);

// Best objective of AO-GD (tailored rule) over `restarts` random starting
// phases drawn from `seed`.
double secrecy_aogd_best_of(const secrecy::SecrecyInstance& inst, int restarts,
                            std::uint64_t seed, const SolverOptions& opts);
// f4 subproblem used by the oracle: (R, e) from the converged FP state at theta0.
wsr::WsrQuadratics oracle_f4_quadratics(const wsr::WsrInstance& inst, const PhaseVector& theta0,
                                        const SolverOptions& opts);
// Smallest f4 reached by gradient descent on the frozen subproblem.
double f4_aogd_best_of(const wsr::WsrQuadratics& quads, int restarts, std::uint64_t seed,
                       const SolverOptions& opts);
// Repeats element-wise sweeps from v0 until f4 stops decreasing (relative
// change below tol) or max_sweeps ran; returns the final f4.
double f4_bcd_fixed_point(const wsr::WsrQuadratics& quads, const UnitModulusVector& v0,
                          double tol = 1e-14, int max_sweeps = 10000);

// Oracle experiment over spec.m_list (each M <= 3): per realization a "grid"
// row and an "aogd" row (plus "bcd" for the WSR f4 subproblem).
ExperimentResult run_oracle(const ExperimentSpec& spec, int grid_points, int restarts);

// Runs body(i) for i in [0, n) on `threads` workers. Exceptions escaping the
// body are rethrown (first one wins) after all workers have joined.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& body);

}  // namespace aogd::bench
