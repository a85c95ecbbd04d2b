// SPDX-License-Identifier: Apache-2.0
//
// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits non-zero if any fails. Pass criterion numbers as arguments to run a
// subset, e.g. `acceptance 3 4`.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "aogd/bench.hpp"
#include "test_support.hpp"

namespace {

using namespace aogd;
using namespace aogd::bench;
namespace tk = aogd::testkit;

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof(buf), f, args...);
    return buf;
}

double median(std::vector<double> xs) {
    std::sort(xs.begin(), xs.end());
    const std::size_t n = xs.size();
    return n % 2 == 1 ? xs[n / 2] : 0.5 * (xs[n / 2 - 1] + xs[n / 2]);
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

constexpr double kSlack = 1e-10;

// Criterion 1 and 2 share the same runs.
struct MonotoneRuns {
    int runs = 0;
    int monotone_violations = 0;
    int decrease_violations = 0;
    double worst_rise = 0.0;
    double seconds = 0.0;
};

MonotoneRuns monotone_runs(App app) {
    ExperimentSpec spec = default_spec(Experiment::convergence, app);
    const int m = app == App::secrecy ? 60 : 20;
    MonotoneRuns out;
    const auto t0 = std::chrono::steady_clock::now();
    for (int r = 0; r < 100; ++r) {
        const RunResult run = run_method(spec, Method::aogd, m, r);
        const auto& recs = run.trace.records;
        ++out.runs;
        bool mono = true;
        bool decrease = true;
        for (std::size_t t = 1; t < recs.size(); ++t) {
            const double rise = recs[t].objective - recs[t - 1].objective;
            out.worst_rise = std::max(out.worst_rise, rise);
            if (rise > kSlack) mono = false;
            const double bound = recs[t - 1].objective -
                                 spec.options.c * recs[t].step * recs[t].grad_norm * recs[t].grad_norm;
            if (recs[t].objective > bound + kSlack) decrease = false;
        }
        out.monotone_violations += mono ? 0 : 1;
        out.decrease_violations += decrease ? 0 : 1;
    }
    out.seconds = seconds_since(t0);
    return out;
}

MonotoneRuns& cached_runs(App app) {
    static MonotoneRuns secrecy_runs;
    static MonotoneRuns wsr_runs;
    static bool have_secrecy = false;
    static bool have_wsr = false;
    if (app == App::secrecy) {
        if (!have_secrecy) secrecy_runs = monotone_runs(app);
        have_secrecy = true;
        return secrecy_runs;
    }
    if (!have_wsr) wsr_runs = monotone_runs(app);
    have_wsr = true;
    return wsr_runs;
}

Outcome criterion1() {
    const auto& s = cached_runs(App::secrecy);
    const auto& w = cached_runs(App::wsr);
    const double total = s.seconds + w.seconds;
    Outcome o;
    o.pass = s.monotone_violations == 0 && w.monotone_violations == 0 && total < 120.0;
    o.detail = fmt("secrecy %d/%d monotone, wsr %d/%d monotone, worst rise %.2e, %.1f s",
                   s.runs - s.monotone_violations, s.runs, w.runs - w.monotone_violations, w.runs,
                   std::max(s.worst_rise, w.worst_rise), total);
    return o;
}

Outcome criterion2() {
    const auto& s = cached_runs(App::secrecy);
    const auto& w = cached_runs(App::wsr);
    Outcome o;
    o.pass = s.decrease_violations == 0 && w.decrease_violations == 0;
    o.detail = fmt("runs violating sufficient decrease: secrecy %d/%d, wsr %d/%d",
                   s.decrease_violations, s.runs, w.decrease_violations, w.runs);
    return o;
}

template <typename F>
RealVector central_difference(F&& f, const PhaseVector& th, double h) {
    RealVector g(th.size());
    for (Eigen::Index k = 0; k < th.size(); ++k) {
        PhaseVector a = th;
        PhaseVector b = th;
        a.theta(k) += h;
        b.theta(k) -= h;
        g(k) = (f(a) - f(b)) / (2.0 * h);
    }
    return g;
}

Outcome criterion3() {
    tk::Rng rng(2024);
    const double h = 1e-6;
    double worst_s = 0.0;
    double worst_w = 0.0;
    int points = 0;
    for (int m : {4, 6, 16}) {
        for (int i = 0; i < 100; ++i) {
            const auto inst = tk::random_secrecy(3, m, rng);
            const auto q = secrecy::build_quadratics(inst, tk::random_vector(3, rng));
            const PhaseVector th = tk::random_theta(m, rng);
            const RealVector fd = central_difference(
                [&](const PhaseVector& x) { return secrecy::ratio_objective(q, u_map(x)); }, th, h);
            const RealVector g = secrecy::gradient_theta(q, th);
            worst_s = std::max(worst_s, (g - fd).norm() / std::max(fd.norm(), 1e-300));

            const auto winst = tk::random_wsr(3, 3, m, rng);
            const auto state = tk::random_state(winst, rng);
            const auto quads = wsr::build_r_e(winst, state.p, state.q, state.W);
            const RealVector fd4 = central_difference(
                [&](const PhaseVector& x) { return wsr::f4_eval(quads, u_map(x)); }, th, h);
            const RealVector g4 = wsr::gradient_theta_f4(quads, th);
            worst_w = std::max(worst_w, (g4 - fd4).norm() / std::max(fd4.norm(), 1e-300));
            ++points;
        }
    }
    Outcome o;
    o.pass = worst_s <= 1e-5 && worst_w <= 1e-5;
    o.detail = fmt("%d points per gradient, worst relative error secrecy %.2e, f4 %.2e", points,
                   worst_s, worst_w);
    return o;
}

Outcome criterion4() {
    tk::Rng rng(4048);
    double worst_tight = 0.0;
    for (int i = 0; i < 100; ++i) {
        const auto inst = tk::random_wsr(4, 4, 8, rng);
        const auto state = tk::random_state(inst, rng);
        const auto v = tk::random_unit_modulus(8, rng);
        const RealVector p = wsr::update_p(inst, state.W, v);
        const ComplexVector q = wsr::update_q(inst, p, state.W, v);
        worst_tight = std::max(worst_tight, tk::rel_err(wsr::f2_eval(inst, p, q, state.W, v),
                                                        wsr::wsr_objective(inst, state.W, v)));
    }
    double worst_const = 0.0;
    for (int i = 0; i < 20; ++i) {
        const auto inst = tk::random_wsr(4, 4, 8, rng);
        const auto state = tk::random_state(inst, rng);
        const auto quads = wsr::build_r_e(inst, state.p, state.q, state.W);
        const auto v0 = tk::random_unit_modulus(8, rng);
        const double c0 = wsr::f2_eval(inst, state.p, state.q, state.W, v0) + wsr::f4_eval(quads, v0);
        for (int j = 0; j < 50; ++j) {
            const auto v = tk::random_unit_modulus(8, rng);
            const double c =
                wsr::f2_eval(inst, state.p, state.q, state.W, v) + wsr::f4_eval(quads, v);
            worst_const = std::max(worst_const, tk::rel_err(c, c0));
        }
    }
    Outcome o;
    o.pass = worst_tight <= 1e-9 && worst_const <= 1e-9;
    o.detail = fmt("tightness worst %.2e (100 states), f2 + f4 spread worst %.2e (20 x 50)",
                   worst_tight, worst_const);
    return o;
}

// Unit-scale oracle instances: CN(0, 1) channels, unit noise and power.
Outcome criterion5() {
    constexpr int kGrid = 3600;
    constexpr int kRestarts = 5;
    const auto t0 = std::chrono::steady_clock::now();
    tk::Rng rng(5);

    SolverOptions so = secrecy::default_options();
    so.gamma0 = 0.1;
    so.xi = 1e-12;
    so.max_iterations = 20000;
    double worst_secrecy = -1e300;
    int secrecy_ok = 0;
    for (int i = 0; i < 20; ++i) {
        const auto inst = tk::random_secrecy(2, 2, rng);
        const double grid = brute_force_secrecy(inst, kGrid).objective;
        const double best = secrecy_aogd_best_of(inst, kRestarts, sim::child_seed(5, i, 2), so);
        const double gap = (grid - best) / std::max(1.0, std::abs(grid));
        worst_secrecy = std::max(worst_secrecy, gap);
        secrecy_ok += gap <= 1e-3 ? 1 : 0;
    }

    SolverOptions fo;
    fo.gamma0 = 1.0;
    fo.c = 1e-4;
    fo.xi = 1e-12;
    fo.max_iterations = 20000;
    double worst_grid = -1e300;
    double worst_bcd = -1e300;
    int f4_ok = 0;
    for (int i = 0; i < 20; ++i) {
        const auto inst = tk::random_wsr(2, 2, 2, rng, 1.0, 0.1);
        const auto quads = oracle_f4_quadratics(inst, tk::random_theta(2, rng), fo);
        const double grid = brute_force_f4(quads, kGrid).objective;
        const std::uint64_t seed = sim::child_seed(6, i, 2);
        const double best = f4_aogd_best_of(quads, kRestarts, seed, fo);
        // BCD fixed points from the same starting phases.
        double bcd = 1e300;
        for (int r = 0; r < kRestarts; ++r) {
            sim::Rng prng(sim::child_seed(seed, r, 1));
            bcd = std::min(bcd, f4_bcd_fixed_point(quads, u_map(sim::random_phases(2, prng))));
        }
        const double scale = std::max(1.0, std::abs(grid));
        const double gap_grid = (best - grid) / scale;
        const double gap_bcd = (best - bcd) / scale;
        worst_grid = std::max(worst_grid, gap_grid);
        worst_bcd = std::max(worst_bcd, gap_bcd);
        f4_ok += gap_grid <= 1e-3 && gap_bcd <= 1e-3 ? 1 : 0;
    }
    const double secs = seconds_since(t0);
    Outcome o;
    o.pass = secrecy_ok == 20 && f4_ok == 20 && secs < 600.0;
    o.detail = fmt("secrecy %d/20 within 1e-3 (worst shortfall %.1e), f4 %d/20 (worst vs grid "
                   "%.1e, vs bcd %.1e), %.1f s",
                   secrecy_ok, worst_secrecy, f4_ok, worst_grid, worst_bcd, secs);
    return o;
}

// First iteration whose objective is within tol (normalized) of the final one.
int iterations_to_final(const IterationTrace& trace, double tol) {
    const double f_final = trace.final_objective();
    for (const auto& rec : trace.records) {
        if (std::abs(rec.objective - f_final) <= tol * std::max(std::abs(f_final), 1e-12)) {
            return rec.iteration;
        }
    }
    return trace.back().iteration;
}

Outcome criterion6() {
    ExperimentSpec spec = default_spec(Experiment::convergence, App::secrecy);
    std::vector<double> advantage;
    std::string detail;
    bool strict = true;
    for (int m : {60, 100}) {
        std::vector<double> it_t;
        std::vector<double> it_ag;
        for (int r = 0; r < 100; ++r) {
            it_t.push_back(iterations_to_final(run_method(spec, Method::aogd, m, r).trace, 1e-4));
            it_ag.push_back(iterations_to_final(run_method(spec, Method::ag, m, r).trace, 1e-4));
        }
        const double mt = median(it_t);
        const double ma = median(it_ag);
        strict = strict && mt < ma;
        advantage.push_back(1.0 - mt / ma);
        detail += fmt("M=%d median %g vs %g (advantage %.3f); ", m, mt, ma, advantage.back());
    }
    Outcome o;
    o.pass = strict && advantage[1] >= advantage[0];
    o.detail = detail + "tailored vs ag";
    return o;
}

Outcome criterion7() {
    ExperimentSpec spec = default_spec(Experiment::m_sweep_secrecy, App::secrecy);
    spec.methods = {Method::aogd, Method::bcd};
    spec.realizations = 200;
    spec.record_clock = false;
    const auto result = run_m_sweep(spec);
    std::vector<double> aogd;
    std::vector<double> bcd;
    for (const auto& row : result.rows) {
        if (row.realization != "mean") continue;
        (row.method == "aogd" ? aogd : bcd).push_back(row.metric_bits);
    }
    bool nondecreasing = true;
    bool close = true;
    std::string detail;
    for (std::size_t i = 0; i < aogd.size(); ++i) {
        if (i > 0 && aogd[i] < aogd[i - 1]) nondecreasing = false;
        if (aogd[i] < bcd[i] - 0.05) close = false;
        detail += fmt("M=%d %.3f/%.3f ", spec.m_list[i], aogd[i], bcd[i]);
    }
    Outcome o;
    o.pass = nondecreasing && close && result.failures == 0;
    o.detail = "mean bits aogd/bcd: " + detail + fmt("(failures %d)", result.failures);
    return o;
}

Outcome criterion8() {
    ExperimentSpec spec = default_spec(Experiment::m_sweep_wsr, App::wsr);
    spec.methods = {Method::aogd, Method::bcd};
    spec.realizations = 200;
    spec.record_clock = false;
    const auto result = run_m_sweep(spec);
    std::vector<double> aogd;
    std::vector<double> bcd;
    for (const auto& row : result.rows) {
        if (row.realization != "mean") continue;
        (row.method == "aogd" ? aogd : bcd).push_back(row.metric_bits);
    }
    bool increasing = true;
    bool within = true;
    std::string detail;
    for (std::size_t i = 0; i < aogd.size(); ++i) {
        if (i > 0 && !(aogd[i] > aogd[i - 1])) increasing = false;
        const double rel = std::abs(aogd[i] - bcd[i]) / std::abs(bcd[i]);
        if (rel > 0.02) within = false;
        detail += fmt("M=%d %.3f/%.3f (%.2f%%) ", spec.m_list[i], aogd[i], bcd[i], 100.0 * rel);
    }
    Outcome o;
    o.pass = increasing && within && result.failures == 0;
    o.detail = "mean bits/s/Hz aogd/bcd: " + detail + fmt("(failures %d)", result.failures);
    return o;
}

struct TimingPair {
    double aogd_small = 0.0;
    double aogd_large = 0.0;
    double man_small = 0.0;
    double man_large = 0.0;
};

TimingPair median_times(App app, int m_small, int m_large) {
    ExperimentSpec spec = default_spec(Experiment::timing, app);
    spec.methods = {Method::aogd, Method::manifold};
    spec.m_list = {m_small, m_large};
    spec.realizations = 20;
    const auto result = run_timing(spec);
    TimingPair t;
    for (const auto& row : result.rows) {
        if (row.realization != "median") continue;
        const bool small = row.m == m_small;
        if (row.method == "aogd") {
            (small ? t.aogd_small : t.aogd_large) = row.elapsed_ms;
        } else {
            (small ? t.man_small : t.man_large) = row.elapsed_ms;
        }
    }
    return t;
}

Outcome criterion9() {
    const TimingPair s = median_times(App::secrecy, 20, 100);
    const TimingPair w = median_times(App::wsr, 20, 80);
    const double s_ratio_a = s.aogd_large / s.aogd_small;
    const double s_ratio_m = s.man_large / s.man_small;
    const double w_ratio_a = w.aogd_large / w.aogd_small;
    const double w_ratio_m = w.man_large / w.man_small;
    Outcome o;
    o.pass = s.aogd_large < s.man_large && w.aogd_large < w.man_large && s_ratio_a < s_ratio_m &&
             w_ratio_a < w_ratio_m;
    o.detail = fmt("secrecy M=100 %.1f vs %.1f ms, growth %.2f vs %.2f; wsr M=80 %.1f vs %.1f ms, "
                   "growth %.2f vs %.2f (aogd vs manifold)",
                   s.aogd_large, s.man_large, s_ratio_a, s_ratio_m, w.aogd_large, w.man_large,
                   w_ratio_a, w_ratio_m);
    return o;
}

Outcome criterion10() {
    std::string detail;
    bool pass = true;
    for (App app : {App::secrecy, App::wsr}) {
        ExperimentSpec spec = default_spec(Experiment::convergence, app);
        spec.options.xi = 1e-10;
        spec.options.xi2 = 1e-10;
        spec.options.max_iterations = 5000;
        const int m = app == App::secrecy ? 60 : 20;
        int ok = 0;
        double worst = 0.0;
        const auto t0 = std::chrono::steady_clock::now();
        for (int r = 0; r < 100; ++r) {
            const RunResult run = run_method(spec, Method::aogd, m, r);
            const double initial = run.trace.records.front().grad_max_norm;
            const double ratio = run.trace.min_grad_max_norm() / initial;
            worst = std::max(worst, ratio);
            ok += ratio <= 1e-2 ? 1 : 0;
        }
        pass = pass && ok >= 95;
        detail += fmt("%s %d/100 (worst ratio %.1e, %.0f s); ", std::string(to_string(app)).c_str(),
                      ok, worst, seconds_since(t0));
    }
    Outcome o;
    o.pass = pass;
    o.detail = detail + "min-so-far gradient max-norm <= 1e-2 x initial";
    return o;
}

Outcome criterion11() {
    bool same = true;
    std::size_t bytes = 0;
    std::vector<ExperimentSpec> specs;
    {
        ExperimentSpec s = default_spec(Experiment::convergence, App::secrecy);
        s.realizations = 8;
        specs.push_back(s);
        ExperimentSpec w = default_spec(Experiment::m_sweep_wsr, App::wsr);
        w.realizations = 8;
        w.per_realization = true;
        specs.push_back(w);
        ExperimentSpec t = default_spec(Experiment::m_sweep_secrecy, App::secrecy);
        t.realizations = 4;
        t.m_list = {20, 40};
        specs.push_back(t);
    }
    for (auto spec : specs) {
        spec.record_clock = false;
        spec.threads = 1;
        const std::string serial = to_csv(spec, run_experiment(spec));
        spec.threads = 8;
        const std::string parallel = to_csv(spec, run_experiment(spec));
        same = same && serial == parallel;
        bytes += serial.size();
    }
    Outcome o;
    o.pass = same;
    o.detail = fmt("3 experiments, %zu CSV bytes, serial vs 8 threads %s", bytes,
                   same ? "identical" : "DIFFER");
    return o;
}

struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
    const std::vector<Criterion> all = {
        {1, "monotonicity", criterion1},       {2, "sufficient decrease", criterion2},
        {3, "gradient check", criterion3},     {4, "FP identities", criterion4},
        {5, "brute-force oracle", criterion5}, {6, "convergence speed", criterion6},
        {7, "secrecy sweep", criterion7},      {8, "WSR sweep", criterion8},
        {9, "timing trends", criterion9},      {10, "stationarity", criterion10},
        {11, "determinism", criterion11},
    };
    std::set<int> selected;
    for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));

    int failed = 0;
    for (const auto& c : all) {
        if (!selected.empty() && selected.count(c.id) == 0) continue;
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        failed += o.pass ? 0 : 1;
        std::printf("[%s] criterion %d (%s): %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", c.id, c.name,
                    o.detail.c_str(), seconds_since(t0));
        std::fflush(stdout);
    }
    std::printf("%d criteria failed\n", failed);
    return failed == 0 ? 0 : 1;
}
