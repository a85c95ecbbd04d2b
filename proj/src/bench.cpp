// SPDX-License-Identifier: Apache-2.0

#include "aogd/bench.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <exception>
#include <fstream>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace aogd::bench {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Child-seed streams: channels and starting phases never share a generator.
constexpr std::uint64_t kChannelStream = 0;
constexpr std::uint64_t kPhaseStream = 1;

struct Summary {
    double mean = kNaN;
    double stddev = kNaN;
    double median = kNaN;
};

Summary summarize(std::vector<double> xs) {
    Summary s;
    if (xs.empty()) return s;
    const double n = static_cast<double>(xs.size());
    s.mean = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
    double ss = 0.0;
    for (double x : xs) ss += (x - s.mean) * (x - s.mean);
    s.stddev = xs.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
    std::sort(xs.begin(), xs.end());
    const std::size_t mid = xs.size() / 2;
    s.median = xs.size() % 2 == 1 ? xs[mid] : 0.5 * (xs[mid - 1] + xs[mid]);
    return s;
}

Row error_row(const ExperimentSpec& spec, Method method, int m, int realization) {
    Row r;
    r.experiment = std::string(to_string(spec.kind));
    r.method = std::string(to_string(method));
    r.m = m;
    r.realization = std::to_string(realization);
    r.iteration = "error";
    r.objective = kNaN;
    r.metric_bits = kNaN;
    r.step_size = kNaN;
    r.backtracks = kNaN;
    r.grad_norm = kNaN;
    r.elapsed_ms = kNaN;
    return r;
}

struct Task {
    Method method;
    int m;
    int realization;
};

std::vector<Task> make_tasks(const ExperimentSpec& spec) {
    std::vector<Task> tasks;
    for (Method method : spec.methods) {
        for (int m : spec.m_list) {
            for (int r = 0; r < spec.realizations; ++r) tasks.push_back({method, m, r});
        }
    }
    return tasks;
}

struct TaskOutcome {
    bool failed = false;
    RunResult run;
    double wall_ms = 0.0;
};

TaskOutcome execute(const ExperimentSpec& spec, const Task& task) {
    TaskOutcome out;
    try {
        // Instance generation stays outside the timed region.
        const PhaseVector theta0 = initial_phases(spec, task.m, task.realization);
        if (spec.app == App::secrecy) {
            const auto inst = secrecy_instance(spec, task.m, task.realization);
            const auto start = std::chrono::steady_clock::now();
            out.run = run_secrecy(inst, theta0, spec.options, task.method);
            out.wall_ms = detail::elapsed_ms_since(start);
        } else {
            const auto inst = wsr_instance(spec, task.m, task.realization);
            const auto start = std::chrono::steady_clock::now();
            out.run = run_wsr(inst, theta0, spec.options, task.method, spec.warm_start);
            out.wall_ms = detail::elapsed_ms_since(start);
        }
    } catch (const NumericError&) {
        out.failed = true;
    } catch (const ConvergenceError&) {
        out.failed = true;
    }
    return out;
}

std::vector<TaskOutcome> execute_all(const ExperimentSpec& spec, const std::vector<Task>& tasks) {
    std::vector<TaskOutcome> outcomes(tasks.size());
    parallel_for(tasks.size(), spec.threads,
                 [&](std::size_t i) { outcomes[i] = execute(spec, tasks[i]); });
    return outcomes;
}

double metric_of(App app, double objective) {
    return app == App::secrecy ? secrecy::secrecy_rate(objective) : objective / std::numbers::ln2;
}

enum class Stat { mean, stddev, median };

// Summary rows (in the order of `stats`) for every (method, M) group, each
// group optionally preceded by its per-realization final values.
ExperimentResult final_value_rows(const ExperimentSpec& spec, const std::vector<Task>& tasks,
                                  const std::vector<TaskOutcome>& outcomes,
                                  const std::vector<Stat>& stats) {
    ExperimentResult result;
    result.tasks = static_cast<int>(tasks.size());
    const std::string experiment(to_string(spec.kind));
    std::size_t i = 0;
    while (i < tasks.size()) {
        const Method method = tasks[i].method;
        const int m = tasks[i].m;
        std::vector<double> objs, bits, times;
        for (; i < tasks.size() && tasks[i].method == method && tasks[i].m == m; ++i) {
            const auto& o = outcomes[i];
            if (o.failed) {
                ++result.failures;
                result.rows.push_back(error_row(spec, method, m, tasks[i].realization));
                continue;
            }
            const auto& rec = o.run.trace.back();
            Row row;
            row.experiment = experiment;
            row.method = std::string(to_string(method));
            row.m = m;
            row.realization = std::to_string(tasks[i].realization);
            row.iteration = std::to_string(rec.iteration);
            row.objective = o.run.objective;
            row.metric_bits = o.run.metric_bits;
            row.step_size = rec.step;
            row.backtracks = rec.backtracks;
            row.grad_norm = rec.grad_norm;
            row.elapsed_ms = spec.record_clock ? o.wall_ms : 0.0;
            objs.push_back(row.objective);
            bits.push_back(row.metric_bits);
            times.push_back(row.elapsed_ms);
            if (spec.per_realization) result.rows.push_back(row);
        }
        const Summary so = summarize(objs);
        const Summary sb = summarize(bits);
        const Summary st = summarize(times);
        auto summary_row = [&](const char* label, double obj, double bit, double t) {
            Row row;
            row.experiment = experiment;
            row.method = std::string(to_string(method));
            row.m = m;
            row.realization = label;
            row.iteration = "";
            row.objective = obj;
            row.metric_bits = bit;
            row.step_size = kNaN;
            row.backtracks = kNaN;
            row.grad_norm = kNaN;
            row.elapsed_ms = t;
            result.rows.push_back(row);
        };
        for (Stat stat : stats) {
            switch (stat) {
                case Stat::mean: summary_row("mean", so.mean, sb.mean, st.mean); break;
                case Stat::stddev: summary_row("std", so.stddev, sb.stddev, st.stddev); break;
                case Stat::median: summary_row("median", so.median, sb.median, st.median); break;
            }
        }
    }
    return result;
}

std::string join_methods(const std::vector<Method>& methods) {
    std::string s;
    for (std::size_t i = 0; i < methods.size(); ++i) {
        if (i) s += ',';
        s += to_string(methods[i]);
    }
    return s;
}

std::string join_ints(const std::vector<int>& xs) {
    std::string s;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) s += ',';
        s += std::to_string(xs[i]);
    }
    return s;
}

std::string xml_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '&': out += "&amp;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

}  // namespace

std::string_view to_string(Experiment e) {
    switch (e) {
        case Experiment::convergence: return "convergence";
        case Experiment::m_sweep_secrecy: return "m_sweep_secrecy";
        case Experiment::m_sweep_wsr: return "m_sweep_wsr";
        case Experiment::timing: return "timing";
        case Experiment::oracle: return "oracle";
    }
    return "?";
}

std::string_view to_string(App a) { return a == App::secrecy ? "secrecy" : "wsr"; }

App app_from_string(std::string_view name) {
    if (name == "secrecy") return App::secrecy;
    if (name == "wsr") return App::wsr;
    throw std::invalid_argument("unknown application: " + std::string(name));
}

void ExperimentSpec::validate() const {
    if (methods.empty()) throw std::invalid_argument("method list is empty");
    if (m_list.empty()) throw std::invalid_argument("M list is empty");
    for (int m : m_list) {
        if (m < 1) throw std::invalid_argument("M must be >= 1");
    }
    if (realizations < 1) throw std::invalid_argument("realization count must be >= 1");
    if (threads < 1) throw std::invalid_argument("thread count must be >= 1");
    if (kind == Experiment::m_sweep_secrecy && app != App::secrecy) {
        throw std::invalid_argument("m_sweep_secrecy needs the secrecy application");
    }
    if (kind == Experiment::m_sweep_wsr && app != App::wsr) {
        throw std::invalid_argument("m_sweep_wsr needs the wsr application");
    }
    scenario.validate();
    options.validate();
}

ExperimentSpec default_spec(Experiment kind, App app) {
    ExperimentSpec spec;
    spec.kind = kind;
    spec.app = app;
    if (app == App::secrecy) {
        spec.options = secrecy::default_options();
        spec.scenario = kind == Experiment::convergence ? sim::secrecy_convergence_scenario()
                                                        : sim::secrecy_sweep_scenario();
    } else {
        spec.options = wsr::default_options();
        spec.scenario = sim::wsr_scenario();
    }
    switch (kind) {
        case Experiment::convergence:
            spec.methods = {Method::aogd, Method::ag, Method::bb};
            spec.m_list = {app == App::secrecy ? 60 : 20};
            spec.realizations = 100;
            break;
        case Experiment::m_sweep_secrecy:
            spec.methods = {Method::aogd, Method::bcd, Method::manifold};
            spec.m_list = {20, 40, 60, 80};
            spec.realizations = 200;
            break;
        case Experiment::m_sweep_wsr:
            spec.methods = {Method::aogd, Method::bcd, Method::manifold};
            spec.m_list = {10, 20, 40};
            spec.realizations = 200;
            break;
        case Experiment::oracle:
            spec.methods = {Method::aogd};
            spec.m_list = {2};
            spec.realizations = 5;
            break;
        case Experiment::timing:
            spec.methods = {Method::aogd, Method::manifold};
            spec.m_list = app == App::secrecy ? std::vector<int>{20, 60, 100}
                                              : std::vector<int>{20, 40, 80};
            spec.realizations = 20;
            break;
    }
    spec.options.rng_seed = spec.seed;
    return spec;
}

secrecy::SecrecyInstance secrecy_instance(const ExperimentSpec& spec, int m, int realization) {
    sim::ScenarioConfig cfg = spec.scenario;
    cfg.m = m;
    sim::Rng rng(sim::child_seed(spec.seed, static_cast<std::uint64_t>(realization),
                                 kChannelStream));
    return sim::gen_secrecy_instance(cfg, rng);
}

wsr::WsrInstance wsr_instance(const ExperimentSpec& spec, int m, int realization) {
    sim::ScenarioConfig cfg = spec.scenario;
    cfg.m = m;
    sim::Rng rng(sim::child_seed(spec.seed, static_cast<std::uint64_t>(realization),
                                 kChannelStream));
    return sim::gen_wsr_instance(cfg, rng);
}

PhaseVector initial_phases(const ExperimentSpec& spec, int m, int realization) {
    sim::Rng rng(sim::child_seed(spec.seed, static_cast<std::uint64_t>(realization),
                                 kPhaseStream));
    return sim::random_phases(m, rng);
}

RunResult run_method(const ExperimentSpec& spec, Method method, int m, int realization) {
    const PhaseVector theta0 = initial_phases(spec, m, realization);
    if (spec.app == App::secrecy) {
        return run_secrecy(secrecy_instance(spec, m, realization), theta0, spec.options, method);
    }
    return run_wsr(wsr_instance(spec, m, realization), theta0, spec.options, method,
                   spec.warm_start);
}

ExperimentResult run_convergence(const ExperimentSpec& spec) {
    spec.validate();
    const auto tasks = make_tasks(spec);
    const auto outcomes = execute_all(spec, tasks);
    ExperimentResult result;
    result.tasks = static_cast<int>(tasks.size());
    const std::string experiment(to_string(spec.kind));
    for (std::size_t i = 0; i < tasks.size(); ++i) {
        const auto& task = tasks[i];
        if (outcomes[i].failed) {
            ++result.failures;
            result.rows.push_back(error_row(spec, task.method, task.m, task.realization));
            continue;
        }
        for (const auto& rec : outcomes[i].run.trace.records) {
            Row row;
            row.experiment = experiment;
            row.method = std::string(to_string(task.method));
            row.m = task.m;
            row.realization = std::to_string(task.realization);
            row.iteration = std::to_string(rec.iteration);
            row.objective = -rec.objective;
            row.metric_bits = metric_of(spec.app, row.objective);
            row.step_size = rec.step;
            row.backtracks = rec.backtracks;
            row.grad_norm = rec.grad_norm;
            row.elapsed_ms = spec.record_clock ? rec.elapsed_ms : 0.0;
            result.rows.push_back(row);
        }
    }
    return result;
}

ExperimentResult run_m_sweep(const ExperimentSpec& spec) {
    spec.validate();
    const auto tasks = make_tasks(spec);
    return final_value_rows(spec, tasks, execute_all(spec, tasks), {Stat::mean, Stat::stddev});
}

ExperimentResult run_timing(const ExperimentSpec& spec) {
    spec.validate();
    // Warm-up: one discarded run per (method, M) to fault in code and caches.
    for (Method method : spec.methods) {
        for (int m : spec.m_list) (void)execute(spec, {method, m, 0});
    }
    const auto tasks = make_tasks(spec);
    return final_value_rows(spec, tasks, execute_all(spec, tasks), {Stat::median, Stat::mean});
}

ExperimentResult run_experiment(const ExperimentSpec& spec) {
    switch (spec.kind) {
        case Experiment::convergence: return run_convergence(spec);
        case Experiment::m_sweep_secrecy:
        case Experiment::m_sweep_wsr: return run_m_sweep(spec);
        case Experiment::timing: return run_timing(spec);
        case Experiment::oracle: break;
    }
    throw std::invalid_argument("unknown experiment");
}

std::string format_number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

std::string header_block(const ExperimentSpec& spec) {
    std::ostringstream out;
    const auto& o = spec.options;
    out << "# aogd_bench " << kToolVersion << '\n';
    out << "# experiment = " << to_string(spec.kind) << '\n';
    out << "# application = " << to_string(spec.app) << '\n';
    out << "# seed = " << spec.seed << '\n';
    out << "# methods = " << join_methods(spec.methods) << '\n';
    out << "# m_list = " << join_ints(spec.m_list) << '\n';
    out << "# realizations = " << spec.realizations << '\n';
    out << "# warm_start = " << (spec.warm_start ? "true" : "false") << '\n';
    out << "# per_realization = " << (spec.per_realization ? "true" : "false") << '\n';
    out << "# clock = " << (spec.record_clock ? "on" : "off") << '\n';
    out << "# gamma0 = " << format_number(o.gamma0) << '\n';
    out << "# beta = " << format_number(o.beta) << '\n';
    out << "# c = " << format_number(o.c) << '\n';
    out << "# xi = " << format_number(o.xi) << '\n';
    out << "# xi1 = " << format_number(o.xi1) << '\n';
    out << "# xi2 = " << format_number(o.xi2) << '\n';
    out << "# max_iterations = " << o.max_iterations << '\n';
    out << "# max_backtracks = " << o.max_backtracks << '\n';
    out << "# max_inner = " << o.max_inner << '\n';
    std::istringstream scenario(spec.scenario.to_text());
    for (std::string line; std::getline(scenario, line);) {
        out << "# scenario." << line << '\n';
    }
    return out.str();
}

std::string to_csv(const ExperimentSpec& spec, const ExperimentResult& result) {
    std::string out = header_block(spec);
    out +=
        "experiment,method,M,realization,iteration,objective,metric_bits,step_size,backtracks,"
        "grad_norm,elapsed_ms\n";
    for (const auto& r : result.rows) {
        out += r.experiment;
        out += ',';
        out += r.method;
        out += ',';
        out += std::to_string(r.m);
        out += ',';
        out += r.realization;
        out += ',';
        out += r.iteration;
        for (double x : {r.objective, r.metric_bits, r.step_size, r.backtracks, r.grad_norm,
                         r.elapsed_ms}) {
            out += ',';
            out += format_number(x);
        }
        out += '\n';
    }
    return out;
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw std::invalid_argument("cannot open output file: " + path);
    f << text;
    if (!f) throw std::runtime_error("write failed: " + path);
}

std::string svg_line_chart(const std::string& title, const std::string& x_label,
                           const std::string& y_label, const std::vector<Series>& series) {
    constexpr double width = 720, height = 440, left = 80, right = 160, top = 40, bottom = 60;
    static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                    "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};
    double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
    for (const auto& s : series) {
        for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
            x0 = std::min(x0, s.x[i]);
            x1 = std::max(x1, s.x[i]);
            y0 = std::min(y0, s.y[i]);
            y1 = std::max(y1, s.y[i]);
        }
    }
    if (!(x0 <= x1)) x0 = 0, x1 = 1, y0 = 0, y1 = 1;
    if (x1 == x0) x1 = x0 + 1;
    if (y1 == y0) y1 = y0 + 1;
    const double pw = width - left - right, ph = height - top - bottom;
    auto px = [&](double x) { return left + (x - x0) / (x1 - x0) * pw; };
    auto py = [&](double y) { return top + (1.0 - (y - y0) / (y1 - y0)) * ph; };

    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"" << width / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">"
        << xml_escape(title) << "</text>\n";
    out << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph
        << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (int k = 0; k <= 4; ++k) {
        const double xv = x0 + (x1 - x0) * k / 4.0;
        const double yv = y0 + (y1 - y0) * k / 4.0;
        out << "<text x=\"" << px(xv) << "\" y=\"" << top + ph + 18
            << "\" text-anchor=\"middle\">" << format_number(std::round(xv * 1000) / 1000)
            << "</text>\n";
        out << "<text x=\"" << left - 6 << "\" y=\"" << py(yv) + 4 << "\" text-anchor=\"end\">"
            << format_number(std::round(yv * 1000) / 1000) << "</text>\n";
    }
    out << "<text x=\"" << left + pw / 2 << "\" y=\"" << height - 15
        << "\" text-anchor=\"middle\">" << xml_escape(x_label) << "</text>\n";
    out << "<text transform=\"translate(18," << top + ph / 2
        << ") rotate(-90)\" text-anchor=\"middle\">" << xml_escape(y_label) << "</text>\n";
    for (std::size_t k = 0; k < series.size(); ++k) {
        const auto& s = series[k];
        const char* colour = palette[k % std::size(palette)];
        out << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
            out << px(s.x[i]) << ',' << py(s.y[i]) << ' ';
        }
        out << "\"/>\n";
        const double ly = top + 16 + 18 * static_cast<double>(k);
        out << "<line x1=\"" << left + pw + 12 << "\" y1=\"" << ly << "\" x2=\"" << left + pw + 36
            << "\" y2=\"" << ly << "\" stroke=\"" << colour << "\" stroke-width=\"2\"/>\n";
        out << "<text x=\"" << left + pw + 42 << "\" y=\"" << ly + 4 << "\">" << xml_escape(s.name)
            << "</text>\n";
    }
    out << "</svg>\n";
    return out.str();
}

std::string experiment_svg(const ExperimentSpec& spec, const ExperimentResult& result) {
    std::vector<Series> series;
    if (spec.kind == Experiment::convergence) {
        // Mean objective per iteration; finished runs carry their last value.
        std::map<std::pair<std::string, int>, std::map<std::string, std::vector<double>>> traces;
        for (const auto& r : result.rows) {
            if (r.iteration == "error") continue;
            traces[{r.method, r.m}][r.realization].push_back(r.objective);
        }
        for (const auto& [key, runs] : traces) {
            std::size_t len = 0;
            for (const auto& [_, v] : runs) len = std::max(len, v.size());
            Series s;
            s.name = key.first + " M=" + std::to_string(key.second);
            for (std::size_t t = 0; t < len; ++t) {
                double sum = 0.0;
                for (const auto& [_, v] : runs) sum += v[std::min(t, v.size() - 1)];
                s.x.push_back(static_cast<double>(t));
                s.y.push_back(sum / static_cast<double>(runs.size()));
            }
            series.push_back(std::move(s));
        }
        return svg_line_chart("Convergence (" + std::string(to_string(spec.app)) + ")",
                              "iteration", "mean objective", series);
    }
    const bool timing = spec.kind == Experiment::timing;
    const std::string label = timing ? "median" : "mean";
    std::map<std::string, Series> by_method;
    for (const auto& r : result.rows) {
        if (r.realization != label) continue;
        auto& s = by_method[r.method];
        s.name = r.method;
        s.x.push_back(r.m);
        s.y.push_back(timing ? r.elapsed_ms : r.metric_bits);
    }
    for (Method m : spec.methods) {
        auto it = by_method.find(std::string(to_string(m)));
        if (it != by_method.end()) series.push_back(it->second);
    }
    if (timing) {
        return svg_line_chart("Running time (" + std::string(to_string(spec.app)) + ")", "M",
                              "median time [ms]", series);
    }
    return svg_line_chart(spec.app == App::secrecy ? "Average secrecy rate" : "Average WSR", "M",
                          "bits/s/Hz", series);
}

namespace {

// Minimizes eval(v) over the grid; strict comparison keeps the first optimum.
template <typename Eval>
OracleResult grid_minimize(Eigen::Index m, int grid_points, Eval&& eval) {
    if (m < 1 || m > 3) throw std::invalid_argument("brute-force oracle supports 1 <= M <= 3");
    if (grid_points < 1) throw std::invalid_argument("grid_points must be >= 1");
    const double step = 2.0 * std::numbers::pi / grid_points;
    // Unit-modulus table shared by all axes: v = exp(-j theta).
    std::vector<Complex> table(static_cast<std::size_t>(grid_points));
    for (int g = 0; g < grid_points; ++g) table[g] = std::polar(1.0, -step * g);

    std::vector<int> idx(static_cast<std::size_t>(m), 0);
    std::vector<int> best_idx = idx;
    double best = std::numeric_limits<double>::infinity();
    ComplexVector v(m);
    for (;;) {
        for (Eigen::Index k = 0; k < m; ++k) v(k) = table[idx[k]];
        const double f = eval(v);
        if (f < best) {
            best = f;
            best_idx = idx;
        }
        Eigen::Index k = m - 1;
        while (k >= 0 && ++idx[k] == grid_points) idx[k--] = 0;
        if (k < 0) break;
    }
    OracleResult out;
    out.objective = best;
    out.theta = PhaseVector::zeros(m);
    for (Eigen::Index k = 0; k < m; ++k) out.theta.theta(k) = step * best_idx[k];
    return out;
}

// Largest lambda with det(A - lambda B) = 0 for A = I + a g g^H and
// B = I + b h h^H, from the 2 x 2 restriction to span{g, h}.
double rank_one_pencil_max(double a, const ComplexVector& g, double b, const ComplexVector& h) {
    const Eigen::Index n = g.size();
    const double gn = g.norm();
    const double hn = h.norm();
    constexpr double tiny = 1e-300;
    if (gn <= tiny) {
        // A = I: the ratio is 1/(1 + b |h^H u|^2), best on h's complement.
        return n > 1 || hn <= tiny ? 1.0 : 1.0 / (1.0 + b * hn * hn);
    }
    const ComplexVector e1 = g / gn;
    const Complex h1 = e1.dot(h);  // e1^H h
    const ComplexVector rest = h - h1 * e1;
    const double h2 = rest.norm();  // coordinate along e2 (real, >= 0)
    const double alpha1 = 1.0 + a * gn * gn;
    const double b11 = 1.0 + b * std::norm(h1);
    const double b22 = 1.0 + b * h2 * h2;
    const double b12sq = b * b * std::norm(h1) * h2 * h2;
    const double det_b = b11 * b22 - b12sq;
    const double lin = alpha1 * b22 + b11;
    const double disc = std::max(lin * lin - 4.0 * det_b * alpha1, 0.0);
    // h parallel to g: the pencil is scalar on span{g}.
    const int span_dim = h2 > 1e-12 * std::max(hn, 1.0) ? 2 : 1;
    double lambda = span_dim == 2 ? (lin + std::sqrt(disc)) / (2.0 * det_b) : alpha1 / b11;
    // Directions orthogonal to span{g, h} give exactly 1.
    if (n > span_dim) lambda = std::max(lambda, 1.0);
    return lambda;
}

}  // namespace

double secrecy_grid_value(const secrecy::SecrecyInstance& inst, const UnitModulusVector& v) {
    // h_i^H Phi G w = (v .* h_i)^H G w = g_i^H w with g_i = G^H (v .* h_i).
    const ComplexVector gl = inst.G.adjoint() * v.v().cwiseProduct(inst.h_l);
    const ComplexVector ge = inst.G.adjoint() * v.v().cwiseProduct(inst.h_e);
    return rank_one_pencil_max(inst.power / inst.sigma2_l, gl, inst.power / inst.sigma2_e, ge);
}

OracleResult brute_force_secrecy(const secrecy::SecrecyInstance& inst, int grid_points) {
    inst.validate();
    const ComplexMatrix gh = inst.G.adjoint();
    const double a = inst.power / inst.sigma2_l;
    const double b = inst.power / inst.sigma2_e;
    auto out = grid_minimize(inst.m(), grid_points, [&](const ComplexVector& v) {
        const ComplexVector gl = gh * v.cwiseProduct(inst.h_l);
        const ComplexVector ge = gh * v.cwiseProduct(inst.h_e);
        return -rank_one_pencil_max(a, gl, b, ge);
    });
    out.objective = -out.objective;
    return out;
}

OracleResult brute_force_f4(const wsr::WsrQuadratics& quads, int grid_points) {
    return grid_minimize(quads.e.size(), grid_points, [&](const ComplexVector& v) {
        return (v.dot(quads.R * v)).real() - 2.0 * v.dot(quads.e).real();
    });
}

double secrecy_aogd_best_of(const secrecy::SecrecyInstance& inst, int restarts,
                            std::uint64_t seed, const SolverOptions& opts) {
    double best = -std::numeric_limits<double>::infinity();
    for (int r = 0; r < restarts; ++r) {
        sim::Rng rng(sim::child_seed(seed, static_cast<std::uint64_t>(r), kPhaseStream));
        const auto run =
            run_secrecy(inst, sim::random_phases(inst.m(), rng), opts, Method::aogd);
        best = std::max(best, run.objective);
    }
    return best;
}

wsr::WsrQuadratics oracle_f4_quadratics(const wsr::WsrInstance& inst, const PhaseVector& theta0,
                                        const SolverOptions& opts) {
    const auto v = u_map(theta0);
    const auto state =
        wsr::fp_inner_loop(inst, v, wsr::FpState::zeros(inst), opts.xi1, opts.max_inner);
    return wsr::build_r_e(inst, state.p, state.q, state.W);
}

double f4_aogd_best_of(const wsr::WsrQuadratics& quads, int restarts, std::uint64_t seed,
                       const SolverOptions& opts) {
    const wsr::F4Subproblem problem(quads);
    double best = std::numeric_limits<double>::infinity();
    for (int r = 0; r < restarts; ++r) {
        sim::Rng rng(sim::child_seed(seed, static_cast<std::uint64_t>(r), kPhaseStream));
        const auto res = solve(problem, sim::random_phases(quads.e.size(), rng), opts,
                               StepRule::tailored);
        best = std::min(best, res.trace.final_objective());
    }
    return best;
}

double f4_bcd_fixed_point(const wsr::WsrQuadratics& quads, const UnitModulusVector& v0,
                          double tol, int max_sweeps) {
    UnitModulusVector v = v0;
    double f = wsr::f4_eval(quads, v);
    for (int s = 0; s < max_sweeps; ++s) {
        v = wsr::elementwise_bcd_v(quads, v);
        const double next = wsr::f4_eval(quads, v);
        const bool done = normalized_increment(next, f) < tol;
        f = next;
        if (done) break;
    }
    return f;
}

ExperimentResult run_oracle(const ExperimentSpec& spec, int grid_points, int restarts) {
    if (spec.realizations < 1) throw std::invalid_argument("realization count must be >= 1");
    if (restarts < 1) throw std::invalid_argument("restarts must be >= 1");
    for (int m : spec.m_list) {
        if (m < 1 || m > 3) throw std::invalid_argument("oracle refuses M > 3 (and M < 1)");
    }
    spec.scenario.validate();
    spec.options.validate();

    struct Job {
        int m;
        int realization;
    };
    std::vector<Job> jobs;
    for (int m : spec.m_list) {
        for (int r = 0; r < spec.realizations; ++r) jobs.push_back({m, r});
    }
    std::vector<std::vector<Row>> out(jobs.size());
    parallel_for(jobs.size(), spec.threads, [&](std::size_t i) {
        const auto [m, r] = jobs[i];
        auto row = [&](const char* method, double objective) {
            Row x;
            x.experiment = "oracle";
            x.method = method;
            x.m = m;
            x.realization = std::to_string(r);
            x.iteration = "";
            x.objective = objective;
            x.metric_bits = spec.app == App::secrecy ? secrecy::secrecy_rate(objective) : kNaN;
            x.step_size = kNaN;
            x.backtracks = kNaN;
            x.grad_norm = kNaN;
            x.elapsed_ms = kNaN;
            return x;
        };
        const std::uint64_t restart_seed =
            sim::child_seed(spec.seed, static_cast<std::uint64_t>(r), 2);
        if (spec.app == App::secrecy) {
            const auto inst = secrecy_instance(spec, m, r);
            const auto grid = brute_force_secrecy(inst, grid_points);
            out[i].push_back(row("grid", grid.objective));
            out[i].push_back(
                row("aogd", secrecy_aogd_best_of(inst, restarts, restart_seed, spec.options)));
        } else {
            const auto inst = wsr_instance(spec, m, r);
            const auto quads = oracle_f4_quadratics(inst, initial_phases(spec, m, r), spec.options);
            const auto grid = brute_force_f4(quads, grid_points);
            out[i].push_back(row("grid", grid.objective));
            out[i].push_back(
                row("aogd", f4_aogd_best_of(quads, restarts, restart_seed, spec.options)));
            out[i].push_back(
                row("bcd", f4_bcd_fixed_point(quads, u_map(initial_phases(spec, m, r)))));
        }
    });
    ExperimentResult result;
    result.tasks = static_cast<int>(jobs.size());
    for (auto& rows : out) {
        for (auto& r : rows) result.rows.push_back(std::move(r));
    }
    return result;
}

void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& body) {
    if (threads <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n) return;
            try {
                body(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
            }
        }
    };
    const std::size_t count = std::min<std::size_t>(static_cast<std::size_t>(threads), n);
    std::vector<std::thread> pool;
    pool.reserve(count);
    for (std::size_t t = 0; t < count; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace aogd::bench
