// SPDX-License-Identifier: Apache-2.0

#include "aogd/sim.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace aogd::sim {

namespace {

std::string format_double(double x) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

template <typename T>
T parse_number(std::string_view key, std::string_view value) {
    T out{};
    const auto res = std::from_chars(value.data(), value.data() + value.size(), out);
    if (res.ec != std::errc() || res.ptr != value.data() + value.size()) {
        throw std::invalid_argument("config: bad value for '" + std::string(key) + "': " +
                                    std::string(value));
    }
    return out;
}

bool parse_bool(std::string_view key, std::string_view value) {
    if (value == "true" || value == "1") return true;
    if (value == "false" || value == "0") return false;
    throw std::invalid_argument("config: bad boolean for '" + std::string(key) + "'");
}

// Field table shared by the reader and the writer.
struct Field {
    std::function<std::string(const ScenarioConfig&)> get;
    std::function<void(ScenarioConfig&, std::string_view key, std::string_view)> set;
};

template <typename T>
Field number_field(T ScenarioConfig::*member) {
    return {[member](const ScenarioConfig& c) {
                if constexpr (std::is_floating_point_v<T>) {
                    return format_double(c.*member);
                } else {
                    return std::to_string(c.*member);
                }
            },
            [member](ScenarioConfig& c, std::string_view key, std::string_view v) {
                c.*member = parse_number<T>(key, v);
            }};
}

const std::vector<std::pair<std::string, Field>>& fields() {
    static const std::vector<std::pair<std::string, Field>> table = {
        {"n_t", number_field(&ScenarioConfig::n_t)},
        {"m", number_field(&ScenarioConfig::m)},
        {"k_users", number_field(&ScenarioConfig::k_users)},
        {"p_dbm", number_field(&ScenarioConfig::p_dbm)},
        {"alpha", number_field(&ScenarioConfig::alpha)},
        {"alpha_direct", number_field(&ScenarioConfig::alpha_direct)},
        {"c0_db", number_field(&ScenarioConfig::c0_db)},
        {"r_tr", number_field(&ScenarioConfig::r_tr)},
        {"r_rl", number_field(&ScenarioConfig::r_rl)},
        {"r_re", number_field(&ScenarioConfig::r_re)},
        {"irs_x", number_field(&ScenarioConfig::irs_x)},
        {"user_offset", number_field(&ScenarioConfig::user_offset)},
        {"user_radius", number_field(&ScenarioConfig::user_radius)},
        {"min_distance", number_field(&ScenarioConfig::min_distance)},
        {"sigma2_l_dbm", number_field(&ScenarioConfig::sigma2_l_dbm)},
        {"sigma2_e_dbm", number_field(&ScenarioConfig::sigma2_e_dbm)},
        {"sigma2_0_dbm", number_field(&ScenarioConfig::sigma2_0_dbm)},
        {"fading_variance", number_field(&ScenarioConfig::fading_variance)},
        {"unit_fading",
         {[](const ScenarioConfig& c) { return std::string(c.unit_fading ? "true" : "false"); },
          [](ScenarioConfig& c, std::string_view key, std::string_view v) {
              c.unit_fading = parse_bool(key, v);
          }}},
        {"rng_seed", number_field(&ScenarioConfig::rng_seed)},
    };
    return table;
}

}  // namespace

void ScenarioConfig::validate() const {
    if (n_t < 1 || m < 1 || k_users < 1) {
        throw std::invalid_argument("config: n_t, m and k_users must be >= 1");
    }
    if (!(alpha > 0.0) || !(alpha_direct > 0.0)) {
        throw std::invalid_argument("config: path-loss exponents must be > 0");
    }
    for (double d : {r_tr, r_rl, r_re, irs_x, min_distance}) {
        if (!(d > 0.0)) throw std::invalid_argument("config: distances must be > 0");
    }
    if (user_radius < 0.0 || user_offset < 0.0) {
        throw std::invalid_argument("config: user geometry must be non-negative");
    }
    if (!(fading_variance >= 0.0)) throw std::invalid_argument("config: fading variance < 0");
    for (double x : {p_dbm, c0_db, sigma2_l_dbm, sigma2_e_dbm, sigma2_0_dbm}) {
        if (!std::isfinite(x)) throw std::invalid_argument("config: non-finite level");
    }
}

std::string ScenarioConfig::to_text() const {
    std::ostringstream out;
    for (const auto& [key, field] : fields()) {
        out << key << " = " << field.get(*this) << '\n';
    }
    return out.str();
}

ScenarioConfig ScenarioConfig::parse(std::string_view text, const ScenarioConfig& base) {
    ScenarioConfig cfg = base;
    std::size_t pos = 0;
    int line_no = 0;
    while (pos <= text.size()) {
        const auto end = text.find('\n', pos);
        std::string_view line =
            text.substr(pos, end == std::string_view::npos ? std::string_view::npos : end - pos);
        pos = end == std::string_view::npos ? text.size() + 1 : end + 1;
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw std::invalid_argument("config line " + std::to_string(line_no) +
                                        ": expected key = value");
        }
        const auto key = trim(line.substr(0, eq));
        const auto value = trim(line.substr(eq + 1));
        bool known = false;
        for (const auto& [name, field] : fields()) {
            if (name == key) {
                field.set(cfg, key, value);
                known = true;
                break;
            }
        }
        if (!known) {
            throw std::invalid_argument("config line " + std::to_string(line_no) +
                                        ": unknown key '" + std::string(key) + "'");
        }
    }
    cfg.validate();
    return cfg;
}

ScenarioConfig ScenarioConfig::parse(std::string_view text) { return parse(text, {}); }

ScenarioConfig ScenarioConfig::load(const std::string& path) { return load(path, {}); }

ScenarioConfig ScenarioConfig::load(const std::string& path, const ScenarioConfig& base) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str(), base);
}

ScenarioConfig secrecy_convergence_scenario() {
    ScenarioConfig c;
    c.n_t = 5;
    c.m = 60;
    c.p_dbm = 5.0;
    c.alpha = 4.0;
    c.r_tr = 250.0;
    c.r_rl = 160.0;
    c.r_re = 160.0;
    return c;
}

ScenarioConfig secrecy_sweep_scenario() {
    ScenarioConfig c;
    c.n_t = 10;
    c.m = 60;
    c.p_dbm = 5.0;
    c.alpha = 4.0;
    c.r_tr = 200.0;
    c.r_rl = 150.0;
    c.r_re = 100.0;
    return c;
}

ScenarioConfig wsr_scenario() {
    ScenarioConfig c;
    c.n_t = 4;
    c.k_users = 4;
    c.m = 20;
    c.p_dbm = 10.0;
    c.alpha = 2.2;
    c.alpha_direct = 3.6;
    c.sigma2_0_dbm = -80.0;
    return c;
}

double path_loss(double distance_m, double alpha, double c0_db) {
    if (!(distance_m > 0.0)) throw std::invalid_argument("path_loss: distance must be > 0");
    return std::pow(10.0, c0_db / 10.0) * std::pow(distance_m, -alpha);
}

double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
double watts_to_dbm(double watts) { return 10.0 * std::log10(watts) + 30.0; }

std::uint64_t child_seed(std::uint64_t seed, std::uint64_t index, std::uint64_t stream) {
    // splitmix64 finalizer over a mix of the three inputs
    auto mix = [](std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    };
    return mix(mix(mix(seed) ^ index) ^ (stream * 0xd1b54a32d192ed03ULL));
}

namespace {

Complex draw_fading(Rng& rng, double variance, bool unit) {
    if (unit) return {1.0, 0.0};
    std::normal_distribution<double> normal(0.0, std::sqrt(variance / 2.0));
    const double re = normal(rng);
    const double im = normal(rng);
    return {re, im};
}

}  // namespace

ComplexMatrix gen_rayleigh(Eigen::Index rows, Eigen::Index cols, Rng& rng, double variance) {
    ComplexMatrix out(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
        for (Eigen::Index c = 0; c < cols; ++c) {
            out(r, c) = draw_fading(rng, variance, false);
        }
    }
    return out;
}

secrecy::SecrecyInstance gen_secrecy_instance(const ScenarioConfig& cfg, Rng& rng) {
    cfg.validate();
    const double a_tr = std::sqrt(path_loss(cfg.r_tr, cfg.alpha, cfg.c0_db));
    const double a_rl = std::sqrt(path_loss(cfg.r_rl, cfg.alpha, cfg.c0_db));
    const double a_re = std::sqrt(path_loss(cfg.r_re, cfg.alpha, cfg.c0_db));

    secrecy::SecrecyInstance inst;
    inst.G.resize(cfg.m, cfg.n_t);
    inst.h_l.resize(cfg.m);
    inst.h_e.resize(cfg.m);
    for (int e = 0; e < cfg.m; ++e) {
        for (int a = 0; a < cfg.n_t; ++a) {
            inst.G(e, a) = a_tr * draw_fading(rng, cfg.fading_variance, cfg.unit_fading);
        }
        inst.h_l(e) = a_rl * draw_fading(rng, cfg.fading_variance, cfg.unit_fading);
        inst.h_e(e) = a_re * draw_fading(rng, cfg.fading_variance, cfg.unit_fading);
    }
    inst.sigma2_l = dbm_to_watts(cfg.sigma2_l_dbm);
    inst.sigma2_e = dbm_to_watts(cfg.sigma2_e_dbm);
    inst.power = dbm_to_watts(cfg.p_dbm);
    inst.validate();
    return inst;
}

wsr::WsrInstance gen_wsr_instance(const ScenarioConfig& cfg, Rng& rng) {
    cfg.validate();
    const int kk = cfg.k_users;
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    std::vector<double> d_direct(kk);
    std::vector<double> d_reflect(kk);
    for (int k = 0; k < kk; ++k) {
        const double r = cfg.user_radius * std::sqrt(unit(rng));
        const double phi = 2.0 * std::numbers::pi * unit(rng);
        const double x = cfg.irs_x + r * std::cos(phi);
        const double y = cfg.user_offset + r * std::sin(phi);
        d_direct[k] = std::max(std::hypot(x, y), cfg.min_distance);
        d_reflect[k] = std::max(std::hypot(x - cfg.irs_x, y), cfg.min_distance);
    }

    std::vector<ComplexVector> h_d(kk, ComplexVector(cfg.n_t));
    for (int k = 0; k < kk; ++k) {
        const double amp = std::sqrt(path_loss(d_direct[k], cfg.alpha_direct, cfg.c0_db));
        for (int a = 0; a < cfg.n_t; ++a) {
            h_d[k](a) = amp * draw_fading(rng, cfg.fading_variance, cfg.unit_fading);
        }
    }

    const double a_g = std::sqrt(path_loss(cfg.irs_x, cfg.alpha, cfg.c0_db));
    ComplexMatrix G(cfg.m, cfg.n_t);
    std::vector<ComplexVector> h_r(kk, ComplexVector(cfg.m));
    for (int e = 0; e < cfg.m; ++e) {
        for (int a = 0; a < cfg.n_t; ++a) {
            G(e, a) = a_g * draw_fading(rng, cfg.fading_variance, cfg.unit_fading);
        }
        for (int k = 0; k < kk; ++k) {
            const double amp = std::sqrt(path_loss(d_reflect[k], cfg.alpha, cfg.c0_db));
            h_r[k](e) = amp * draw_fading(rng, cfg.fading_variance, cfg.unit_fading);
        }
    }

    return wsr::WsrInstance::make(std::move(h_d), std::move(h_r), std::move(G),
                                  RealVector::Ones(kk), dbm_to_watts(cfg.sigma2_0_dbm),
                                  dbm_to_watts(cfg.p_dbm));
}

PhaseVector random_phases(Eigen::Index m, Rng& rng) {
    std::uniform_real_distribution<double> unit(0.0, 2.0 * std::numbers::pi);
    RealVector t(m);
    for (Eigen::Index i = 0; i < m; ++i) t(i) = unit(rng);
    return PhaseVector(std::move(t));
}

}  // namespace aogd::sim
