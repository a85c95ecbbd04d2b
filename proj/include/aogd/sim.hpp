// SPDX-License-Identifier: Apache-2.0
//
// Scenario description and reproducible channel generation.
//
// Large-scale gain follows C0 * d^-alpha with C0 given in dB; small-scale
// fading is i.i.d. circularly-symmetric complex Gaussian. Channels are drawn
// element-major (surface element by surface element), so the instance for M
// elements is a prefix of the instance for any larger M under the same seed.

#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <string_view>

#include "aogd/phase.hpp"
#include "aogd/secrecy.hpp"
#include "aogd/wsr.hpp"

namespace aogd::sim {

using Rng = std::mt19937_64;

struct ScenarioConfig {
    int n_t = 5;
    int m = 60;
    int k_users = 4;  // WSR only
    double p_dbm = 5.0;
    double alpha = 4.0;           // path-loss exponent (all secrecy links, WSR surface links)
    double alpha_direct = 3.6;    // WSR AP -> user link
    double c0_db = -30.0;         // gain at 1 m
    // secrecy geometry
    double r_tr = 250.0;
    double r_rl = 160.0;
    double r_re = 160.0;
    // WSR geometry: AP at the origin, surface on the x-axis, users uniform in a
    // disc whose centre sits user_offset metres from the surface (along y).
    double irs_x = 50.0;
    double user_offset = 5.0;
    double user_radius = 5.0;
    double min_distance = 1.0;
    // noise
    double sigma2_l_dbm = -241.0;
    double sigma2_e_dbm = -241.0;
    double sigma2_0_dbm = -80.0;
    double fading_variance = 1.0;
    bool unit_fading = false;  // replace fading by all-ones entries (tests)
    std::uint64_t rng_seed = 1;

    void validate() const;

    // "key = value" lines, keys equal to the field names above; '#' starts a
    // comment. Keys absent from the text keep the value from `base`.
    std::string to_text() const;
    static ScenarioConfig parse(std::string_view text);
    static ScenarioConfig parse(std::string_view text, const ScenarioConfig& base);
    static ScenarioConfig load(const std::string& path);
    static ScenarioConfig load(const std::string& path, const ScenarioConfig& base);
};

// Convergence experiment at M = 60: N_t = 5, P = 5 dBm, alpha = 4,
// r_TR = 250 m, r_Rl = r_Re = 160 m.
ScenarioConfig secrecy_convergence_scenario();
// Sweep over M: N_t = 10, P = 5 dBm, alpha = 4, r_TR = 200 m, r_Rl = 150 m, r_Re = 100 m.
ScenarioConfig secrecy_sweep_scenario();
// 4-antenna AP, 4 single-antenna users, P = 10 dBm, M = 20.
ScenarioConfig wsr_scenario();

double path_loss(double distance_m, double alpha, double c0_db);
double dbm_to_watts(double dbm);
double watts_to_dbm(double watts);

// Child seed for realization `index` (and an optional stream tag) so that
// parallel and serial runs draw identical ensembles.
std::uint64_t child_seed(std::uint64_t seed, std::uint64_t index, std::uint64_t stream = 0);

// i.i.d. CN(0, variance) entries, drawn row by row.
ComplexMatrix gen_rayleigh(Eigen::Index rows, Eigen::Index cols, Rng& rng, double variance = 1.0);

secrecy::SecrecyInstance gen_secrecy_instance(const ScenarioConfig& cfg, Rng& rng);
wsr::WsrInstance gen_wsr_instance(const ScenarioConfig& cfg, Rng& rng);

// M phases uniform in [0, 2*pi).
PhaseVector random_phases(Eigen::Index m, Rng& rng);

}  // namespace aogd::sim
