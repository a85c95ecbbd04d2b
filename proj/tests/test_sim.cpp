// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <set>

#include "aogd/baselines.hpp"
#include "aogd/sim.hpp"

namespace {

using namespace aogd;
using namespace aogd::sim;

TEST(PathLoss, Values) {
    EXPECT_NEAR(path_loss(1.0, 4.0, -30.0), 1e-3, 1e-18);
    const double d = 250.0;
    EXPECT_LE(std::abs(path_loss(d, 4.0, -30.0) - 1e-3 * std::pow(d, -4.0)),
              1e-12 * 1e-3 * std::pow(d, -4.0));
    EXPECT_NEAR(path_loss(80.0, 4.0, -30.0) / path_loss(160.0, 4.0, -30.0), 16.0, 1e-12);
    EXPECT_THROW(path_loss(0.0, 4.0, -30.0), std::invalid_argument);
}

TEST(Units, DbmRoundTrip) {
    EXPECT_NEAR(dbm_to_watts(30.0), 1.0, 1e-15);
    EXPECT_NEAR(dbm_to_watts(5.0), 0.0031622776601683794, 1e-17);
    for (double x : {-241.0, -80.0, 0.0, 5.0, 10.0, 43.0}) {
        EXPECT_NEAR(watts_to_dbm(dbm_to_watts(x)), x, 1e-12);
    }
}

TEST(Rayleigh, VarianceAndDeterminism) {
    Rng a(42), b(42);
    const ComplexMatrix x = gen_rayleigh(100000, 1, a, 2.0);
    const ComplexMatrix y = gen_rayleigh(100000, 1, b, 2.0);
    EXPECT_EQ(x, y);
    const double n = 100000.0;
    const double total = x.squaredNorm() / n;
    const double re = x.real().squaredNorm() / n;
    const double im = x.imag().squaredNorm() / n;
    EXPECT_NEAR(total, 2.0, 0.02 * 2.0);
    EXPECT_NEAR(re, 1.0, 0.02);
    EXPECT_NEAR(im, 1.0, 0.02);
    EXPECT_NEAR(x.mean().real(), 0.0, 0.02);
}

TEST(Instances, UnitFadingNorms) {
    ScenarioConfig cfg = secrecy_convergence_scenario();
    cfg.unit_fading = true;
    cfg.m = 16;
    Rng rng(1);
    const auto inst = gen_secrecy_instance(cfg, rng);
    const double pl_tr = path_loss(cfg.r_tr, cfg.alpha, cfg.c0_db);
    const double pl_rl = path_loss(cfg.r_rl, cfg.alpha, cfg.c0_db);
    const double pl_re = path_loss(cfg.r_re, cfg.alpha, cfg.c0_db);
    EXPECT_NEAR(inst.G.norm(), std::sqrt(pl_tr * 16 * cfg.n_t), 1e-12 * std::sqrt(pl_tr));
    EXPECT_NEAR(inst.h_l.norm(), std::sqrt(pl_rl * 16), 1e-12 * std::sqrt(pl_rl));
    EXPECT_NEAR(inst.h_e.norm(), std::sqrt(pl_re * 16), 1e-12 * std::sqrt(pl_re));
    EXPECT_NEAR(inst.power, dbm_to_watts(cfg.p_dbm), 1e-15);
    EXPECT_NEAR(inst.sigma2_l, dbm_to_watts(cfg.sigma2_l_dbm), 1e-12 * inst.sigma2_l);
}

TEST(Instances, FixedSeedIsReproducible) {
    const ScenarioConfig cfg = secrecy_sweep_scenario();
    Rng a(7), b(7), c(8);
    const auto x = gen_secrecy_instance(cfg, a);
    const auto y = gen_secrecy_instance(cfg, b);
    const auto z = gen_secrecy_instance(cfg, c);
    EXPECT_EQ(x.G, y.G);
    EXPECT_EQ(x.h_l, y.h_l);
    EXPECT_EQ(x.h_e, y.h_e);
    EXPECT_NE(x.G, z.G);
}

TEST(Instances, SmallerSurfaceIsAPrefix) {
    ScenarioConfig small = secrecy_sweep_scenario();
    ScenarioConfig large = small;
    small.m = 20;
    large.m = 40;
    Rng a(3), b(3);
    const auto s = gen_secrecy_instance(small, a);
    const auto l = gen_secrecy_instance(large, b);
    EXPECT_EQ(s.G, l.G.topRows(20));
    EXPECT_EQ(s.h_l, l.h_l.head(20));
    EXPECT_EQ(s.h_e, l.h_e.head(20));

    ScenarioConfig ws = wsr_scenario();
    ScenarioConfig wl = ws;
    ws.m = 10;
    wl.m = 40;
    Rng c(5), d(5);
    const auto u = gen_wsr_instance(ws, c);
    const auto v = gen_wsr_instance(wl, d);
    EXPECT_EQ(u.G, v.G.topRows(10));
    for (Eigen::Index k = 0; k < u.k(); ++k) {
        EXPECT_EQ(u.h_d[k], v.h_d[k]);
        EXPECT_EQ(u.h_r[k], v.h_r[k].head(10));
    }
}

TEST(Instances, WsrGeometry) {
    const ScenarioConfig cfg = wsr_scenario();
    EXPECT_EQ(cfg.n_t, 4);
    EXPECT_EQ(cfg.k_users, 4);
    EXPECT_EQ(cfg.m, 20);
    Rng rng(9);
    const auto inst = gen_wsr_instance(cfg, rng);
    EXPECT_EQ(inst.k(), 4);
    EXPECT_EQ(inst.m(), 20);
    EXPECT_EQ(inst.n_t(), 4);
    EXPECT_NEAR(inst.power, 0.01, 1e-15);
    EXPECT_EQ(inst.omega, RealVector::Ones(4));
}

TEST(Seeds, ChildSeedsAreDistinct) {
    std::set<std::uint64_t> seen;
    for (std::uint64_t s = 0; s < 4; ++s) {
        for (std::uint64_t i = 0; i < 250; ++i) {
            for (std::uint64_t st = 0; st < 3; ++st) seen.insert(child_seed(s, i, st));
        }
    }
    EXPECT_EQ(seen.size(), 3000u);
    EXPECT_EQ(child_seed(1, 2, 0), child_seed(1, 2, 0));
}

TEST(Phases, UniformRange) {
    Rng rng(2);
    const PhaseVector th = random_phases(1000, rng);
    EXPECT_GE(th.theta.minCoeff(), 0.0);
    EXPECT_LT(th.theta.maxCoeff(), 2.0 * std::numbers::pi);
    EXPECT_NEAR(th.theta.mean(), std::numbers::pi, 0.2);
}

TEST(Config, TextRoundTrip) {
    ScenarioConfig cfg = wsr_scenario();
    cfg.p_dbm = 7.25;
    cfg.unit_fading = true;
    cfg.rng_seed = 123456789012345ULL;
    cfg.sigma2_l_dbm = -240.123456789;
    const ScenarioConfig back = ScenarioConfig::parse(cfg.to_text());
    EXPECT_EQ(back.to_text(), cfg.to_text());
    EXPECT_EQ(back.sigma2_l_dbm, cfg.sigma2_l_dbm);
    EXPECT_EQ(back.rng_seed, cfg.rng_seed);
    EXPECT_TRUE(back.unit_fading);
}

TEST(Config, OverlayCommentsAndErrors) {
    const ScenarioConfig base = secrecy_sweep_scenario();
    const ScenarioConfig c = ScenarioConfig::parse("# comment\n\n  m = 33  # trailing\np_dbm=1.5\n", base);
    EXPECT_EQ(c.m, 33);
    EXPECT_EQ(c.p_dbm, 1.5);
    EXPECT_EQ(c.n_t, base.n_t);
    EXPECT_EQ(c.r_re, base.r_re);
    EXPECT_THROW(ScenarioConfig::parse("bogus = 1\n"), std::invalid_argument);
    EXPECT_THROW(ScenarioConfig::parse("m = twelve\n"), std::invalid_argument);
    EXPECT_THROW(ScenarioConfig::parse("m 12\n"), std::invalid_argument);
    EXPECT_THROW(ScenarioConfig::parse("m = 0\n"), std::invalid_argument);
    EXPECT_THROW(ScenarioConfig::load("/nonexistent/dir/cfg.txt"), std::invalid_argument);
}

TEST(Scenario, LargerSurfaceRaisesMeanSecrecyRate) {
    // Small ensemble; the full 200-realization check lives in the acceptance binary.
    ScenarioConfig cfg = secrecy_sweep_scenario();
    const SolverOptions opts = secrecy::default_options();
    double mean20 = 0.0, mean60 = 0.0;
    const int n = 10;
    for (int r = 0; r < n; ++r) {
        for (int m : {20, 60}) {
            cfg.m = m;
            Rng rng(child_seed(1, r));
            const auto inst = gen_secrecy_instance(cfg, rng);
            Rng prng(child_seed(1, r, 1));
            const RunResult res = run_secrecy(inst, random_phases(m, prng), opts, Method::aogd);
            (m == 20 ? mean20 : mean60) += res.metric_bits / n;
        }
    }
    EXPECT_GT(mean20, 0.0);
    EXPECT_GT(mean60, mean20);
}

}  // namespace
