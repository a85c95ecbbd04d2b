// SPDX-License-Identifier: Apache-2.0
//
// Random fixtures shared by the unit tests.

#pragma once

#include <cmath>
#include <numbers>
#include <random>

#include "aogd/secrecy.hpp"
#include "aogd/wsr.hpp"

namespace aogd::testkit {

using Rng = std::mt19937_64;

inline Complex cn(Rng& rng) {
    std::normal_distribution<double> n(0.0, std::sqrt(0.5));
    const double re = n(rng);
    const double im = n(rng);
    return {re, im};
}

inline ComplexVector random_vector(Eigen::Index n, Rng& rng) {
    ComplexVector v(n);
    for (Eigen::Index i = 0; i < n; ++i) v(i) = cn(rng);
    return v;
}

inline ComplexMatrix random_matrix(Eigen::Index r, Eigen::Index c, Rng& rng) {
    ComplexMatrix a(r, c);
    for (Eigen::Index i = 0; i < r; ++i) {
        for (Eigen::Index j = 0; j < c; ++j) a(i, j) = cn(rng);
    }
    return a;
}

inline ComplexMatrix random_hermitian(Eigen::Index n, Rng& rng) {
    const ComplexMatrix a = random_matrix(n, n, rng);
    return 0.5 * (a + a.adjoint());
}

inline PhaseVector random_theta(Eigen::Index m, Rng& rng) {
    std::uniform_real_distribution<double> u(0.0, 2.0 * std::numbers::pi);
    RealVector t(m);
    for (Eigen::Index i = 0; i < m; ++i) t(i) = u(rng);
    return PhaseVector(t);
}

inline UnitModulusVector random_unit_modulus(Eigen::Index m, Rng& rng) {
    return u_map(random_theta(m, rng));
}

// Unit-scale secrecy instance: CN(0, 1) channels, unit noise.
inline secrecy::SecrecyInstance random_secrecy(Eigen::Index n_t, Eigen::Index m, Rng& rng,
                                               double power = 1.0) {
    secrecy::SecrecyInstance inst;
    inst.G = random_matrix(m, n_t, rng);
    inst.h_l = random_vector(m, rng);
    inst.h_e = random_vector(m, rng);
    inst.sigma2_l = 1.0;
    inst.sigma2_e = 1.0;
    inst.power = power;
    return inst;
}

inline wsr::WsrInstance random_wsr(Eigen::Index n_t, Eigen::Index k, Eigen::Index m, Rng& rng,
                                   double power = 1.0, double sigma2 = 0.1) {
    std::vector<ComplexVector> h_d;
    std::vector<ComplexVector> h_r;
    for (Eigen::Index i = 0; i < k; ++i) {
        h_d.push_back(random_vector(n_t, rng));
        h_r.push_back(random_vector(m, rng));
    }
    std::uniform_real_distribution<double> w(0.5, 1.5);
    RealVector omega(k);
    for (Eigen::Index i = 0; i < k; ++i) omega(i) = w(rng);
    return wsr::WsrInstance::make(std::move(h_d), std::move(h_r), random_matrix(m, n_t, rng),
                                  omega, sigma2, power);
}

inline wsr::FpState random_state(const wsr::WsrInstance& inst, Rng& rng) {
    std::uniform_real_distribution<double> u(0.0, 3.0);
    wsr::FpState s;
    s.p = RealVector(inst.k());
    for (Eigen::Index i = 0; i < inst.k(); ++i) s.p(i) = u(rng);
    s.q = random_vector(inst.k(), rng);
    s.W = random_matrix(inst.n_t(), inst.k(), rng);
    s.W *= std::sqrt(inst.power) / s.W.norm();
    return s;
}

inline double rel_err(double a, double b) {
    return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300});
}

}  // namespace aogd::testkit
