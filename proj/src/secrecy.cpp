// SPDX-License-Identifier: Apache-2.0

#include "aogd/secrecy.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace aogd::secrecy {

void SecrecyInstance::validate() const {
    const Eigen::Index mm = G.rows();
    if (mm == 0 || G.cols() == 0) throw std::invalid_argument("secrecy: empty channel matrix");
    if (h_l.size() != mm || h_e.size() != mm) {
        throw std::invalid_argument("secrecy: channel dimensions disagree");
    }
    if (!(sigma2_l > 0.0) || !(sigma2_e > 0.0) || !std::isfinite(sigma2_l) ||
        !std::isfinite(sigma2_e)) {
        throw std::invalid_argument("secrecy: noise variances must be positive and finite");
    }
    if (!(power >= 0.0) || !std::isfinite(power)) {
        throw std::invalid_argument("secrecy: power must be non-negative and finite");
    }
    if (!all_finite(G) || !all_finite(h_l) || !all_finite(h_e)) {
        throw std::invalid_argument("secrecy: non-finite channel entries");
    }
}

ComplexMatrix SecrecyQuadratics::Y_l() const {
    const Eigen::Index n = z_l.size();
    return scale * ComplexMatrix::Identity(n, n) + z_l * z_l.adjoint();
}

ComplexMatrix SecrecyQuadratics::Y_e() const {
    const Eigen::Index n = z_e.size();
    return scale * ComplexMatrix::Identity(n, n) + z_e * z_e.adjoint();
}

ComplexVector optimal_beamformer(const SecrecyInstance& inst, const UnitModulusVector& v) {
    if (v.size() != inst.m()) throw std::invalid_argument("secrecy: phase vector size mismatch");
    if (inst.power == 0.0) {
        return ComplexVector::Zero(inst.n_t());
    }
    // h_i^H Phi G w = g_i^H w with g_i = G^H Phi^H h_i and Phi^H = diag(v)
    const ComplexVector g_l = inst.G.adjoint() * v.v().cwiseProduct(inst.h_l);
    const ComplexVector g_e = inst.G.adjoint() * v.v().cwiseProduct(inst.h_e);
    const ComplexVector u = rank_one_generalized_eig(inst.power / inst.sigma2_l, g_l,
                                                     inst.power / inst.sigma2_e, g_e);
    return std::sqrt(inst.power) * u;
}

SecrecyQuadratics build_quadratics(const SecrecyInstance& inst, const ComplexVector& w) {
    if (w.size() != inst.n_t()) throw std::invalid_argument("secrecy: beamformer size mismatch");
    const ComplexVector gw = inst.G * w;
    SecrecyQuadratics q;
    q.scale = 1.0 / static_cast<double>(inst.m());
    q.z_l = inst.h_l.conjugate().cwiseProduct(gw) / std::sqrt(inst.sigma2_l);
    q.z_e = inst.h_e.conjugate().cwiseProduct(gw) / std::sqrt(inst.sigma2_e);
    return q;
}

double raw_objective(const SecrecyInstance& inst, const ComplexVector& w,
                     const UnitModulusVector& v) {
    const ComplexVector reflected = v.phi_diag().asDiagonal() * (inst.G * w);
    const double legit = std::norm(inst.h_l.dot(reflected));
    const double eve = std::norm(inst.h_e.dot(reflected));
    return (1.0 + legit / inst.sigma2_l) / (1.0 + eve / inst.sigma2_e);
}

double ratio_objective(const SecrecyQuadratics& q, const UnitModulusVector& v) {
    const double base = q.scale * v.v().squaredNorm();
    const double num = base + std::norm(q.z_l.dot(v.v()));
    const double den = base + std::norm(q.z_e.dot(v.v()));
    return num / den;
}

namespace {

struct QuadParts {
    ComplexVector yl_v;
    ComplexVector ye_v;
    double num;
    double den;
};

QuadParts quad_parts(const SecrecyQuadratics& q, const ComplexVector& v) {
    const Complex sl = q.z_l.dot(v);
    const Complex se = q.z_e.dot(v);
    const double base = q.scale * v.squaredNorm();
    return {q.scale * v + q.z_l * sl, q.scale * v + q.z_e * se, base + std::norm(sl),
            base + std::norm(se)};
}

}  // namespace

RealVector gradient_theta(const SecrecyQuadratics& q, const PhaseVector& theta) {
    const ComplexVector v = u_map(theta).v();
    const QuadParts p = quad_parts(q, v);
    const double inv_den = 1.0 / p.den;
    const double ratio_over_den = p.num * inv_den * inv_den;
    RealVector g(v.size());
    for (Eigen::Index k = 0; k < v.size(); ++k) {
        // dv_k/dtheta_k = -j v_k
        const Complex dv = -kJ * v(k);
        g(k) = 2.0 * (std::conj(p.yl_v(k)) * dv).real() * inv_den -
               2.0 * (std::conj(p.ye_v(k)) * dv).real() * ratio_over_den;
    }
    return g;
}

ComplexVector wirtinger_gradient(const SecrecyQuadratics& q, const UnitModulusVector& v) {
    const QuadParts p = quad_parts(q, v.v());
    return 2.0 * (p.yl_v * p.den - p.ye_v * p.num) / (p.den * p.den);
}

double secrecy_rate(double objective_value) {
    return std::max(std::log2(objective_value), 0.0);
}

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// (a0 + a1 cos t + a2 sin t) / (b0 + b1 cos t + b2 sin t)
struct TrigRatio {
    std::array<double, 3> a;
    std::array<double, 3> b;

    double operator()(double t) const {
        const double c = std::cos(t);
        const double s = std::sin(t);
        return (a[0] + a[1] * c + a[2] * s) / (b[0] + b[1] * c + b[2] * s);
    }
};

// Stationary points solve A sin t + B cos t + C = 0. Falls back to a shrinking
// 3-point search when the equation is numerically degenerate.
double maximize_trig_ratio(const TrigRatio& f, double current) {
    const auto& [a0, a1, a2] = f.a;
    const auto& [b0, b1, b2] = f.b;
    const double A = a0 * b1 - a1 * b0;
    const double B = a2 * b0 - a0 * b2;
    const double C = a2 * b1 - a1 * b2;
    const double scale = std::max({std::abs(a0 * b0), std::abs(a1 * b0), std::abs(a2 * b0),
                                   std::abs(a0 * b1), std::abs(a0 * b2), 1e-300});

    double best_t = current;
    double best_f = f(current);
    auto consider = [&](double t) {
        const double val = f(t);
        if (val > best_f) {
            best_f = val;
            best_t = t;
        }
    };

    const double radius = std::hypot(A, B);
    if (radius > 1e-13 * scale) {
        // A sin t + B cos t = radius * sin(t + psi)
        const double psi = std::atan2(B, A);
        const double s = std::clamp(-C / radius, -1.0, 1.0);
        const double base = std::asin(s);
        consider(base - psi);
        consider(std::numbers::pi - base - psi);
        return best_t;
    }

    double h = kTwoPi / 3.0;
    for (int k = 0; k < 3; ++k) consider(current + k * h);
    for (int round = 0; round < 50; ++round) {
        h *= 0.5;
        const double centre = best_t;
        consider(centre - h);
        consider(centre + h);
    }
    return best_t;
}

}  // namespace

UnitModulusVector elementwise_bcd_sweep(const SecrecyQuadratics& q, const UnitModulusVector& v,
                                        std::vector<double>* objective_trace) {
    ComplexVector x = v.v();
    const Eigen::Index m = x.size();
    // Diagonal part contributes scale * |v|^2 = scale * M, constant over the sweep.
    const double base = q.scale * x.squaredNorm();
    Complex sl = q.z_l.dot(x);
    Complex se = q.z_e.dot(x);

    for (Eigen::Index k = 0; k < m; ++k) {
        const Complex cl = std::conj(q.z_l(k));
        const Complex ce = std::conj(q.z_e(k));
        const Complex rl = sl - cl * x(k);
        const Complex re = se - ce * x(k);
        // |r + c u|^2 with u = exp(-j t): |r|^2 + |c|^2 + 2 Re{conj(r) c} cos t + 2 Im{conj(r) c} sin t
        const Complex kl = std::conj(rl) * cl;
        const Complex ke = std::conj(re) * ce;
        const TrigRatio f{{base + std::norm(rl) + std::norm(cl), 2.0 * kl.real(), 2.0 * kl.imag()},
                          {base + std::norm(re) + std::norm(ce), 2.0 * ke.real(), 2.0 * ke.imag()}};
        const double current = -std::arg(x(k));
        const double t = maximize_trig_ratio(f, current);
        if (t != current) {
            x(k) = Complex(std::cos(t), -std::sin(t));
        }
        sl = rl + cl * x(k);
        se = re + ce * x(k);
        if (objective_trace != nullptr) {
            objective_trace->push_back((base + std::norm(sl)) / (base + std::norm(se)));
        }
    }
    return UnitModulusVector::project(x);
}

SecrecyProblem::SecrecyProblem(SecrecyInstance inst) : inst_(std::move(inst)) { inst_.validate(); }

SecrecyProblem::Block SecrecyProblem::initial_block(const PhaseVector&) const {
    ComplexVector w = ComplexVector::Zero(inst_.n_t());
    return {w, build_quadratics(inst_, w)};
}

SecrecyProblem::Block SecrecyProblem::update_block(const PhaseVector& theta, const Block&) const {
    ComplexVector w = optimal_beamformer(inst_, u_map(theta));
    SecrecyQuadratics quads = build_quadratics(inst_, w);
    return {std::move(w), std::move(quads)};
}

double SecrecyProblem::evaluate(const Block& q, const PhaseVector& theta) const {
    return -ratio_objective(q.quads, u_map(theta));
}

RealVector SecrecyProblem::gradient_theta(const Block& q, const PhaseVector& theta) const {
    return -secrecy::gradient_theta(q.quads, theta);
}

SolverOptions default_options() {
    SolverOptions o;
    o.gamma0 = 1e-3;
    o.beta = 0.5;
    o.c = 5e-5;
    o.xi = 1e-6;
    o.max_iterations = 5000;
    return o;
}

}  // namespace aogd::secrecy
