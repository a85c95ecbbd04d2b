// SPDX-License-Identifier: Apache-2.0

#include "aogd/numerics.hpp"

#include <cmath>
#include <random>

namespace aogd {

bool all_finite(const ComplexVector& v) { return v.allFinite(); }
bool all_finite(const ComplexMatrix& a) { return a.allFinite(); }
bool all_finite(const RealVector& v) { return v.allFinite(); }

double quadratic_form(const ComplexMatrix& a, const ComplexVector& v) {
    if (a.rows() != a.cols() || a.cols() != v.size()) {
        throw std::invalid_argument("quadratic_form: dimension mismatch");
    }
    return v.dot(a * v).real();  // dot() conjugates its left operand
}

namespace {

ComplexVector random_unit(Eigen::Index n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    ComplexVector u(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double re = normal(rng);
        const double im = normal(rng);
        u(i) = Complex(re, im);
    }
    return u / u.norm();
}

struct Attempt {
    bool converged = false;
    double residual = 0.0;
    EigenPair pair;
};

// Plain power steps on a working copy of A. When progress is slow the working
// matrix is squared (and rescaled), which shares A's eigenvectors but widens
// the relative spectral gap; the stopping test is always against A itself.
Attempt power_attempt(const ComplexMatrix& a, const PowerIterationOptions& opts,
                      std::uint64_t seed) {
    constexpr int kSquareEvery = 16;
    constexpr int kMaxSquarings = 64;

    const Eigen::Index n = a.rows();
    ComplexMatrix work = a;
    ComplexVector u = random_unit(n, seed);
    Attempt out;
    int squarings = 0;

    for (int it = 0; it < opts.max_iter; ++it) {
        const ComplexVector au = a * u;
        const double lambda = u.dot(au).real();
        out.residual = (au - lambda * u).norm();
        out.pair = {lambda, u};
        if (out.residual <= opts.tol * std::abs(lambda)) {
            out.converged = true;
            return out;
        }

        ComplexVector next = work * u;
        double nn = next.norm();
        if (nn == 0.0 || !std::isfinite(nn)) {
            return out;  // start vector in the null space; caller restarts
        }
        u = next / nn;

        if ((it + 1) % kSquareEvery == 0 && squarings < kMaxSquarings) {
            const double scale = work.norm();
            if (scale > 0.0) {
                work /= scale;
                ComplexMatrix sq = work * work;
                work = 0.5 * (sq + sq.adjoint());
                ++squarings;
            }
        }
    }
    return out;
}

}  // namespace

EigenPair power_iteration(const ComplexMatrix& a, const PowerIterationOptions& opts) {
    if (a.rows() != a.cols() || a.rows() == 0) {
        throw std::invalid_argument("power_iteration: matrix must be square and non-empty");
    }
    if (!(opts.tol > 0.0)) {
        throw std::invalid_argument("power_iteration: tol must be positive");
    }
    if (a.norm() == 0.0) {
        ComplexVector u = ComplexVector::Zero(a.rows());
        u(0) = 1.0;
        return {0.0, u};
    }

    Attempt first = power_attempt(a, opts, opts.seed);
    if (first.converged) {
        return first.pair;
    }
    Attempt second = power_attempt(a, opts, opts.seed ^ 0x9e3779b97f4a7c15ULL);
    if (second.converged) {
        return second.pair;
    }
    throw ConvergenceError("power_iteration: no convergence within max_iter", second.residual);
}

EigenPair power_iteration(const ComplexMatrix& a, double tol, int max_iter) {
    PowerIterationOptions opts;
    opts.tol = tol;
    opts.max_iter = max_iter;
    return power_iteration(a, opts);
}

namespace {

// t such that (I - t h h^H)^2 = (I + b h h^H)^{-1}.
double inverse_sqrt_coefficient(double b, double hn2) {
    if (hn2 == 0.0 || b == 0.0) {
        return 0.0;
    }
    // 1 - (1 + b|h|^2)^{-1/2}, computed without cancellation
    return -std::expm1(-0.5 * std::log1p(b * hn2)) / hn2;
}

}  // namespace

ComplexVector rank_one_generalized_eig(double a, const ComplexVector& g, double b,
                                       const ComplexVector& h) {
    if (g.size() != h.size() || g.size() == 0) {
        throw std::invalid_argument("rank_one_generalized_eig: dimension mismatch");
    }
    if (a < 0.0 || b < 0.0) {
        throw std::invalid_argument("rank_one_generalized_eig: a and b must be non-negative");
    }
    const Eigen::Index n = g.size();
    if (a == 0.0 && b == 0.0) {
        ComplexVector u = ComplexVector::Zero(n);
        u(0) = 1.0;
        return u;
    }

    const double hn2 = h.squaredNorm();
    const double t = inverse_sqrt_coefficient(b, hn2);
    auto apply_inv_sqrt = [&](const ComplexVector& x) -> ComplexVector {
        return x - t * h * h.dot(x);
    };

    // C = B^{-1/2} A B^{-1/2} = B^{-1} + a g~ g~^H
    const ComplexVector gt = apply_inv_sqrt(g);
    const double s = (hn2 == 0.0) ? 0.0 : b / (1.0 + b * hn2);
    ComplexMatrix c = ComplexMatrix::Identity(n, n);
    c.noalias() -= s * h * h.adjoint();
    c.noalias() += a * gt * gt.adjoint();

    const EigenPair top = power_iteration(c, 1e-13, 20000);
    ComplexVector u = apply_inv_sqrt(top.vector);
    return u / u.norm();
}

double generalized_rayleigh_quotient(double a, const ComplexVector& g, double b,
                                     const ComplexVector& h, const ComplexVector& u) {
    const double uu = u.squaredNorm();
    const double num = uu + a * std::norm(g.dot(u));
    const double den = uu + b * std::norm(h.dot(u));
    return num / den;
}

}  // namespace aogd
