// SPDX-License-Identifier: Apache-2.0
//
// Dense complex linear algebra used by the phase-shift solvers. Sizes are
// small (M up to a few hundred, N_t up to ~16), so everything is dense.

#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace aogd {

using Complex = std::complex<double>;
using ComplexVector = Eigen::VectorXcd;
using ComplexMatrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;

inline constexpr Complex kJ{0.0, 1.0};

/// Thrown when a numeric routine fails to reach its tolerance.
class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, double residual)
        : std::runtime_error(what), residual_(residual) {}
    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

/// Thrown on NaN/Inf in an objective or gradient.
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

bool all_finite(const ComplexVector& v);
bool all_finite(const ComplexMatrix& a);
bool all_finite(const RealVector& v);

// Re{v^H A v} for Hermitian A. Throws std::invalid_argument on size mismatch.
double quadratic_form(const ComplexMatrix& a, const ComplexVector& v);

struct EigenPair {
    double value = 0.0;
    ComplexVector vector;  // unit norm
};

struct PowerIterationOptions {
    double tol = 1e-12;
    int max_iter = 10000;
    std::uint64_t seed = 0x5eedULL;
};

// Dominant eigenpair of a Hermitian PSD matrix. Stops once
// ||A u - lambda u|| <= tol * lambda. The start vector is seeded random; on
// failure one restart with a derived seed is attempted before throwing
// ConvergenceError carrying the last residual.
EigenPair power_iteration(const ComplexMatrix& a, const PowerIterationOptions& opts = {});
EigenPair power_iteration(const ComplexMatrix& a, double tol, int max_iter);

// argmax_u (u^H A u)/(u^H B u) over unit u with A = I + a g g^H and
// B = I + b h h^H. Uses B^{-1/2} = I - t h h^H (Sherman-Morrison style) and
// power iteration on the symmetrized pencil B^{-1/2} A B^{-1/2}.
ComplexVector rank_one_generalized_eig(double a, const ComplexVector& g, double b,
                                       const ComplexVector& h);

// (u^H A u)/(u^H B u) for the rank-one pencil above.
double generalized_rayleigh_quotient(double a, const ComplexVector& g, double b,
                                     const ComplexVector& h, const ComplexVector& u);

}  // namespace aogd
