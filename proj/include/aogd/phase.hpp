// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "aogd/numerics.hpp"

namespace aogd {

/// Real phase angles of the M reflecting elements (radians, unwrapped).
struct PhaseVector {
    RealVector theta;

    PhaseVector() = default;
    explicit PhaseVector(RealVector t) : theta(std::move(t)) {}

    static PhaseVector zeros(Eigen::Index m) { return PhaseVector(RealVector::Zero(m)); }
    Eigen::Index size() const noexcept { return theta.size(); }
};

// Phases reduced into [0, 2*pi).
PhaseVector wrap_phases(const PhaseVector& phases);

/// Unit-modulus vector v with v_k = exp(-j theta_k); the reflection matrix is
/// Phi = diag(conj(v)) = diag(exp(j theta_k)).
class UnitModulusVector {
public:
    UnitModulusVector() = default;

    static UnitModulusVector from_phases(const PhaseVector& phases);
    // Projects each entry onto the unit circle; zero entries map to 1.
    static UnitModulusVector project(const ComplexVector& raw);

    const ComplexVector& v() const noexcept { return v_; }
    ComplexVector phi_diag() const { return v_.conjugate(); }
    PhaseVector angles() const;  // wrapped into [0, 2*pi)
    Eigen::Index size() const noexcept { return v_.size(); }

    // Rotates every entry by the same phase.
    UnitModulusVector rotated(double phase) const;

private:
    explicit UnitModulusVector(ComplexVector v) : v_(std::move(v)) {}
    ComplexVector v_;
};

UnitModulusVector u_map(const PhaseVector& phases);

}  // namespace aogd
