// SPDX-License-Identifier: Apache-2.0

#include "aogd/phase.hpp"

#include <cmath>
#include <numbers>

namespace aogd {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap(double x) {
    double r = std::fmod(x, kTwoPi);
    if (r < 0.0) {
        r += kTwoPi;
    }
    return r >= kTwoPi ? 0.0 : r;
}
}  // namespace

PhaseVector wrap_phases(const PhaseVector& phases) {
    RealVector out(phases.size());
    for (Eigen::Index i = 0; i < phases.size(); ++i) {
        out(i) = wrap(phases.theta(i));
    }
    return PhaseVector(std::move(out));
}

UnitModulusVector UnitModulusVector::from_phases(const PhaseVector& phases) {
    ComplexVector v(phases.size());
    for (Eigen::Index i = 0; i < phases.size(); ++i) {
        const double t = phases.theta(i);
        v(i) = Complex(std::cos(t), -std::sin(t));
    }
    return UnitModulusVector(std::move(v));
}

UnitModulusVector UnitModulusVector::project(const ComplexVector& raw) {
    ComplexVector v(raw.size());
    for (Eigen::Index i = 0; i < raw.size(); ++i) {
        const double mag = std::abs(raw(i));
        v(i) = mag > 0.0 ? raw(i) / mag : Complex(1.0, 0.0);
    }
    return UnitModulusVector(std::move(v));
}

PhaseVector UnitModulusVector::angles() const {
    RealVector out(v_.size());
    for (Eigen::Index i = 0; i < v_.size(); ++i) {
        out(i) = wrap(-std::arg(v_(i)));
    }
    return PhaseVector(std::move(out));
}

UnitModulusVector UnitModulusVector::rotated(double phase) const {
    const Complex r(std::cos(phase), std::sin(phase));
    return UnitModulusVector(ComplexVector(v_ * r));
}

UnitModulusVector u_map(const PhaseVector& phases) { return UnitModulusVector::from_phases(phases); }

}  // namespace aogd
