// SPDX-License-Identifier: Apache-2.0

#include "aogd/manifold.hpp"

#include <algorithm>
#include <stdexcept>

namespace aogd::manifold {

TangentVector riemannian_gradient(const ComplexVector& euclidean_grad_v,
                                  const UnitModulusVector& v) {
    if (euclidean_grad_v.size() != v.size()) {
        throw std::invalid_argument("riemannian_gradient: size mismatch");
    }
    const ComplexVector& x = v.v();
    ComplexVector d(x.size());
    for (Eigen::Index k = 0; k < x.size(); ++k) {
        const double radial = (euclidean_grad_v(k) * std::conj(x(k))).real();
        d(k) = euclidean_grad_v(k) - radial * x(k);
    }
    return {d};
}

UnitModulusVector retract(const UnitModulusVector& v, const TangentVector& d, double step) {
    if (step < 0.0) throw std::invalid_argument("retract: negative step");
    if (d.d.size() != v.size()) throw std::invalid_argument("retract: size mismatch");
    for (int attempt = 0; attempt < 64; ++attempt) {
        const ComplexVector moved = v.v() + step * d.d;
        if (moved.cwiseAbs().minCoeff() >= 1e-14) {
            return UnitModulusVector::project(moved);
        }
        step *= 0.5;
    }
    return v;
}

double tangency_residual(const TangentVector& d, const UnitModulusVector& v) {
    double worst = 0.0;
    for (Eigen::Index k = 0; k < v.size(); ++k) {
        worst = std::max(worst, std::abs((d.d(k) * std::conj(v.v()(k))).real()));
    }
    return worst;
}

}  // namespace aogd::manifold
