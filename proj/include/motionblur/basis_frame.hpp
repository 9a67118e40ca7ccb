#pragma once

#include <algorithm>
#include <cmath>

#include "motionblur/error.hpp"
#include "motionblur/image.hpp"

namespace motionblur {

/// Maps physical image coordinates to dimensionless basis coordinates:
/// u = x / unit. Diffusion times convert as t_basis = t / unit^2.
struct BasisFrame {
    double unit = 1.0;

    /// Places the image half-width at u = c sqrt(2N + 1), inside the effective
    /// support of order-N Hermite / Laguerre-Gauss functions.
    static BasisFrame for_image(const CartesianImage& img, int order, double c = 0.9) {
        require(order >= 0, "expansion order must be >= 0");
        const double half_width = 0.5 * std::max(img.width(), img.height()) * img.pitch();
        return {half_width / (c * std::sqrt(2.0 * order + 1.0))};
    }

    double to_basis_time(double t) const { return t / (unit * unit); }
};

/// Domain dilation of a Gaussian-blurred expansion: a = sqrt(2t + 1), t in basis units.
inline double blur_scale(double t_basis) { return std::sqrt(2.0 * t_basis + 1.0); }

template <class Expansion>
struct Fitted {
    Expansion expansion;
    double residual_rms;  // RMS of (image - rendered fit) over the pixel grid
};

}  // namespace motionblur
