#pragma once

// Smooth synthetic test objects on a dark background, confined to the disk of
// radius ~0.35 * min(width, height) around the image centre.

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>

#include "motionblur/error.hpp"
#include "motionblur/image.hpp"

namespace motionblur {

enum class Phantom { Blobs, Ellipses, RingSpokes };

inline std::string_view phantom_name(Phantom p) {
    switch (p) {
        case Phantom::Blobs: return "blobs";
        case Phantom::Ellipses: return "ellipses";
        case Phantom::RingSpokes: return "ring-spokes";
    }
    return "";
}

inline std::optional<Phantom> parse_phantom(std::string_view name) {
    for (auto p : {Phantom::Blobs, Phantom::Ellipses, Phantom::RingSpokes})
        if (phantom_name(p) == name) return p;
    return std::nullopt;
}

namespace detail {

inline double smooth_step_down(double q, double width) { return 0.5 * (1.0 - std::tanh((q - 1.0) / width)); }

// value at (x1, x2) given in units of s = min(width, height) / 64 pixels
inline double phantom_value(Phantom kind, double x, double y) {
    switch (kind) {
        case Phantom::Blobs: {
            struct B { double cx, cy, s, amp; };
            static constexpr B blobs[] = {{-8.0, 6.0, 4.0, 1.0},
                                          {9.0, 3.0, 3.0, 0.8},
                                          {1.0, -10.0, 5.0, 0.6},
                                          {-4.0, -3.0, 2.5, 0.5}};
            double v = 0.0;
            for (const auto& b : blobs) {
                const double dx = x - b.cx, dy = y - b.cy;
                v += b.amp * std::exp(-(dx * dx + dy * dy) / (2.0 * b.s * b.s));
            }
            return v;
        }
        case Phantom::Ellipses: {
            auto ellipse = [&](double cx, double cy, double ax, double ay, double rot) {
                const double c = std::cos(rot), s = std::sin(rot);
                const double u = ((x - cx) * c + (y - cy) * s) / ax;
                const double w = (-(x - cx) * s + (y - cy) * c) / ay;
                return smooth_step_down(std::sqrt(u * u + w * w), 0.15);
            };
            return 0.6 * ellipse(0.0, 0.0, 18.0, 12.0, 0.4) + 0.35 * ellipse(-5.0, 3.0, 6.0, 3.5, -0.8) -
                   0.25 * ellipse(6.0, -3.0, 4.0, 4.0, 0.0);
        }
        case Phantom::RingSpokes: {
            const double r = std::hypot(x, y);
            const double phi = std::atan2(y, x);
            const double ring = std::exp(-(r - 14.0) * (r - 14.0) / (2.0 * 3.0 * 3.0));
            const double centre = 0.6 * std::exp(-r * r / (2.0 * 3.0 * 3.0));
            return ring * (0.55 + 0.45 * std::cos(5.0 * phi)) + centre;
        }
    }
    return 0.0;
}

}  // namespace detail

/// Renders a phantom; values lie roughly in [0, 1].
inline CartesianImage make_phantom(Phantom kind, int width = 64, int height = 64, double pitch = 1.0) {
    CartesianImage img(width, height, pitch);
    const double s = std::min(width, height) * pitch / 64.0;
    for (int i = 0; i < height; ++i)
        for (int j = 0; j < width; ++j) img(i, j) = detail::phantom_value(kind, img.x1(j) / s, img.x2(i) / s);
    return img;
}

}  // namespace motionblur
