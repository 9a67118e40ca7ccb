#pragma once

// Blurred-image synthesis: Monte-Carlo averaging of randomly moved copies, and
// exact convolution with the translational / rotational / SE(2) kernels.

#include <cmath>
#include <cstdint>
#include <random>
#include <tuple>
#include <vector>

#include "motionblur/error.hpp"
#include "motionblur/image.hpp"
#include "motionblur/kernels.hpp"
#include "motionblur/spectral.hpp"

namespace motionblur {

/// Random stream for Monte-Carlo sample `index`; independent of how many other
/// samples are drawn, so serial and parallel runs agree.
inline std::mt19937_64 sample_stream(std::uint64_t seed, std::uint64_t index) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
    return std::mt19937_64(seq);
}

/// Draws one rigid motion from the product error distribution. A zero diffusion
/// time disables that component.
template <class Rng>
RigidMotion sample_motion(const MotionParams& params, Rng& rng) {
    double dx = 0.0, dy = 0.0, theta = 0.0;
    if (params.translational()) std::tie(dx, dy) = sample_translation(params, rng);
    if (params.rotational()) theta = sample_rotation(params, rng);
    return RigidMotion(dx, dy, theta);
}

/// Average of `n_samples` copies of `img`, each moved by an independent draw
/// from the error distribution.
inline CartesianImage monte_carlo_blur(const CartesianImage& img, const MotionParams& params, int n_samples,
                                       std::uint64_t seed) {
    require(n_samples >= 1, "monte_carlo_blur: n_samples must be >= 1");
    params.validate();
    require(params.translational() || params.rotational(), "monte_carlo_blur: t1 or t2 must be positive");
    CartesianImage acc(img.width(), img.height(), img.pitch());
    for (int s = 0; s < n_samples; ++s) {
        auto rng = sample_stream(seed, static_cast<std::uint64_t>(s));
        acc += transform_image(img, sample_motion(params, rng));
    }
    acc *= 1.0 / n_samples;
    return acc;
}

/// Sampled 1D heat kernel on the pixel lattice, truncated where it drops below
/// `rel_cutoff` of its peak and normalised to unit sum.
inline std::vector<double> translational_kernel_1d(double t1, double pitch, double rel_cutoff = 1e-12) {
    require(t1 > 0.0, "translational kernel: t1 must be positive");
    const double radius = std::sqrt(-4.0 * t1 * std::log(rel_cutoff));
    const int half = static_cast<int>(std::floor(radius / pitch));
    std::vector<double> k(2 * half + 1);
    for (int d = -half; d <= half; ++d) k[d + half] = gauss1d(d * pitch, t1);
    CompensatedSum s;
    for (double v : k) s.add(v);
    const double total = s.value();
    for (double& v : k) v /= total;
    return k;
}

/// Convolution with the sampled planar heat kernel (separable, zero padding).
inline CartesianImage exact_blur_translational(const CartesianImage& img, double t1, double rel_cutoff = 1e-12) {
    const auto k = translational_kernel_1d(t1, img.pitch(), rel_cutoff);
    const int half = static_cast<int>(k.size() / 2);
    const int w = img.width(), h = img.height();
    CartesianImage rows(w, h, img.pitch());
    for (int i = 0; i < h; ++i) {
        for (int j = 0; j < w; ++j) {
            double s = 0.0;
            for (int d = -half; d <= half; ++d) {
                const int jj = j - d;
                if (jj >= 0 && jj < w) s += k[d + half] * img(i, jj);
            }
            rows(i, j) = s;
        }
    }
    CartesianImage out(w, h, img.pitch());
    for (int i = 0; i < h; ++i) {
        for (int j = 0; j < w; ++j) {
            double s = 0.0;
            for (int d = -half; d <= half; ++d) {
                const int ii = i - d;
                if (ii >= 0 && ii < h) s += k[d + half] * rows(ii, j);
            }
            out(i, j) = s;
        }
    }
    return out;
}

/// Ring-by-ring circular convolution with the wrapped Gaussian sampled on the
/// angular grid; the sampled kernel is normalised to unit mass.
inline PolarImage exact_blur_rotational(const PolarImage& img, double t2, int cutoff) {
    require(t2 > 0.0, "exact_blur_rotational: t2 must be positive");
    const int n = img.n_phi();
    std::vector<Complex> kernel(n);
    CompensatedSum mass;
    for (int k = 0; k < n; ++k) {
        kernel[k] = wrapped_gauss(img.angle(k), t2, cutoff);
        mass.add(kernel[k].real());
    }
    // DFT of kernel / sum(kernel) is the per-harmonic gain (unit gain at n = 0)
    detail::fft_rows(kernel, n, 1, FFTW_FORWARD);
    const double norm = 1.0 / mass.value();
    auto spec = circular_forward(img);
    for (int kr = 0; kr < img.n_r(); ++kr) {
        auto ring = spec.ring(kr);
        for (int b = 0; b < n; ++b) ring[b] *= kernel[b] * norm;
    }
    return circular_inverse(spec);
}

inline PolarImage exact_blur_rotational(const PolarImage& img, double t2) {
    return exact_blur_rotational(img, t2, default_series_cutoff(t2));
}

/// Rotational blur of a Cartesian image through a polar round trip on `grid`.
inline CartesianImage exact_blur_rotational(const CartesianImage& img, double t2, int cutoff, const PolarGrid& grid) {
    const auto polar = cartesian_to_polar(img, grid);
    return polar_to_cartesian(exact_blur_rotational(polar, t2, cutoff), img.width(), img.height(), img.pitch());
}

enum class BlurOrder { TranslateThenRotate, RotateThenTranslate };

/// SE(2) blur as the composition of the translational and rotational blurs.
inline CartesianImage exact_blur_se2(const CartesianImage& img, const MotionParams& params, BlurOrder order) {
    params.validate();
    const auto grid = default_polar_grid(img);
    auto translate = [&](const CartesianImage& x) {
        return params.translational() ? exact_blur_translational(x, params.t1) : x;
    };
    auto rotate = [&](const CartesianImage& x) {
        return params.rotational() ? exact_blur_rotational(x, params.t2, params.series_cutoff, grid) : x;
    };
    return order == BlurOrder::TranslateThenRotate ? rotate(translate(img)) : translate(rotate(img));
}

/// Adds i.i.d. N(0, sigma^2) noise to every pixel, in row-major order.
inline CartesianImage add_noise(const CartesianImage& img, double sigma, std::uint64_t seed) {
    require(sigma >= 0.0, "add_noise: sigma must be >= 0");
    CartesianImage out = img;
    if (sigma == 0.0) return out;
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, sigma);
    for (double& v : out.values()) v += normal(rng);
    return out;
}

}  // namespace motionblur
