#pragma once

// Wiener-type inversion of the three blur models in their natural Fourier
// domains: planar DFT, per-ring Fourier series, and the SE(2) transform.

#include <cmath>

#include "motionblur/error.hpp"
#include "motionblur/image.hpp"
#include "motionblur/kernels.hpp"
#include "motionblur/se2.hpp"
#include "motionblur/spectral.hpp"

namespace motionblur {

/// conj(f) / (eps + |f|^2) for a real transfer value f.
inline double wiener_gain(double f, double epsilon) { return f / (epsilon + f * f); }

inline CartesianImage deconv_translational(const CartesianImage& blurred, double t1, double epsilon) {
    require(t1 >= 0.0, "deconv_translational: t1 must be >= 0");
    require(epsilon > 0.0, "deconv_translational: epsilon must be > 0");
    auto spec = fft2_forward(blurred);
    for (int ky = 0; ky < spec.height(); ++ky) {
        const double w2 = spec.omega2(ky);
        for (int kx = 0; kx < spec.width(); ++kx)
            spec(ky, kx) *= wiener_gain(kernel_ft_translational(spec.omega1(kx), w2, t1), epsilon);
    }
    return fft2_inverse(spec);
}

inline PolarImage deconv_rotational(const PolarImage& blurred, double t2, double epsilon) {
    require(t2 >= 0.0, "deconv_rotational: t2 must be >= 0");
    require(epsilon > 0.0, "deconv_rotational: epsilon must be > 0");
    auto spec = circular_forward(blurred);
    for (int kr = 0; kr < spec.n_r(); ++kr)
        for (int n = spec.min_harmonic(); n <= spec.max_harmonic(); ++n)
            spec(kr, n) *= wiener_gain(kernel_ft_rotational(n, t2), epsilon);
    return circular_inverse(spec);
}

/// Rotational deconvolution of a Cartesian image through a polar round trip.
inline CartesianImage deconv_rotational(const CartesianImage& blurred, double t2, double epsilon,
                                        const PolarGrid& grid) {
    const auto polar = cartesian_to_polar(blurred, grid);
    return polar_to_cartesian(deconv_rotational(polar, t2, epsilon), blurred.width(), blurred.height(),
                              blurred.pitch());
}

inline CartesianImage deconv_rotational(const CartesianImage& blurred, double t2, double epsilon) {
    return deconv_rotational(blurred, t2, epsilon, default_polar_grid(blurred));
}

/// Scales the m = 0 row of `spec` by the Wiener gain of the diagonal kernel
/// spectrum e^{-p^2 t1} e^{-n^2 t2}.
inline void apply_se2_wiener(SE2Spectrum& spec, const MotionParams& params, double epsilon) {
    const int B = spec.band_limit();
    for (std::size_t k = 0; k < spec.radial_samples(); ++k)
        for (int n = -B; n <= B; ++n) spec(k, 0, n) *= wiener_gain(kernel_ft_se2(spec.p(k), n, params), epsilon);
}

inline CartesianImage deconv_se2(const CartesianImage& blurred, const MotionParams& params, const DeconvConfig& cfg,
                                 const PolarGrid& grid) {
    params.validate();
    cfg.validate();
    auto spec = se2_fourier_image(blurred, cfg, grid);
    apply_se2_wiener(spec, params, cfg.epsilon);
    return se2_fourier_inverse_image(spec, blurred.width(), blurred.height(), blurred.pitch(), grid);
}

inline CartesianImage deconv_se2(const CartesianImage& blurred, const MotionParams& params, const DeconvConfig& cfg) {
    return deconv_se2(blurred, params, cfg, default_polar_grid(blurred));
}

}  // namespace motionblur
