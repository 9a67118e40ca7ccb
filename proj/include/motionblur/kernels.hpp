#pragma once

// Motion-error densities on the line, plane, circle and SE(2) (heat kernels
// with variance 2t per axis), their closed-form Fourier transforms, and the
// samplers used by the Monte-Carlo blur simulator.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <utility>

#include "motionblur/error.hpp"

namespace motionblur {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Number of wrapped-Gaussian harmonics needed so that exp(-K^2 t) < tol.
inline int default_series_cutoff(double t, double tol = 1e-14) {
    if (t <= 0.0) return 1;
    const double k = std::ceil(std::sqrt(-std::log(tol) / t));
    return std::max(1, static_cast<int>(k));
}

/// Diffusion times of the translational (t1, length^2) and rotational
/// (t2, rad^2) error distributions.
struct MotionParams {
    double t1 = 0.0;
    double t2 = 0.0;
    int series_cutoff = 1;

    static MotionParams make(double t1, double t2) {
        return MotionParams{t1, t2, default_series_cutoff(t2)};
    }

    /// Throws DomainError unless t1, t2 >= 0, the cutoff is positive and the
    /// dropped wrapped-Gaussian tail exp(-K^2 t2) is below `tail_tol`.
    void validate(double tail_tol = 1e-12) const {
        require(std::isfinite(t1) && t1 >= 0.0, "t1 must be finite and >= 0");
        require(std::isfinite(t2) && t2 >= 0.0, "t2 must be finite and >= 0");
        require(series_cutoff >= 1, "series_cutoff must be >= 1");
        if (t2 > 0.0) {
            const double k = series_cutoff;
            require(std::exp(-k * k * t2) < tail_tol,
                    "series_cutoff too small: dropped wrapped-Gaussian tail exceeds tolerance");
        }
    }

    bool translational() const { return t1 > 0.0; }
    bool rotational() const { return t2 > 0.0; }
};

/// Wraps an angle into [-pi, pi).
inline double wrap_angle(double theta) {
    double w = std::fmod(theta + kPi, kTwoPi);
    if (w < 0.0) w += kTwoPi;
    w -= kPi;
    return w >= kPi ? w - kTwoPi : w;
}

inline double gauss1d(double x, double t) {
    require(t > 0.0, "gauss1d: diffusion time must be positive");
    return std::exp(-x * x / (4.0 * t)) / (2.0 * std::sqrt(kPi * t));
}

inline double gauss2d(double x1, double x2, double t) {
    return gauss1d(x1, t) * gauss1d(x2, t);
}

/// Heat kernel on the circle as the Fourier series (1/2pi) sum_k e^{-k^2 t} e^{ik theta},
/// truncated at |k| <= K. The +k/-k pairs are summed as cosines, so the result is real.
inline double wrapped_gauss(double theta, double t, int cutoff) {
    require(t > 0.0, "wrapped_gauss: diffusion time must be positive");
    require(cutoff >= 1, "wrapped_gauss: cutoff must be >= 1");
    double sum = 0.0;
    // smallest terms first
    for (int k = cutoff; k >= 1; --k) {
        const double kk = k;
        sum += std::exp(-kk * kk * t) * std::cos(kk * theta);
    }
    return (1.0 + 2.0 * sum) / kTwoPi;
}

inline double wrapped_gauss(double theta, double t) {
    return wrapped_gauss(theta, t, default_series_cutoff(t));
}

/// Product density f1(x; t1) f2(theta; t2) on SE(2) in polar translation
/// coordinates; independent of phi.
inline double se2_kernel_density(double r, double phi, double theta, const MotionParams& params) {
    require(r >= 0.0, "se2_kernel_density: r must be >= 0");
    (void)phi;
    return gauss2d(r, 0.0, params.t1) * wrapped_gauss(theta, params.t2, params.series_cutoff);
}

inline double kernel_ft_translational(double w1, double w2, double t) {
    require(t >= 0.0, "kernel_ft_translational: t must be >= 0");
    return std::exp(-(w1 * w1 + w2 * w2) * t);
}

inline double kernel_ft_rotational(int n, double t) {
    require(t >= 0.0, "kernel_ft_rotational: t must be >= 0");
    const double nn = n;
    return std::exp(-nn * nn * t);
}

/// Diagonal entry f_mm(p) of the SE(2) transform of the product density.
inline double kernel_ft_se2(double p, int m, const MotionParams& params) {
    require(p >= 0.0, "kernel_ft_se2: p must be >= 0");
    const double mm = m;
    return std::exp(-p * p * params.t1) * std::exp(-mm * mm * params.t2);
}

/// Full matrix element f_mn(p); zero off the diagonal.
inline double kernel_ft_se2(double p, int m, int n, const MotionParams& params) {
    return m == n ? kernel_ft_se2(p, m, params) : 0.0;
}

/// Draws a translation with each component ~ N(0, 2 t1).
template <class Rng>
std::pair<double, double> sample_translation(const MotionParams& params, Rng& rng) {
    require(params.t1 > 0.0, "sample_translation: t1 must be positive");
    std::normal_distribution<double> normal(0.0, std::sqrt(2.0 * params.t1));
    const double dx = normal(rng);
    const double dy = normal(rng);
    return {dx, dy};
}

/// Draws theta ~ N(0, 2 t2) and wraps it into [-pi, pi).
template <class Rng>
double sample_rotation(const MotionParams& params, Rng& rng) {
    require(params.t2 > 0.0, "sample_rotation: t2 must be positive");
    std::normal_distribution<double> normal(0.0, std::sqrt(2.0 * params.t2));
    return wrap_angle(normal(rng));
}

}  // namespace motionblur
