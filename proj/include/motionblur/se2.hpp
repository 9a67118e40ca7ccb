#pragma once

// Harmonic analysis on SE(2): unitary representation matrix elements and the
// group Fourier transform of images (functions on SE(2) constant in theta).

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <iomanip>
#include <limits>
#include <ostream>
#include <vector>

#include "motionblur/bessel.hpp"
#include "motionblur/error.hpp"
#include "motionblur/image.hpp"
#include "motionblur/kernels.hpp"
#include "motionblur/spectral.hpp"

namespace motionblur {

/// i^k, exact.
inline Complex ipow(int k) {
    switch (((k % 4) + 4) % 4) {
        case 0: return {1.0, 0.0};
        case 1: return {0.0, 1.0};
        case 2: return {-1.0, 0.0};
        default: return {0.0, -1.0};
    }
}

inline double sign_pow(int k) { return (k % 2 == 0) ? 1.0 : -1.0; }

/// u_mn(g(a, phi, theta), p) given the Bessel value J_{n-m}(p a).
inline Complex se2_matrix_element_from_bessel(int m, int n, double phi, double theta, double bessel_n_minus_m) {
    const double angle = -(n * theta + (m - n) * phi);
    return ipow(n - m) * Complex(std::cos(angle), std::sin(angle)) * bessel_n_minus_m;
}

/// u_mn(g, p) = i^{n-m} e^{-i[n theta + (m-n) phi]} J_{n-m}(p a), with g in polar
/// form (a, phi, theta).
inline Complex se2_matrix_element(int m, int n, double a, double phi, double theta, double p) {
    require(a >= 0.0 && p >= 0.0, "se2_matrix_element: a and p must be >= 0");
    return se2_matrix_element_from_bessel(m, n, phi, theta, bessel_j(n - m, p * a));
}

/// Regularised deconvolution settings shared by the SE(2) pipelines.
struct DeconvConfig {
    double epsilon = 1e-3;
    int band_limit = 16;      // B: harmonics n in [-B, B]
    int radial_samples = 64;  // M: p_k = k p_max / M, k = 1..M
    double p_max = kPi;

    void validate() const {
        require(epsilon > 0.0, "epsilon must be > 0");
        require(band_limit >= 1, "band limit B must be >= 1");
        require(radial_samples >= 2, "radial sample count M must be >= 2");
        require(p_max > 0.0, "p_max must be > 0");
    }

    double p(int k) const { return (k + 1) * p_max / radial_samples; }

    /// B = n_phi/4, M = 2 max(w, h), p_max = pi / pitch for the default polar grid.
    static DeconvConfig for_image(const CartesianImage& img, double epsilon) {
        const auto grid = default_polar_grid(img);
        return {epsilon, grid.n_phi / 4, 2 * std::max(img.width(), img.height()), kPi / img.pitch()};
    }
};

/// Band-limited SE(2) Fourier matrices f_mn(p), m, n in [-B, B], at radial samples p_k.
class SE2Spectrum {
public:
    SE2Spectrum(int band_limit, std::vector<double> p)
        : band_limit_(band_limit), p_(std::move(p)),
          mats_(p_.size(), Eigen::MatrixXcd::Zero(2 * band_limit + 1, 2 * band_limit + 1)) {}

    int band_limit() const { return band_limit_; }
    std::size_t radial_samples() const { return p_.size(); }
    const std::vector<double>& p() const { return p_; }
    double p(std::size_t k) const { return p_[k]; }

    Complex& operator()(std::size_t k, int m, int n) { return mats_[k](m + band_limit_, n + band_limit_); }
    Complex operator()(std::size_t k, int m, int n) const { return mats_[k](m + band_limit_, n + band_limit_); }

    Eigen::MatrixXcd& matrix(std::size_t k) { return mats_[k]; }
    const Eigen::MatrixXcd& matrix(std::size_t k) const { return mats_[k]; }

    /// True when every row m != 0 is exactly zero.
    bool row_only() const {
        for (const auto& mat : mats_)
            for (int m = -band_limit_; m <= band_limit_; ++m)
                if (m != 0 && !mat.row(m + band_limit_).isZero(0.0)) return false;
        return true;
    }

    double max_abs() const {
        double v = 0.0;
        for (const auto& mat : mats_) v = std::max(v, mat.cwiseAbs().maxCoeff());
        return v;
    }

    SE2Spectrum& operator*=(Complex s) {
        for (auto& mat : mats_) mat *= s;
        return *this;
    }
    SE2Spectrum& operator+=(const SE2Spectrum& o) {
        require(o.band_limit_ == band_limit_ && o.p_ == p_, "SE2Spectrum grid mismatch");
        for (std::size_t k = 0; k < mats_.size(); ++k) mats_[k] += o.mats_[k];
        return *this;
    }

private:
    int band_limit_;
    std::vector<double> p_;
    std::vector<Eigen::MatrixXcd> mats_;
};

inline std::vector<double> radial_frequencies(const DeconvConfig& cfg) {
    std::vector<double> p(static_cast<std::size_t>(cfg.radial_samples));
    for (int k = 0; k < cfg.radial_samples; ++k) p[k] = cfg.p(k);
    return p;
}

/// Diagonal spectrum of the product error density.
inline SE2Spectrum kernel_spectrum(const MotionParams& params, int band_limit, std::vector<double> p) {
    SE2Spectrum spec(band_limit, std::move(p));
    for (std::size_t k = 0; k < spec.radial_samples(); ++k)
        for (int m = -band_limit; m <= band_limit; ++m) spec(k, m, m) = kernel_ft_se2(spec.p(k), m, params);
    return spec;
}

/// Group Fourier transform of an image sampled on a polar grid:
///   rho_0n(p) = 2 pi i^n int int rho(a, phi) e^{in phi} J_{-n}(p a) a da dphi,
/// an angular DFT per ring followed by midpoint quadrature in a. Rows m != 0 are zero.
inline SE2Spectrum se2_fourier_polar(const PolarImage& polar, const DeconvConfig& cfg) {
    cfg.validate();
    const int B = cfg.band_limit;
    require(B < polar.n_phi() / 2, "band limit must be below n_phi/2");
    const auto circ = circular_forward(polar);
    SE2Spectrum spec(B, radial_frequencies(cfg));
    const double dr = polar.dr();
    std::vector<Complex> acc(2 * static_cast<std::size_t>(B) + 1);
    for (std::size_t k = 0; k < spec.radial_samples(); ++k) {
        std::fill(acc.begin(), acc.end(), Complex(0.0, 0.0));
        const double p = spec.p(k);
        for (int kr = 0; kr < polar.n_r(); ++kr) {
            const double a = polar.radius(kr);
            const auto J = bessel_j_all(B, p * a);
            const double w = a * dr;
            for (int n = -B; n <= B; ++n) {
                acc[n + B] += circ(kr, -n) * (bessel_signed(J, -n) * w);
            }
        }
        for (int n = -B; n <= B; ++n) spec(k, 0, n) = kTwoPi * ipow(n) * acc[n + B];
    }
    return spec;
}

inline SE2Spectrum se2_fourier_image(const CartesianImage& img, const DeconvConfig& cfg, const PolarGrid& grid) {
    return se2_fourier_polar(cartesian_to_polar(img, grid), cfg);
}

inline SE2Spectrum se2_fourier_image(const CartesianImage& img, const DeconvConfig& cfg) {
    return se2_fourier_image(img, cfg, default_polar_grid(img));
}

/// Inverse transform of an m = 0 row spectrum onto a polar grid:
///   rho(a, phi) = (1/4pi^2) sum_n e^{-in phi} int rho_0n(p) i^{-n} J_{-n}(p a) p dp,
/// trapezoid in p over [0, p_max] (the p = 0 node carries zero weight).
inline PolarImage se2_fourier_inverse_polar(const SE2Spectrum& spec, const PolarGrid& grid) {
    require(spec.row_only(), "inverse image transform needs a spectrum with only the m = 0 row");
    const int B = spec.band_limit();
    require(B < grid.n_phi / 2, "band limit must be below n_phi/2");
    const std::size_t M = spec.radial_samples();
    // trapezoid weights on p_k = (k+1) dp
    std::vector<double> w(M);
    for (std::size_t k = 0; k < M; ++k) {
        const double dp = spec.p(k) - (k == 0 ? 0.0 : spec.p(k - 1));
        const double dn = k + 1 < M ? spec.p(k + 1) - spec.p(k) : 0.0;
        w[k] = 0.5 * (dp + dn) * spec.p(k);
    }
    CircularSpectra circ(grid.n_r, grid.n_phi, grid.r_max);
    PolarImage shape(grid.n_r, grid.n_phi, grid.r_max);
    std::vector<Complex> acc(2 * static_cast<std::size_t>(B) + 1);
    for (int kr = 0; kr < grid.n_r; ++kr) {
        const double a = shape.radius(kr);
        std::fill(acc.begin(), acc.end(), Complex(0.0, 0.0));
        for (std::size_t k = 0; k < M; ++k) {
            const auto J = bessel_j_all(B, spec.p(k) * a);
            for (int n = -B; n <= B; ++n) acc[n + B] += spec(k, 0, n) * (bessel_signed(J, -n) * w[k]);
        }
        // v_n(a) = acc_n i^{-n} / 4pi^2; circular coefficient f_n = 2 pi v_{-n}
        for (int n = -B; n <= B; ++n) circ(kr, n) = acc[-n + B] * ipow(n) * (kTwoPi / (4.0 * kPi * kPi));
    }
    return circular_inverse(circ);
}

inline CartesianImage se2_fourier_inverse_image(const SE2Spectrum& spec, int width, int height, double pitch,
                                                const PolarGrid& grid) {
    return polar_to_cartesian(se2_fourier_inverse_polar(spec, grid), width, height, pitch);
}

/// Text dump: `SE2SPEC B M p_max`, then per radial sample the m = 0 row as
/// 2B+1 real/imag pairs.
inline void write_se2_spectrum(const SE2Spectrum& spec, std::ostream& out) {
    out << std::setprecision(std::numeric_limits<double>::max_digits10);
    out << "SE2SPEC " << spec.band_limit() << ' ' << spec.radial_samples() << ' '
        << (spec.radial_samples() ? spec.p().back() : 0.0) << '\n';
    const int B = spec.band_limit();
    for (std::size_t k = 0; k < spec.radial_samples(); ++k) {
        for (int n = -B; n <= B; ++n) {
            const Complex v = spec(k, 0, n);
            out << (n == -B ? "" : " ") << v.real() << ' ' << v.imag();
        }
        out << '\n';
    }
}

}  // namespace motionblur
