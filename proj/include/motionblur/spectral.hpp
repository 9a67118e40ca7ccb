#pragma once

// Discrete Fourier transforms of Cartesian images and polar rings (FFTW backed).

#include <fftw3.h>

#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "motionblur/error.hpp"
#include "motionblur/image.hpp"

namespace motionblur {

using Complex = std::complex<double>;

namespace detail {

/// In-place unnormalised DFT along contiguous rows of length n (`count` rows),
/// sign -1 forward, +1 backward.
inline void fft_rows(std::span<Complex> data, int n, int count, int sign) {
    auto* p = reinterpret_cast<fftw_complex*>(data.data());
    fftw_plan plan = fftw_plan_many_dft(1, &n, count, p, nullptr, 1, n, p, nullptr, 1, n, sign,
                                        FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_execute(plan);
    fftw_destroy_plan(plan);
}

inline void fft_2d(std::span<Complex> data, int rows, int cols, int sign) {
    auto* p = reinterpret_cast<fftw_complex*>(data.data());
    fftw_plan plan = fftw_plan_dft_2d(rows, cols, p, p, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_execute(plan);
    fftw_destroy_plan(plan);
}

inline int signed_bin(int k, int n) { return k < (n + 1) / 2 ? k : k - n; }

}  // namespace detail

/// Spectrum of a CartesianImage: pitch^2 times the DFT with the origin at
/// pixel (0, 0) (periodic convention), so bins approximate the continuous
/// transform integral of the image. Layout matches the image (row-major).
class SpectralImage {
public:
    SpectralImage(int width, int height, double pitch)
        : width_(width), height_(height), pitch_(pitch),
          values_(static_cast<std::size_t>(width) * height) {}

    int width() const { return width_; }
    int height() const { return height_; }
    double pitch() const { return pitch_; }
    double domega1() const { return kTwoPi / (width_ * pitch_); }
    double domega2() const { return kTwoPi / (height_ * pitch_); }

    /// Angular frequency along x1 of column bin kx.
    double omega1(int kx) const { return detail::signed_bin(kx, width_) * domega1(); }
    /// Angular frequency along x2 of row bin ky (rows run towards -x2).
    double omega2(int ky) const { return -detail::signed_bin(ky, height_) * domega2(); }

    Complex& operator()(int ky, int kx) { return values_[static_cast<std::size_t>(ky) * width_ + kx]; }
    Complex operator()(int ky, int kx) const { return values_[static_cast<std::size_t>(ky) * width_ + kx]; }
    std::span<Complex> values() { return values_; }
    std::span<const Complex> values() const { return values_; }

    /// Largest |F(k) - conj(F(-k))| relative to max |F|.
    double hermitian_defect() const {
        double worst = 0.0, scale = 0.0;
        for (int ky = 0; ky < height_; ++ky) {
            for (int kx = 0; kx < width_; ++kx) {
                const Complex a = (*this)(ky, kx);
                const Complex b = (*this)((height_ - ky) % height_, (width_ - kx) % width_);
                worst = std::max(worst, std::abs(a - std::conj(b)));
                scale = std::max(scale, std::abs(a));
            }
        }
        return scale > 0.0 ? worst / scale : 0.0;
    }

private:
    int width_, height_;
    double pitch_;
    std::vector<Complex> values_;
};

inline SpectralImage fft2_forward(const CartesianImage& img) {
    SpectralImage spec(img.width(), img.height(), img.pitch());
    auto out = spec.values();
    const auto in = img.values();
    for (std::size_t k = 0; k < in.size(); ++k) out[k] = in[k];
    detail::fft_2d(out, img.height(), img.width(), FFTW_FORWARD);
    const double area = img.pitch() * img.pitch();
    for (auto& v : out) v *= area;
    return spec;
}

/// Inverse of fft2_forward. The spectrum must be Hermitian; an imaginary residue
/// above `imag_tol` times the output range throws NumericalError.
inline CartesianImage fft2_inverse(const SpectralImage& spec, double imag_tol = 1e-8) {
    std::vector<Complex> buf(spec.values().begin(), spec.values().end());
    detail::fft_2d(buf, spec.height(), spec.width(), FFTW_BACKWARD);
    const double norm = 1.0 / (static_cast<double>(buf.size()) * spec.pitch() * spec.pitch());
    std::vector<double> re(buf.size());
    double max_im = 0.0, lo = 0.0, hi = 0.0;
    for (std::size_t k = 0; k < buf.size(); ++k) {
        re[k] = buf[k].real() * norm;
        max_im = std::max(max_im, std::abs(buf[k].imag() * norm));
        lo = std::min(lo, re[k]);
        hi = std::max(hi, re[k]);
    }
    const double range = std::max(hi - lo, 1e-300);
    if (max_im > imag_tol * range)
        throw NumericalError("inverse 2D transform is not real: spectrum lost Hermitian symmetry");
    return CartesianImage(spec.width(), spec.height(), spec.pitch(), std::move(re));
}

/// Angular Fourier coefficients f_n = int f(phi) e^{-in phi} dphi of every ring of
/// a PolarImage, for n in [-n_phi/2, n_phi/2).
class CircularSpectra {
public:
    CircularSpectra(int n_r, int n_phi, double r_max)
        : n_r_(n_r), n_phi_(n_phi), r_max_(r_max), values_(static_cast<std::size_t>(n_r) * n_phi) {}

    int n_r() const { return n_r_; }
    int n_phi() const { return n_phi_; }
    double r_max() const { return r_max_; }
    int min_harmonic() const { return -n_phi_ / 2; }
    int max_harmonic() const { return n_phi_ / 2 - 1; }

    Complex& operator()(int kr, int n) { return values_[index(kr, n)]; }
    Complex operator()(int kr, int n) const { return values_[index(kr, n)]; }

    /// Ring kr in FFT bin order.
    std::span<Complex> ring(int kr) {
        return std::span<Complex>(values_).subspan(static_cast<std::size_t>(kr) * n_phi_, n_phi_);
    }
    std::span<Complex> values() { return values_; }
    std::span<const Complex> values() const { return values_; }

    /// Largest |f_{-n} - conj(f_n)| over all rings, relative to max |f_n|.
    double conjugate_defect() const {
        double worst = 0.0, scale = 0.0;
        for (int kr = 0; kr < n_r_; ++kr) {
            for (int n = 1; n < n_phi_ / 2; ++n) {
                worst = std::max(worst, std::abs((*this)(kr, -n) - std::conj((*this)(kr, n))));
                scale = std::max(scale, std::abs((*this)(kr, n)));
            }
            scale = std::max(scale, std::abs((*this)(kr, 0)));
        }
        return scale > 0.0 ? worst / scale : 0.0;
    }

private:
    std::size_t index(int kr, int n) const {
        const int bin = n < 0 ? n + n_phi_ : n;
        return static_cast<std::size_t>(kr) * n_phi_ + bin;
    }

    int n_r_, n_phi_;
    double r_max_;
    std::vector<Complex> values_;
};

inline CircularSpectra circular_forward(const PolarImage& img) {
    CircularSpectra spec(img.n_r(), img.n_phi(), img.r_max());
    auto out = spec.values();
    const auto in = img.values();
    for (std::size_t k = 0; k < in.size(); ++k) out[k] = in[k];
    detail::fft_rows(out, img.n_phi(), img.n_r(), FFTW_FORWARD);
    const double dphi = img.dphi();
    for (auto& v : out) v *= dphi;
    return spec;
}

/// f(phi) = (1/2pi) sum_n f_n e^{in phi}; throws NumericalError if the result is not real.
inline PolarImage circular_inverse(const CircularSpectra& spec, double imag_tol = 1e-8) {
    std::vector<Complex> buf(spec.values().begin(), spec.values().end());
    detail::fft_rows(buf, spec.n_phi(), spec.n_r(), FFTW_BACKWARD);
    PolarImage out(spec.n_r(), spec.n_phi(), spec.r_max());
    auto vals = out.values();
    const double norm = 1.0 / kTwoPi;
    double max_im = 0.0, lo = 0.0, hi = 0.0;
    for (std::size_t k = 0; k < buf.size(); ++k) {
        vals[k] = buf[k].real() * norm;
        max_im = std::max(max_im, std::abs(buf[k].imag() * norm));
        lo = std::min(lo, vals[k]);
        hi = std::max(hi, vals[k]);
    }
    if (max_im > imag_tol * std::max(hi - lo, 1e-300))
        throw NumericalError("inverse circular transform is not real: lost conjugate symmetry");
    return out;
}

}  // namespace motionblur
