#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "motionblur/error.hpp"
#include "motionblur/kernels.hpp"

namespace motionblur {

/// Sum with Neumaier compensation, in index order.
class CompensatedSum {
public:
    void add(double v) {
        const double t = sum_ + v;
        if (std::abs(sum_) >= std::abs(v))
            comp_ += (sum_ - t) + v;
        else
            comp_ += (v - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

/// Real-valued image on a rectangular grid. Pixel (i, j) = (row, column) sits at
/// the physical point x1 = (j - (w-1)/2) pitch, x2 = ((h-1)/2 - i) pitch: origin
/// at the centre, x2 pointing up.
class CartesianImage {
public:
    CartesianImage() = default;

    CartesianImage(int width, int height, double pitch = 1.0, double fill = 0.0)
        : width_(width), height_(height), pitch_(pitch) {
        require(width >= 1 && height >= 1, "image dimensions must be >= 1");
        require(std::isfinite(pitch) && pitch > 0.0, "image pitch must be positive");
        values_.assign(static_cast<std::size_t>(width) * height, fill);
    }

    CartesianImage(int width, int height, double pitch, std::vector<double> values)
        : CartesianImage(width, height, pitch) {
        require(values.size() == values_.size(), "image value count must equal width*height");
        values_ = std::move(values);
        require(std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); }),
                "image values must be finite");
    }

    int width() const { return width_; }
    int height() const { return height_; }
    double pitch() const { return pitch_; }
    std::size_t size() const { return values_.size(); }

    double& operator()(int i, int j) { return values_[static_cast<std::size_t>(i) * width_ + j]; }
    double operator()(int i, int j) const { return values_[static_cast<std::size_t>(i) * width_ + j]; }

    std::span<double> values() { return values_; }
    std::span<const double> values() const { return values_; }

    double center_col() const { return 0.5 * (width_ - 1); }
    double center_row() const { return 0.5 * (height_ - 1); }
    double x1(int j) const { return (j - center_col()) * pitch_; }
    double x2(int i) const { return (center_row() - i) * pitch_; }

    bool same_grid(const CartesianImage& o) const {
        return width_ == o.width_ && height_ == o.height_;
    }

    /// Bilinear sample at fractional (row, col); neighbours outside the grid read as 0.
    double sample_pixel(double row, double col) const {
        const double fi = std::floor(row);
        const double fj = std::floor(col);
        if (fi < -1.0 || fj < -1.0 || fi > height_ - 1.0 || fj > width_ - 1.0) return 0.0;
        const int i0 = static_cast<int>(fi);
        const int j0 = static_cast<int>(fj);
        const double ty = row - fi;
        const double tx = col - fj;
        auto pix = [&](int i, int j) {
            return (i < 0 || j < 0 || i >= height_ || j >= width_) ? 0.0 : (*this)(i, j);
        };
        const double top = pix(i0, j0) * (1.0 - tx) + pix(i0, j0 + 1) * tx;
        const double bottom = pix(i0 + 1, j0) * (1.0 - tx) + pix(i0 + 1, j0 + 1) * tx;
        return top * (1.0 - ty) + bottom * ty;
    }

    /// Bilinear sample at a physical position.
    double sample(double x1, double x2) const {
        return sample_pixel(center_row() - x2 / pitch_, x1 / pitch_ + center_col());
    }

    double min() const { return *std::min_element(values_.begin(), values_.end()); }
    double max() const { return *std::max_element(values_.begin(), values_.end()); }
    double range() const { return max() - min(); }

    double sum() const {
        CompensatedSum s;
        for (double v : values_) s.add(v);
        return s.value();
    }

    double mean() const { return sum() / static_cast<double>(values_.size()); }

    double stddev() const {
        const double m = mean();
        CompensatedSum s;
        for (double v : values_) s.add((v - m) * (v - m));
        return std::sqrt(s.value() / static_cast<double>(values_.size()));
    }

    CartesianImage& operator+=(const CartesianImage& o) {
        require(same_grid(o), "image dimension mismatch");
        for (std::size_t k = 0; k < values_.size(); ++k) values_[k] += o.values_[k];
        return *this;
    }

    CartesianImage& operator-=(const CartesianImage& o) {
        require(same_grid(o), "image dimension mismatch");
        for (std::size_t k = 0; k < values_.size(); ++k) values_[k] -= o.values_[k];
        return *this;
    }

    CartesianImage& operator*=(double s) {
        for (double& v : values_) v *= s;
        return *this;
    }

private:
    int width_ = 0;
    int height_ = 0;
    double pitch_ = 1.0;
    std::vector<double> values_;
};

inline CartesianImage operator+(CartesianImage a, const CartesianImage& b) { return a += b; }
inline CartesianImage operator-(CartesianImage a, const CartesianImage& b) { return a -= b; }
inline CartesianImage operator*(double s, CartesianImage a) { return a *= s; }

/// Real-valued samples on a polar grid: ring k_r sits at radius (k_r + 1/2) r_max/n_r,
/// spoke k_phi at angle 2 pi k_phi / n_phi.
class PolarImage {
public:
    PolarImage() = default;

    PolarImage(int n_r, int n_phi, double r_max, double fill = 0.0)
        : n_r_(n_r), n_phi_(n_phi), r_max_(r_max) {
        require(n_r >= 1, "polar grid needs n_r >= 1");
        require(n_phi >= 4 && n_phi % 2 == 0, "polar grid needs an even n_phi >= 4");
        require(std::isfinite(r_max) && r_max > 0.0, "polar grid needs r_max > 0");
        values_.assign(static_cast<std::size_t>(n_r) * n_phi, fill);
    }

    int n_r() const { return n_r_; }
    int n_phi() const { return n_phi_; }
    double r_max() const { return r_max_; }
    double dr() const { return r_max_ / n_r_; }
    double dphi() const { return kTwoPi / n_phi_; }
    double radius(int kr) const { return (kr + 0.5) * dr(); }
    double angle(int kphi) const { return kTwoPi * kphi / n_phi_; }

    double& operator()(int kr, int kphi) { return values_[static_cast<std::size_t>(kr) * n_phi_ + kphi]; }
    double operator()(int kr, int kphi) const { return values_[static_cast<std::size_t>(kr) * n_phi_ + kphi]; }

    std::span<double> ring(int kr) { return std::span<double>(values_).subspan(static_cast<std::size_t>(kr) * n_phi_, n_phi_); }
    std::span<const double> ring(int kr) const {
        return std::span<const double>(values_).subspan(static_cast<std::size_t>(kr) * n_phi_, n_phi_);
    }

    std::span<double> values() { return values_; }
    std::span<const double> values() const { return values_; }

    bool same_grid(const PolarImage& o) const {
        return n_r_ == o.n_r_ && n_phi_ == o.n_phi_ && r_max_ == o.r_max_;
    }

    /// Bilinear sample in (r, phi), periodic in phi. Inside the first ring the value
    /// blends towards the ring-0 mean at r = 0; between the last ring and r_max the
    /// last ring is held; beyond r_max the result is 0.
    double sample(double r, double phi) const { return sample(r, phi, centre_value()); }

    /// Value assigned to r = 0: the mean of the innermost ring.
    double centre_value() const {
        CompensatedSum c;
        for (double v : ring(0)) c.add(v);
        return c.value() / n_phi_;
    }

    double sample(double r, double phi, double centre) const {
        if (r > r_max_) return 0.0;
        double q = std::fmod(phi, kTwoPi);
        if (q < 0.0) q += kTwoPi;
        q /= dphi();
        const double fq = std::floor(q);
        const double tq = q - fq;
        const int k0 = static_cast<int>(fq) % n_phi_;
        const int k1 = (k0 + 1) % n_phi_;
        auto on_ring = [&](int kr) { return (*this)(kr, k0) * (1.0 - tq) + (*this)(kr, k1) * tq; };

        const double s = r / dr() - 0.5;
        if (s <= 0.0) {
            const double w = 2.0 * (s + 0.5);
            return centre * (1.0 - w) + on_ring(0) * w;
        }
        if (s >= n_r_ - 1) return on_ring(n_r_ - 1);
        const double fs = std::floor(s);
        const int r0 = static_cast<int>(fs);
        const double ts = s - fs;
        return on_ring(r0) * (1.0 - ts) + on_ring(r0 + 1) * ts;
    }

    PolarImage& operator*=(double s) {
        for (double& v : values_) v *= s;
        return *this;
    }

private:
    int n_r_ = 0;
    int n_phi_ = 0;
    double r_max_ = 1.0;
    std::vector<double> values_;
};

/// Rigid motion x -> R(theta) x + (dx, dy); theta kept in [-pi, pi).
struct RigidMotion {
    double dx = 0.0;
    double dy = 0.0;
    double theta = 0.0;

    RigidMotion() = default;
    RigidMotion(double dx_, double dy_, double theta_) : dx(dx_), dy(dy_), theta(wrap_angle(theta_)) {}

    static RigidMotion identity() { return {}; }

    RigidMotion inverse() const {
        // g^-1 x = R(-theta)(x - a)
        const double c = std::cos(theta), s = std::sin(theta);
        return RigidMotion(-(c * dx + s * dy), -(-s * dx + c * dy), -theta);
    }

    /// (this o other) x = this(other(x)).
    RigidMotion compose(const RigidMotion& other) const {
        const double c = std::cos(theta), s = std::sin(theta);
        return RigidMotion(c * other.dx - s * other.dy + dx, s * other.dx + c * other.dy + dy,
                           theta + other.theta);
    }
};

/// Returns the image x -> img(g^-1 x) with bilinear resampling and zero fill.
inline CartesianImage transform_image(const CartesianImage& img, const RigidMotion& g) {
    CartesianImage out(img.width(), img.height(), img.pitch());
    const double c = std::cos(g.theta);
    const double s = std::sin(g.theta);
    // Work in pixel units so the identity maps every pixel onto itself exactly.
    const double ax = g.dx / img.pitch();
    const double ay = g.dy / img.pitch();
    const double cx = img.center_col();
    const double cy = img.center_row();
    for (int i = 0; i < img.height(); ++i) {
        for (int j = 0; j < img.width(); ++j) {
            const double u = (j - cx) - ax;
            const double v = (cy - i) - ay;
            const double su = c * u + s * v;
            const double sv = -s * u + c * v;
            out(i, j) = img.sample_pixel(cy - sv, su + cx);
        }
    }
    return out;
}

struct PolarGrid {
    int n_r;
    int n_phi;
    double r_max;
};

/// Oversampled polar grid covering every pixel centre of `img`.
inline PolarGrid default_polar_grid(const CartesianImage& img) {
    const int n = std::max(img.width(), img.height());
    const double r_max = 0.5 * std::hypot(img.width(), img.height()) * img.pitch();
    return {n, 4 * n, r_max};
}

inline PolarImage cartesian_to_polar(const CartesianImage& img, int n_r, int n_phi, double r_max) {
    PolarImage out(n_r, n_phi, r_max);
    for (int kp = 0; kp < n_phi; ++kp) {
        const double phi = out.angle(kp);
        const double c = std::cos(phi), s = std::sin(phi);
        for (int kr = 0; kr < n_r; ++kr) {
            const double r = out.radius(kr);
            out(kr, kp) = img.sample(r * c, r * s);
        }
    }
    return out;
}

inline PolarImage cartesian_to_polar(const CartesianImage& img, const PolarGrid& grid) {
    return cartesian_to_polar(img, grid.n_r, grid.n_phi, grid.r_max);
}

inline CartesianImage polar_to_cartesian(const PolarImage& img, int width, int height, double pitch) {
    CartesianImage out(width, height, pitch);
    const double centre = img.centre_value();
    for (int i = 0; i < height; ++i) {
        for (int j = 0; j < width; ++j) {
            const double x1 = out.x1(j), x2 = out.x2(i);
            out(i, j) = img.sample(std::hypot(x1, x2), std::atan2(x2, x1), centre);
        }
    }
    return out;
}

inline double rmse(const CartesianImage& a, const CartesianImage& b) {
    require(a.same_grid(b), "rmse: image dimension mismatch");
    CompensatedSum s;
    const auto av = a.values();
    const auto bv = b.values();
    for (std::size_t k = 0; k < av.size(); ++k) {
        const double d = av[k] - bv[k];
        s.add(d * d);
    }
    return std::sqrt(s.value() / static_cast<double>(av.size()));
}

/// Peak signal-to-noise ratio in dB; +inf for identical images.
inline double psnr(const CartesianImage& a, const CartesianImage& b, double peak) {
    return 20.0 * std::log10(peak / rmse(a, b));
}

}  // namespace motionblur
