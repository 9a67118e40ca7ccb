#pragma once

// Orthonormal Hermite functions, truncated 2D Hermite expansions of images, and
// translational deconvolution in the Hermite coefficient domain.

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "motionblur/basis_frame.hpp"
#include "motionblur/error.hpp"
#include "motionblur/image.hpp"
#include "motionblur/se2.hpp"

namespace motionblur {

inline constexpr int kHermiteMaxOrder = 128;

/// h_0(x) .. h_N(x), h_n = H_n(x) e^{-x^2/2} / sqrt(2^n n! sqrt(pi)), by the
/// recurrence on the normalised functions.
inline std::vector<double> hermite_h_all(int N, double x) {
    require(N >= 0 && N <= kHermiteMaxOrder, "hermite order out of range");
    std::vector<double> h(static_cast<std::size_t>(N) + 1);
    h[0] = std::pow(kPi, -0.25) * std::exp(-0.5 * x * x);
    if (N >= 1) h[1] = std::sqrt(2.0) * x * h[0];
    for (int n = 1; n < N; ++n)
        h[n + 1] = x * std::sqrt(2.0 / (n + 1)) * h[n] - std::sqrt(static_cast<double>(n) / (n + 1)) * h[n - 1];
    return h;
}

inline double hermite_h(int n, double x) { return hermite_h_all(n, x)[n]; }

/// Physicists' Hermite polynomial H_n(x).
inline double hermite_poly(int n, double x) {
    require(n >= 0, "hermite order must be >= 0");
    double prev = 1.0, cur = 2.0 * x;
    if (n == 0) return prev;
    for (int k = 1; k < n; ++k) {
        const double next = 2.0 * x * cur - 2.0 * k * prev;
        prev = cur;
        cur = next;
    }
    return cur;
}

/// Right-hand side of the eigen-relation int h_n(x) e^{-i w x} dx = sqrt(2pi) (-i)^n h_n(w).
inline Complex hermite_eigen_check(int n, double omega) {
    return std::sqrt(kTwoPi) * ipow(-n) * hermite_h(n, omega);
}

/// log of s_n = sqrt(2^n n! sqrt(pi)).
inline double hermite_log_norm(int n) {
    return 0.5 * (n * std::log(2.0) + std::lgamma(n + 1.0) + 0.5 * std::log(kPi));
}

/// alpha_{m,k}(1/a), k = 0..m, with H_m(x) = sum_k alpha_{m,k} H_k(a x).
inline std::vector<double> hermite_scaling_coeffs(int m, double a_inv) {
    require(m >= 0, "hermite_scaling_coeffs: m must be >= 0");
    require(a_inv > 0.0 && a_inv <= 1.0, "hermite_scaling_coeffs: a_inv must lie in (0, 1]");
    std::vector<double> alpha(static_cast<std::size_t>(m) + 1, 0.0);
    const double g2m1 = a_inv * a_inv - 1.0;
    for (int j = 0; 2 * j <= m; ++j) {
        const int k = m - 2 * j;
        double v = std::pow(a_inv, k) * std::exp(std::lgamma(m + 1.0) - std::lgamma(j + 1.0) - std::lgamma(k + 1.0));
        v *= std::pow(g2m1, j);
        alpha[k] = v;
    }
    return alpha;
}

/// A with h_m(w) e^{-w^2 t} = sum_k A(k, m) h_k(a w), a = sqrt(2t + 1).
/// Upper triangular; entries with m - k odd vanish.
inline Eigen::MatrixXd hermite_damping_matrix(int N, double a) {
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(N + 1, N + 1);
    const double a_inv = 1.0 / a;
    const double g2m1 = a_inv * a_inv - 1.0;
    for (int m = 0; m <= N; ++m) {
        for (int j = 0; 2 * j <= m; ++j) {
            const int k = m - 2 * j;
            // alpha_{m,k} s_k / s_m in log space
            double log_mag = k * std::log(a_inv) + std::lgamma(m + 1.0) - std::lgamma(j + 1.0) - std::lgamma(k + 1.0) +
                             hermite_log_norm(k) - hermite_log_norm(m);
            double sign = 1.0;
            if (j > 0) {
                if (g2m1 == 0.0) continue;
                log_mag += j * std::log(std::abs(g2m1));
                if (g2m1 < 0.0 && j % 2 == 1) sign = -1.0;
            }
            A(k, m) = sign * std::exp(log_mag);
        }
    }
    return A;
}

/// Truncated expansion sum_{m+n<=N} c(m, n) h_m(u1/a) h_n(u2/a) in basis coordinates.
struct HermiteExpansion {
    int order = 0;
    double scale = 1.0;
    Eigen::MatrixXd coeffs;  // (N+1) x (N+1); entries with m + n > N stay zero

    HermiteExpansion() = default;
    HermiteExpansion(int N, double a) : order(N), scale(a), coeffs(Eigen::MatrixXd::Zero(N + 1, N + 1)) {
        require(N >= 0 && N <= kHermiteMaxOrder, "hermite order out of range");
        require(a >= 1.0, "expansion scale must be >= 1");
    }

    static std::size_t coefficient_count(int N) { return static_cast<std::size_t>(N + 1) * (N + 2) / 2; }

    void truncate() {
        for (int m = 0; m <= order; ++m)
            for (int n = order - m + 1; n <= order; ++n) coeffs(m, n) = 0.0;
    }
};

inline double hermite_eval(const HermiteExpansion& e, double u1, double u2) {
    const auto hx = hermite_h_all(e.order, u1 / e.scale);
    const auto hy = hermite_h_all(e.order, u2 / e.scale);
    double s = 0.0;
    for (int m = 0; m <= e.order; ++m)
        for (int n = 0; n + m <= e.order; ++n) s += e.coeffs(m, n) * hx[m] * hy[n];
    return s;
}

namespace detail {

/// Row j holds h_0..h_N at basis coordinate coord(j) / scale.
template <class Coord>
Eigen::MatrixXd hermite_table(int count, int N, double scale, Coord coord) {
    Eigen::MatrixXd T(count, N + 1);
    for (int j = 0; j < count; ++j) {
        const auto h = hermite_h_all(N, coord(j) / scale);
        for (int n = 0; n <= N; ++n) T(j, n) = h[n];
    }
    return T;
}

}  // namespace detail

/// Evaluates the expansion at every pixel of a width x height grid.
inline CartesianImage hermite_render(const HermiteExpansion& e, const BasisFrame& frame, int width, int height,
                                     double pitch) {
    CartesianImage out(width, height, pitch);
    const auto Hx = detail::hermite_table(width, e.order, e.scale, [&](int j) { return out.x1(j) / frame.unit; });
    const auto Hy = detail::hermite_table(height, e.order, e.scale, [&](int i) { return out.x2(i) / frame.unit; });
    const Eigen::MatrixXd img = Hy * e.coeffs.transpose() * Hx.transpose();
    for (int i = 0; i < height; ++i)
        for (int j = 0; j < width; ++j) out(i, j) = img(i, j);
    return out;
}

/// Least-squares fit of an order-N expansion at scale a to every pixel of `img`.
/// The normal matrix is the Kronecker product of the per-axis Gram matrices
/// restricted to m + n <= N; a relative Tikhonov term of 1e-10 is added.
inline Fitted<HermiteExpansion> hermite_fit(const CartesianImage& img, int N, double a, const BasisFrame& frame) {
    HermiteExpansion e(N, a);
    const auto Hx = detail::hermite_table(img.width(), N, a, [&](int j) { return img.x1(j) / frame.unit; });
    const auto Hy = detail::hermite_table(img.height(), N, a, [&](int i) { return img.x2(i) / frame.unit; });
    const Eigen::MatrixXd Sx = Hx.transpose() * Hx;
    const Eigen::MatrixXd Sy = Hy.transpose() * Hy;
    Eigen::MatrixXd pix(img.height(), img.width());
    for (int i = 0; i < img.height(); ++i)
        for (int j = 0; j < img.width(); ++j) pix(i, j) = img(i, j);
    const Eigen::MatrixXd rhs = Hx.transpose() * pix.transpose() * Hy;  // (m, n)

    const auto dim = static_cast<Eigen::Index>(HermiteExpansion::coefficient_count(N));
    std::vector<std::pair<int, int>> idx;
    idx.reserve(dim);
    for (int m = 0; m <= N; ++m)
        for (int n = 0; n + m <= N; ++n) idx.emplace_back(m, n);
    Eigen::MatrixXd G(dim, dim);
    Eigen::VectorXd b(dim);
    for (Eigen::Index r = 0; r < dim; ++r) {
        b(r) = rhs(idx[r].first, idx[r].second);
        for (Eigen::Index c = 0; c < dim; ++c) G(r, c) = Sx(idx[r].first, idx[c].first) * Sy(idx[r].second, idx[c].second);
    }
    Eigen::LLT<Eigen::MatrixXd> plain(G);
    if (plain.info() != Eigen::Success || plain.rcond() < 1e-14)
        throw NumericalError("hermite_fit: rank-deficient normal system for order N=" + std::to_string(N) +
                             " on a " + std::to_string(img.width()) + "x" + std::to_string(img.height()) +
                             " grid");
    G.diagonal().array() += 1e-10 * G.diagonal().mean();
    const Eigen::VectorXd x = G.llt().solve(b);
    for (Eigen::Index r = 0; r < dim; ++r) e.coeffs(idx[r].first, idx[r].second) = x(r);

    const auto fit = hermite_render(e, frame, img.width(), img.height(), img.pitch());
    return {std::move(e), rmse(fit, img)};
}

/// Exact coefficient map of a translational blur with basis-unit diffusion time t:
/// an order-N expansion at scale 1 becomes an order-N expansion at scale sqrt(2t + 1).
inline HermiteExpansion hermite_blur_forward(const HermiteExpansion& rho, double t) {
    require(rho.scale == 1.0, "hermite_blur_forward: input must be at scale 1");
    require(t >= 0.0, "hermite_blur_forward: t must be >= 0");
    const int N = rho.order;
    const double a = blur_scale(t);
    const Eigen::MatrixXd A = hermite_damping_matrix(N, a);
    Eigen::MatrixXd P = Eigen::MatrixXd::Zero(N + 1, N + 1);
    for (int k = 0; k <= N; ++k)
        for (int m = k; m <= N; m += 2) P(k, m) = sign_pow((m - k) / 2) * A(k, m);
    HermiteExpansion out(N, a);
    out.coeffs = P * rho.coeffs * P.transpose() / (a * a);
    out.truncate();
    return out;
}

/// Symmetric frequency samples +-w_j, w_j uniform on [0.05, sqrt(2N+1)], 2(N+1) per sign.
inline std::vector<double> hermite_omega_samples(int N) {
    const int count = 2 * (N + 1);
    const double hi = std::sqrt(2.0 * N + 1.0), lo = 0.05;
    std::vector<double> w;
    w.reserve(2 * static_cast<std::size_t>(count));
    for (int j = 0; j < count; ++j) {
        const double v = lo + (hi - lo) * j / (count - 1);
        w.push_back(v);
        w.push_back(-v);
    }
    return w;
}

/// Recovers the scale-1 expansion from the fit of a translationally blurred image
/// (fit scale a = sqrt(2t + 1), t in basis units):
///   R = a^2 M G M^T,  M(m, k) = i^{m-k} [H^+ E^+ H_a](m, k),
/// with E^+ = diag 1 / (e^{-t w^2} + eps) and H^+ = (H^T H)^-1 H^T.
inline HermiteExpansion deconv_translational_hermite(const HermiteExpansion& blurred, double t, double epsilon,
                                                     const std::vector<double>& omega) {
    require(t >= 0.0, "deconv_translational_hermite: t must be >= 0");
    require(epsilon >= 0.0, "deconv_translational_hermite: epsilon must be >= 0");
    const int N = blurred.order;
    const double a = blur_scale(t);
    require(std::abs(blurred.scale - a) <= 1e-9, "deconv_translational_hermite: fit scale must equal sqrt(2t+1)");
    require(omega.size() >= static_cast<std::size_t>(N + 1), "deconv_translational_hermite: need >= N+1 samples");

    const auto S = static_cast<Eigen::Index>(omega.size());
    Eigen::MatrixXd H(S, N + 1), Ha(S, N + 1);
    Eigen::VectorXd Einv(S);
    for (Eigen::Index s = 0; s < S; ++s) {
        const auto h = hermite_h_all(N, omega[s]);
        const auto ha = hermite_h_all(N, a * omega[s]);
        for (int n = 0; n <= N; ++n) {
            H(s, n) = h[n];
            Ha(s, n) = ha[n];
        }
        Einv(s) = 1.0 / (std::exp(-t * omega[s] * omega[s]) + epsilon);
    }
    const Eigen::MatrixXd HtH = H.transpose() * H;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(HtH);
    const double cond = svd.singularValues()(0) / svd.singularValues()(svd.singularValues().size() - 1);
    if (!(cond <= 1e12))
        throw NumericalError("deconv_translational_hermite: H^T H is ill-conditioned (cond " + std::to_string(cond) +
                             "); choose different omega samples");
    const Eigen::MatrixXd B = HtH.ldlt().solve(H.transpose() * Einv.asDiagonal() * Ha);

    // i^{m-k} is +-1 for even m-k; odd-parity entries vanish for symmetric samples.
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(N + 1, N + 1);
    for (int m = 0; m <= N; ++m)
        for (int k = 0; k <= N; ++k)
            if ((m - k) % 2 == 0) M(m, k) = ipow(m - k).real() * B(m, k);

    HermiteExpansion out(N, 1.0);
    out.coeffs = a * a * M * blurred.coeffs * M.transpose();
    out.truncate();
    return out;
}

inline HermiteExpansion deconv_translational_hermite(const HermiteExpansion& blurred, double t, double epsilon) {
    return deconv_translational_hermite(blurred, t, epsilon, hermite_omega_samples(blurred.order));
}

}  // namespace motionblur
