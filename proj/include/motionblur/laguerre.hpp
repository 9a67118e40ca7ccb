#pragma once

// Associated Laguerre polynomials, the polar Laguerre-Gauss basis chi_mn, truncated
// Laguerre-Fourier expansions of images, and deconvolution of rotational and
// combined blur in the coefficient domain.

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "motionblur/basis_frame.hpp"
#include "motionblur/error.hpp"
#include "motionblur/image.hpp"
#include "motionblur/kernels.hpp"
#include "motionblur/se2.hpp"

namespace motionblur {

/// L_n^k(x) by the three-term recurrence in n.
inline double laguerre_L(int n, double k, double x) {
    require(n >= 0 && k >= 0.0, "laguerre_L: n and k must be >= 0");
    double prev = 1.0;
    if (n == 0) return prev;
    double cur = 1.0 + k - x;
    for (int j = 1; j < n; ++j) {
        const double next = ((2.0 * j + 1.0 + k - x) * cur - (j + k) * prev) / (j + 1.0);
        prev = cur;
        cur = next;
    }
    return cur;
}

inline bool laguerre_index_valid(int m, int n) { return m >= 0 && std::abs(n) <= m && (m - std::abs(n)) % 2 == 0; }

/// Radial factor y_mn(r) of chi_mn = y_mn(r) e^{-in phi}; normalisation in log space.
inline double laguerre_radial(int m, int n, double r) {
    require(laguerre_index_valid(m, n), "chi basis needs m >= |n| with m - |n| even");
    require(r >= 0.0, "chi basis needs r >= 0");
    const int an = std::abs(n);
    const int j = (m - an) / 2;
    if (r == 0.0 && an > 0) return 0.0;
    const double log_mag = 0.5 * (std::lgamma(j + 1.0) - std::lgamma(j + an + 1.0) - std::log(kPi)) +
                           (an > 0 ? an * std::log(r) : 0.0) - 0.5 * r * r;
    return sign_pow(j) * std::exp(log_mag) * laguerre_L(j, an, r * r);
}

inline Complex chi_basis(int m, int n, double r, double phi) {
    const double angle = -n * phi;
    return laguerre_radial(m, n, r) * Complex(std::cos(angle), std::sin(angle));
}

/// sum_{m<=N} sum_n c_mn chi*_mn(r/a, phi) with n = -m, -m+2, .., m.
/// Coefficients are stored m ascending, n ascending within m.
struct LaguerreFourierExpansion {
    int order = 0;
    double scale = 1.0;
    std::vector<Complex> coeffs;

    LaguerreFourierExpansion() = default;
    LaguerreFourierExpansion(int N, double a) : order(N), scale(a), coeffs(coefficient_count(N)) {
        require(N >= 0, "expansion order must be >= 0");
        require(a >= 1.0, "expansion scale must be >= 1");
    }

    static std::size_t coefficient_count(int N) { return static_cast<std::size_t>(N + 1) * (N + 2) / 2; }
    static std::size_t index(int m, int n) { return static_cast<std::size_t>(m) * (m + 1) / 2 + (n + m) / 2; }

    Complex& operator()(int m, int n) { return coeffs[index(m, n)]; }
    Complex operator()(int m, int n) const { return coeffs[index(m, n)]; }

    /// Largest |c_{m,-n} - conj(c_mn)|: zero for expansions of real images.
    double reality_defect() const {
        double worst = 0.0;
        for (int m = 0; m <= order; ++m)
            for (int n = -m; n <= m; n += 2) worst = std::max(worst, std::abs((*this)(m, -n) - std::conj((*this)(m, n))));
        return worst;
    }
};

inline Complex laguerre_eval_complex(const LaguerreFourierExpansion& e, double r, double phi) {
    Complex s(0.0, 0.0);
    for (int m = 0; m <= e.order; ++m)
        for (int n = -m; n <= m; n += 2) s += e(m, n) * std::conj(chi_basis(m, n, r / e.scale, phi));
    return s;
}

inline double laguerre_eval(const LaguerreFourierExpansion& e, double r, double phi) {
    return laguerre_eval_complex(e, r, phi).real();
}

namespace detail {

/// Real design columns for an order-N expansion at scale a: for n = 0 the column
/// y_m0; for n > 0 the pair 2 y_mn cos(n phi) (-> Re c_mn) and -2 y_mn sin(n phi)
/// (-> Im c_mn), with c_{m,-n} = conj(c_mn).
struct RealColumn {
    int m;
    int n;
    bool imag;
};

inline std::vector<RealColumn> laguerre_real_columns(int N) {
    std::vector<RealColumn> cols;
    for (int m = 0; m <= N; ++m)
        for (int n = m % 2; n <= m; n += 2) {
            cols.push_back({m, n, false});
            if (n > 0) cols.push_back({m, n, true});
        }
    return cols;
}

inline Eigen::MatrixXd laguerre_design(const CartesianImage& grid, int N, double a, const BasisFrame& frame,
                                       const std::vector<RealColumn>& cols) {
    Eigen::MatrixXd D(static_cast<Eigen::Index>(grid.size()), static_cast<Eigen::Index>(cols.size()));
    std::vector<double> y(LaguerreFourierExpansion::coefficient_count(N));
    for (int i = 0; i < grid.height(); ++i) {
        for (int j = 0; j < grid.width(); ++j) {
            const double u1 = grid.x1(j) / frame.unit, u2 = grid.x2(i) / frame.unit;
            const double r = std::hypot(u1, u2) / a;
            const double phi = std::atan2(u2, u1);
            for (int m = 0; m <= N; ++m)
                for (int n = m % 2; n <= m; n += 2) y[LaguerreFourierExpansion::index(m, n)] = laguerre_radial(m, n, r);
            const Eigen::Index row = static_cast<Eigen::Index>(i) * grid.width() + j;
            for (std::size_t c = 0; c < cols.size(); ++c) {
                const auto& col = cols[c];
                const double yv = y[LaguerreFourierExpansion::index(col.m, col.n)];
                double v;
                if (col.n == 0)
                    v = yv;
                else if (!col.imag)
                    v = 2.0 * yv * std::cos(col.n * phi);
                else
                    v = -2.0 * yv * std::sin(col.n * phi);
                D(row, static_cast<Eigen::Index>(c)) = v;
            }
        }
    }
    return D;
}

}  // namespace detail

inline CartesianImage laguerre_render(const LaguerreFourierExpansion& e, const BasisFrame& frame, int width,
                                      int height, double pitch) {
    CartesianImage out(width, height, pitch);
    for (int i = 0; i < height; ++i)
        for (int j = 0; j < width; ++j) {
            const double u1 = out.x1(j) / frame.unit, u2 = out.x2(i) / frame.unit;
            out(i, j) = laguerre_eval(e, std::hypot(u1, u2), std::atan2(u2, u1));
        }
    return out;
}

/// Least-squares fit of an order-N Laguerre-Fourier expansion at scale a to every
/// pixel, parameterised by real and imaginary parts so that c_{m,-n} = conj(c_mn).
inline Fitted<LaguerreFourierExpansion> laguerre_fit(const CartesianImage& img, int N, double a,
                                                     const BasisFrame& frame) {
    LaguerreFourierExpansion e(N, a);
    const auto cols = detail::laguerre_real_columns(N);
    const Eigen::MatrixXd D = detail::laguerre_design(img, N, a, frame, cols);
    const Eigen::Map<const Eigen::VectorXd> pix(img.values().data(), static_cast<Eigen::Index>(img.size()));
    const auto dim = static_cast<Eigen::Index>(cols.size());
    Eigen::MatrixXd G = Eigen::MatrixXd::Zero(dim, dim);
    G.selfadjointView<Eigen::Lower>().rankUpdate(D.transpose());
    G = G.selfadjointView<Eigen::Lower>();
    const Eigen::VectorXd b = D.transpose() * pix;
    Eigen::LLT<Eigen::MatrixXd> plain(G);
    if (plain.info() != Eigen::Success || plain.rcond() < 1e-14)
        throw NumericalError("laguerre_fit: rank-deficient normal system for order N=" + std::to_string(N) +
                             " on a " + std::to_string(img.width()) + "x" + std::to_string(img.height()) +
                             " grid");
    G.diagonal().array() += 1e-10 * G.diagonal().mean();
    const Eigen::VectorXd x = G.llt().solve(b);
    for (std::size_t c = 0; c < cols.size(); ++c) {
        const auto& col = cols[c];
        if (col.n == 0)
            e(col.m, 0) = x(static_cast<Eigen::Index>(c));
        else if (!col.imag)
            e(col.m, col.n).real(x(static_cast<Eigen::Index>(c)));
        else
            e(col.m, col.n).imag(x(static_cast<Eigen::Index>(c)));
    }
    for (int m = 0; m <= N; ++m)
        for (int n = 2 - m % 2; n <= m; n += 2) e(m, -n) = std::conj(e(m, n));

    const Eigen::VectorXd fit = D * x;
    CompensatedSum s;
    for (Eigen::Index k = 0; k < fit.size(); ++k) s.add((fit(k) - pix(k)) * (fit(k) - pix(k)));
    return {std::move(e), std::sqrt(s.value() / static_cast<double>(fit.size()))};
}

/// Coefficient map of a rotational blur: c_mn -> c_mn e^{-n^2 t2}.
inline LaguerreFourierExpansion laguerre_rot_forward(const LaguerreFourierExpansion& rho, double t2) {
    require(t2 >= 0.0, "laguerre_rot_forward: t2 must be >= 0");
    auto out = rho;
    for (int m = 0; m <= rho.order; ++m)
        for (int n = -m; n <= m; n += 2) out(m, n) *= kernel_ft_rotational(n, t2);
    return out;
}

/// c_mn <- c_mn / (e^{-n^2 t2} + eps); order and scale unchanged.
inline LaguerreFourierExpansion deconv_rotational_laguerre(const LaguerreFourierExpansion& blurred, double t2,
                                                           double epsilon) {
    require(t2 >= 0.0, "deconv_rotational_laguerre: t2 must be >= 0");
    require(epsilon >= 0.0, "deconv_rotational_laguerre: epsilon must be >= 0");
    auto out = blurred;
    for (int m = 0; m <= blurred.order; ++m)
        for (int n = -m; n <= m; n += 2) out(m, n) /= kernel_ft_rotational(n, t2) + epsilon;
    return out;
}

/// Closed-form SE(2) spectrum (m = 0 row) of an expansion at scale a:
///   rho_0n(p) = 4 pi^2 i^n sum_k c_{k,-n} (-1)^{(k+n)/2} a^2 y_{k,-n}(a p),
/// for physical frequencies p (the frame converts to basis units).
inline SE2Spectrum se2_ft_laguerre(const LaguerreFourierExpansion& e, std::vector<double> p, int band_limit,
                                   const BasisFrame& frame = {}) {
    SE2Spectrum spec(band_limit, std::move(p));
    const double a = e.scale;
    const double u2 = frame.unit * frame.unit;
    for (std::size_t s = 0; s < spec.radial_samples(); ++s) {
        const double pb = spec.p(s) * frame.unit;
        for (int n = -std::min(band_limit, e.order); n <= std::min(band_limit, e.order); ++n) {
            Complex acc(0.0, 0.0);
            const int l = -n;
            for (int k = std::abs(l); k <= e.order; k += 2)
                acc += e(k, l) * (sign_pow((k + n) / 2) * laguerre_radial(k, l, a * pb));
            spec(s, 0, n) = 4.0 * kPi * kPi * ipow(n) * acc * (a * a * u2);
        }
    }
    return spec;
}

/// Uniform radial frequency samples on [0.05, sqrt(2N+1)], 2(N+1) of them (basis units).
inline std::vector<double> laguerre_p_samples(int N) {
    const int count = 2 * (N + 1);
    const double hi = std::sqrt(2.0 * N + 1.0), lo = 0.05;
    std::vector<double> p(static_cast<std::size_t>(count));
    for (int j = 0; j < count; ++j) p[j] = lo + (hi - lo) * j / (count - 1);
    return p;
}

namespace detail {

/// Y(s, c) = y_{k_c, l}(scale p_s) for k_c = |l|, |l|+2, .., <= N.
inline Eigen::MatrixXd laguerre_y_matrix(int N, int l, double scale, const std::vector<double>& p) {
    const int first = std::abs(l);
    const int count = (N - first) / 2 + 1;
    Eigen::MatrixXd Y(static_cast<Eigen::Index>(p.size()), count);
    for (std::size_t s = 0; s < p.size(); ++s)
        for (int c = 0; c < count; ++c) Y(static_cast<Eigen::Index>(s), c) = laguerre_radial(first + 2 * c, l, scale * p[s]);
    return Y;
}

inline Eigen::MatrixXd checked_pinv(const Eigen::MatrixXd& Y, const char* who) {
    const Eigen::MatrixXd YtY = Y.transpose() * Y;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(YtY);
    const auto& sv = svd.singularValues();
    const double cond = sv(0) / sv(sv.size() - 1);
    if (!(cond <= 1e12))
        throw NumericalError(std::string(who) + ": Y^T Y is ill-conditioned (cond " + std::to_string(cond) +
                             "); choose different p samples");
    return YtY.ldlt().solve(Y.transpose());
}

}  // namespace detail

/// Recovers the scale-1 expansion from the fit of an SE(2)-blurred image (fit
/// scale a = sqrt(2 t1 + 1), t1 in basis units). For each angular index l the
/// coefficients r = (c_{k,l})_k solve W Y J r = a^2 Y_a J g, regularised as
///   r = a^2 J Y^+ W^+ Y_a J g,  W^+ = diag 1 / (e^{-p^2 t1} e^{-l^2 t2} + eps),
/// with J = diag (-1)^{(k-l)/2} and Y^+ = (Y^T Y)^-1 Y^T.
inline LaguerreFourierExpansion deconv_se2_laguerre(const LaguerreFourierExpansion& blurred,
                                                    const MotionParams& params, double epsilon,
                                                    const std::vector<double>& p) {
    require(epsilon >= 0.0, "deconv_se2_laguerre: epsilon must be >= 0");
    require(params.t1 >= 0.0 && params.t2 >= 0.0, "deconv_se2_laguerre: diffusion times must be >= 0");
    const int N = blurred.order;
    const double a = blur_scale(params.t1);
    require(std::abs(blurred.scale - a) <= 1e-9, "deconv_se2_laguerre: fit scale must equal sqrt(2 t1 + 1)");
    LaguerreFourierExpansion out(N, 1.0);
    for (int l = -N; l <= N; ++l) {
        const int first = std::abs(l);
        const int count = (N - first) / 2 + 1;
        require(p.size() >= static_cast<std::size_t>(count), "deconv_se2_laguerre: too few p samples");
        const auto Y = detail::laguerre_y_matrix(N, l, 1.0, p);
        const auto Ya = detail::laguerre_y_matrix(N, l, a, p);
        Eigen::VectorXd Winv(static_cast<Eigen::Index>(p.size()));
        for (std::size_t s = 0; s < p.size(); ++s)
            Winv(static_cast<Eigen::Index>(s)) = 1.0 / (kernel_ft_se2(p[s], l, params) + epsilon);
        Eigen::VectorXd J(count);
        for (int c = 0; c < count; ++c) J(c) = sign_pow((first + 2 * c - l) / 2);
        const Eigen::MatrixXd Yp = detail::checked_pinv(Y, "deconv_se2_laguerre");
        const Eigen::MatrixXd T = a * a * J.asDiagonal() * Yp * Winv.asDiagonal() * Ya * J.asDiagonal();
        Eigen::VectorXcd g(count);
        for (int c = 0; c < count; ++c) g(c) = blurred(first + 2 * c, l);
        const Eigen::VectorXcd r = T.cast<Complex>() * g;
        for (int c = 0; c < count; ++c) out(first + 2 * c, l) = r(c);
    }
    return out;
}

inline LaguerreFourierExpansion deconv_se2_laguerre(const LaguerreFourierExpansion& blurred,
                                                    const MotionParams& params, double epsilon) {
    return deconv_se2_laguerre(blurred, params, epsilon, laguerre_p_samples(blurred.order));
}

/// Coefficient map of an SE(2) blur (basis-unit t1): the closed-form spectrum of
/// `rho` is multiplied by the kernel spectrum and the scaled expansion is refit to
/// it by least squares on the radial samples `p`.
inline LaguerreFourierExpansion laguerre_se2_forward(const LaguerreFourierExpansion& rho, const MotionParams& params,
                                                     const std::vector<double>& p) {
    require(rho.scale == 1.0, "laguerre_se2_forward: input must be at scale 1");
    const int N = rho.order;
    const double a = blur_scale(params.t1);
    auto spec = se2_ft_laguerre(rho, p, N);
    LaguerreFourierExpansion out(N, a);
    for (int n = -N; n <= N; ++n) {
        const int l = -n;
        const int first = std::abs(l);
        const int count = (N - first) / 2 + 1;
        // target(s) = spec_0n(p_s) f_nn(p_s) / (4 pi^2 i^n a^2)
        Eigen::VectorXcd target(static_cast<Eigen::Index>(p.size()));
        for (std::size_t s = 0; s < p.size(); ++s)
            target(static_cast<Eigen::Index>(s)) =
                spec(s, 0, n) * kernel_ft_se2(p[s], n, params) / (4.0 * kPi * kPi * ipow(n) * a * a);
        Eigen::MatrixXd basis = detail::laguerre_y_matrix(N, l, a, p);
        for (int c = 0; c < count; ++c) basis.col(c) *= sign_pow((first + 2 * c + n) / 2);
        const Eigen::MatrixXd pinv = detail::checked_pinv(basis, "laguerre_se2_forward");
        const Eigen::VectorXcd g = pinv.cast<Complex>() * target;
        for (int c = 0; c < count; ++c) out(first + 2 * c, l) = g(c);
    }
    return out;
}

}  // namespace motionblur
