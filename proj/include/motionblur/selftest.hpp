#pragma once

// Fast analytic invariant checks run by `motionblur selftest`. Each check
// compares a closed form against a brute-force quadrature or an algebraic
// identity and reports the worst deviation.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "motionblur/bessel.hpp"
#include "motionblur/blur.hpp"
#include "motionblur/hermite.hpp"
#include "motionblur/kernels.hpp"
#include "motionblur/laguerre.hpp"
#include "motionblur/phantom.hpp"
#include "motionblur/se2.hpp"

namespace motionblur {

struct SelfTestCheck {
    std::string name;
    double error = 0.0;
    double tolerance = 0.0;
    double seconds = 0.0;
    bool pass() const { return error <= tolerance; }
};

/// Debug hook: corrupts one entry of the Bessel table used by the symmetry check.
struct BesselPerturbation {
    int order = -3;
    std::size_t sample = 1;
    double delta = 1e-6;
};

struct SelfTestOptions {
    std::optional<BesselPerturbation> perturb;
};

namespace selftest {

inline double simpson(const std::function<double(double)>& f, double a, double b, int n) {
    const double h = (b - a) / n;
    double s = f(a) + f(b);
    for (int k = 1; k < n; ++k) s += (k % 2 ? 4.0 : 2.0) * f(a + k * h);
    return s * h / 3.0;
}

/// int h_n(x) e^{-i w x} dx against sqrt(2 pi) (-i)^n h_n(w), n <= 20, |w| <= 5.
inline double hermite_eigenfunction() {
    const int steps = 4000;
    const double lo = -20.0, dx = 40.0 / steps;
    std::vector<std::vector<double>> h(steps + 1);
    for (int k = 0; k <= steps; ++k) h[k] = hermite_h_all(20, lo + k * dx);
    double worst = 0.0;
    for (int n = 0; n <= 20; ++n)
        for (double w : {-5.0, -2.2, 0.0, 0.9, 3.1, 5.0}) {
            Complex acc(0.0, 0.0);
            for (int k = 0; k <= steps; ++k) {
                const double x = lo + k * dx;
                const double wt = (k == 0 || k == steps) ? 0.5 : 1.0;
                acc += wt * h[k][n] * Complex(std::cos(w * x), -std::sin(w * x));
            }
            worst = std::max(worst, std::abs(acc * dx - hermite_eigen_check(n, w)));
        }
    return worst;
}

/// f_mn(p) = int f(g) conj(u_nm(g, p)) dg by midpoint quadrature over (r, phi, theta),
/// compared with the closed-form diagonal kernel spectrum.
inline double kernel_spectrum_quadrature() {
    const auto params = MotionParams::make(0.5, 0.1);
    const int nr = 400, nphi = 16, nth = 64, B = 2;
    const double rmax = 8.0, dr = rmax / nr;
    std::vector<double> fr(nr), fth(nth);
    for (int i = 0; i < nr; ++i) fr[i] = gauss2d((i + 0.5) * dr, 0.0, params.t1);
    for (int k = 0; k < nth; ++k) fth[k] = wrapped_gauss(-kPi + k * kTwoPi / nth, params.t2, params.series_cutoff);
    double worst = 0.0;
    for (double p : {0.5, 1.5}) {
        std::vector<double> args(nr);
        for (int i = 0; i < nr; ++i) args[i] = p * (i + 0.5) * dr;
        const BesselTable J(2 * B, args);
        for (int m = -B; m <= B; ++m)
            for (int n = -B; n <= B; ++n) {
                Complex acc(0.0, 0.0);
                for (int i = 0; i < nr; ++i) {
                    const double r = (i + 0.5) * dr;
                    for (int j = 0; j < nphi; ++j) {
                        const double phi = j * kTwoPi / nphi;
                        for (int k = 0; k < nth; ++k) {
                            const double th = -kPi + k * kTwoPi / nth;
                            acc += fr[i] * fth[k] * r *
                                   std::conj(se2_matrix_element_from_bessel(n, m, phi, th, J(m - n, i)));
                        }
                    }
                }
                acc *= dr * (kTwoPi / nphi) * (kTwoPi / nth);
                worst = std::max(worst, std::abs(acc - kernel_ft_se2(p, m, n, params)));
            }
    }
    return worst;
}

/// int y_kl(r) J_l(p r) r dr = (-1)^{(k-l)/2} y_kl(p), k <= 8.
inline double hankel_laguerre() {
    double worst = 0.0;
    for (int k = 0; k <= 8; ++k)
        for (int l = -k; l <= k; l += 2)
            for (double p : {0.3, 1.0, 2.2}) {
                const double v =
                    simpson([&](double r) { return laguerre_radial(k, l, r) * bessel_j(l, p * r) * r; }, 0.0, 14.0, 4000);
                worst = std::max(worst, std::abs(v - sign_pow((k - l) / 2) * laguerre_radial(k, l, p)));
            }
    return worst;
}

/// Conjugation, antipodal and inverse-element symmetries of u_mn, plus U(e) = I,
/// evaluated from a Bessel table over every (m, n, sample) combination.
inline double representation_symmetries(const std::optional<BesselPerturbation>& perturb) {
    const int K = 6;
    std::vector<double> args;
    for (int s = 0; s < 40; ++s) args.push_back(0.15 * s + 0.05 * (s % 7));
    BesselTable J(2 * K, args);
    if (perturb) J = BesselTable::perturbed(J, perturb->order, perturb->sample, perturb->delta);
    double worst = 0.0;
    for (std::size_t s = 0; s < args.size(); ++s) {
        const double phi = -kPi + 0.37 * s, theta = 1.9 - 0.21 * s;
        auto u = [&](int m, int n, double ph, double th) {
            return se2_matrix_element_from_bessel(m, n, ph, th, J(n - m, s));
        };
        for (int m = -K; m <= K; ++m)
            for (int n = -K; n <= K; ++n) {
                const double sg = sign_pow(m - n);
                const Complex v = u(m, n, phi, theta);
                worst = std::max(worst, std::abs(std::conj(v) - sg * u(-m, -n, phi, theta)));
                worst = std::max(worst, std::abs(u(m, n, phi + kPi, theta) - sg * v));
                worst = std::max(worst, std::abs(sg * u(m, n, phi - theta, -theta) - std::conj(u(n, m, phi, theta))));
            }
    }
    for (int m = -K; m <= K; ++m)
        for (int n = -K; n <= K; ++n)
            worst = std::max(worst, std::abs(se2_matrix_element(m, n, 0.0, 0.4, 0.0, 1.3) - Complex(m == n, 0.0)));
    return worst;
}

/// RMSE between the two orders of the exact SE(2) blur, relative to the image range.
inline double blur_commutativity() {
    const auto img = make_phantom(Phantom::Blobs);
    const auto params = MotionParams::make(2.0, 0.02);
    const auto a = exact_blur_se2(img, params, BlurOrder::TranslateThenRotate);
    const auto b = exact_blur_se2(img, params, BlurOrder::RotateThenTranslate);
    return rmse(a, b) / img.range();
}

}  // namespace selftest

inline std::vector<SelfTestCheck> run_selftest(const SelfTestOptions& opts = {}) {
    std::vector<SelfTestCheck> out;
    auto timed = [&](std::string name, double tol, const std::function<double()>& f) {
        const auto t0 = std::chrono::steady_clock::now();
        const double err = f();
        out.push_back({std::move(name), err, tol,
                       std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count()});
    };
    timed("hermite_eigenfunction", 1e-8, selftest::hermite_eigenfunction);
    timed("kernel_spectrum_quadrature", 1e-4, selftest::kernel_spectrum_quadrature);
    timed("hankel_laguerre", 1e-6, selftest::hankel_laguerre);
    timed("representation_symmetries", 1e-12, [&] { return selftest::representation_symmetries(opts.perturb); });
    timed("blur_commutativity", 0.02, selftest::blur_commutativity);
    return out;
}

}  // namespace motionblur
