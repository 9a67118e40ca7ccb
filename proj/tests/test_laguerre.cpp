#include <gtest/gtest.h>

#include <cmath>

#include "motionblur/bessel.hpp"
#include "motionblur/blur.hpp"
#include "motionblur/hermite.hpp"
#include "motionblur/laguerre.hpp"
#include "motionblur/phantom.hpp"
#include "oracles.hpp"

using namespace motionblur;

namespace {

LaguerreFourierExpansion planted(int N, double phase) {
    LaguerreFourierExpansion e(N, 1.0);
    for (int m = 0; m <= N; ++m)
        for (int n = m % 2; n <= m; n += 2) {
            const Complex c(std::sin(1.3 * m + 0.7 * n + phase), n ? std::cos(0.4 * m - n + phase) : 0.0);
            e(m, n) = c / (1.0 + 0.1 * m);
            e(m, -n) = std::conj(e(m, n));
        }
    return e;
}

double max_coeff_diff(const LaguerreFourierExpansion& a, const LaguerreFourierExpansion& b) {
    double w = 0;
    for (std::size_t k = 0; k < a.coeffs.size(); ++k) w = std::max(w, std::abs(a.coeffs[k] - b.coeffs[k]));
    return w;
}

}  // namespace

TEST(LaguerreL, ClosedFormsAndOracle) {
    EXPECT_EQ(laguerre_L(0, 3.0, 2.5), 1.0);
    EXPECT_NEAR(laguerre_L(1, 2.0, 0.7), 1 + 2.0 - 0.7, 1e-15);
    for (int n = 0; n <= 20; ++n)
        for (int k = 0; k <= 10; k += 3)
            for (double x : {0.0, 0.5, 3.0, 11.0})
                EXPECT_NEAR(laguerre_L(n, k, x), std::assoc_laguerre(n, k, x),
                            1e-10 * std::max(1.0, std::abs(std::assoc_laguerre(n, k, x))));
    EXPECT_THROW(laguerre_L(-1, 0, 1.0), DomainError);
    EXPECT_THROW(laguerre_L(1, -1, 1.0), DomainError);
}

TEST(LaguerreL, Orthogonality) {
    for (int k : {0, 1, 4, 10})
        for (int m = 0; m <= 20; m += 4)
            for (int n = m; n <= 20; n += 5) {
                // substitute x = s^2 so the weight x^k e^{-x} stays smooth at 0
                const double v = oracle::simpson(
                    [&](double s) {
                        const double x = s * s;
                        return 2 * s * std::pow(x, k) * std::exp(-x) * laguerre_L(m, k, x) * laguerre_L(n, k, x);
                    },
                    0.0, 12.0, 6000);
                auto h = [&](int j) { return std::exp(std::lgamma(j + k + 1.0) - std::lgamma(j + 1.0)); };
                const double expect = m == n ? h(n) : 0.0;
                EXPECT_NEAR(v, expect, 1e-6 * std::max(1.0, std::sqrt(h(m) * h(n)))) << k << " " << m << " " << n;
            }
    EXPECT_NEAR(oracle::simpson([](double s) { return 2 * s * s * s * std::exp(-s * s) * std::pow(laguerre_L(2, 1, s * s), 2); },
                                0, 12, 4000),
                3.0, 3e-6);
}

TEST(ChiBasis, ValuesAndDomain) {
    EXPECT_NEAR(chi_basis(0, 0, 1.2, 0.3).real(), std::exp(-0.72) / std::sqrt(kPi), 1e-15);
    EXPECT_EQ(std::abs(chi_basis(4, 2, 0.0, 1.0)), 0.0);
    for (int m = 0; m <= 12; ++m)
        for (int n = -m; n <= m; n += 2) {
            EXPECT_NEAR(laguerre_radial(m, n, 1.7), oracle::laguerre_radial(m, n, 1.7), 1e-12);
            EXPECT_EQ(laguerre_radial(m, n, 0.9), laguerre_radial(m, -n, 0.9));
        }
    EXPECT_THROW(chi_basis(3, 2, 1.0, 0.0), DomainError);
    EXPECT_THROW(chi_basis(2, 4, 1.0, 0.0), DomainError);
    EXPECT_THROW(chi_basis(2, 0, -1.0, 0.0), DomainError);
    EXPECT_TRUE(std::isfinite(laguerre_radial(120, 2, 8.0)));
}

TEST(ChiBasis, Orthonormality) {
    std::vector<std::pair<int, int>> idx;
    for (int m = 0; m <= 10; ++m)
        for (int n = -m; n <= m; n += 2) idx.emplace_back(m, n);
    // r = s^2 removes the O(h^2) endpoint error of the midpoint rule at r = 0
    const int nr = 1500, nphi = 48;
    const double smax = 3.0, ds = smax / nr;
    Eigen::MatrixXcd G = Eigen::MatrixXcd::Zero(idx.size(), idx.size());
    std::vector<Complex> v(idx.size());
    for (int i = 0; i < nr; ++i) {
        const double s = (i + 0.5) * ds, r = s * s;
        for (int j = 0; j < nphi; ++j) {
            const double phi = j * kTwoPi / nphi;
            for (std::size_t a = 0; a < idx.size(); ++a) v[a] = chi_basis(idx[a].first, idx[a].second, r, phi);
            const double w = r * 2 * s * ds * kTwoPi / nphi;
            for (std::size_t a = 0; a < idx.size(); ++a)
                for (std::size_t b = 0; b < idx.size(); ++b) G(a, b) += w * v[a] * std::conj(v[b]);
        }
    }
    EXPECT_LT((G - Eigen::MatrixXcd::Identity(idx.size(), idx.size())).cwiseAbs().maxCoeff(), 1e-6);
}

TEST(HankelLaguerre, Identity) {
    // int y_kl(r) J_l(p r) r dr = (-1)^{(k-l)/2} y_kl(p)
    for (int k = 0; k <= 8; ++k)
        for (int l = -k; l <= k; l += 2)
            for (double p : {0.3, 1.0, 2.2}) {
                const double v = oracle::simpson(
                    [&](double r) { return laguerre_radial(k, l, r) * bessel_j(l, p * r) * r; }, 0.0, 14.0, 4000);
                EXPECT_NEAR(v, sign_pow((k - l) / 2) * laguerre_radial(k, l, p), 1e-6) << k << " " << l << " " << p;
            }
}

TEST(LaguerreExpansion, IndexingAndEval) {
    EXPECT_EQ(LaguerreFourierExpansion::coefficient_count(3), 10u);
    EXPECT_EQ(LaguerreFourierExpansion::index(0, 0), 0u);
    EXPECT_EQ(LaguerreFourierExpansion::index(2, -2), 3u);
    EXPECT_EQ(LaguerreFourierExpansion::index(3, 3), 9u);
    LaguerreFourierExpansion e(4, 2.0);
    EXPECT_EQ(laguerre_eval(e, 1.0, 0.2), 0.0);
    e(3, 1) = Complex(0.5, 0.0);
    e(3, -1) = Complex(0.5, 0.0);
    EXPECT_NEAR(laguerre_eval(e, 1.4, 0.3), laguerre_radial(3, 1, 0.7) * std::cos(0.3), 1e-14);
    EXPECT_NEAR(laguerre_eval_complex(e, 1.4, 0.3).imag(), 0.0, 1e-15);
}

TEST(LaguerreFit, PlantAndRecoverPair) {
    CartesianImage img(64, 64);
    const auto frame = BasisFrame::for_image(img, 10);
    for (int i = 0; i < 64; ++i)
        for (int j = 0; j < 64; ++j) {
            const double u1 = img.x1(j) / frame.unit, u2 = img.x2(i) / frame.unit;
            const double r = std::hypot(u1, u2), phi = std::atan2(u2, u1);
            img(i, j) = (std::conj(chi_basis(2, 2, r, phi)) + std::conj(chi_basis(2, -2, r, phi))).real();
        }
    const auto fit = laguerre_fit(img, 10, 1.0, frame);
    for (int m = 0; m <= 10; ++m)
        for (int n = -m; n <= m; n += 2) {
            const double expect = (m == 2 && std::abs(n) == 2) ? 1.0 : 0.0;
            EXPECT_NEAR(std::abs(fit.expansion(m, n) - expect), 0.0, 1e-6) << m << " " << n;
        }
    EXPECT_LT(fit.expansion.reality_defect(), 1e-12);
}

TEST(LaguerreFit, RadialImageHasOnlyZeroHarmonic) {
    CartesianImage img(48, 48);
    for (int i = 0; i < 48; ++i)
        for (int j = 0; j < 48; ++j) img(i, j) = std::exp(-(img.x1(j) * img.x1(j) + img.x2(i) * img.x2(i)) / 60.0);
    const auto fit = laguerre_fit(img, 12, 1.0, BasisFrame::for_image(img, 12));
    for (int m = 0; m <= 12; ++m)
        for (int n = -m; n <= m; n += 2)
            if (n != 0) {
                EXPECT_LT(std::abs(fit.expansion(m, n)), 1e-8) << m << " " << n;
            }
}

TEST(LaguerreFit, ComparableToHermite) {
    const auto img = make_phantom(Phantom::RingSpokes);
    const int N = 30;
    const auto frame = BasisFrame::for_image(img, N);
    const auto lf = laguerre_fit(img, N, 1.0, frame);
    const auto hf = hermite_fit(img, N, 1.0, frame);
    EXPECT_LT(lf.residual_rms, 2 * hf.residual_rms);
    EXPECT_LT(hf.residual_rms, 2 * lf.residual_rms);
    EXPECT_LT(lf.expansion.reality_defect(), 1e-8);
    const auto rendered = laguerre_render(lf.expansion, frame, 64, 64, 1.0);
    EXPECT_NEAR(rmse(rendered, img), lf.residual_rms, 1e-12);
}

TEST(LaguerreRotational, ForwardInverse) {
    const auto rho = planted(12, 0.4);
    const auto g = laguerre_rot_forward(rho, 0.05);
    EXPECT_LT(max_coeff_diff(deconv_rotational_laguerre(g, 0.05, 0.0), rho), 1e-10);
    const auto r = deconv_rotational_laguerre(g, 0.05, 1e-3);
    for (int m = 0; m <= 12; m += 2) EXPECT_NEAR(std::abs(r(m, 0) - rho(m, 0) / 1.001), 0.0, 1e-15);
    EXPECT_EQ(r.order, 12);
    EXPECT_EQ(r.scale, rho.scale);
}

TEST(Se2FtLaguerre, SingleCoefficient) {
    LaguerreFourierExpansion e(0, 1.0);
    e(0, 0) = 1.0;
    const auto spec = se2_ft_laguerre(e, {0.0, 0.5, 1.7}, 3);
    EXPECT_TRUE(spec.row_only());
    for (std::size_t k = 0; k < 3; ++k) {
        const double p = spec.p(k);
        EXPECT_NEAR(spec(k, 0, 0).real(), 4 * kPi * kPi / std::sqrt(kPi) * std::exp(-p * p / 2), 1e-13);
        EXPECT_EQ(std::abs(spec(k, 0, 1)), 0.0);
    }
}

TEST(Se2FtLaguerre, MatchesQuadratureTransform) {
    const auto e = planted(8, 1.1);
    PolarImage polar(600, 64, 9.0);
    for (int kr = 0; kr < polar.n_r(); ++kr)
        for (int k = 0; k < polar.n_phi(); ++k) polar(kr, k) = laguerre_eval(e, polar.radius(kr), polar.angle(k));
    const DeconvConfig cfg{1e-3, 10, 30, 4.0};
    const auto numeric = se2_fourier_polar(polar, cfg);
    const auto analytic = se2_ft_laguerre(e, radial_frequencies(cfg), 10);
    const double scale = analytic.max_abs();
    int checked = 0;
    for (std::size_t k = 0; k < numeric.radial_samples(); ++k)
        for (int n = -10; n <= 10; ++n) {
            const Complex ref = analytic(k, 0, n);
            if (std::abs(ref) < 0.01 * scale) continue;
            ++checked;
            EXPECT_LT(std::abs(numeric(k, 0, n) - ref), 1e-3 * std::abs(ref)) << k << " " << n;
        }
    EXPECT_GT(checked, 50);
}

TEST(LaguerreSe2, AlgebraicInverseAndPlantRecovery) {
    const int N = 10;
    const auto rho = planted(N, 0.2);
    const auto params = MotionParams::make(0.2, 0.05);
    // forward refit on a dense grid independent of the inversion samples
    std::vector<double> dense;
    for (int k = 0; k < 80; ++k) dense.push_back(0.03 + 0.06 * k);
    const auto g = laguerre_se2_forward(rho, params, dense);
    EXPECT_NEAR(g.scale, std::sqrt(1.4), 1e-15);
    EXPECT_LT(max_coeff_diff(deconv_se2_laguerre(g, params, 0.0), rho), 1e-10);
    EXPECT_LT(max_coeff_diff(deconv_se2_laguerre(g, params, 1e-8), rho), 1e-3);
}

TEST(LaguerreSe2, IdentityBlurAndPreconditions) {
    const auto rho = planted(8, 0.9);
    const auto r = deconv_se2_laguerre(rho, MotionParams::make(0.0, 0.0), 1e-3);
    for (std::size_t k = 0; k < rho.coeffs.size(); ++k) EXPECT_LT(std::abs(r.coeffs[k] - rho.coeffs[k] / 1.001), 1e-12);
    EXPECT_THROW(deconv_se2_laguerre(rho, MotionParams::make(0.2, 0.0), 1e-3), DomainError);
    EXPECT_THROW(deconv_se2_laguerre(rho, MotionParams::make(0.0, 0.0), 1e-3, std::vector<double>(10, 0.5)),
                 NumericalError);
}

TEST(LaguerreSe2, ForwardMatchesPhysicalBlur) {
    // the refit forward map agrees with Gaussian-blurring the rendered expansion and
    // applying the exact rotational gain per harmonic
    const int N = 8;
    const auto rho = planted(N, 0.5);
    const double t1 = 0.25;
    const auto g = laguerre_se2_forward(rho, MotionParams::make(t1, 0.0), laguerre_p_samples(3 * N));
    const BasisFrame frame{20.0};
    const auto img = laguerre_render(rho, frame, 361, 361, 1.0);
    const auto blurred = exact_blur_translational(img, t1 * frame.unit * frame.unit);
    const auto rendered = laguerre_render(g, frame, 361, 361, 1.0);
    double worst = 0;
    for (int i = 60; i < 301; ++i)
        for (int j = 60; j < 301; ++j) worst = std::max(worst, std::abs(rendered(i, j) - blurred(i, j)));
    EXPECT_LT(worst, 1e-6);
}
