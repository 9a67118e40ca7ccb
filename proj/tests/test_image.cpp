#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <sstream>

#include "motionblur/image.hpp"
#include "motionblur/image_io.hpp"
#include "motionblur/phantom.hpp"

using namespace motionblur;

namespace {

CartesianImage bump(int n, double sigma, double cx = 0.0, double cy = 0.0) {
    CartesianImage img(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const double dx = img.x1(j) - cx, dy = img.x2(i) - cy;
            img(i, j) = std::exp(-(dx * dx + dy * dy) / (2 * sigma * sigma));
        }
    return img;
}

double interior_rmse(const CartesianImage& a, const CartesianImage& b, int margin) {
    double s = 0;
    int n = 0;
    for (int i = margin; i < a.height() - margin; ++i)
        for (int j = margin; j < a.width() - margin; ++j) {
            s += (a(i, j) - b(i, j)) * (a(i, j) - b(i, j));
            ++n;
        }
    return std::sqrt(s / n);
}

double disk_rmse(const CartesianImage& a, const CartesianImage& b, double radius) {
    double s = 0;
    int n = 0;
    for (int i = 0; i < a.height(); ++i)
        for (int j = 0; j < a.width(); ++j)
            if (std::hypot(a.x1(j), a.x2(i)) <= radius) {
                s += (a(i, j) - b(i, j)) * (a(i, j) - b(i, j));
                ++n;
            }
    return std::sqrt(s / n);
}

}  // namespace

TEST(CartesianImage, Coordinates) {
    CartesianImage img(4, 3, 0.5);
    EXPECT_DOUBLE_EQ(img.x1(0), -0.75);
    EXPECT_DOUBLE_EQ(img.x1(3), 0.75);
    EXPECT_DOUBLE_EQ(img.x2(0), 0.5);
    EXPECT_DOUBLE_EQ(img.x2(2), -0.5);
    EXPECT_THROW(CartesianImage(0, 3), DomainError);
    EXPECT_THROW(CartesianImage(2, 2, 1.0, std::vector<double>{1, 2, 3}), DomainError);
    EXPECT_THROW(CartesianImage(1, 1, 1.0, std::vector<double>{NAN}), DomainError);
}

TEST(TransformImage, IdentityIsExact) {
    const auto img = make_phantom(Phantom::Ellipses, 37, 29, 0.7);
    const auto out = transform_image(img, RigidMotion::identity());
    for (std::size_t k = 0; k < img.size(); ++k) ASSERT_EQ(out.values()[k], img.values()[k]);
}

TEST(TransformImage, IntegerShiftIsIndexShift) {
    const auto img = make_phantom(Phantom::Blobs, 32, 32);
    const auto out = transform_image(img, RigidMotion(3.0, -2.0, 0.0));
    for (int i = 0; i < 32; ++i)
        for (int j = 0; j < 32; ++j) {
            // x1 grows with j, x2 grows with -i: dy = -2 moves content two rows down
            const int si = i - 2, sj = j - 3;
            const double expect = (si >= 0 && si < 32 && sj >= 0 && sj < 32) ? img(si, sj) : 0.0;
            ASSERT_NEAR(out(i, j), expect, 1e-14) << i << "," << j;
        }
}

TEST(TransformImage, RoundTripAndComposition) {
    const auto img = bump(48, 5.0, 2.0, -1.0);
    const RigidMotion g(1.3, -0.7, 0.4), h(-0.6, 2.1, -0.9);
    const auto back = transform_image(transform_image(img, g), g.inverse());
    EXPECT_LT(interior_rmse(back, img, 2), 0.02 * img.range());
    const auto twice = transform_image(transform_image(img, h), g);
    const auto once = transform_image(img, g.compose(h));
    EXPECT_LT(interior_rmse(twice, once, 2), 0.04 * img.range());
}

TEST(TransformImage, RotationMovesPointCounterclockwise) {
    CartesianImage img(33, 33);
    img(16, 26) = 1.0;  // x = (10, 0)
    const auto out = transform_image(img, RigidMotion(0, 0, kPi / 2));
    EXPECT_NEAR(out(6, 16), 1.0, 1e-12);  // x = (0, 10)
}

TEST(TransformImage, Linear) {
    const auto u = make_phantom(Phantom::Blobs, 24, 24), v = make_phantom(Phantom::RingSpokes, 24, 24);
    const RigidMotion g(0.3, 0.9, 0.2);
    const auto lhs = transform_image(2.0 * u + (-3.0) * v, g);
    const auto rhs = 2.0 * transform_image(u, g) + (-3.0) * transform_image(v, g);
    for (std::size_t k = 0; k < lhs.size(); ++k) EXPECT_NEAR(lhs.values()[k], rhs.values()[k], 1e-14);
}

TEST(Polar, GridValidation) {
    EXPECT_THROW(PolarImage(4, 5, 1.0), DomainError);
    EXPECT_THROW(PolarImage(4, 2, 1.0), DomainError);
    EXPECT_THROW(PolarImage(0, 8, 1.0), DomainError);
    PolarImage p(4, 8, 2.0);
    EXPECT_DOUBLE_EQ(p.radius(0), 0.25);
    EXPECT_DOUBLE_EQ(p.angle(2), kPi / 2);
}

TEST(Polar, RadialSymmetryAndConstant) {
    const auto img = bump(64, 6.0);
    const auto polar = cartesian_to_polar(img, 32, 128, 28.0);
    for (int kr = 0; kr < polar.n_r(); ++kr) {
        double lo = 1e9, hi = -1e9;
        for (double v : polar.ring(kr)) lo = std::min(lo, v), hi = std::max(hi, v);
        EXPECT_LT(hi - lo, 0.01 * img.range()) << kr;
    }
    const CartesianImage c(40, 40, 1.0, 0.7);
    const auto pc = cartesian_to_polar(c, 16, 64, 18.0);
    for (double v : pc.values()) EXPECT_NEAR(v, 0.7, 1e-14);
    const auto back = polar_to_cartesian(PolarImage(8, 16, 10.0, 0.3), 30, 30, 1.0);
    for (int i = 0; i < 30; ++i)
        for (int j = 0; j < 30; ++j) {
            const double r = std::hypot(back.x1(j), back.x2(i));
            EXPECT_NEAR(back(i, j), r <= 10.0 ? 0.3 : 0.0, 1e-14);
        }
}

TEST(Polar, RoundTrip) {
    for (auto kind : {Phantom::Blobs, Phantom::Ellipses, Phantom::RingSpokes}) {
        const auto img = make_phantom(kind);
        const auto grid = default_polar_grid(img);
        const auto back = polar_to_cartesian(cartesian_to_polar(img, grid), 64, 64, 1.0);
        EXPECT_LT(disk_rmse(back, img, 31.5), 0.03 * img.range()) << phantom_name(kind);
        EXPECT_NEAR(back.sum(), img.sum(), 0.02 * img.sum());
    }
}

TEST(Polar, RingImpulseMapsToAnnulus) {
    PolarImage p(20, 64, 20.0);
    for (double& v : p.ring(9)) v = 1.0;  // r = 9.5
    const auto img = polar_to_cartesian(p, 41, 41, 1.0);
    double wsum = 0, rsum = 0, cx = 0, cy = 0;
    for (int i = 0; i < 41; ++i)
        for (int j = 0; j < 41; ++j) {
            const double w = img(i, j);
            wsum += w;
            rsum += w * std::hypot(img.x1(j), img.x2(i));
            cx += w * img.x1(j);
            cy += w * img.x2(i);
        }
    EXPECT_NEAR(rsum / wsum, 9.5, 0.05);
    EXPECT_NEAR(cx / wsum, 0.0, 1e-10);
    EXPECT_NEAR(cy / wsum, 0.0, 1e-10);
}

TEST(Metrics, RmsePsnr) {
    const CartesianImage z(5, 5), c(5, 5, 1.0, -0.3);
    const auto img = make_phantom(Phantom::Blobs, 5, 5);
    EXPECT_EQ(rmse(img, img), 0.0);
    EXPECT_NEAR(rmse(z, c), 0.3, 1e-15);
    EXPECT_NEAR(psnr(z, c, 0.3), 0.0, 1e-12);
    EXPECT_THROW(rmse(z, CartesianImage(5, 4)), DomainError);
}

TEST(Pgm, AsciiExample) {
    std::istringstream in("P2\n# comment\n2 2\n255\n0 255\n128 64\n");
    const auto img = read_pgm(in);
    ASSERT_EQ(img.width(), 2);
    EXPECT_EQ(img(0, 0), 0.0);
    EXPECT_EQ(img(0, 1), 1.0);
    EXPECT_DOUBLE_EQ(img(1, 0), 128.0 / 255);
    EXPECT_DOUBLE_EQ(img(1, 1), 64.0 / 255);
}

TEST(Pgm, RoundTripBothEncodings) {
    const auto img = make_phantom(Phantom::Ellipses, 20, 17);
    std::stringstream bin, asc;
    write_pgm(img, bin, PgmEncoding::Binary);
    write_pgm(img, asc, PgmEncoding::Ascii);
    const auto a = read_pgm(bin), b = read_pgm(asc);
    for (std::size_t k = 0; k < img.size(); ++k) {
        EXPECT_LE(std::abs(a.values()[k] - img.values()[k]), 1.0 / 510 + 1e-15);
        EXPECT_EQ(a.values()[k], b.values()[k]);
    }
}

TEST(Pgm, RescaleAndClamp) {
    const CartesianImage img(2, 1, 1.0, std::vector<double>{-1.0, 3.0});
    std::stringstream s1, s2;
    write_pgm(img, s1, PgmEncoding::Ascii, PgmScaling::Clamp);
    write_pgm(img, s2, PgmEncoding::Ascii, PgmScaling::Rescale);
    const auto c = read_pgm(s1), r = read_pgm(s2);
    EXPECT_EQ(c(0, 0), 0.0);
    EXPECT_EQ(c(0, 1), 1.0);
    EXPECT_EQ(r(0, 0), 0.0);
    EXPECT_EQ(r(0, 1), 1.0);
}

TEST(Pgm, DistinctErrors) {
    auto kind_of = [](const std::string& text) {
        std::istringstream in(text);
        try {
            read_pgm(in);
        } catch (const PgmError& e) {
            return static_cast<int>(e.kind());
        }
        return -1;
    };
    EXPECT_EQ(kind_of("P3\n2 2\n255\n"), int(PgmError::Kind::MalformedHeader));
    EXPECT_EQ(kind_of("P2\n2 x\n255\n"), int(PgmError::Kind::MalformedHeader));
    EXPECT_EQ(kind_of("P2\n2 2\n65535\n0 0 0 0"), int(PgmError::Kind::UnsupportedMaxval));
    EXPECT_EQ(kind_of("P2\n2 2\n255\n0 1 2"), int(PgmError::Kind::IoFailure));
    EXPECT_EQ(kind_of("P5\n2 2\n255\n\x01\x02"), int(PgmError::Kind::IoFailure));
    try {
        load_pgm("/nonexistent/x.pgm");
        FAIL();
    } catch (const PgmError& e) {
        EXPECT_EQ(e.kind(), PgmError::Kind::IoFailure);
    }
}

TEST(Fimg, LosslessRoundTrip) {
    const auto img = make_phantom(Phantom::RingSpokes, 13, 11, 0.37);
    std::stringstream s;
    write_fimg(img, s);
    const auto back = read_fimg(s);
    EXPECT_EQ(back.pitch(), img.pitch());
    for (std::size_t k = 0; k < img.size(); ++k) EXPECT_EQ(back.values()[k], img.values()[k]);
    std::istringstream bad("FIMG 2 2 1\n1 2 3");
    EXPECT_THROW(read_fimg(bad), IoError);
}

TEST(Fimg, DispatchOnExtension) {
    const auto dir = std::filesystem::temp_directory_path();
    const auto img = make_phantom(Phantom::Blobs, 8, 8);
    save_image(img, dir / "mb_test.fimg");
    save_image(img, dir / "mb_test.pgm");
    EXPECT_EQ(rmse(load_image(dir / "mb_test.fimg"), img), 0.0);
    EXPECT_LE(rmse(load_image(dir / "mb_test.pgm"), img), 1.0 / 510);
}
