#pragma once

// Method dispatch for deblurring a Cartesian image with any of the six
// pipelines. Expansion methods fit the blurred image once and reuse the fit
// across a list of regularisation values; the SE(2) method likewise reuses its
// forward spectrum.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "motionblur/basis_frame.hpp"
#include "motionblur/error.hpp"
#include "motionblur/fourier_deconv.hpp"
#include "motionblur/hermite.hpp"
#include "motionblur/image.hpp"
#include "motionblur/kernels.hpp"
#include "motionblur/laguerre.hpp"
#include "motionblur/se2.hpp"

namespace motionblur {

enum class Method { Wiener, Circ, Se2, Hermite, LaguerreRot, LaguerreSe2 };

inline constexpr Method kAllMethods[] = {Method::Wiener,  Method::Circ,        Method::Se2,
                                         Method::Hermite, Method::LaguerreRot, Method::LaguerreSe2};

inline std::string_view method_name(Method m) {
    switch (m) {
        case Method::Wiener: return "wiener";
        case Method::Circ: return "circ";
        case Method::Se2: return "se2";
        case Method::Hermite: return "hermite";
        case Method::LaguerreRot: return "laguerre-rot";
        case Method::LaguerreSe2: return "laguerre-se2";
    }
    return "?";
}

inline std::optional<Method> parse_method(std::string_view name) {
    for (Method m : kAllMethods)
        if (method_name(m) == name) return m;
    return std::nullopt;
}

inline bool is_expansion_method(Method m) {
    return m == Method::Hermite || m == Method::LaguerreRot || m == Method::LaguerreSe2;
}

/// Method-specific settings. Zero means "derive from the image".
struct DeblurOptions {
    int order = 40;          // N, expansion methods
    int band_limit = 0;      // B, se2
    int radial_samples = 0;  // M, se2
    double p_max = 0.0;      // se2
    double basis_c = 0.9;    // half-width maps to c sqrt(2N+1)

    DeconvConfig se2_config(const CartesianImage& img, double epsilon) const {
        auto cfg = DeconvConfig::for_image(img, epsilon);
        if (band_limit > 0) cfg.band_limit = band_limit;
        if (radial_samples > 0) cfg.radial_samples = radial_samples;
        if (p_max > 0.0) cfg.p_max = p_max;
        return cfg;
    }
};

struct DeblurResult {
    double epsilon = 0.0;
    CartesianImage image;
    std::optional<double> fit_residual;  // RMS residual of the expansion fit
};

namespace detail {

inline void check_epsilons(Method method, const std::vector<double>& eps) {
    require(!eps.empty(), "at least one epsilon is required");
    for (double e : eps) {
        require(std::isfinite(e), "epsilon must be finite");
        if (is_expansion_method(method))
            require(e >= 0.0, "epsilon must be >= 0");
        else
            require(e > 0.0, "epsilon must be > 0 for Fourier methods");
    }
}

}  // namespace detail

/// Deblurs `blurred` once per entry of `epsilons`, in order, handing each result
/// to `sink` as soon as it is ready.
inline void deblur_each(const CartesianImage& blurred, Method method, const MotionParams& params,
                        const std::vector<double>& epsilons, const DeblurOptions& opts,
                        const std::function<void(DeblurResult&&)>& sink) {
    params.validate();
    detail::check_epsilons(method, epsilons);
    const int w = blurred.width(), h = blurred.height();
    const double pitch = blurred.pitch();
    auto emit = [&](double e, CartesianImage img, std::optional<double> residual) {
        sink(DeblurResult{e, std::move(img), residual});
    };

    switch (method) {
        case Method::Wiener:
            for (double e : epsilons) emit(e, deconv_translational(blurred, params.t1, e), {});
            break;
        case Method::Circ: {
            const auto grid = default_polar_grid(blurred);
            const auto polar = cartesian_to_polar(blurred, grid);
            for (double e : epsilons)
                emit(e, polar_to_cartesian(deconv_rotational(polar, params.t2, e), w, h, pitch), {});
            break;
        }
        case Method::Se2: {
            const auto grid = default_polar_grid(blurred);
            const auto cfg = opts.se2_config(blurred, epsilons.front());
            cfg.validate();
            const auto spec = se2_fourier_image(blurred, cfg, grid);
            for (double e : epsilons) {
                auto s = spec;
                apply_se2_wiener(s, params, e);
                emit(e, se2_fourier_inverse_image(s, w, h, pitch, grid), {});
            }
            break;
        }
        case Method::Hermite: {
            const auto frame = BasisFrame::for_image(blurred, opts.order, opts.basis_c);
            const double t = frame.to_basis_time(params.t1);
            const auto fit = hermite_fit(blurred, opts.order, blur_scale(t), frame);
            for (double e : epsilons)
                emit(e, hermite_render(deconv_translational_hermite(fit.expansion, t, e), frame, w, h, pitch),
                     fit.residual_rms);
            break;
        }
        case Method::LaguerreRot: {
            const auto frame = BasisFrame::for_image(blurred, opts.order, opts.basis_c);
            const auto fit = laguerre_fit(blurred, opts.order, 1.0, frame);
            for (double e : epsilons)
                emit(e, laguerre_render(deconv_rotational_laguerre(fit.expansion, params.t2, e), frame, w, h, pitch),
                     fit.residual_rms);
            break;
        }
        case Method::LaguerreSe2: {
            const auto frame = BasisFrame::for_image(blurred, opts.order, opts.basis_c);
            MotionParams basis = params;
            basis.t1 = frame.to_basis_time(params.t1);
            const auto fit = laguerre_fit(blurred, opts.order, blur_scale(basis.t1), frame);
            for (double e : epsilons)
                emit(e, laguerre_render(deconv_se2_laguerre(fit.expansion, basis, e), frame, w, h, pitch),
                     fit.residual_rms);
            break;
        }
    }
}

inline std::vector<DeblurResult> deblur_sweep(const CartesianImage& blurred, Method method,
                                              const MotionParams& params, const std::vector<double>& epsilons,
                                              const DeblurOptions& opts = {}) {
    std::vector<DeblurResult> out;
    deblur_each(blurred, method, params, epsilons, opts, [&](DeblurResult&& r) { out.push_back(std::move(r)); });
    return out;
}

inline DeblurResult deblur(const CartesianImage& blurred, Method method, const MotionParams& params, double epsilon,
                           const DeblurOptions& opts = {}) {
    return std::move(deblur_sweep(blurred, method, params, {epsilon}, opts).front());
}

struct SweepRow {
    double epsilon;
    double rmse;
    double psnr;
};

/// Scores a result against `reference`; the PSNR peak is the reference range.
inline SweepRow score_result(const DeblurResult& run, const CartesianImage& reference) {
    const double peak = reference.range() > 0.0 ? reference.range() : 1.0;
    return {run.epsilon, rmse(run.image, reference), psnr(run.image, reference, peak)};
}

inline std::vector<SweepRow> score_sweep(const std::vector<DeblurResult>& runs, const CartesianImage& reference) {
    std::vector<SweepRow> rows;
    for (const auto& r : runs) rows.push_back(score_result(r, reference));
    return rows;
}

inline std::size_t argmin_rmse(const std::vector<SweepRow>& rows) {
    require(!rows.empty(), "argmin_rmse: empty sweep");
    std::size_t best = 0;
    for (std::size_t i = 1; i < rows.size(); ++i)
        if (rows[i].rmse < rows[best].rmse) best = i;
    return best;
}

}  // namespace motionblur
