// motionblur: synthesise motion-blurred images and deblur them with any of the
// Fourier or expansion pipelines. One JSON record per line on stdout.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "motionblur/motionblur.hpp"

namespace mb = motionblur;
using json = nlohmann::ordered_json;

namespace {

constexpr int kSchemaVersion = 1;

json record(const std::string& command) { return json{{"schema_version", kSchemaVersion}, {"command", command}}; }

void emit(const json& j) { std::cout << j.dump() << std::endl; }

struct MotionFlags {
    double t1 = 0.0;
    double t2 = 0.0;
    int series_cutoff = 0;  // 0: derive from t2

    void add(CLI::App* app) {
        app->add_option("--t1", t1, "translational diffusion time (length^2)");
        app->add_option("--t2", t2, "rotational diffusion time (rad^2)");
        app->add_option("--series-cutoff", series_cutoff, "wrapped-Gaussian series cutoff K (default: derived)");
    }

    mb::MotionParams params() const {
        auto p = mb::MotionParams::make(t1, t2);
        if (series_cutoff > 0) p.series_cutoff = series_cutoff;
        p.validate();
        return p;
    }
};

struct MethodFlags {
    std::string method;
    mb::DeblurOptions opts;

    void add(CLI::App* app) {
        app->add_option("--method", method, "wiener | circ | se2 | hermite | laguerre-rot | laguerre-se2")->required();
        app->add_option("--order", opts.order, "expansion order N");
        app->add_option("--band-limit", opts.band_limit, "SE(2) band limit B (default n_phi/4)");
        app->add_option("--radial-samples", opts.radial_samples, "SE(2) radial sample count M (default 2 max(w,h))");
        app->add_option("--p-max", opts.p_max, "SE(2) largest radial frequency (default pi/pitch)");
    }

    mb::Method parsed() const {
        const auto m = mb::parse_method(method);
        mb::require(m.has_value(), "unknown method '" + method + "'");
        return *m;
    }
};

void add_params(json& j, const mb::MotionParams& p) {
    j["t1"] = p.t1;
    j["t2"] = p.t2;
    j["series_cutoff"] = p.series_cutoff;
}

int run_blur(const std::string& input, const std::string& output, const MotionFlags& mf, const std::string& mode,
             int n_samples, std::uint64_t seed, double noise) {
    const auto params = mf.params();
    mb::require(mode == "mc" || mode == "exact", "mode must be 'mc' or 'exact'");
    const auto img = mb::load_image(input);
    auto out = mode == "mc" ? mb::monte_carlo_blur(img, params, n_samples, seed) : mb::exact_blur_se2(img, params, mb::BlurOrder::TranslateThenRotate);
    out = mb::add_noise(out, noise, seed ^ 0x9e3779b97f4a7c15ULL);
    mb::save_image(out, output);
    auto j = record("blur");
    j["mode"] = mode;
    add_params(j, params);
    j["n_samples"] = mode == "mc" ? n_samples : 0;
    j["seed"] = seed;
    j["noise_sigma"] = noise;
    j["rmse_vs_input"] = mb::rmse(out, img);
    j["output"] = output;
    emit(j);
    return 0;
}

int run_deblur(const std::string& input, const std::string& output, const MotionFlags& mf, const MethodFlags& meth,
               double epsilon, const std::string& reference) {
    const auto params = mf.params();
    const auto method = meth.parsed();
    const auto blurred = mb::load_image(input);
    std::optional<mb::CartesianImage> ref;
    if (!reference.empty()) ref = mb::load_image(reference);
    const auto res = mb::deblur(blurred, method, params, epsilon, meth.opts);
    mb::save_image(res.image, output);
    auto j = record("deblur");
    j["method"] = mb::method_name(method);
    j["epsilon"] = epsilon;
    add_params(j, params);
    if (mb::is_expansion_method(method)) {
        j["order"] = meth.opts.order;
        j["fit_residual_rms"] = *res.fit_residual;
    }
    if (ref) {
        j["rmse_vs_reference"] = mb::rmse(res.image, *ref);
        j["blurred_rmse_vs_reference"] = mb::rmse(blurred, *ref);
    }
    j["output"] = output;
    emit(j);
    return 0;
}

void write_report(const json& rows, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw mb::IoError("cannot open " + path + " for writing");
    out << rows.dump(2) << '\n';
    if (!out) throw mb::IoError("report write failed: " + path);
}

int run_sweep(const std::string& input, const std::string& reference, const std::string& report,
              const MotionFlags& mf, const MethodFlags& meth, const std::vector<double>& epsilons) {
    const auto params = mf.params();
    const auto method = meth.parsed();
    const auto blurred = mb::load_image(input);
    const auto ref = mb::load_image(reference);
    json rows = json::array();
    std::vector<mb::SweepRow> scored;
    auto row_json = [&](const mb::SweepRow& r) {
        json j{{"schema_version", kSchemaVersion}, {"epsilon", r.epsilon}, {"rmse", r.rmse}, {"psnr", r.psnr}};
        return j;
    };
    try {
        mb::deblur_each(blurred, method, params, epsilons, meth.opts, [&](mb::DeblurResult&& r) {
            scored.push_back(mb::score_result(r, ref));
            rows.push_back(row_json(scored.back()));
        });
    } catch (...) {
        write_report(rows, report);
        throw;
    }
    const auto best = mb::argmin_rmse(scored);
    for (std::size_t i = 0; i < rows.size(); ++i) rows[i]["best"] = i == best;
    write_report(rows, report);
    auto j = record("sweep");
    j["method"] = mb::method_name(method);
    add_params(j, params);
    j["rows"] = rows.size();
    j["best_epsilon"] = scored[best].epsilon;
    j["best_rmse"] = scored[best].rmse;
    j["blurred_rmse"] = mb::rmse(blurred, ref);
    j["report"] = report;
    emit(j);
    return 0;
}

int run_selftest(bool corrupt) {
    mb::SelfTestOptions opts;
    if (corrupt) opts.perturb = mb::BesselPerturbation{};
    bool ok = true;
    for (const auto& c : mb::run_selftest(opts)) {
        auto j = record("selftest");
        j["check"] = c.name;
        j["pass"] = c.pass();
        j["error"] = c.error;
        j["tolerance"] = c.tolerance;
        j["seconds"] = c.seconds;
        emit(j);
        ok = ok && c.pass();
    }
    auto j = record("selftest");
    j["pass"] = ok;
    emit(j);
    return ok ? 0 : 3;
}

int run_phantom(const std::string& kind, int width, int height, double pitch, const std::string& output) {
    const auto p = mb::parse_phantom(kind);
    mb::require(p.has_value(), "unknown phantom '" + kind + "' (blobs | ellipses | ring-spokes)");
    mb::require(width >= 1 && height >= 1 && pitch > 0.0, "phantom grid must be positive");
    const auto img = mb::make_phantom(*p, width, height, pitch);
    mb::save_image(img, output);
    auto j = record("phantom");
    j["kind"] = mb::phantom_name(*p);
    j["width"] = width;
    j["height"] = height;
    j["pitch"] = pitch;
    j["output"] = output;
    emit(j);
    return 0;
}

int run_fit(const std::string& input, const std::string& output, const std::string& basis, int order, double t1,
            double c) {
    mb::require(basis == "hermite" || basis == "laguerre", "basis must be 'hermite' or 'laguerre'");
    mb::require(t1 >= 0.0, "t1 must be >= 0");
    const auto img = mb::load_image(input);
    const auto frame = mb::BasisFrame::for_image(img, order, c);
    const double a = mb::blur_scale(frame.to_basis_time(t1));
    std::ofstream out(output);
    if (!out) throw mb::IoError("cannot open " + output + " for writing");
    double residual;
    if (basis == "hermite") {
        const auto fit = mb::hermite_fit(img, order, a, frame);
        mb::write_hermite(fit.expansion, out);
        residual = fit.residual_rms;
    } else {
        const auto fit = mb::laguerre_fit(img, order, a, frame);
        mb::write_laguerre(fit.expansion, out);
        residual = fit.residual_rms;
    }
    if (!out) throw mb::IoError("expansion write failed: " + output);
    auto j = record("fit");
    j["basis"] = basis;
    j["order"] = order;
    j["scale"] = a;
    j["basis_unit"] = frame.unit;
    j["residual_rms"] = residual;
    j["output"] = output;
    emit(j);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Motion-blur synthesis and deconvolution on the Euclidean motion group"};
    app.require_subcommand(1);

    std::string input, output, reference, report, mode = "mc", kind = "blobs", basis = "hermite";
    int n_samples = 100, width = 64, height = 64, order = 40;
    std::uint64_t seed = 0;
    double noise = 0.0, epsilon = 1e-3, pitch = 1.0, basis_c = 0.9, fit_t1 = 0.0;
    std::vector<double> epsilons;
    bool corrupt = false;
    MotionFlags blur_motion, deblur_motion, sweep_motion;
    MethodFlags deblur_method, sweep_method;

    auto* blur = app.add_subcommand("blur", "average randomly moved copies (mc) or convolve exactly (exact)");
    blur->add_option("--input", input, "input image (.pgm or FIMG)")->required();
    blur->add_option("--output", output, "output image")->required();
    blur_motion.add(blur);
    blur->add_option("--mode", mode, "mc | exact");
    blur->add_option("--samples", n_samples, "Monte-Carlo sample count");
    blur->add_option("--seed", seed, "random seed");
    blur->add_option("--noise", noise, "additive Gaussian noise sigma");

    auto* deblur = app.add_subcommand("deblur", "deblur with one method and one epsilon");
    deblur->add_option("--input", input, "blurred image")->required();
    deblur->add_option("--output", output, "deblurred image")->required();
    deblur->add_option("--reference", reference, "sharp reference image for scoring");
    deblur->add_option("--epsilon", epsilon, "regularisation parameter");
    deblur_motion.add(deblur);
    deblur_method.add(deblur);

    auto* sweep = app.add_subcommand("sweep", "deblur over a list of epsilons and score against a reference");
    sweep->add_option("--input", input, "blurred image")->required();
    sweep->add_option("--reference", reference, "sharp reference image")->required();
    sweep->add_option("--report", report, "JSON report path")->required();
    sweep->add_option("--epsilon", epsilons, "regularisation values")->required()->expected(1, -1);
    sweep_motion.add(sweep);
    sweep_method.add(sweep);

    auto* selftest = app.add_subcommand("selftest", "run the analytic invariant checks");
    selftest->add_flag("--corrupt-bessel-table", corrupt, "debug: perturb one Bessel table entry");

    auto* phantom = app.add_subcommand("phantom", "write a synthetic test image");
    phantom->add_option("--kind", kind, "blobs | ellipses | ring-spokes");
    phantom->add_option("--width", width);
    phantom->add_option("--height", height);
    phantom->add_option("--pitch", pitch);
    phantom->add_option("--output", output, "output image")->required();

    auto* fit = app.add_subcommand("fit", "least-squares expansion fit written as HEXP / LFEXP text");
    fit->add_option("--input", input, "image")->required();
    fit->add_option("--output", output, "expansion text file")->required();
    fit->add_option("--basis", basis, "hermite | laguerre");
    fit->add_option("--order", order, "expansion order N");
    fit->add_option("--t1", fit_t1, "translational diffusion time; fits at scale sqrt(2t+1)");
    fit->add_option("--basis-c", basis_c, "half-width maps to c sqrt(2N+1)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    try {
        if (*blur) return run_blur(input, output, blur_motion, mode, n_samples, seed, noise);
        if (*deblur) return run_deblur(input, output, deblur_motion, deblur_method, epsilon, reference);
        if (*sweep) return run_sweep(input, reference, report, sweep_motion, sweep_method, epsilons);
        if (*selftest) return run_selftest(corrupt);
        if (*phantom) return run_phantom(kind, width, height, pitch, output);
        if (*fit) return run_fit(input, output, basis, order, fit_t1, basis_c);
    } catch (const mb::DomainError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const mb::IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const mb::NumericalError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
    return 1;
}
