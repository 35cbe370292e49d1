// jitterlink: command-line front end for the misalignment-fading toolkit.
//
// Exit codes: 0 success, 1 I/O or internal failure, 2 validation error, 3 no fit.

#include <CLI11.hpp>

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "jitterlink/error.hpp"
#include "jitterlink/pipeline.hpp"

namespace fs = std::filesystem;
using namespace jitterlink;

namespace {

constexpr int kExitIo = 1;
constexpr int kExitValidation = 2;
constexpr int kExitNoFit = 3;

constexpr double kDegToRad = std::numbers::pi / 180.0;

struct CommonOptions {
    std::string scenario_path;
    std::optional<std::uint64_t> seed;
    std::string out_dir;
};

void add_common(CLI::App* cmd, CommonOptions& common) {
    cmd->add_option("--scenario", common.scenario_path, "Scenario file (INI)")->check(CLI::ExistingFile);
    cmd->add_option("--seed", common.seed, "Override the scenario seed");
    cmd->add_option("--out-dir", common.out_dir, "Output directory (default: scenario output_dir)");
}

// Default scenario when none is given: the 341 m link with no motion.
Scenario resolve_scenario(const CommonOptions& common, bool required) {
    Scenario s;
    if (!common.scenario_path.empty()) {
        s = load_scenario(common.scenario_path);
    } else if (required) {
        throw ValidationError("--scenario is required for this subcommand");
    }
    if (common.seed) s.signal.seed = *common.seed;
    if (!common.out_dir.empty()) s.output_dir = common.out_dir;
    return s;
}

std::vector<FitTarget> parse_targets(const std::vector<std::string>& names) {
    std::vector<FitTarget> out;
    for (const auto& n : names) {
        if (n == "mean") out.push_back(FitTarget::mean);
        else if (n == "variance") out.push_back(FitTarget::variance);
        else if (n == "peak") out.push_back(FitTarget::peak);
        else throw ValidationError("unknown fit target '" + n + "' (expected mean, variance or peak)");
    }
    return out;
}

void print_file(const fs::path& path) { std::cout << "wrote " << path.string() << '\n'; }

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Pointing-jitter misalignment fading: propagation, analytic pdf, simulation and fitting"};
    app.require_subcommand(1);

    CommonOptions common;

    auto* propagate = app.add_subcommand("propagate", "Beam radius, A0 and w_eq at the receiver");
    add_common(propagate, common);

    auto* pdf_cmd = app.add_subcommand("pdf", "Analytic normalized pdf curves over a jitter sweep");
    add_common(pdf_cmd, common);
    std::vector<double> sweep_sigma_deg;
    std::vector<double> sweep_gamma;
    pdf_cmd->add_option("--sigma-theta-deg", sweep_sigma_deg, "Angular jitter levels in degrees");
    pdf_cmd->add_option("--gamma", sweep_gamma, "Jitter levels given as gamma (default 1 2 5 10 20)");

    auto* mc = app.add_subcommand("montecarlo", "Inverse-CDF sampling against the closed forms");
    add_common(mc, common);
    std::optional<double> mc_gamma;
    double mc_a0 = 1.0;
    std::size_t mc_samples = 1'000'000;
    std::size_t mc_bins = kDefaultBinCount;
    mc->add_option("--gamma", mc_gamma, "Shape parameter (default: from a Gaussian scenario)");
    mc->add_option("--a0", mc_a0, "Perfect-alignment fraction A0");
    mc->add_option("--samples", mc_samples, "Sample count");
    mc->add_option("--bins", mc_bins, "Histogram bins");

    auto* simulate = app.add_subcommand("simulate", "Synthesize baseline and jitter captures");
    add_common(simulate, common);

    auto* analyze = app.add_subcommand("analyze", "Envelope, normalize, histogram and fit a capture");
    add_common(analyze, common);
    std::string an_capture;
    std::string an_baseline;
    analyze->add_option("--capture", an_capture, "Jitter capture CSV (default: <out-dir>/capture.csv)");
    analyze->add_option("--baseline", an_baseline, "Baseline capture CSV (default: <out-dir>/baseline.csv)");

    auto* fit = app.add_subcommand("fit", "Fit gamma to mean, variance or peak density");
    add_common(fit, common);
    std::string fit_capture;
    std::string fit_baseline;
    std::string fit_histogram;
    std::optional<double> fit_mean;
    std::optional<double> fit_variance;
    std::optional<double> fit_peak;
    std::vector<std::string> fit_target_names{"mean", "variance", "peak"};
    fit->add_option("--capture", fit_capture, "Jitter capture CSV");
    fit->add_option("--baseline", fit_baseline, "Baseline capture CSV");
    fit->add_option("--histogram", fit_histogram, "Histogram CSV (bin_left,bin_right,density)")->check(CLI::ExistingFile);
    fit->add_option("--mean", fit_mean, "Normalized mean");
    fit->add_option("--variance", fit_variance, "Normalized variance");
    fit->add_option("--peak", fit_peak, "Peak normalized density");
    fit->add_option("--targets", fit_target_names, "Any of mean variance peak")->delimiter(',');

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitValidation;
    }

    try {
        if (*propagate) {
            const auto s = resolve_scenario(common, false);
            const fs::path out = s.output_dir;
            std::cout << run_propagate(s.link, out).str();
            print_file(out / "beam_report.txt");
        } else if (*pdf_cmd) {
            const auto s = resolve_scenario(common, false);
            const auto beam = s.beam();
            std::vector<double> sigmas;
            for (double deg : sweep_sigma_deg) sigmas.push_back(deg * kDegToRad);
            if (sweep_sigma_deg.empty() && sweep_gamma.empty()) sweep_gamma = {1.0, 2.0, 5.0, 10.0, 20.0};
            for (double g : sweep_gamma) sigmas.push_back(sigma_theta_from_gamma(g, beam.w_eq_m, s.link.distance_m()));
            const auto entries = run_pdf_sweep(s.link, sigmas, s.output_dir);
            for (const auto& e : entries) {
                std::cout << "sigma_theta_deg=" << format_double(e.sigma_theta_rad / kDegToRad)
                          << " gamma=" << format_double(e.gamma) << '\n';
            }
            print_file(s.output_dir / "pdf_sweep.csv");
        } else if (*mc) {
            const auto s = resolve_scenario(common, false);
            if (!mc_gamma) mc_gamma = gaussian_gamma(s);
            if (!mc_gamma) throw ValidationError("montecarlo needs --gamma or a Gaussian-motion scenario");
            const auto report = run_montecarlo(MisalignmentModel(*mc_gamma, mc_a0), mc_samples, s.signal.seed, mc_bins,
                                               s.output_dir);
            std::cout << report.str();
            print_file(s.output_dir / "montecarlo_report.txt");
        } else if (*simulate) {
            const auto s = resolve_scenario(common, true);
            const auto products = run_simulate(s, s.output_dir);
            for (const auto& p : {products.capture, products.baseline, products.pointing, products.envelope,
                                  products.report}) {
                print_file(p);
            }
        } else if (*analyze) {
            const auto s = resolve_scenario(common, false);
            const fs::path capture = an_capture.empty() ? s.output_dir / "capture.csv" : fs::path(an_capture);
            const fs::path baseline = an_baseline.empty() ? s.output_dir / "baseline.csv" : fs::path(an_baseline);
            const auto result = run_analyze(s, capture, baseline, s.output_dir);
            std::cout << "modes=" << result.modes.size() << " mean=" << format_double(result.stats.mean)
                      << " variance=" << format_double(result.stats.variance)
                      << " analytic_fit_failure=" << (result.analytic_fit_failure ? "true" : "false") << '\n';
            print_file(s.output_dir / "analysis_report.txt");
        } else if (*fit) {
            const auto s = resolve_scenario(common, false);
            if (fit->count("--targets") == 0 && fit_capture.empty() && fit_histogram.empty()) {
                fit_target_names.clear();
                if (fit_mean) fit_target_names.push_back("mean");
                if (fit_variance) fit_target_names.push_back("variance");
                if (fit_peak) fit_target_names.push_back("peak");
                if (fit_target_names.empty()) {
                    throw ValidationError("fit needs --capture/--baseline, --histogram, or --mean/--variance/--peak");
                }
            }
            const auto targets = parse_targets(fit_target_names);
            const auto geometry = s.fit_geometry();
            std::vector<FitOutcome> outcomes;
            if (!fit_capture.empty()) {
                if (fit_baseline.empty()) throw ValidationError("--capture needs --baseline");
                auto r = analyze_captures(fit_capture, fit_baseline, s.analysis, geometry);
                outcomes = fit_targets(targets, r.stats.mean, r.stats.variance, r.peak_density, geometry);
                for (auto& o : outcomes) {
                    if (o.fit) o.ks = ks_distance(r.normalized, MisalignmentModel(o.fit->gamma, 1.0));
                }
            } else if (!fit_histogram.empty()) {
                const auto hist = read_histogram_csv(fit_histogram);
                double m = 0.0;
                double m2 = 0.0;
                for (std::size_t i = 0; i < hist.bin_count(); ++i) {
                    const double mass = hist.densities[i] * (hist.bin_edges[i + 1] - hist.bin_edges[i]);
                    const double c = hist.bin_center(i);
                    m += mass * c;
                    m2 += mass * c * c;
                }
                outcomes = fit_targets(targets, m, m2 - m * m, peak_density(hist), geometry);
            } else {
                outcomes = fit_targets(targets, fit_mean, fit_variance, fit_peak, geometry);
            }
            write_fit_report(outcomes, s.output_dir);
            bool any_failure = false;
            for (const auto& o : outcomes) {
                if (o.fit) {
                    std::cout << to_string(o.target) << ": gamma=" << format_double(o.fit->gamma);
                    if (o.fit->sigma_theta_rad) {
                        std::cout << " sigma_theta_deg=" << format_double(*o.fit->sigma_theta_rad / kDegToRad);
                    }
                    std::cout << '\n';
                } else {
                    any_failure = true;
                    std::cout << to_string(o.target) << ": no finite fit (" << o.failure << ")\n";
                }
            }
            print_file(s.output_dir / "fit_report.txt");
            if (any_failure) return kExitNoFit;
        }
    } catch (const NoFitError& e) {
        std::cerr << "no fit: " << e.what() << '\n';
        return kExitNoFit;
    } catch (const ValidationError& e) {
        std::cerr << "validation error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitIo;
    }
    return 0;
}
