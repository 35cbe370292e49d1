#include "jitterlink/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "jitterlink/error.hpp"
#include "jitterlink/rng.hpp"

namespace jitterlink {
namespace {

constexpr double kRadToDeg = 180.0 / std::numbers::pi;

std::string join(std::span<const double> values, char sep = ',') {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out += sep;
        out += format_double(values[i]);
    }
    return out;
}

std::string prefix(FitTarget target) { return "fit." + std::string(to_string(target)) + "."; }

}  // namespace

MotionSpec baseline_motion(const MotionSpec& motion) {
    MotionSpec still;
    still.kind = MotionKind::driven;
    still.bias_az_rad = motion.bias_az_rad;
    still.bias_el_rad = motion.bias_el_rad;
    return still;
}

PointingTrace scenario_gain_trace(const Scenario& scenario, const MotionSpec& motion) {
    auto trace = synthesize_pointing(motion, scenario.signal.duration_s, scenario.motion_rate_hz,
                                     split_seed(scenario.signal.seed, streams::kMotion));
    return gain_trace(std::move(trace), scenario.beam(), scenario.link.distance_m());
}

std::optional<double> gaussian_gamma(const Scenario& scenario) {
    const auto& m = scenario.motion;
    if (m.kind != MotionKind::gaussian || m.gaussian_sigma_az_rad <= 0.0 ||
        m.gaussian_sigma_az_rad != m.gaussian_sigma_el_rad || m.bias_az_rad != 0.0 || m.bias_el_rad != 0.0) {
        return std::nullopt;
    }
    return gamma_from_sigma_theta(m.gaussian_sigma_az_rad, scenario.beam().w_eq_m, scenario.link.distance_m());
}

EnvelopeTrace simulate_envelope(const Scenario& scenario, const MotionSpec& motion, std::uint64_t noise_seed,
                                CaptureWriter* writer) {
    const auto trace = scenario_gain_trace(scenario, motion);
    SignalConfig cfg = scenario.signal;
    cfg.noise_sigma_v = scenario.noise_sigma_v();
    cfg.seed = noise_seed;

    IfSynthesizer synth(trace, cfg, scenario.link_budget().v_rx_v);
    EnvelopeDetector detector(cfg.f_if_hz, cfg.sample_rate_hz, EnvelopeOptions{scenario.analysis.lowpass_cutoff_hz, 0.0});
    std::vector<double> block(kStreamBlock);
    while (const std::size_t n = synth.generate(block)) {
        const std::span<const double> view(block.data(), n);
        if (writer) writer->write(view);
        detector.push(view);
    }
    return detector.take();
}

SimulationProducts run_simulate(const Scenario& scenario, const std::filesystem::path& out_dir) {
    scenario.validate();
    std::filesystem::create_directories(out_dir);
    SimulationProducts products;
    products.capture = out_dir / "capture.csv";
    products.baseline = out_dir / "baseline.csv";
    products.pointing = out_dir / "pointing.csv";
    products.envelope = out_dir / "envelope.csv";
    products.report = out_dir / "simulation_report.txt";
    const std::uint64_t seed = scenario.signal.seed;

    CaptureMetadata meta{scenario.signal.sample_rate_hz, scenario.signal.f_if_hz, scenario.name + " baseline", seed};
    {
        CaptureWriter writer(products.baseline, meta);
        simulate_envelope(scenario, baseline_motion(scenario.motion), split_seed(seed, streams::kBaselineNoise), &writer);
        writer.close();
    }

    meta.description = scenario.name + " jitter capture";
    CaptureWriter writer(products.capture, meta);
    const auto env = simulate_envelope(scenario, scenario.motion, split_seed(seed, streams::kCaptureNoise), &writer);
    products.samples_per_capture = writer.written();
    writer.close();

    {
        CsvWriter csv(products.envelope, {"time_s", "envelope_v"});
        for (std::size_t k = 0; k < env.size(); ++k) csv.row({env.sample_times_s[k], env.envelope_v[k]});
        csv.close();
    }

    const auto trace = scenario_gain_trace(scenario, scenario.motion);
    {
        CsvWriter csv(products.pointing, {"time_s", "theta_x_rad", "theta_y_rad", "displacement_m", "gain"});
        for (std::size_t k = 0; k < trace.size(); ++k) {
            csv.row({trace.sample_times_s[k], trace.theta_x_rad[k], trace.theta_y_rad[k], trace.displacement_m[k],
                     trace.gain[k]});
        }
        csv.close();
    }

    const auto beam = scenario.beam();
    const auto budget = scenario.link_budget();
    const double static_gain_value = gain_from_angles(scenario.motion.bias_az_rad, scenario.motion.bias_el_rad, beam,
                                                      scenario.link.distance_m());
    KeyValueReport report;
    report.add("scenario", scenario.name);
    report.add("seed", std::to_string(seed));
    report.add("samples_per_capture", std::to_string(products.samples_per_capture));
    report.add("beam_radius_m", beam.beam_radius_m);
    report.add("a0", beam.a0);
    report.add("w_eq_m", beam.w_eq_m);
    report.add("c_static", budget.c_static);
    report.add("v_rx_v", budget.v_rx_v);
    report.add("perfect_alignment_envelope_v", budget.v_rx_v * beam.a0);
    report.add("baseline_static_gain", static_gain_value);
    report.add("noise_sigma_v", scenario.noise_sigma_v());
    if (const auto gamma = gaussian_gamma(scenario)) report.add("gaussian_gamma", *gamma);
    if (scenario.motion.kind == MotionKind::driven && !scenario.motion.has_residual()) {
        CriticalValueOptions options;
        options.window_s = scenario.critical_window_s;
        auto values = critical_gain_values(scenario.motion, beam, scenario.link.distance_m(), options);
        for (auto& v : values) v /= static_gain_value;
        report.add("critical_value_count", std::to_string(values.size()));
        report.add("critical_values_normalized", join(values));
    }
    report.write(products.report);
    return products;
}

std::vector<FitOutcome> fit_targets(std::span<const FitTarget> targets, std::optional<double> mean_value,
                                    std::optional<double> variance_value, std::optional<double> peak,
                                    std::optional<FitGeometry> geometry) {
    std::vector<FitOutcome> out;
    for (const FitTarget target : targets) {
        FitOutcome outcome;
        outcome.target = target;
        try {
            switch (target) {
                case FitTarget::mean:
                    if (!mean_value) throw ValidationError("no mean available for a mean fit");
                    outcome.fit = fit_gamma_to_mean(*mean_value, geometry);
                    break;
                case FitTarget::variance:
                    if (!variance_value) throw ValidationError("no variance available for a variance fit");
                    outcome.fit = fit_gamma_to_variance(*variance_value, geometry);
                    break;
                case FitTarget::peak:
                    if (!peak) throw ValidationError("no peak density available for a peak fit");
                    outcome.fit = fit_gamma_to_peak(*peak, geometry);
                    break;
            }
        } catch (const NoFitError& e) {
            outcome.failure = e.what();
        }
        out.push_back(std::move(outcome));
    }
    return out;
}

AnalysisResult analyze_normalized(std::vector<double> normalized, const AnalysisOptions& options,
                                  std::optional<FitGeometry> geometry) {
    AnalysisResult r;
    if (options.clamp_above_one) normalized = clamp_normalized(normalized);
    r.stats = summary_stats(normalized);
    r.hist = histogram(normalized, options.bins);
    r.modes = detect_modes(r.hist, options.modes);
    r.peak_density = peak_density(r.hist);

    static constexpr FitTarget kAll[] = {FitTarget::mean, FitTarget::variance, FitTarget::peak};
    r.fits = fit_targets(kAll, r.stats.mean, r.stats.variance, r.peak_density, geometry);
    std::optional<double> gamma_mean;
    std::optional<double> gamma_var;
    bool any_failure = false;
    for (auto& f : r.fits) {
        if (!f.fit) {
            any_failure = true;
            continue;
        }
        f.ks = ks_distance(normalized, MisalignmentModel(f.fit->gamma, 1.0));
        r.best_ks = r.best_ks ? std::min(*r.best_ks, *f.ks) : *f.ks;
        if (f.target == FitTarget::mean) gamma_mean = f.fit->gamma;
        if (f.target == FitTarget::variance) gamma_var = f.fit->gamma;
    }
    if (gamma_mean && gamma_var) {
        r.fit_disagreement = std::abs(*gamma_mean - *gamma_var) / std::min(*gamma_mean, *gamma_var);
    }
    r.analytic_fit_failure = any_failure ||
                             (r.fit_disagreement && *r.fit_disagreement > options.fit_disagreement_threshold) ||
                             (r.best_ks && *r.best_ks > options.fit_ks_threshold);
    r.normalized = std::move(normalized);
    return r;
}

namespace {

EnvelopeTrace envelope_of_capture(const std::filesystem::path& path, const AnalysisOptions& options,
                                  CaptureMetadata& meta, std::size_t& samples) {
    CaptureReader reader(path);
    meta = reader.metadata();
    EnvelopeDetector detector(meta.f_if_hz, meta.sample_rate_hz, EnvelopeOptions{options.lowpass_cutoff_hz, 0.0});
    std::vector<double> block;
    while (reader.read(block, kStreamBlock)) detector.push(block);
    samples = reader.samples_read();
    return detector.take();
}

}  // namespace

AnalysisResult analyze_captures(const std::filesystem::path& capture, const std::filesystem::path& baseline,
                                const AnalysisOptions& options, std::optional<FitGeometry> geometry) {
    const auto capture_meta = read_metadata(metadata_path_for(capture));
    const auto baseline_meta = read_metadata(metadata_path_for(baseline));
    if (capture_meta.sample_rate_hz != baseline_meta.sample_rate_hz || capture_meta.f_if_hz != baseline_meta.f_if_hz) {
        throw ValidationError("capture and baseline metadata differ in sample_rate_hz or f_if_hz");
    }
    CaptureMetadata meta;
    std::size_t baseline_samples = 0;
    std::size_t capture_samples = 0;
    const auto base_env = envelope_of_capture(baseline, options, meta, baseline_samples);
    const double settle = base_env.settle_time_s(options.settle_group_delays);
    const double eps0 = baseline_reference(base_env, settle);

    auto env = normalize_envelope(envelope_of_capture(capture, options, meta, capture_samples), eps0);
    auto normalized = settled_normalized(env, settle);
    AnalysisResult r = analyze_normalized(std::move(normalized), options, geometry);
    r.epsilon_0_v = eps0;
    r.capture_samples = capture_samples;
    return r;
}

void write_histogram_csv(const GainHistogram& hist, const std::filesystem::path& path) {
    CsvWriter csv(path, {"bin_left", "bin_right", "density"});
    for (std::size_t i = 0; i < hist.bin_count(); ++i) csv.row({hist.bin_edges[i], hist.bin_edges[i + 1], hist.densities[i]});
    csv.close();
}

GainHistogram read_histogram_csv(const std::filesystem::path& path) {
    const auto table = read_csv(path);
    const auto left = table.column("bin_left");
    const auto right = table.column("bin_right");
    const auto density = table.column("density");
    if (table.rows.empty()) throw IoError(path.string() + ": histogram has no bins");
    GainHistogram h;
    for (const auto& row : table.rows) {
        if (!h.bin_edges.empty() && std::abs(row[left] - h.bin_edges.back()) > 1e-12 * std::max(1.0, std::abs(row[left]))) {
            throw IoError(path.string() + ": histogram bins are not contiguous");
        }
        if (h.bin_edges.empty()) h.bin_edges.push_back(row[left]);
        h.bin_edges.push_back(row[right]);
        h.densities.push_back(row[density]);
    }
    h.min = h.bin_edges.front();
    h.max = h.bin_edges.back();
    return h;
}

Curve normalized_pdf_curve(double gamma, std::size_t points, std::string label) {
    const MisalignmentModel model(gamma, 1.0);
    Curve c;
    c.label = label.empty() ? "gamma=" + format_double(std::round(gamma * 100.0) / 100.0) : std::move(label);
    c.x.resize(points);
    c.y.resize(points);
    for (std::size_t i = 0; i < points; ++i) {
        c.x[i] = static_cast<double>(i + 1) / static_cast<double>(points);
        c.y[i] = pdf(c.x[i], model);
    }
    return c;
}

void write_analysis(const AnalysisResult& r, const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);
    write_histogram_csv(r.hist, out_dir / "histogram.csv");

    KeyValueReport report;
    report.add("epsilon_0_v", r.epsilon_0_v);
    report.add("capture_samples", std::to_string(r.capture_samples));
    report.add("samples", std::to_string(r.stats.count));
    report.add("mean", r.stats.mean);
    report.add("variance", r.stats.variance);
    report.add("min", r.hist.min);
    report.add("max", r.hist.max);
    report.add("fraction_above_one",
               static_cast<double>(std::count_if(r.normalized.begin(), r.normalized.end(), [](double v) { return v > 1.0; })) /
                   static_cast<double>(std::max<std::size_t>(1, r.normalized.size())));
    report.add("bins", std::to_string(r.hist.bin_count()));
    report.add("degenerate_histogram", r.hist.degenerate ? "true" : "false");
    report.add("mode_count", std::to_string(r.modes.size()));
    std::vector<double> locations;
    for (const auto& m : r.modes) locations.push_back(m.location);
    report.add("mode_locations", join(locations));
    report.add("peak_density", r.peak_density);
    for (const auto& f : r.fits) {
        const auto p = prefix(f.target);
        if (!f.fit) {
            report.add(p + "status", "no_fit");
            report.add(p + "reason", f.failure);
            continue;
        }
        report.add(p + "gamma", f.fit->gamma);
        if (f.fit->sigma_theta_rad) report.add(p + "sigma_theta_deg", *f.fit->sigma_theta_rad * kRadToDeg);
        report.add(p + "residual", f.fit->residual);
        report.add(p + "roots", join(f.fit->roots));
        if (f.ks) report.add(p + "ks", *f.ks);
    }
    if (r.fit_disagreement) report.add("fit_disagreement", *r.fit_disagreement);
    if (r.best_ks) report.add("best_fit_ks", *r.best_ks);
    report.add("analytic_fit_failure", r.analytic_fit_failure ? "true" : "false");
    if (r.overlay_gamma) report.add("overlay_gamma", *r.overlay_gamma);
    if (r.overlay_ks) report.add("overlay_ks", *r.overlay_ks);
    report.write(out_dir / "analysis_report.txt");

    std::vector<Curve> curves;
    for (const auto& f : r.fits) {
        if (f.fit && f.target != FitTarget::peak) {
            curves.push_back(normalized_pdf_curve(f.fit->gamma, 400,
                                                  "fit to " + std::string(to_string(f.target)) + ", gamma=" +
                                                      format_double(std::round(f.fit->gamma * 100.0) / 100.0)));
        }
    }
    if (r.overlay_gamma) {
        curves.push_back(normalized_pdf_curve(*r.overlay_gamma, 400,
                                              "Gaussian model, gamma=" + format_double(std::round(*r.overlay_gamma * 100.0) / 100.0)));
    }
    write_plot_svg(out_dir / "histogram.svg", &r.hist, curves, PlotLabels{"Normalized misalignment gain"});
}

AnalysisResult run_analyze(const Scenario& scenario, const std::filesystem::path& capture,
                           const std::filesystem::path& baseline, const std::filesystem::path& out_dir) {
    auto result = analyze_captures(capture, baseline, scenario.analysis, scenario.fit_geometry());
    if (const auto gamma = gaussian_gamma(scenario)) {
        result.overlay_gamma = *gamma;
        result.overlay_ks = ks_distance(result.normalized, MisalignmentModel(*gamma, 1.0));
    }
    write_analysis(result, out_dir);
    return result;
}

std::vector<PdfSweepEntry> run_pdf_sweep(const LinkGeometry& link, std::span<const double> sigma_theta_rad,
                                         const std::filesystem::path& out_dir) {
    const auto beam = propagate_beam(link);
    std::vector<PdfSweepEntry> entries;
    std::vector<Curve> curves;
    std::filesystem::create_directories(out_dir);
    CsvWriter csv(out_dir / "pdf_sweep.csv", {"sigma_theta_deg", "gamma", "x", "density"});
    for (const double sigma : sigma_theta_rad) {
        PdfSweepEntry e;
        e.sigma_theta_rad = sigma;
        e.gamma = gamma_from_sigma_theta(sigma, beam.w_eq_m, link.distance_m());
        e.curve = normalized_pdf_curve(e.gamma);
        e.curve.label = "sigma=" + format_double(std::round(sigma * kRadToDeg * 1e5) / 1e5) + " deg, gamma=" +
                        format_double(std::round(e.gamma * 100.0) / 100.0);
        for (std::size_t i = 0; i < e.curve.x.size(); ++i) csv.row({sigma * kRadToDeg, e.gamma, e.curve.x[i], e.curve.y[i]});
        curves.push_back(e.curve);
        entries.push_back(std::move(e));
    }
    csv.close();
    write_plot_svg(out_dir / "pdf_sweep.svg", nullptr, curves,
                   PlotLabels{"Analytic misalignment-gain density vs angular jitter"});
    return entries;
}

void write_fit_report(std::span<const FitOutcome> outcomes, const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);
    KeyValueReport report;
    std::vector<std::string> header{"x"};
    std::vector<Curve> curves;
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
        const auto& o = outcomes[i];
        if (i) report.add_blank();
        report.add("target", std::string(to_string(o.target)));
        if (!o.fit) {
            report.add("status", "no_fit");
            report.add("reason", o.failure);
            continue;
        }
        report.add("status", "ok");
        report.add("gamma", o.fit->gamma);
        if (o.fit->sigma_theta_rad) report.add("sigma_theta_deg", *o.fit->sigma_theta_rad * kRadToDeg);
        report.add("residual", o.fit->residual);
        report.add("roots", join(o.fit->roots));
        if (o.ks) report.add("ks", *o.ks);
        header.push_back(std::string(to_string(o.target)) + "_fit");
        curves.push_back(normalized_pdf_curve(o.fit->gamma));
    }
    report.write(out_dir / "fit_report.txt");

    CsvWriter csv(out_dir / "fit_overlay.csv", header);
    const std::size_t points = curves.empty() ? 0 : curves.front().x.size();
    std::vector<double> row(header.size());
    for (std::size_t i = 0; i < points; ++i) {
        row[0] = curves.front().x[i];
        for (std::size_t c = 0; c < curves.size(); ++c) row[c + 1] = curves[c].y[i];
        csv.row(row);
    }
    csv.close();
}

KeyValueReport run_montecarlo(const MisalignmentModel& model, std::size_t n, std::uint64_t seed, std::size_t bins,
                              const std::filesystem::path& out_dir) {
    const auto samples = sample(n, model, split_seed(seed, streams::kMonteCarlo));
    const auto stats = summary_stats(samples);
    KeyValueReport report;
    report.add("gamma", model.gamma());
    report.add("a0", model.a0());
    report.add("samples", std::to_string(n));
    report.add("seed", std::to_string(seed));
    report.add("mean_empirical", stats.mean);
    report.add("mean_closed_form", mean(model));
    report.add("variance_empirical", stats.variance);
    report.add("variance_closed_form", variance(model));
    if (n >= 100) {
        report.add("ks_distance", ks_distance(samples, model));
        std::filesystem::create_directories(out_dir);
        write_histogram_csv(histogram(samples, bins), out_dir / "montecarlo_histogram.csv");
    }
    report.write(out_dir / "montecarlo_report.txt");
    return report;
}

KeyValueReport run_propagate(const LinkGeometry& link, const std::filesystem::path& out_dir) {
    const auto beam = propagate_beam(link);
    KeyValueReport report;
    report.add("carrier_frequency_hz", link.carrier_frequency_hz());
    report.add("wavelength_m", link.wavelength_m());
    report.add("tx_waist_m", link.tx_waist_m());
    report.add("distance_m", link.distance_m());
    report.add("rx_radius_m", link.rx_radius_m());
    report.add("rayleigh_range_m", link.rayleigh_range_m());
    report.add("beam_radius_m", beam.beam_radius_m);
    report.add("u", beam.u);
    report.add("a0", beam.a0);
    report.add("w_eq_m", beam.w_eq_m);
    report.add("a0_quadrature_equal_area_square",
               collected_fraction_exact(0.0, beam.beam_radius_m, link.rx_radius_m(), ApertureShape::equal_area_square));
    report.add("a0_quadrature_circular",
               collected_fraction_exact(0.0, beam.beam_radius_m, link.rx_radius_m(), ApertureShape::circular));
    report.add("free_space_amplitude", free_space_amplitude(link.carrier_frequency_hz(), link.distance_m()));
    std::filesystem::create_directories(out_dir);
    report.write(out_dir / "beam_report.txt");
    return report;
}

}  // namespace jitterlink
