#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "jitterlink/capture_io.hpp"
#include "jitterlink/scenario.hpp"
#include "jitterlink/svg_plot.hpp"

namespace jitterlink {

/// Random sub-streams of a run seed.
namespace streams {
inline constexpr std::uint64_t kMotion = 10;
inline constexpr std::uint64_t kBaselineNoise = 11;
inline constexpr std::uint64_t kCaptureNoise = 12;
inline constexpr std::uint64_t kMonteCarlo = 13;
}  // namespace streams

/// The static part of a motion spec: bias only, no modes, no residual.
MotionSpec baseline_motion(const MotionSpec& motion);

/// Pointing trace with gain for `motion` over the scenario duration at the motion rate.
PointingTrace scenario_gain_trace(const Scenario& scenario, const MotionSpec& motion);

/// Gamma implied by a Gaussian motion spec with equal per-axis sigmas; nullopt otherwise.
std::optional<double> gaussian_gamma(const Scenario& scenario);

/// Block size used when streaming IF samples.
inline constexpr std::size_t kStreamBlock = 1 << 16;

/// Synthesize `motion` through the IF chain, stream it through the envelope detector and
/// optionally into a capture file. Returns the detector output.
EnvelopeTrace simulate_envelope(const Scenario& scenario, const MotionSpec& motion, std::uint64_t noise_seed,
                                CaptureWriter* writer = nullptr);

struct SimulationProducts {
    std::filesystem::path capture;
    std::filesystem::path baseline;
    std::filesystem::path pointing;
    std::filesystem::path envelope;
    std::filesystem::path report;
    std::size_t samples_per_capture = 0;
};

/// Writes capture.csv, baseline.csv (each with a .meta sidecar), pointing.csv, envelope.csv
/// and simulation_report.txt into `out_dir`. Deterministic given the scenario seed.
SimulationProducts run_simulate(const Scenario& scenario, const std::filesystem::path& out_dir);

/// A requested fit and either its result or the reason no fit exists.
struct FitOutcome {
    FitTarget target = FitTarget::mean;
    std::optional<FitResult> fit;
    std::string failure;
    std::optional<double> ks;  ///< against the analysed samples, when available
};

/// Fits for each target from summary statistics (A0 normalized to 1).
std::vector<FitOutcome> fit_targets(std::span<const FitTarget> targets, std::optional<double> mean,
                                    std::optional<double> variance, std::optional<double> peak,
                                    std::optional<FitGeometry> geometry);

struct AnalysisResult {
    double epsilon_0_v = 0.0;
    std::size_t capture_samples = 0;
    SummaryStats stats;
    GainHistogram hist;
    std::vector<Mode> modes;
    double peak_density = 0.0;
    std::vector<FitOutcome> fits;
    std::optional<double> best_ks;
    std::optional<double> fit_disagreement;  ///< |gamma_mean - gamma_var| / min of the two
    bool analytic_fit_failure = false;
    std::optional<double> overlay_gamma;     ///< reference curve from the scenario, if any
    std::optional<double> overlay_ks;
    std::vector<double> normalized;          ///< settled normalized envelope samples
};

/// Histogram, statistics, modes and all three fits over normalized samples.
AnalysisResult analyze_normalized(std::vector<double> normalized, const AnalysisOptions& options,
                                  std::optional<FitGeometry> geometry);

/// Envelope-extract both captures, normalize by the baseline mean and analyse. ValidationError
/// when the captures disagree on sample rate or IF, or the baseline is shorter than the
/// settling window.
AnalysisResult analyze_captures(const std::filesystem::path& capture, const std::filesystem::path& baseline,
                                const AnalysisOptions& options, std::optional<FitGeometry> geometry);

/// histogram.csv, analysis_report.txt, histogram.svg.
void write_analysis(const AnalysisResult& result, const std::filesystem::path& out_dir);

/// analyze_captures + the scenario's Gaussian overlay + write_analysis.
AnalysisResult run_analyze(const Scenario& scenario, const std::filesystem::path& capture,
                           const std::filesystem::path& baseline, const std::filesystem::path& out_dir);

/// Normalized analytic density gamma^2 x^(gamma^2 - 1) sampled on (0, 1].
Curve normalized_pdf_curve(double gamma, std::size_t points = 400, std::string label = {});

struct PdfSweepEntry {
    double sigma_theta_rad = 0.0;
    double gamma = 0.0;
    Curve curve;
};

/// One normalized density curve per angular jitter level; writes pdf_sweep.csv
/// (sigma_theta_deg,gamma,x,density) and pdf_sweep.svg.
std::vector<PdfSweepEntry> run_pdf_sweep(const LinkGeometry& link, std::span<const double> sigma_theta_rad,
                                         const std::filesystem::path& out_dir);

/// fit_report.txt (key=value blocks) and fit_overlay.csv (x plus one density column per fit).
void write_fit_report(std::span<const FitOutcome> outcomes, const std::filesystem::path& out_dir);

/// Inverse-CDF Monte Carlo against the closed forms; montecarlo_report.txt and
/// montecarlo_histogram.csv.
KeyValueReport run_montecarlo(const MisalignmentModel& model, std::size_t n, std::uint64_t seed,
                              std::size_t bins, const std::filesystem::path& out_dir);

/// Beam quantities at the receiver plus both aperture quadratures; beam_report.txt.
KeyValueReport run_propagate(const LinkGeometry& link, const std::filesystem::path& out_dir);

/// Histogram CSV writer/reader (bin_left,bin_right,density).
void write_histogram_csv(const GainHistogram& hist, const std::filesystem::path& path);
GainHistogram read_histogram_csv(const std::filesystem::path& path);

}  // namespace jitterlink
