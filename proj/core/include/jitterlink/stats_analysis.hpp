#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "jitterlink/misalignment_model.hpp"

namespace jitterlink {

/// Density-normalized histogram with uniform bins over [min, max] of the data.
struct GainHistogram {
    std::vector<double> bin_edges;
    std::vector<double> densities;
    std::size_t sample_count = 0;
    double min = 0.0;
    double max = 0.0;
    /// All samples were equal; the histogram is a single narrow bin of unit mass.
    bool degenerate = false;

    std::size_t bin_count() const noexcept { return densities.size(); }
    double bin_width() const noexcept { return bin_edges.empty() ? 0.0 : bin_edges[1] - bin_edges[0]; }
    double bin_center(std::size_t i) const noexcept { return 0.5 * (bin_edges[i] + bin_edges[i + 1]); }
    double range() const noexcept { return bin_edges.back() - bin_edges.front(); }
};

inline constexpr std::size_t kDefaultBinCount = 150;

/// Requires at least 100 values.
GainHistogram histogram(std::span<const double> values, std::size_t bin_count = kDefaultBinCount);

/// Welford accumulator for one-pass mean and unbiased variance.
class RunningStats {
public:
    void push(double x) noexcept {
        ++count_;
        const double delta = x - mean_;
        mean_ += delta / static_cast<double>(count_);
        m2_ += delta * (x - mean_);
    }
    void merge(const RunningStats& other) noexcept;

    std::size_t count() const noexcept { return count_; }
    double mean() const noexcept { return mean_; }
    double variance() const noexcept { return count_ > 1 ? m2_ / static_cast<double>(count_ - 1) : 0.0; }

private:
    std::size_t count_ = 0;
    double mean_ = 0.0;
    double m2_ = 0.0;
};

struct SummaryStats {
    std::size_t count = 0;
    double mean = 0.0;
    double variance = 0.0;  ///< unbiased
};

/// Requires at least 2 values.
SummaryStats summary_stats(std::span<const double> values);

struct Mode {
    double location = 0.0;
    double density = 0.0;
    double prominence = 0.0;
};

struct ModeDetectionOptions {
    double min_prominence_frac = 0.05;  ///< of the maximum density
    double min_separation_frac = 0.02;  ///< of the histogram range
};

/// Local maxima of the histogram (edge bins included) whose prominence is at least
/// min_prominence_frac of the highest density. Peaks closer than the separation are
/// resolved in favour of the taller one. Sorted by location.
std::vector<Mode> detect_modes(const GainHistogram& hist, const ModeDetectionOptions& options = {});

/// Density at the highest peak. When that peak is the last bin the density is extrapolated
/// to the right edge along the log-slope of the last two bins, which recovers gamma^2 for
/// samples of the analytic model.
double peak_density(const GainHistogram& hist);

enum class FitTarget { mean, variance, peak };

std::string_view to_string(FitTarget target) noexcept;

/// Link parameters needed to express a fitted gamma as an angular jitter.
struct FitGeometry {
    double w_eq_m = 0.0;
    double distance_m = 0.0;
};

struct FitResult {
    FitTarget target = FitTarget::mean;
    double gamma = 0.0;               ///< default root
    std::vector<double> roots;        ///< all admissible gamma values, ascending
    std::optional<double> sigma_theta_rad;
    double residual = 0.0;            ///< achieved statistic minus target
};

/// gamma = sqrt(mean / (1 - mean)) for normalized data. NoFitError unless 0 < mean < 1.
FitResult fit_gamma_to_mean(double normalized_mean, std::optional<FitGeometry> geometry = std::nullopt);

/// Solves normalized_variance(gamma) = target on both monotone branches. The default is the
/// larger root. NoFitError when the target is not in (0, max variance].
FitResult fit_gamma_to_variance(double normalized_variance_target,
                                std::optional<FitGeometry> geometry = std::nullopt);

/// gamma = sqrt(peak). NoFitError when peak < 1 (no gamma >= 1 reaches it).
FitResult fit_gamma_to_peak(double peak_density_value, std::optional<FitGeometry> geometry = std::nullopt);

/// Largest normalized variance the analytic family can produce, (5 sqrt(5) - 11) / 2.
double max_normalized_variance() noexcept;

/// sup |empirical CDF - model CDF|. Requires at least 100 values.
double ks_distance(std::span<const double> values, const MisalignmentModel& model);

/// Copy of `values` with samples above 1 clamped to 1 (sensitivity analysis only).
std::vector<double> clamp_normalized(std::span<const double> values);

}  // namespace jitterlink
