#include "jitterlink/stats_analysis.hpp"

#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>

#include "jitterlink/error.hpp"

namespace jitterlink {
namespace {

constexpr std::size_t kMinSamples = 100;

// gamma^2 at which the normalized variance peaks: the positive root of g^2 + g - 1.
const double kGammaAtMaxVariance = std::sqrt((std::sqrt(5.0) - 1.0) / 2.0);

void fill_sigma_theta(FitResult& fit, const std::optional<FitGeometry>& geometry) {
    if (geometry) fit.sigma_theta_rad = sigma_theta_from_gamma(fit.gamma, geometry->w_eq_m, geometry->distance_m);
}

// Height above the higher of the two flanking minima, each flank running to the next strictly
// higher bin or the histogram edge. An edge peak has a single flank.
double prominence_at(const std::vector<double>& d, std::size_t i) {
    const std::size_t n = d.size();
    double reference = -std::numeric_limits<double>::infinity();
    if (i > 0) {
        double low = d[i];
        for (std::size_t j = i; j-- > 0 && d[j] <= d[i];) low = std::min(low, d[j]);
        reference = std::max(reference, low);
    }
    if (i + 1 < n) {
        double low = d[i];
        for (std::size_t j = i + 1; j < n && d[j] <= d[i]; ++j) low = std::min(low, d[j]);
        reference = std::max(reference, low);
    }
    return d[i] - reference;
}

double solve_branch(double target, double lo, double hi) {
    auto f = [target](double g) { return normalized_variance(g) - target; };
    boost::math::tools::eps_tolerance<double> tol(48);
    std::uintmax_t iterations = 200;
    const auto [a, b] = boost::math::tools::toms748_solve(f, lo, hi, tol, iterations);
    return 0.5 * (a + b);
}

}  // namespace

GainHistogram histogram(std::span<const double> values, std::size_t bin_count) {
    detail::require(values.size() >= kMinSamples, "histogram needs at least 100 values");
    detail::require(bin_count >= 1, "bin count must be positive");
    const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
    GainHistogram h;
    h.sample_count = values.size();
    h.min = *lo_it;
    h.max = *hi_it;

    if (!(h.max > h.min)) {
        const double half = 0.5e-9 * std::max(1.0, std::abs(h.min));
        h.degenerate = true;
        h.bin_edges = {h.min - half, h.min + half};
        h.densities = {1.0 / (2.0 * half)};
        return h;
    }

    const double width = (h.max - h.min) / static_cast<double>(bin_count);
    h.bin_edges.resize(bin_count + 1);
    for (std::size_t i = 0; i <= bin_count; ++i) h.bin_edges[i] = h.min + width * static_cast<double>(i);
    h.bin_edges.back() = h.max;

    std::vector<std::size_t> counts(bin_count, 0);
    for (const double v : values) {
        auto i = static_cast<std::size_t>((v - h.min) / width);
        counts[std::min(i, bin_count - 1)] += 1;
    }
    h.densities.resize(bin_count);
    const double n = static_cast<double>(values.size());
    for (std::size_t i = 0; i < bin_count; ++i) {
        h.densities[i] = static_cast<double>(counts[i]) / (n * (h.bin_edges[i + 1] - h.bin_edges[i]));
    }
    return h;
}

void RunningStats::merge(const RunningStats& other) noexcept {
    if (other.count_ == 0) return;
    if (count_ == 0) {
        *this = other;
        return;
    }
    const double na = static_cast<double>(count_);
    const double nb = static_cast<double>(other.count_);
    const double delta = other.mean_ - mean_;
    const double total = na + nb;
    mean_ += delta * nb / total;
    m2_ += other.m2_ + delta * delta * na * nb / total;
    count_ += other.count_;
}

SummaryStats summary_stats(std::span<const double> values) {
    detail::require(values.size() >= 2, "summary statistics need at least two values");
    RunningStats acc;
    for (const double v : values) acc.push(v);
    return {acc.count(), acc.mean(), acc.variance()};
}

std::vector<Mode> detect_modes(const GainHistogram& hist, const ModeDetectionOptions& options) {
    const auto& d = hist.densities;
    const std::size_t n = d.size();
    if (n == 0) return {};
    if (n == 1) return {Mode{hist.bin_center(0), d[0], d[0]}};

    const double top = *std::max_element(d.begin(), d.end());
    const double threshold = options.min_prominence_frac * top;

    std::vector<std::size_t> candidates;
    for (std::size_t i = 0; i < n; ++i) {
        const bool above_left = i == 0 || d[i] > d[i - 1];
        const bool above_right = i + 1 == n || d[i] >= d[i + 1];
        if (!above_left || !above_right) continue;

        if (d[i] > 0.0 && prominence_at(d, i) >= threshold) candidates.push_back(i);
    }

    std::sort(candidates.begin(), candidates.end(), [&](std::size_t a, std::size_t b) {
        return d[a] != d[b] ? d[a] > d[b] : a < b;
    });
    const double min_gap = options.min_separation_frac * hist.range();
    std::vector<std::size_t> kept;
    for (const std::size_t i : candidates) {
        const bool clear = std::all_of(kept.begin(), kept.end(), [&](std::size_t k) {
            return std::abs(hist.bin_center(i) - hist.bin_center(k)) >= min_gap;
        });
        if (clear) kept.push_back(i);
    }
    std::sort(kept.begin(), kept.end());

    std::vector<Mode> modes;
    modes.reserve(kept.size());
    for (const std::size_t i : kept) {
        modes.push_back(Mode{hist.bin_center(i), d[i], prominence_at(d, i)});
    }
    return modes;
}

double peak_density(const GainHistogram& hist) {
    const auto& d = hist.densities;
    detail::require(!d.empty(), "empty histogram");
    const auto top = static_cast<std::size_t>(std::max_element(d.begin(), d.end()) - d.begin());
    const std::size_t last = d.size() - 1;
    if (top != last || last == 0 || !(d[last - 1] > 0.0)) return d[top];
    // Last bin centre sits half a bin from the edge; step half a log-slope further.
    return d[last] * std::sqrt(d[last] / d[last - 1]);
}

std::string_view to_string(FitTarget target) noexcept {
    switch (target) {
        case FitTarget::mean: return "mean";
        case FitTarget::variance: return "variance";
        case FitTarget::peak: return "peak";
    }
    return "unknown";
}

double max_normalized_variance() noexcept { return normalized_variance(kGammaAtMaxVariance); }

FitResult fit_gamma_to_mean(double normalized_mean, std::optional<FitGeometry> geometry) {
    if (!(normalized_mean > 0.0 && normalized_mean < 1.0)) {
        throw NoFitError("no finite gamma reproduces a normalized mean outside (0, 1)");
    }
    FitResult fit;
    fit.target = FitTarget::mean;
    fit.gamma = std::sqrt(normalized_mean / (1.0 - normalized_mean));
    fit.roots = {fit.gamma};
    fit.residual = mean(MisalignmentModel(fit.gamma, 1.0)) - normalized_mean;
    fill_sigma_theta(fit, geometry);
    return fit;
}

FitResult fit_gamma_to_variance(double target, std::optional<FitGeometry> geometry) {
    const double vmax = max_normalized_variance();
    if (!(target > 0.0)) throw NoFitError("variance must be positive for a finite gamma fit");
    if (target > vmax * (1.0 + 1e-12)) {
        throw NoFitError("variance exceeds the largest value the analytic model can produce");
    }
    FitResult fit;
    fit.target = FitTarget::variance;
    if (target >= vmax) {
        fit.roots = {kGammaAtMaxVariance};
    } else {
        double lo_bracket = kGammaAtMaxVariance;
        while (normalized_variance(lo_bracket) > target) lo_bracket *= 0.5;
        double hi_bracket = 2.0 * kGammaAtMaxVariance;
        while (normalized_variance(hi_bracket) > target) hi_bracket *= 2.0;
        fit.roots = {solve_branch(target, lo_bracket, kGammaAtMaxVariance),
                     solve_branch(target, kGammaAtMaxVariance, hi_bracket)};
    }
    fit.gamma = fit.roots.back();
    fit.residual = normalized_variance(fit.gamma) - target;
    fill_sigma_theta(fit, geometry);
    return fit;
}

FitResult fit_gamma_to_peak(double peak_density_value, std::optional<FitGeometry> geometry) {
    if (!(peak_density_value >= 1.0)) {
        throw NoFitError("peak density below 1 cannot be matched by gamma >= 1");
    }
    FitResult fit;
    fit.target = FitTarget::peak;
    fit.gamma = std::sqrt(peak_density_value);
    fit.roots = {fit.gamma};
    fit.residual = fit.gamma * fit.gamma - peak_density_value;
    fill_sigma_theta(fit, geometry);
    return fit;
}

double ks_distance(std::span<const double> values, const MisalignmentModel& model) {
    detail::require(values.size() >= kMinSamples, "KS distance needs at least 100 values");
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    const double n = static_cast<double>(sorted.size());
    double worst = 0.0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        const double f = cdf(sorted[i], model);
        worst = std::max({worst, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
    }
    return worst;
}

std::vector<double> clamp_normalized(std::span<const double> values) {
    std::vector<double> out(values.begin(), values.end());
    for (auto& v : out) v = std::min(v, 1.0);
    return out;
}

}  // namespace jitterlink
