#include "jitterlink/jitter_motion.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "jitterlink/dsp.hpp"
#include "jitterlink/error.hpp"
#include "jitterlink/rng.hpp"

namespace jitterlink {
namespace {

using std::numbers::pi;

constexpr std::uint64_t kAzimuthStream = 0;
constexpr std::uint64_t kElevationStream = 1;

double mode_sum_az(const std::vector<ModeComponent>& modes, double t) {
    double sum = 0.0;
    for (const auto& m : modes) sum += m.amp_az_rad * std::sin(2.0 * pi * m.frequency_hz * t + m.phase_az_rad);
    return sum;
}

double mode_sum_el(const std::vector<ModeComponent>& modes, double t) {
    double sum = 0.0;
    for (const auto& m : modes) sum += m.amp_el_rad * std::sin(2.0 * pi * m.frequency_hz * t + m.phase_el_rad);
    return sum;
}

// Stationary zero-mean, unit-variance Gaussian sequence; white when bandwidth is zero.
std::vector<double> gaussian_sequence(std::size_t n, double bandwidth_hz, double rate_hz,
                                      std::uint64_t seed) {
    Rng rng(seed);
    std::vector<double> out(n);
    if (bandwidth_hz <= 0.0) {
        for (auto& v : out) v = rng.normal();
        return out;
    }
    auto taps = design_lowpass(bandwidth_hz, rate_hz, bandwidth_hz);
    const double energy = std::inner_product(taps.begin(), taps.end(), taps.begin(), 0.0);
    for (auto& t : taps) t /= std::sqrt(energy);

    std::vector<double> white(n + taps.size() - 1);
    for (auto& v : white) v = rng.normal();
    for (std::size_t k = 0; k < n; ++k) {
        double acc = 0.0;
        for (std::size_t j = 0; j < taps.size(); ++j) acc += taps[j] * white[k + j];
        out[k] = acc;
    }
    return out;
}

}  // namespace

void MotionSpec::validate() const {
    detail::require_non_negative(gaussian_sigma_az_rad, "gaussian_sigma_az");
    detail::require_non_negative(gaussian_sigma_el_rad, "gaussian_sigma_el");
    detail::require_non_negative(gaussian_bandwidth_hz, "gaussian_bandwidth");
    detail::require(std::isfinite(bias_az_rad) && std::isfinite(bias_el_rad), "bias must be finite");
    if (kind == MotionKind::gaussian) {
        detail::require(modes.empty(), "gaussian motion cannot carry driven modes");
    }
    for (const auto& m : modes) {
        detail::require_positive(m.frequency_hz, "mode frequency");
        detail::require_non_negative(m.amp_az_rad, "mode amp_az");
        detail::require_non_negative(m.amp_el_rad, "mode amp_el");
    }
}

double MotionSpec::max_mode_frequency_hz() const noexcept {
    double f = 0.0;
    for (const auto& m : modes) f = std::max(f, m.frequency_hz);
    return f;
}

PointingTrace synthesize_pointing(const MotionSpec& spec, double duration_s, double rate_hz,
                                  std::uint64_t seed) {
    spec.validate();
    detail::require_positive(duration_s, "duration");
    detail::require_positive(rate_hz, "motion rate");
    const auto n = static_cast<std::size_t>(std::llround(duration_s * rate_hz));
    detail::require(n >= 2, "pointing trace needs at least two samples");
    if (!spec.modes.empty() && !(rate_hz > 2.0 * spec.max_mode_frequency_hz())) {
        throw ValidationError("motion rate aliases the fastest mode (rate must exceed 2 x frequency)");
    }
    if (spec.gaussian_bandwidth_hz > 0.0 && !(rate_hz > 2.0 * spec.gaussian_bandwidth_hz)) {
        throw ValidationError("motion rate must exceed twice the Gaussian jitter bandwidth");
    }

    PointingTrace trace;
    trace.sample_rate_hz = rate_hz;
    trace.sample_times_s.resize(n);
    for (std::size_t k = 0; k < n; ++k) trace.sample_times_s[k] = static_cast<double>(k) / rate_hz;
    trace.theta_x_rad.assign(n, spec.bias_az_rad);
    trace.theta_y_rad.assign(n, spec.bias_el_rad);

    if (spec.kind == MotionKind::driven) {
        for (std::size_t k = 0; k < n; ++k) {
            const double t = trace.sample_times_s[k];
            trace.theta_x_rad[k] += mode_sum_az(spec.modes, t);
            trace.theta_y_rad[k] += mode_sum_el(spec.modes, t);
        }
    }
    if (spec.gaussian_sigma_az_rad > 0.0) {
        const auto noise = gaussian_sequence(n, spec.gaussian_bandwidth_hz, rate_hz,
                                             split_seed(seed, kAzimuthStream));
        for (std::size_t k = 0; k < n; ++k) trace.theta_x_rad[k] += spec.gaussian_sigma_az_rad * noise[k];
    }
    if (spec.gaussian_sigma_el_rad > 0.0) {
        const auto noise = gaussian_sequence(n, spec.gaussian_bandwidth_hz, rate_hz,
                                             split_seed(seed, kElevationStream));
        for (std::size_t k = 0; k < n; ++k) trace.theta_y_rad[k] += spec.gaussian_sigma_el_rad * noise[k];
    }
    return trace;
}

double gain_from_angles(double theta_x_rad, double theta_y_rad, const BeamAtReceiver& beam,
                        double distance_m) {
    const double theta = std::hypot(theta_x_rad, theta_y_rad);
    if (!(theta < 0.5 * pi)) throw DomainError("net pointing angle must be below pi/2");
    return gain_from_displacement(distance_m * std::tan(theta), beam);
}

PointingTrace gain_trace(PointingTrace trace, const BeamAtReceiver& beam, double distance_m) {
    detail::require_positive(distance_m, "distance");
    detail::require(trace.theta_x_rad.size() == trace.size() && trace.theta_y_rad.size() == trace.size(),
                    "pointing trace angles are not populated");
    const std::size_t n = trace.size();
    trace.displacement_m.resize(n);
    trace.gain.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double theta = std::hypot(trace.theta_x_rad[k], trace.theta_y_rad[k]);
        if (!(theta < 0.5 * pi)) throw DomainError("net pointing angle must be below pi/2");
        trace.displacement_m[k] = distance_m * std::tan(theta);
        trace.gain[k] = gain_from_displacement(trace.displacement_m[k], beam);
    }
    return trace;
}

std::optional<double> common_period_s(const std::vector<ModeComponent>& modes,
                                      double frequency_resolution_hz) {
    if (modes.empty()) return std::nullopt;
    std::uint64_t divisor = 0;
    for (const auto& m : modes) {
        const double steps = m.frequency_hz / frequency_resolution_hz;
        const double rounded = std::round(steps);
        if (rounded < 1.0 || std::abs(steps - rounded) > 1e-6 * std::max(1.0, rounded)) return std::nullopt;
        divisor = std::gcd(divisor, static_cast<std::uint64_t>(rounded));
    }
    return 1.0 / (static_cast<double>(divisor) * frequency_resolution_hz);
}

std::vector<double> critical_gain_values(const MotionSpec& spec, const BeamAtReceiver& beam,
                                         double distance_m, const CriticalValueOptions& options) {
    spec.validate();
    detail::require(spec.kind == MotionKind::driven, "critical gain values require driven motion");
    detail::require(!spec.has_residual(), "critical gain values require zero Gaussian residual");
    detail::require_positive(options.points_per_period, "points_per_period");

    if (spec.modes.empty()) {
        return {gain_from_angles(spec.bias_az_rad, spec.bias_el_rad, beam, distance_m)};
    }

    const bool periodic = !options.window_s.has_value();
    double window = 0.0;
    if (options.window_s) {
        window = *options.window_s;
        detail::require_positive(window, "analysis window");
    } else {
        const auto period = common_period_s(spec.modes, options.frequency_resolution_hz);
        if (!period) throw ValidationError("mode frequencies are not commensurate; an explicit analysis window is required");
        window = *period;
    }

    const double points = std::ceil(window * spec.max_mode_frequency_hz() * options.points_per_period);
    if (points > 2e8) {
        throw ValidationError("common period too long for dense sampling; supply a shorter window");
    }
    const auto n = static_cast<std::size_t>(std::max(points, 16.0));
    std::vector<double> g(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = window * static_cast<double>(i) / static_cast<double>(n);
        g[i] = gain_from_angles(spec.bias_az_rad + mode_sum_az(spec.modes, t),
                                spec.bias_el_rad + mode_sum_el(spec.modes, t), beam, distance_m);
    }

    std::vector<double> extrema;
    const std::size_t first = periodic ? 0 : 1;
    const std::size_t last = periodic ? n : n - 1;
    for (std::size_t i = first; i < last; ++i) {
        const double prev = g[(i + n - 1) % n];
        const double next = g[(i + 1) % n];
        const bool is_max = g[i] >= prev && g[i] > next;
        const bool is_min = g[i] <= prev && g[i] < next;
        if (is_max || is_min) extrema.push_back(g[i]);
    }
    if (extrema.empty()) return {g.front()};

    std::sort(extrema.begin(), extrema.end());
    const double tolerance = options.cluster_tolerance_frac * beam.a0;
    std::vector<double> values;
    std::size_t start = 0;
    for (std::size_t i = 1; i <= extrema.size(); ++i) {
        if (i == extrema.size() || extrema[i] - extrema[i - 1] > tolerance) {
            const double sum = std::accumulate(extrema.begin() + static_cast<std::ptrdiff_t>(start),
                                               extrema.begin() + static_cast<std::ptrdiff_t>(i), 0.0);
            values.push_back(sum / static_cast<double>(i - start));
            start = i;
        }
    }
    return values;
}

}  // namespace jitterlink
