#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "jitterlink/beam_optics.hpp"

namespace jitterlink {

/// One sinusoidal component of driven antenna motion.
struct ModeComponent {
    double frequency_hz = 0.0;
    double amp_az_rad = 0.0;
    double amp_el_rad = 0.0;
    double phase_az_rad = 0.0;
    double phase_el_rad = 0.0;
};

enum class MotionKind { gaussian, driven };

/// Description of antenna pointing motion.
///
/// gaussian: each axis is N(bias, sigma^2) per sample. With gaussian_bandwidth_hz == 0 the
/// samples are independent; otherwise white noise is shaped by a unit-energy low-pass at
/// that bandwidth, which keeps the per-sample marginal exactly N(bias, sigma^2).
///
/// driven: theta(t) = bias + sum_i amp_i sin(2 pi f_i t + phase_i) per axis, plus the
/// Gaussian terms as an optional residual when the sigmas are non-zero.
struct MotionSpec {
    MotionKind kind = MotionKind::gaussian;
    double gaussian_sigma_az_rad = 0.0;
    double gaussian_sigma_el_rad = 0.0;
    double gaussian_bandwidth_hz = 0.0;
    std::vector<ModeComponent> modes;
    double bias_az_rad = 0.0;
    double bias_el_rad = 0.0;

    /// Throws ValidationError on negative sigmas or amplitudes, non-positive mode frequencies,
    /// or modes attached to a gaussian spec.
    void validate() const;

    bool has_residual() const noexcept {
        return gaussian_sigma_az_rad > 0.0 || gaussian_sigma_el_rad > 0.0;
    }
    double max_mode_frequency_hz() const noexcept;
};

/// Pointing angles on a uniform time grid; displacement and gain are filled by gain_trace.
struct PointingTrace {
    double sample_rate_hz = 0.0;
    std::vector<double> sample_times_s;
    std::vector<double> theta_x_rad;
    std::vector<double> theta_y_rad;
    std::vector<double> displacement_m;
    std::vector<double> gain;

    std::size_t size() const noexcept { return sample_times_s.size(); }
    bool has_gain() const noexcept { return gain.size() == sample_times_s.size() && !gain.empty(); }
};

/// Generate pointing angles for `duration_s` at `rate_hz`. Deterministic given `seed`.
/// Throws ValidationError when fewer than two samples result or when the rate does not
/// exceed twice the highest mode frequency (or the Gaussian shaping bandwidth).
PointingTrace synthesize_pointing(const MotionSpec& spec, double duration_s, double rate_hz,
                                  std::uint64_t seed);

/// Net pointing angle sqrt(theta_x^2 + theta_y^2) to gain, through r = d tan(theta).
/// DomainError when theta_net >= pi/2.
double gain_from_angles(double theta_x_rad, double theta_y_rad, const BeamAtReceiver& beam,
                        double distance_m);

/// Fill displacement and gain for every sample of `trace`.
PointingTrace gain_trace(PointingTrace trace, const BeamAtReceiver& beam, double distance_m);

struct CriticalValueOptions {
    double cluster_tolerance_frac = 1e-4;  ///< of A0
    double points_per_period = 1e4;        ///< per period of the fastest mode
    std::optional<double> window_s;        ///< analysis window; default is one common period
    double frequency_resolution_hz = 1e-3; ///< grid on which mode frequencies must be commensurate
};

/// Least common period of the mode frequencies when all lie on the resolution grid.
std::optional<double> common_period_s(const std::vector<ModeComponent>& modes,
                                      double frequency_resolution_hz = 1e-3);

/// Distinct stationary values of the periodic gain trajectory of a driven spec, ascending.
///
/// Samples one common period (or the explicit window) densely, collects the local extrema of
/// gain(t) and clusters values closer than the tolerance. A spec without modes yields its
/// single static gain. Throws ValidationError for gaussian specs, non-zero residual noise, or
/// a non-periodic spec without an explicit window.
std::vector<double> critical_gain_values(const MotionSpec& spec, const BeamAtReceiver& beam,
                                         double distance_m, const CriticalValueOptions& options = {});

}  // namespace jitterlink
