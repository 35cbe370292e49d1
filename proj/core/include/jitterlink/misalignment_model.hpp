#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "jitterlink/beam_optics.hpp"

namespace jitterlink {

/// Geometric origin of a misalignment model built from an angular jitter level.
struct JitterGeometry {
    double sigma_r_m = 0.0;      ///< per-axis displacement std at the receiver plane
    double sigma_theta_rad = 0.0;
    double distance_m = 0.0;
};

/// Misalignment-gain distribution f(x) = gamma^2 / A0^(gamma^2) * x^(gamma^2 - 1) on [0, A0].
class MisalignmentModel {
public:
    /// Throws ValidationError unless gamma > 0 and 0 < a0 <= 1.
    MisalignmentModel(double gamma, double a0);

    /// gamma = w_eq / (2 d tan(sigma_theta)), keeping the geometric parameters.
    static MisalignmentModel from_sigma_theta(double sigma_theta_rad, const BeamAtReceiver& beam,
                                              double distance_m);

    double gamma() const noexcept { return gamma_; }
    double gamma_squared() const noexcept { return gamma_ * gamma_; }
    double a0() const noexcept { return a0_; }
    const std::optional<JitterGeometry>& geometry() const noexcept { return geometry_; }

    /// True when gamma^2 < 1: the density diverges at x = 0 and pdf(0) reports +infinity.
    bool unbounded_at_origin() const noexcept { return gamma_squared() < 1.0; }

private:
    double gamma_;
    double a0_;
    std::optional<JitterGeometry> geometry_;
};

/// Density at x; 0 outside [0, A0]. At x = 0 returns 0 for gamma^2 > 1, gamma^2/A0 for
/// gamma^2 == 1 and +infinity when model.unbounded_at_origin().
double pdf(double x, const MisalignmentModel& model);

/// (x / A0)^(gamma^2) clamped to [0, 1].
double cdf(double x, const MisalignmentModel& model);

/// Inverse-CDF draw A0 * U^(1/gamma^2) for a given U in (0, 1].
double quantile(double u, const MisalignmentModel& model);

/// n inverse-CDF samples, reproducible from `seed`.
std::vector<double> sample(std::size_t n, const MisalignmentModel& model, std::uint64_t seed);

/// gamma^2 A0 / (gamma^2 + 1).
double mean(const MisalignmentModel& model);

/// E[X^2] - mean^2 = gamma^2 A0^2 / ((gamma^2 + 2)(gamma^2 + 1)^2).
double variance(const MisalignmentModel& model);

/// Variance of the A0-normalized distribution as a function of gamma. Peaks at ~0.0902
/// near gamma ~ 0.786 and falls off as gamma^-4 for large gamma.
double normalized_variance(double gamma);

/// sigma_r = d tan(sigma_theta); returns w_eq / (2 sigma_r). DomainError for sigma_theta >= pi/2.
double gamma_from_sigma_theta(double sigma_theta_rad, double w_eq_m, double distance_m);

/// Inverse of gamma_from_sigma_theta: atan(w_eq / (2 gamma d)).
double sigma_theta_from_gamma(double gamma, double w_eq_m, double distance_m);

}  // namespace jitterlink
