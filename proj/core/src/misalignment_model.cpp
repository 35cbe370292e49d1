#include "jitterlink/misalignment_model.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "jitterlink/error.hpp"
#include "jitterlink/rng.hpp"

namespace jitterlink {

MisalignmentModel::MisalignmentModel(double gamma, double a0) : gamma_(gamma), a0_(a0) {
    detail::require(std::isfinite(gamma) && gamma > 0.0, "gamma must be finite and positive");
    detail::require(a0 > 0.0 && a0 <= 1.0, "a0 must lie in (0, 1]");
}

MisalignmentModel MisalignmentModel::from_sigma_theta(double sigma_theta_rad,
                                                      const BeamAtReceiver& beam,
                                                      double distance_m) {
    MisalignmentModel model(gamma_from_sigma_theta(sigma_theta_rad, beam.w_eq_m, distance_m),
                            beam.a0);
    model.geometry_ = JitterGeometry{distance_m * std::tan(sigma_theta_rad), sigma_theta_rad,
                                     distance_m};
    return model;
}

double pdf(double x, const MisalignmentModel& model) {
    const double a0 = model.a0();
    const double g2 = model.gamma_squared();
    if (x < 0.0 || x > a0) return 0.0;
    if (x == 0.0) {
        if (g2 > 1.0) return 0.0;
        if (g2 == 1.0) return 1.0 / a0;
        return std::numeric_limits<double>::infinity();
    }
    // gamma^2 / A0 * (x / A0)^(gamma^2 - 1)
    return g2 / a0 * std::pow(x / a0, g2 - 1.0);
}

double cdf(double x, const MisalignmentModel& model) {
    if (x <= 0.0) return 0.0;
    if (x >= model.a0()) return 1.0;
    return std::pow(x / model.a0(), model.gamma_squared());
}

double quantile(double u, const MisalignmentModel& model) {
    detail::require(u > 0.0 && u <= 1.0, "quantile level must lie in (0, 1]");
    return model.a0() * std::pow(u, 1.0 / model.gamma_squared());
}

std::vector<double> sample(std::size_t n, const MisalignmentModel& model, std::uint64_t seed) {
    detail::require(n >= 1, "sample count must be at least 1");
    Rng rng(seed);
    std::vector<double> out(n);
    const double exponent = 1.0 / model.gamma_squared();
    for (auto& x : out) x = model.a0() * std::pow(rng.uniform_open_closed(), exponent);
    return out;
}

double mean(const MisalignmentModel& model) {
    const double g2 = model.gamma_squared();
    return g2 * model.a0() / (g2 + 1.0);
}

double normalized_variance(double gamma) {
    const double g2 = gamma * gamma;
    const double g2p1 = g2 + 1.0;
    return g2 / ((g2 + 2.0) * g2p1 * g2p1);
}

double variance(const MisalignmentModel& model) {
    return model.a0() * model.a0() * normalized_variance(model.gamma());
}

double gamma_from_sigma_theta(double sigma_theta_rad, double w_eq_m, double distance_m) {
    if (!(sigma_theta_rad < std::numbers::pi / 2.0)) {
        throw DomainError("sigma_theta must be below pi/2");
    }
    detail::require_positive(sigma_theta_rad, "sigma_theta");
    detail::require_positive(w_eq_m, "w_eq");
    detail::require_positive(distance_m, "distance");
    const double sigma_r = distance_m * std::tan(sigma_theta_rad);
    return w_eq_m / (2.0 * sigma_r);
}

double sigma_theta_from_gamma(double gamma, double w_eq_m, double distance_m) {
    detail::require_positive(gamma, "gamma");
    detail::require_positive(w_eq_m, "w_eq");
    detail::require_positive(distance_m, "distance");
    const double sigma_r = w_eq_m / (2.0 * gamma);
    return std::atan(sigma_r / distance_m);
}

}  // namespace jitterlink
