#include "jitterlink/beam_optics.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <numbers>
#include <string>

#include "jitterlink/error.hpp"

namespace jitterlink {
namespace {

using std::numbers::pi;

void require_finite_positive(double value, const char* name) {
    if (!std::isfinite(value) || !(value > 0.0)) {
        throw ValidationError(std::string(name) + " must be finite and strictly positive");
    }
}

template <class F>
double adaptive_integral(F&& f, double lo, double hi, double rel_tol) {
    using boost::math::quadrature::gauss_kronrod;
    double error = 0.0;
    double l1 = 0.0;
    const double value = gauss_kronrod<double, 21>::integrate(f, lo, hi, 25, rel_tol, &error, &l1);
    if (!std::isfinite(value) || error > rel_tol * l1 + 1e-300) {
        throw IntegrationError("aperture quadrature did not converge (estimated error " +
                               std::to_string(error) + ")");
    }
    return value;
}

}  // namespace

LinkGeometry::LinkGeometry(double carrier_frequency_hz, double tx_waist_m, double distance_m,
                           double rx_radius_m)
    : carrier_frequency_hz_(carrier_frequency_hz),
      tx_waist_m_(tx_waist_m),
      distance_m_(distance_m),
      rx_radius_m_(rx_radius_m) {
    require_finite_positive(carrier_frequency_hz, "carrier_frequency_hz");
    require_finite_positive(tx_waist_m, "tx_waist_m");
    require_finite_positive(distance_m, "distance_m");
    require_finite_positive(rx_radius_m, "rx_radius_m");
}

double LinkGeometry::rayleigh_range_m() const noexcept {
    return pi * tx_waist_m_ * tx_waist_m_ / wavelength_m();
}

double beam_radius_at(double tx_waist_m, double wavelength_m, double distance_m) {
    detail::require_positive(tx_waist_m, "tx_waist_m");
    detail::require_positive(wavelength_m, "wavelength_m");
    detail::require_non_negative(distance_m, "distance_m");
    const double rayleigh = pi * tx_waist_m * tx_waist_m / wavelength_m;
    const double ratio = distance_m / rayleigh;
    return tx_waist_m * std::sqrt(1.0 + ratio * ratio);
}

BeamAtReceiver propagate_beam(const LinkGeometry& geometry) {
    BeamAtReceiver beam;
    beam.beam_radius_m =
        beam_radius_at(geometry.tx_waist_m(), geometry.wavelength_m(), geometry.distance_m());
    beam.u = compute_u(geometry.rx_radius_m(), beam.beam_radius_m);
    beam.a0 = compute_a0(beam.u);
    beam.w_eq_m = compute_w_eq(beam.beam_radius_m, beam.u);
    return beam;
}

double compute_u(double rx_radius_m, double beam_radius_m) {
    detail::require_positive(rx_radius_m, "rx_radius_m");
    detail::require_positive(beam_radius_m, "beam_radius_m");
    return std::sqrt(pi) * rx_radius_m / (std::sqrt(2.0) * beam_radius_m);
}

double compute_a0(double u) {
    detail::require_non_negative(u, "u");
    const double e = std::erf(u);
    return e * e;
}

double compute_w_eq(double beam_radius_m, double u) {
    detail::require_positive(beam_radius_m, "beam_radius_m");
    detail::require_positive(u, "u");
    double ratio = 0.0;
    if (u < 1e-4) {
        // sqrt(pi) erf(u) e^{u^2} / (2u) = 1 + 2u^2/3 + O(u^4)
        ratio = 1.0 + 2.0 * u * u / 3.0;
    } else {
        ratio = std::sqrt(pi) * std::erf(u) / (2.0 * u * std::exp(-u * u));
    }
    return beam_radius_m * std::sqrt(ratio);
}

double collected_fraction_exact(double displacement_m, double beam_radius_m, double rx_radius_m,
                                ApertureShape shape) {
    detail::require_non_negative(displacement_m, "displacement_m");
    detail::require_positive(beam_radius_m, "beam_radius_m");
    detail::require_positive(rx_radius_m, "rx_radius_m");

    const double w2 = beam_radius_m * beam_radius_m;
    const double peak = 2.0 / (pi * w2);
    const double r = displacement_m;
    constexpr double kTol = 1e-10;

    if (shape == ApertureShape::circular) {
        // Polar coordinates about the aperture centre; the integrand is even in phi.
        auto radial = [&](double rho) {
            auto angular = [&](double phi) {
                const double dist2 = rho * rho + r * r - 2.0 * rho * r * std::cos(phi);
                return std::exp(-2.0 * dist2 / w2);
            };
            return 2.0 * rho * adaptive_integral(angular, 0.0, pi, kTol);
        };
        return peak * adaptive_integral(radial, 0.0, rx_radius_m, kTol);
    }

    const double half_side = 0.5 * rx_radius_m * std::sqrt(pi);
    auto row = [&](double y) {
        auto cell = [&](double x) {
            const double dx = x - r;
            return std::exp(-2.0 * (dx * dx + y * y) / w2);
        };
        return adaptive_integral(cell, -half_side, half_side, kTol);
    };
    return peak * adaptive_integral(row, -half_side, half_side, kTol);
}

double gain_from_displacement(double displacement_m, const BeamAtReceiver& beam) {
    detail::require_non_negative(displacement_m, "displacement_m");
    const double x = displacement_m / beam.w_eq_m;
    return beam.a0 * std::exp(-2.0 * x * x);
}

}  // namespace jitterlink
