#pragma once

namespace jitterlink {

inline constexpr double kSpeedOfLight = 299'792'458.0;  // m/s

/// Physical parameters of a point-to-point Gaussian-beam link.
class LinkGeometry {
public:
    /// Throws ValidationError unless every argument is strictly positive and finite.
    LinkGeometry(double carrier_frequency_hz, double tx_waist_m, double distance_m, double rx_radius_m);

    double carrier_frequency_hz() const noexcept { return carrier_frequency_hz_; }
    double tx_waist_m() const noexcept { return tx_waist_m_; }
    double distance_m() const noexcept { return distance_m_; }
    double rx_radius_m() const noexcept { return rx_radius_m_; }

    double wavelength_m() const noexcept { return kSpeedOfLight / carrier_frequency_hz_; }
    /// pi * w0^2 / lambda.
    double rayleigh_range_m() const noexcept;

private:
    double carrier_frequency_hz_;
    double tx_waist_m_;
    double distance_m_;
    double rx_radius_m_;
};

/// Beam quantities at the receiver plane.
struct BeamAtReceiver {
    double beam_radius_m = 0.0;  ///< 1/e^2 intensity radius w_d
    double u = 0.0;              ///< sqrt(pi) * a / (sqrt(2) * w_d)
    double a0 = 0.0;             ///< collected power fraction at perfect alignment, erf(u)^2
    double w_eq_m = 0.0;         ///< equivalent beam width
};

/// Fundamental-mode Gaussian beam radius after `distance_m` of free propagation.
double beam_radius_at(double tx_waist_m, double wavelength_m, double distance_m);

/// Propagate the transmit beam to the receiver and derive u, A0 and w_eq.
BeamAtReceiver propagate_beam(const LinkGeometry& geometry);

double compute_u(double rx_radius_m, double beam_radius_m);

/// erf(u)^2. Defined for u >= 0.
double compute_a0(double u);

/// w_d * sqrt(sqrt(pi) * erf(u) / (2 u exp(-u^2))). Falls back to the series limit for tiny u.
double compute_w_eq(double beam_radius_m, double u);

enum class ApertureShape {
    circular,           ///< disc of radius a
    equal_area_square,  ///< square of side a*sqrt(pi); the aperture erf(u)^2 describes exactly
};

/// Fraction of transmitted power falling on the receive aperture when the beam centre is
/// offset by `displacement_m`, by adaptive 2-D Gauss-Kronrod quadrature of the Gaussian
/// intensity profile (relative error <= 1e-8). Throws IntegrationError on non-convergence.
double collected_fraction_exact(double displacement_m, double beam_radius_m, double rx_radius_m,
                                ApertureShape shape = ApertureShape::circular);

/// A0 * exp(-2 r^2 / w_eq^2).
double gain_from_displacement(double displacement_m, const BeamAtReceiver& beam);

}  // namespace jitterlink
