#include <doctest.h>

#include <cmath>
#include <numbers>

#include "jitterlink/beam_optics.hpp"
#include "jitterlink/error.hpp"
#include "oracles.hpp"

using namespace jitterlink;

namespace {
const LinkGeometry kLink341{130e9, 0.1524, 341.0, 0.1524};
}

TEST_CASE("std::erf against the positive-term series") {
    double worst = 0.0;
    for (double x = 0.0; x <= 6.0; x += 0.01) {
        const double ref = oracle::erf_series(x);
        if (ref > 0) worst = std::max(worst, std::abs(std::erf(x) - ref) / ref);
    }
    CHECK(worst <= 1e-12);
    CHECK(std::erf(0.5) == doctest::Approx(0.5204998778130465).epsilon(1e-14));
    CHECK(std::erf(1.0) == doctest::Approx(0.8427007929497149).epsilon(1e-14));
    CHECK(std::erf(2.0) == doctest::Approx(0.9953222650189527).epsilon(1e-14));
    CHECK(std::erf(3.0) == doctest::Approx(0.9999779095030014).epsilon(1e-14));
}

TEST_CASE("beam radius at 341 m") {
    const double lambda = kSpeedOfLight / 130e9;
    CHECK(kLink341.wavelength_m() == doctest::Approx(2.306096e-3).epsilon(1e-6));
    const double zr = std::numbers::pi * 0.1524 * 0.1524 / lambda;
    CHECK(kLink341.rayleigh_range_m() == doctest::Approx(zr).epsilon(1e-14));
    const double w = beam_radius_at(0.1524, lambda, 341.0);
    CHECK(w == doctest::Approx(1.649523).epsilon(1e-6));
    CHECK(std::abs(w / 1.651 - 1.0) < 0.005);
    CHECK(beam_radius_at(0.1524, lambda, 0.0) == 0.1524);
}

TEST_CASE("u, A0 and w_eq") {
    CHECK(compute_a0(0.115691) == doctest::Approx(0.01689044126).epsilon(1e-9));
    CHECK(compute_w_eq(1.651, 0.115691) == doctest::Approx(1.658388938).epsilon(1e-9));
    CHECK(compute_w_eq(1.0, 1.0) == doctest::Approx(1.424808222).epsilon(1e-9));
    CHECK(compute_u(0.1524, 1.651) == doctest::Approx(0.115691).epsilon(2e-5));

    const auto beam = propagate_beam(kLink341);
    CHECK(beam.u == doctest::Approx(0.1157941).epsilon(1e-6));
    CHECK(beam.a0 == doctest::Approx(0.0169203).epsilon(1e-5));
    CHECK(beam.w_eq_m == doctest::Approx(1.656919).epsilon(1e-6));
    CHECK(std::abs(beam.w_eq_m / 1.6584 - 1.0) < 0.005);
}

TEST_CASE("w_eq small-u branch is continuous") {
    const double below = compute_w_eq(2.0, 0.99e-4);
    const double above = compute_w_eq(2.0, 1.01e-4);
    CHECK(below == doctest::Approx(above).epsilon(1e-9));
    CHECK(compute_w_eq(2.0, 1e-7) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("square aperture quadrature reproduces erf squared") {
    const auto beam = propagate_beam(kLink341);
    const double q = collected_fraction_exact(0.0, beam.beam_radius_m, 0.1524, ApertureShape::equal_area_square);
    CHECK(std::abs(q / beam.a0 - 1.0) < 1e-9);
    const LinkGeometry wide{130e9, 0.1524, 50.0, 0.1524};
    const auto b2 = propagate_beam(wide);
    CHECK(collected_fraction_exact(0.0, b2.beam_radius_m, 0.1524, ApertureShape::equal_area_square) ==
          doctest::Approx(b2.a0).epsilon(1e-9));
}

TEST_CASE("disc aperture quadrature against a midpoint-rule oracle") {
    const double w = 1.649523;
    const double a = 0.1524;
    for (double r : {0.0, 0.5, 1.5, 3.0}) {
        const double ref = oracle::disc_fraction(r, w, a);
        CHECK(collected_fraction_exact(r, w, a) == doctest::Approx(ref).epsilon(1e-5));
    }
    // Small-beam limit: the disc catches 1 - exp(-2a^2/w^2) of a centred beam.
    CHECK(collected_fraction_exact(0.0, 0.2, 0.15) == doctest::Approx(1.0 - std::exp(-2.0 * 0.15 * 0.15 / 0.04)).epsilon(1e-8));
}

TEST_CASE("Gaussian displacement approximation holds within 2% near the axis") {
    const auto beam = propagate_beam(kLink341);
    const double a0_disc = collected_fraction_exact(0.0, beam.beam_radius_m, 0.1524);
    for (double r : {0.1, 0.5, 1.0, beam.w_eq_m}) {
        const double exact = collected_fraction_exact(r, beam.beam_radius_m, 0.1524);
        const double approx = a0_disc * std::exp(-2.0 * r * r / (beam.w_eq_m * beam.w_eq_m));
        CHECK(std::abs(approx / exact - 1.0) <= 0.02);
    }
    CHECK(gain_from_displacement(0.0881, beam) == doctest::Approx(beam.a0 * 0.99437162).epsilon(2e-5));
    CHECK(gain_from_displacement(0.0, beam) == beam.a0);
}

TEST_CASE("geometry validation") {
    CHECK_THROWS_AS(LinkGeometry(0.0, 0.15, 341, 0.15), ValidationError);
    CHECK_THROWS_AS(LinkGeometry(130e9, -0.15, 341, 0.15), ValidationError);
    CHECK_THROWS_AS(LinkGeometry(130e9, 0.15, NAN, 0.15), ValidationError);
    CHECK_THROWS_AS(compute_a0(-1.0), ValidationError);
}
