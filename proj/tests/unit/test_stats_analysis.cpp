#include <doctest.h>

#include <cmath>
#include <numbers>
#include <numeric>

#include "jitterlink/error.hpp"
#include "jitterlink/rng.hpp"
#include "jitterlink/stats_analysis.hpp"
#include "oracles.hpp"

using namespace jitterlink;

namespace {

GainHistogram from_densities(std::vector<double> d) {
    GainHistogram h;
    for (std::size_t i = 0; i <= d.size(); ++i) h.bin_edges.push_back(static_cast<double>(i) / d.size());
    h.densities = std::move(d);
    h.min = 0.0;
    h.max = 1.0;
    return h;
}

std::vector<double> locations(const std::vector<Mode>& modes) {
    std::vector<double> out;
    for (const auto& m : modes) out.push_back(m.location);
    return out;
}

}  // namespace

TEST_CASE("histogram densities integrate to one") {
    std::vector<double> v;
    for (int i = 0; i < 1000; ++i) v.push_back(i % 10 == 0 ? 0.25 : 0.75 + 0.0001 * i);
    const auto h = histogram(v, 50);
    CHECK(h.bin_count() == 50);
    CHECK(h.bin_edges.front() == 0.25);
    CHECK(h.bin_edges.back() == doctest::Approx(0.75 + 0.0999));
    double mass = 0;
    for (std::size_t i = 0; i < h.bin_count(); ++i) mass += h.densities[i] * h.bin_width();
    CHECK(mass == doctest::Approx(1.0));
    CHECK(h.densities[0] * h.bin_width() == doctest::Approx(0.1));
    CHECK(h.sample_count == 1000);
}

TEST_CASE("histogram edge cases") {
    CHECK_THROWS_AS(histogram(std::vector<double>(99, 0.5)), ValidationError);
    const auto h = histogram(std::vector<double>(200, 0.5));
    CHECK(h.degenerate);
    REQUIRE(h.bin_count() == 1);
    CHECK(h.densities[0] * h.bin_width() == doctest::Approx(1.0));
}

TEST_CASE("running statistics") {
    Rng rng(1);
    std::vector<double> v(10001);
    for (auto& x : v) x = 1e6 + rng.normal();
    RunningStats all, left, right;
    for (std::size_t i = 0; i < v.size(); ++i) {
        all.push(v[i]);
        (i < 4000 ? left : right).push(v[i]);
    }
    const double m = std::accumulate(v.begin(), v.end(), 0.0) / v.size();
    double ss = 0;
    for (double x : v) ss += (x - m) * (x - m);
    CHECK(all.mean() == doctest::Approx(m).epsilon(1e-14));
    CHECK(all.variance() == doctest::Approx(ss / (v.size() - 1)).epsilon(1e-9));
    left.merge(right);
    CHECK(left.count() == all.count());
    CHECK(left.mean() == doctest::Approx(all.mean()).epsilon(1e-14));
    CHECK(left.variance() == doctest::Approx(all.variance()).epsilon(1e-9));
    const auto s = summary_stats(v);
    CHECK(s.count == v.size());
    CHECK(s.variance == doctest::Approx(all.variance()).epsilon(1e-9));
}

TEST_CASE("mode detection: interior and edge peaks") {
    const auto h = from_densities({5, 1, 1, 1, 4, 1, 1, 1, 1, 3});
    CHECK(locations(detect_modes(h)) == std::vector<double>{0.05, 0.45, 0.95});
    const auto m = detect_modes(h);
    CHECK(m[1].prominence == doctest::Approx(3.0));
    CHECK(m[2].prominence == doctest::Approx(2.0));
}

TEST_CASE("mode detection: prominence threshold") {
    // The bump at index 5 rises 0.2 above its flanks: 4% of the maximum, below the 5% default.
    const auto h = from_densities({1, 1, 5, 1, 1, 1.2, 1, 1, 1, 1});
    CHECK(detect_modes(h).size() == 1);
    CHECK(detect_modes(h, {0.03, 0.02}).size() == 2);
}

TEST_CASE("mode detection: separation keeps the taller peak") {
    std::vector<double> d(100, 0.1);
    d[40] = 3.0;
    d[42] = 2.0;
    d[80] = 1.0;
    const auto h = from_densities(d);
    CHECK(locations(detect_modes(h)) == std::vector<double>{0.405, 0.805});
    CHECK(detect_modes(h, {0.05, 0.01}).size() == 3);
}

TEST_CASE("mode detection: plateau counts once") {
    const auto h = from_densities({1, 3, 3, 3, 1, 1, 1, 1, 1, 1});
    CHECK(detect_modes(h).size() == 1);
}

TEST_CASE("peak density recovers gamma squared at the edge") {
    const MisalignmentModel m(3.0, 1.0);
    const auto v = sample(1'000'000, m, 11);
    const auto h = histogram(v);
    CHECK(peak_density(h) == doctest::Approx(9.0).epsilon(0.03));
    CHECK(peak_density(from_densities({1, 4, 2})) == 4.0);
}

TEST_CASE("mean fit inverts the closed-form mean") {
    const auto r = fit_gamma_to_mean(0.988825, FitGeometry{1.6584, 341.0});
    const double ref = oracle::bisect([](double g) { return g * g / (g * g + 1) - 0.988825; }, 1.0, 100.0);
    CHECK(r.gamma == doctest::Approx(ref).epsilon(1e-12));
    CHECK(r.gamma == doctest::Approx(9.406671).epsilon(1e-6));
    REQUIRE(r.sigma_theta_rad.has_value());
    CHECK(*r.sigma_theta_rad * 180 / std::numbers::pi == doctest::Approx(0.0148112).epsilon(1e-5));
    CHECK(std::abs(r.residual) < 1e-12);
    CHECK_THROWS_AS(fit_gamma_to_mean(1.0), NoFitError);
    CHECK_THROWS_AS(fit_gamma_to_mean(0.0), NoFitError);
}

TEST_CASE("variance fit finds both branches") {
    auto nv = [](double g) {
        const double g2 = g * g;
        return g2 / ((g2 + 2) * (g2 + 1) * (g2 + 1));
    };
    const double g_peak = std::sqrt((std::sqrt(5.0) - 1.0) / 2.0);
    for (double target : {0.000016, 0.000304, 0.000335, 0.011380, 1.0 / 12.0}) {
        const auto r = fit_gamma_to_variance(target);
        REQUIRE(r.roots.size() == 2);
        const double lo = oracle::bisect([&](double g) { return nv(g) - target; }, 1e-6, g_peak);
        const double hi = oracle::bisect([&](double g) { return nv(g) - target; }, g_peak, 1e3);
        CHECK(r.roots[0] == doctest::Approx(lo).epsilon(1e-9));
        CHECK(r.roots[1] == doctest::Approx(hi).epsilon(1e-9));
        CHECK(r.gamma == r.roots[1]);
    }
    CHECK(fit_gamma_to_variance(0.000335).gamma == doctest::Approx(7.254401).epsilon(1e-6));
    CHECK(fit_gamma_to_variance(1.0 / 12.0).roots[0] == doctest::Approx(0.6101486).epsilon(1e-6));
    CHECK(fit_gamma_to_variance(1.0 / 12.0).roots[1] == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(max_normalized_variance() == doctest::Approx((5 * std::sqrt(5.0) - 11) / 2));
    CHECK_THROWS_AS(fit_gamma_to_variance(0.0902), NoFitError);
    CHECK_THROWS_AS(fit_gamma_to_variance(0.0), NoFitError);
}

TEST_CASE("peak fit") {
    CHECK(fit_gamma_to_peak(25.0).gamma == doctest::Approx(5.0));
    CHECK(fit_gamma_to_peak(1.0).gamma == 1.0);
    CHECK_THROWS_AS(fit_gamma_to_peak(0.9), NoFitError);
}

TEST_CASE("KS distance against an independent implementation") {
    const MisalignmentModel m(2.0, 1.0);
    auto v = sample(5000, MisalignmentModel(2.2, 1.0), 4);
    const double ref = oracle::ks(v, [](double x) { return std::pow(std::clamp(x, 0.0, 1.0), 4.0); });
    CHECK(ks_distance(v, m) == doctest::Approx(ref).epsilon(1e-12));
    v.push_back(1.05);  // values above A0 sit at CDF 1
    CHECK(ks_distance(v, m) > 0.0);
    CHECK_THROWS_AS(ks_distance(std::vector<double>(10, 0.5), m), ValidationError);
}

TEST_CASE("clamp above one") {
    const std::vector<double> v{0.5, 1.0, 1.2};
    CHECK(clamp_normalized(v) == std::vector<double>{0.5, 1.0, 1.0});
}
