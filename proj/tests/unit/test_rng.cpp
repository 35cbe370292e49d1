#include <doctest.h>

#include <cmath>
#include <set>

#include "jitterlink/rng.hpp"

using jitterlink::Rng;
using jitterlink::split_seed;

TEST_CASE("engine matches the standard mt19937_64 sequence") {
    // The standard fixes the 10000th output of a default-seeded mt19937_64.
    Rng rng(5489u);
    for (int i = 0; i < 9999; ++i) rng.next_u64();
    CHECK(rng.next_u64() == 9981545732273789042ull);
}

TEST_CASE("same seed gives the same stream") {
    Rng a(42), b(42), c(43);
    bool differs = false;
    for (int i = 0; i < 1000; ++i) {
        const double x = a.normal();
        CHECK(x == b.normal());
        differs |= x != c.normal();
    }
    CHECK(differs);
}

TEST_CASE("split_seed separates streams") {
    std::set<std::uint64_t> seen;
    for (std::uint64_t s = 0; s < 4; ++s) {
        for (std::uint64_t k = 0; k < 64; ++k) seen.insert(split_seed(s, k));
    }
    CHECK(seen.size() == 256);
    CHECK(split_seed(7, 3) == split_seed(7, 3));
}

TEST_CASE("uniform and normal moments") {
    Rng rng(2024);
    const int n = 1'000'000;
    double su = 0, su2 = 0, sn = 0, sn2 = 0, sn4 = 0;
    double umin = 1, umax = 0;
    for (int i = 0; i < n; ++i) {
        const double u = rng.uniform();
        umin = std::min(umin, u);
        umax = std::max(umax, u);
        su += u;
        su2 += u * u;
        const double z = rng.normal();
        sn += z;
        sn2 += z * z;
        sn4 += z * z * z * z;
    }
    CHECK(umin >= 0.0);
    CHECK(umax < 1.0);
    CHECK(su / n == doctest::Approx(0.5).epsilon(0.002));
    CHECK(su2 / n - (su / n) * (su / n) == doctest::Approx(1.0 / 12).epsilon(0.005));
    CHECK(std::abs(sn / n) < 5.0 / std::sqrt(n));
    CHECK(sn2 / n == doctest::Approx(1.0).epsilon(0.005));
    CHECK(sn4 / n == doctest::Approx(3.0).epsilon(0.02));
}

TEST_CASE("open-closed uniform never returns zero") {
    Rng rng(1);
    for (int i = 0; i < 100000; ++i) {
        const double u = rng.uniform_open_closed();
        REQUIRE(u > 0.0);
        REQUIRE(u <= 1.0);
    }
}
