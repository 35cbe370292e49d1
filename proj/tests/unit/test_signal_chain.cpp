#include <doctest.h>

#include <cmath>
#include <numbers>
#include <numeric>

#include "jitterlink/error.hpp"
#include "jitterlink/signal_chain.hpp"

using namespace jitterlink;

namespace {

PointingTrace constant_gain(double g, double duration_s, double rate_hz) {
    PointingTrace t;
    t.sample_rate_hz = rate_hz;
    const auto n = static_cast<std::size_t>(std::llround(duration_s * rate_hz));
    for (std::size_t i = 0; i < n; ++i) t.sample_times_s.push_back(i / rate_hz);
    t.gain.assign(n, g);
    return t;
}

SignalConfig small_config() {
    SignalConfig c;
    c.f_if_hz = 100e3;
    c.sample_rate_hz = 1e6;
    c.duration_s = 0.2;
    return c;
}

}  // namespace

TEST_CASE("link budget") {
    const double lambda = kSpeedOfLight / 130e9;
    CHECK(free_space_amplitude(130e9, 341.0) == doctest::Approx(lambda / (4 * std::numbers::pi * 341.0)));
    CHECK(free_space_amplitude(130e9, 341.0) == doctest::Approx(5.3817e-7).epsilon(1e-4));
    CHECK(dbi_to_linear(50.0) == doctest::Approx(1e5));
    const auto b = static_gain({5e-7, 0.9, 1e5, 4e4, 2.0});
    CHECK(b.c_static == doctest::Approx(5e-7 * 0.9 * std::sqrt(4e9)));
    CHECK(b.v_rx_v == doctest::Approx(2.0 * b.c_static));
    CHECK_THROWS_AS(static_gain({1.5, 1.0, 1.0, 1.0, 1.0}), ValidationError);
    CHECK_THROWS_AS(static_gain({0.5, 1.0, 0.5, 1.0, 1.0}), ValidationError);
}

TEST_CASE("SNR convention is tone power over noise power") {
    const double s = noise_sigma_for_snr(0.05, 30.0);
    CHECK((0.05 * 0.05 / 2.0) / (s * s) == doctest::Approx(1000.0));
}

TEST_CASE("signal config validation") {
    auto c = small_config();
    CHECK_NOTHROW(c.validate());
    CHECK(c.sample_count() == 200000);
    c.sample_rate_hz = 600e3;
    c.f_if_hz = 400e3;
    CHECK_THROWS_AS(c.validate(), ValidationError);
    c = small_config();
    c.duration_s = 0.0;
    CHECK_THROWS_AS(c.validate(), ValidationError);
    c = small_config();
    c.carrier_frequency_hz = 130e9;
    c.f_lo_hz = 130e9 - 100e3;
    CHECK_NOTHROW(c.validate());
    c.f_lo_hz = 130e9 - 90e3;
    CHECK_THROWS_AS(c.validate(), ValidationError);
}

TEST_CASE("IF synthesis is the held gain times the tone") {
    auto cfg = small_config();
    PointingTrace t = constant_gain(0.5, 0.2, 10e3);
    t.gain[3] = 0.25;  // covers IF samples 300..399
    const auto y = synthesize_if_signal(t, cfg, 2.0);
    REQUIRE(y.size() == 200000);
    for (std::size_t k : {0u, 7u, 299u, 300u, 399u, 400u, 199999u}) {
        const double g = (k >= 300 && k < 400) ? 0.25 : 0.5;
        CHECK(y[k] == doctest::Approx(2.0 * g * std::sin(2 * std::numbers::pi * 0.1 * (k % 10))).epsilon(1e-12));
    }
}

TEST_CASE("IF synthesis is independent of block size and seeded") {
    auto cfg = small_config();
    cfg.noise_sigma_v = 0.01;
    cfg.seed = 77;
    const PointingTrace t = constant_gain(1.0, 0.2, 10e3);
    const auto whole = synthesize_if_signal(t, cfg, 1.0);
    IfSynthesizer synth(t, cfg, 1.0);
    std::vector<double> pieces;
    std::vector<double> block(997);
    while (const auto n = synth.generate(block)) pieces.insert(pieces.end(), block.begin(), block.begin() + n);
    CHECK(pieces == whole);
    cfg.seed = 78;
    CHECK(synthesize_if_signal(t, cfg, 1.0) != whole);
    CHECK_THROWS_AS(IfSynthesizer(constant_gain(1.0, 0.1, 10e3), small_config(), 1.0), ValidationError);
}

TEST_CASE("envelope of a steady tone is its amplitude") {
    const auto cfg = small_config();
    const auto y = synthesize_if_signal(constant_gain(0.8, 0.2, 10e3), cfg, 0.0625);
    const auto env = extract_envelope(y, cfg, 2000.0);
    CHECK(env.sample_rate_hz == doctest::Approx(10e3));
    const std::size_t first = env.first_settled(env.settle_time_s());
    REQUIRE(first < env.size());
    for (std::size_t k = first; k < env.size(); ++k) REQUIRE(env.envelope_v[k] == doctest::Approx(0.05).epsilon(1e-6));
}

TEST_CASE("envelope timing is delay compensated") {
    auto cfg = small_config();
    PointingTrace t = constant_gain(1.0, 0.2, 10e3);
    for (std::size_t i = 1000; i < t.size(); ++i) t.gain[i] = 0.5;  // step at 0.1 s
    const auto env = extract_envelope(synthesize_if_signal(t, cfg, 1.0), cfg, 2000.0);
    std::size_t cross = 0;
    while (cross < env.size() && !(env.sample_times_s[cross] > 0.05 && env.envelope_v[cross] < 0.75)) ++cross;
    REQUIRE(cross < env.size());
    CHECK(std::abs(env.sample_times_s[cross] - 0.1) <= 1.0 / env.sample_rate_hz);
}

TEST_CASE("streamed envelope equals one-shot envelope") {
    auto cfg = small_config();
    cfg.noise_sigma_v = 0.05;
    const auto y = synthesize_if_signal(constant_gain(1.0, 0.2, 10e3), cfg, 1.0);
    const auto whole = extract_envelope(y, cfg, 2000.0);
    EnvelopeDetector det(cfg.f_if_hz, cfg.sample_rate_hz, EnvelopeOptions{2000.0, 0.0});
    std::size_t pos = 0;
    std::size_t step = 1;
    while (pos < y.size()) {
        const std::size_t n = std::min(step, y.size() - pos);
        det.push(std::span<const double>(y.data() + pos, n));
        pos += n;
        step = step * 3 % 4099 + 1;
    }
    const auto streamed = det.take();
    CHECK(streamed.envelope_v == whole.envelope_v);
    CHECK(streamed.sample_times_s == whole.sample_times_s);
}

TEST_CASE("noise-only envelope is Rayleigh") {
    auto cfg = small_config();
    cfg.duration_s = 2.0;
    cfg.noise_sigma_v = 0.1;
    const auto y = synthesize_if_signal(constant_gain(0.0, 2.0, 10e3), cfg, 1.0);
    EnvelopeDetector det(cfg.f_if_hz, cfg.sample_rate_hz, EnvelopeOptions{2000.0, 0.0});
    det.push(y);
    const double sum_h2 = det.noise_gain();
    const auto& h = det.taps();
    CHECK(sum_h2 == doctest::Approx(std::inner_product(h.begin(), h.end(), h.begin(), 0.0)));
    const auto env = det.take();
    const std::size_t first = env.first_settled(env.settle_time_s());
    double m = 0;
    for (std::size_t k = first; k < env.size(); ++k) m += env.envelope_v[k];
    m /= static_cast<double>(env.size() - first);
    const double s = 0.1 * std::sqrt(2.0 * sum_h2);
    CHECK(m == doctest::Approx(s * std::sqrt(std::numbers::pi / 2.0)).epsilon(0.03));
}

TEST_CASE("baseline reference and normalization") {
    EnvelopeTrace env;
    env.sample_rate_hz = 10.0;
    env.group_delay_s = 0.1;
    for (int k = 0; k < 20; ++k) {
        env.sample_times_s.push_back(k / 10.0);
        env.envelope_v.push_back(k < 5 ? 0.0 : 2.0);
    }
    CHECK(env.first_settled(0.5) == 5);
    CHECK(baseline_reference(env, env.settle_time_s()) == doctest::Approx(2.0));
    const auto n = normalize_envelope(env, 2.0);
    REQUIRE(n.normalized.has_value());
    const auto settled = settled_normalized(n, 0.5);
    CHECK(settled.size() == 15);
    for (double v : settled) CHECK(v == 1.0);
    CHECK_THROWS_AS(baseline_reference(env, 5.0), ValidationError);
    CHECK_THROWS_AS(normalize_envelope(env, 0.0), ValidationError);
}

TEST_CASE("detector rejects a cutoff at or above the IF") {
    CHECK_THROWS_AS(EnvelopeDetector(100e3, 1e6, EnvelopeOptions{100e3, 0.0}), ValidationError);
}
