#include <doctest.h>

#include <cmath>
#include <numbers>
#include <string>

#include "jitterlink/error.hpp"
#include "jitterlink/scenario.hpp"

using namespace jitterlink;

namespace {

const std::string kMinimal = R"(
[signal]
f_if_hz = 400e3
sample_rate_hz = 5e6
duration_s = 1
)";

std::string error_of(const std::string& text) {
    try {
        parse_scenario(text, "test.ini");
    } catch (const ValidationError& e) {
        return e.what();
    }
    return {};
}

}  // namespace

TEST_CASE("shipped baseline scenario") {
    const auto s = load_scenario(std::string(JITTERLINK_SCENARIO_DIR) + "/paper_baseline.ini");
    CHECK(s.name == "paper_baseline");
    CHECK(s.link.tx_waist_m() == 0.1524);
    CHECK(s.link.distance_m() == 341.0);
    CHECK(s.link.carrier_frequency_hz() == 130e9);
    CHECK(s.signal.f_if_hz == 4e5);
    CHECK(s.signal.sample_rate_hz == 5e6);
    CHECK(s.link_budget().v_rx_v * s.beam().a0 == doctest::Approx(0.0512));
    CHECK(s.noise_sigma_v() == doctest::Approx(0.0512 / std::sqrt(2000.0)));
}

TEST_CASE("every shipped scenario loads") {
    for (const char* name : {"paper_baseline", "paper_gaussian_jitter", "paper_driven_1mode", "paper_driven_4mode",
                             "baseline_bias"}) {
        CAPTURE(name);
        CHECK_NOTHROW(load_scenario(std::string(JITTERLINK_SCENARIO_DIR) + "/" + name + ".ini").validate());
    }
    const auto four = load_scenario(std::string(JITTERLINK_SCENARIO_DIR) + "/paper_driven_4mode.ini");
    CHECK(four.motion.modes.size() == 4);
    CHECK(four.motion.modes[2].amp_az_rad == doctest::Approx(0.114 * std::numbers::pi / 180));
}

TEST_CASE("defaults and unit suffixes") {
    const auto s = parse_scenario(kMinimal + "[motion]\nkind = gaussian\ngaussian_sigma_az_deg = 0.01\n"
                                             "gaussian_sigma_el_rad = 2e-4\n");
    CHECK(s.link.distance_m() == 341.0);
    CHECK(s.motion.gaussian_sigma_az_rad == doctest::Approx(0.01 * std::numbers::pi / 180));
    CHECK(s.motion.gaussian_sigma_el_rad == 2e-4);
    CHECK(s.analysis.bins == 150);
}

TEST_CASE("Nyquist violation is rejected") {
    const auto msg = error_of("[signal]\nf_if_hz = 400e3\nsample_rate_hz = 600e3\n");
    CHECK(msg.find("Nyquist") != std::string::npos);
}

TEST_CASE("unknown keys and sections name the offender and line") {
    const auto msg = error_of("[signal]\nf_if_hz = 400e3\nsmaple_rate = 5e6\n");
    CHECK(msg.find("smaple_rate") != std::string::npos);
    CHECK(msg.find("test.ini:3") != std::string::npos);
    CHECK(error_of("[sginal]\n").find("sginal") != std::string::npos);
    CHECK(!error_of("[link]\ndistance_m = 341\ndistance_m = 342\n").empty());
    CHECK(!error_of("[link]\ndistance_m\n").empty());
    CHECK(!error_of("[motion]\nbias_az = 0.1\n").empty());
    CHECK(!error_of("[motion]\nbias_az_deg = 0.1\nbias_az_rad = 0.1\n").empty());
}

TEST_CASE("cross-field validation") {
    CHECK(!error_of("[signal]\nduration_s = 0\n").empty());
    CHECK(!error_of("[signal]\nf_lo_hz = 1e9\n").empty());
    CHECK(error_of("[signal]\nf_lo_hz = 129999600000\n").empty());
    CHECK(!error_of("[motion]\nkind = driven\n[mode]\nfrequency_hz = 30000\namp_az_deg = 0.1\n").empty());
    CHECK(!error_of("[signal]\nsnr_db = 30\nnoise_sigma_v = 0.1\n").empty());
    CHECK(!error_of("[analysis]\nlowpass_cutoff_hz = 500e3\n").empty());
}
