#include "jitterlink/scenario.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>

#include "jitterlink/error.hpp"

namespace jitterlink {
namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

class Parser {
public:
    Parser(std::string_view text, std::string_view source) : text_(text), source_(source) {}

    Scenario run();

private:
    [[noreturn]] void fail(const std::string& message) const {
        throw ValidationError(std::string(source_) + ":" + std::to_string(line_) + ": " + message);
    }

    double number(std::string_view value) const {
        double out = 0.0;
        const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
        if (ec != std::errc{} || ptr != value.data() + value.size() || !std::isfinite(out)) {
            fail("expected a number, got '" + std::string(value) + "'");
        }
        return out;
    }

    std::uint64_t integer(std::string_view value) const {
        std::uint64_t out = 0;
        const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
        if (ec != std::errc{} || ptr != value.data() + value.size()) {
            fail("expected a non-negative integer, got '" + std::string(value) + "'");
        }
        return out;
    }

    bool boolean(std::string_view value) const {
        if (value == "true" || value == "1" || value == "yes") return true;
        if (value == "false" || value == "0" || value == "no") return false;
        fail("expected true or false, got '" + std::string(value) + "'");
    }

    // Angle keys carry an explicit _rad or _deg suffix; giving both spellings is an error.
    bool angle(std::string_view key, std::string_view value, std::string_view stem, double& target) {
        const std::string rad = std::string(stem) + "_rad";
        const std::string deg = std::string(stem) + "_deg";
        if (key != rad && key != deg) return false;
        const std::string slot = section_ + "." + std::to_string(mode_index_) + "." + std::string(stem);
        if (!angle_slots_.emplace(slot, line_).second) fail("angle '" + std::string(stem) + "' given twice");
        target = key == rad ? number(value) : number(value) * kDegToRad;
        return true;
    }

    void assign(Scenario& s, std::string_view key, std::string_view value);

    std::string_view text_;
    std::string_view source_;
    std::size_t line_ = 0;
    std::string section_;
    std::size_t mode_index_ = 0;
    std::map<std::string, std::size_t> angle_slots_;
    std::map<std::string, std::size_t> seen_;
};

void Parser::assign(Scenario& s, std::string_view key, std::string_view value) {
    const std::string k(key);
    if (section_ != "mode") {
        const std::string slot = section_ + "." + k;
        if (!seen_.emplace(slot, line_).second) fail("duplicate key '" + k + "'");
    }

    if (section_ == "scenario") {
        if (k == "name") s.name = std::string(value);
        else if (k == "description") s.description = std::string(value);
        else fail("unknown key '" + k + "' in [scenario]");
    } else if (section_ == "link") {
        double f = s.link.carrier_frequency_hz();
        double w0 = s.link.tx_waist_m();
        double d = s.link.distance_m();
        double a = s.link.rx_radius_m();
        if (k == "carrier_frequency_hz") f = number(value);
        else if (k == "tx_waist_m") w0 = number(value);
        else if (k == "distance_m") d = number(value);
        else if (k == "rx_radius_m") a = number(value);
        else fail("unknown key '" + k + "' in [link]");
        try {
            s.link = LinkGeometry(f, w0, d, a);
        } catch (const ValidationError& e) {
            fail(e.what());
        }
    } else if (section_ == "budget") {
        auto& b = s.budget;
        if (k == "tx_gain_dbi") b.tx_gain_linear = dbi_to_linear(number(value));
        else if (k == "rx_gain_dbi") b.rx_gain_linear = dbi_to_linear(number(value));
        else if (k == "tx_gain_linear") b.tx_gain_linear = number(value);
        else if (k == "rx_gain_linear") b.rx_gain_linear = number(value);
        else if (k == "atmospheric_amplitude") b.atmospheric_amplitude = number(value);
        else if (k == "path_loss_amplitude") b.path_loss_amplitude = number(value);
        else if (k == "tx_voltage_v") b.tx_voltage_v = number(value);
        else if (k == "baseline_envelope_v") b.baseline_envelope_v = number(value);
        else fail("unknown key '" + k + "' in [budget]");
    } else if (section_ == "motion") {
        auto& m = s.motion;
        if (k == "kind") {
            if (value == "gaussian") m.kind = MotionKind::gaussian;
            else if (value == "driven") m.kind = MotionKind::driven;
            else fail("motion kind must be 'gaussian' or 'driven'");
        } else if (angle(key, value, "gaussian_sigma_az", m.gaussian_sigma_az_rad)) {
        } else if (angle(key, value, "gaussian_sigma_el", m.gaussian_sigma_el_rad)) {
        } else if (angle(key, value, "bias_az", m.bias_az_rad)) {
        } else if (angle(key, value, "bias_el", m.bias_el_rad)) {
        } else if (k == "gaussian_bandwidth_hz") {
            m.gaussian_bandwidth_hz = number(value);
        } else if (k == "motion_rate_hz") {
            s.motion_rate_hz = number(value);
        } else if (k == "critical_window_s") {
            s.critical_window_s = number(value);
        } else {
            fail("unknown key '" + k + "' in [motion]");
        }
    } else if (section_ == "mode") {
        auto& mode = s.motion.modes.back();
        const std::string slot = "mode." + std::to_string(mode_index_) + "." + k;
        if (!seen_.emplace(slot, line_).second) fail("duplicate key '" + k + "'");
        if (k == "frequency_hz") mode.frequency_hz = number(value);
        else if (angle(key, value, "amp_az", mode.amp_az_rad)) {
        } else if (angle(key, value, "amp_el", mode.amp_el_rad)) {
        } else if (angle(key, value, "phase_az", mode.phase_az_rad)) {
        } else if (angle(key, value, "phase_el", mode.phase_el_rad)) {
        } else {
            fail("unknown key '" + k + "' in [mode]");
        }
    } else if (section_ == "signal") {
        auto& c = s.signal;
        if (k == "f_if_hz") c.f_if_hz = number(value);
        else if (k == "f_lo_hz") c.f_lo_hz = number(value);
        else if (k == "sample_rate_hz") c.sample_rate_hz = number(value);
        else if (k == "duration_s") c.duration_s = number(value);
        else if (k == "noise_sigma_v") c.noise_sigma_v = number(value);
        else if (k == "snr_db") s.snr_db = number(value);
        else if (k == "seed") c.seed = integer(value);
        else fail("unknown key '" + k + "' in [signal]");
    } else if (section_ == "analysis") {
        auto& a = s.analysis;
        if (k == "bins") a.bins = static_cast<std::size_t>(integer(value));
        else if (k == "min_prominence_frac") a.modes.min_prominence_frac = number(value);
        else if (k == "min_separation_frac") a.modes.min_separation_frac = number(value);
        else if (k == "lowpass_cutoff_hz") a.lowpass_cutoff_hz = number(value);
        else if (k == "settle_group_delays") a.settle_group_delays = number(value);
        else if (k == "clamp_above_one") a.clamp_above_one = boolean(value);
        else if (k == "fit_disagreement_threshold") a.fit_disagreement_threshold = number(value);
        else if (k == "fit_ks_threshold") a.fit_ks_threshold = number(value);
        else fail("unknown key '" + k + "' in [analysis]");
    } else if (section_ == "output") {
        if (k == "dir") s.output_dir = std::string(value);
        else fail("unknown key '" + k + "' in [output]");
    } else {
        fail("key outside of a section");
    }
}

Scenario Parser::run() {
    Scenario s;
    std::size_t pos = 0;
    while (pos <= text_.size()) {
        const auto end = text_.find('\n', pos);
        std::string_view raw = text_.substr(pos, end == std::string_view::npos ? std::string_view::npos : end - pos);
        pos = end == std::string_view::npos ? text_.size() + 1 : end + 1;
        ++line_;

        const auto comment = raw.find_first_of("#;");
        const std::string_view line = trim(raw.substr(0, comment));
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']') fail("malformed section header");
            section_ = std::string(trim(line.substr(1, line.size() - 2)));
            static const char* known[] = {"scenario", "link", "budget", "motion", "mode", "signal", "analysis", "output"};
            bool ok = false;
            for (const char* name : known) ok = ok || section_ == name;
            if (!ok) fail("unknown section [" + section_ + "]");
            if (section_ == "mode") {
                s.motion.modes.emplace_back();
                ++mode_index_;
            }
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) fail("expected key = value");
        const auto key = trim(line.substr(0, eq));
        const auto value = trim(line.substr(eq + 1));
        if (key.empty()) fail("empty key");
        if (value.empty()) fail("empty value for '" + std::string(key) + "'");
        if (section_.empty()) fail("key '" + std::string(key) + "' outside of a section");
        assign(s, key, value);
    }
    s.signal.carrier_frequency_hz = s.link.carrier_frequency_hz();

    try {
        s.validate();
    } catch (const ValidationError& e) {
        throw ValidationError(std::string(source_) + ": " + e.what());
    }
    return s;
}

}  // namespace

LinkBudget Scenario::link_budget() const {
    const double h_pl = budget.path_loss_amplitude.value_or(
        free_space_amplitude(link.carrier_frequency_hz(), link.distance_m()));
    LinkBudgetInputs in{h_pl, budget.atmospheric_amplitude, budget.tx_gain_linear, budget.rx_gain_linear, 1.0};
    if (budget.tx_voltage_v) {
        in.v_tx_v = *budget.tx_voltage_v;
    } else if (budget.baseline_envelope_v) {
        const double c = h_pl * budget.atmospheric_amplitude * std::sqrt(budget.tx_gain_linear * budget.rx_gain_linear);
        in.v_tx_v = *budget.baseline_envelope_v / (c * beam().a0);
    }
    return static_gain(in);
}

double Scenario::noise_sigma_v() const {
    if (!snr_db) return signal.noise_sigma_v;
    return noise_sigma_for_snr(link_budget().v_rx_v * beam().a0, *snr_db);
}

FitGeometry Scenario::fit_geometry() const { return FitGeometry{beam().w_eq_m, link.distance_m()}; }

void Scenario::validate() const {
    motion.validate();
    SignalConfig cfg = signal;
    cfg.carrier_frequency_hz = link.carrier_frequency_hz();
    cfg.validate();
    detail::require(!(budget.tx_voltage_v && budget.baseline_envelope_v),
                    "give either tx_voltage_v or baseline_envelope_v, not both");
    detail::require(!(snr_db && signal.noise_sigma_v > 0.0), "give either noise_sigma_v or snr_db, not both");
    detail::require_positive(motion_rate_hz, "motion_rate_hz");
    detail::require(motion_rate_hz <= signal.sample_rate_hz, "motion_rate_hz cannot exceed sample_rate_hz");
    const double fmax = motion.max_mode_frequency_hz();
    detail::require(fmax < 0.5 * signal.sample_rate_hz, "mode frequencies must lie below sample_rate_hz / 2");
    detail::require(fmax < 0.5 * motion_rate_hz, "mode frequencies must lie below motion_rate_hz / 2");
    detail::require(motion.gaussian_bandwidth_hz < 0.5 * motion_rate_hz,
                    "gaussian_bandwidth_hz must lie below motion_rate_hz / 2");
    detail::require(analysis.bins >= 1, "bins must be positive");
    detail::require(analysis.lowpass_cutoff_hz < signal.f_if_hz, "lowpass_cutoff_hz must lie below f_if_hz");
    detail::require(analysis.settle_group_delays >= 0.0, "settle_group_delays must be non-negative");
    (void)link_budget();
}

Scenario parse_scenario(std::string_view text, std::string_view source) {
    return Parser(text, source).run();
}

Scenario load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open scenario " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_scenario(buffer.str(), path.string());
}

}  // namespace jitterlink
