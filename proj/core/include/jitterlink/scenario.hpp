#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "jitterlink/beam_optics.hpp"
#include "jitterlink/jitter_motion.hpp"
#include "jitterlink/signal_chain.hpp"
#include "jitterlink/stats_analysis.hpp"

namespace jitterlink {

/// Antenna gains, absorption and drive level. Path loss defaults to the free-space value.
struct BudgetSpec {
    double tx_gain_linear = 1e5;  // 50 dBi
    double rx_gain_linear = 1e5;
    double atmospheric_amplitude = 1.0;
    std::optional<double> path_loss_amplitude;
    std::optional<double> tx_voltage_v;
    /// Perfect-alignment envelope V_rx * A0; sets V_tx when given instead of tx_voltage_v.
    std::optional<double> baseline_envelope_v;
};

struct AnalysisOptions {
    std::size_t bins = kDefaultBinCount;
    ModeDetectionOptions modes;
    double lowpass_cutoff_hz = 2000.0;
    double settle_group_delays = 5.0;
    bool clamp_above_one = false;
    /// Mean- and variance-fit gammas differing by more than this fraction flag a failed fit.
    double fit_disagreement_threshold = 0.25;
    /// A best-fit KS distance above this flags a failed fit.
    double fit_ks_threshold = 0.1;
};

/// Everything one simulate/analyze run needs. Defaults reproduce the 341 m, 130 GHz link.
struct Scenario {
    std::string name = "unnamed";
    std::string description;
    LinkGeometry link{130e9, 0.1524, 341.0, 0.1524};
    BudgetSpec budget;
    MotionSpec motion;
    double motion_rate_hz = 50e3;
    std::optional<double> critical_window_s;
    SignalConfig signal;
    std::optional<double> snr_db;
    AnalysisOptions analysis;
    std::filesystem::path output_dir = "out";

    BeamAtReceiver beam() const { return propagate_beam(link); }
    LinkBudget link_budget() const;
    /// Noise standard deviation after applying snr_db (relative to V_rx * A0) if present.
    double noise_sigma_v() const;
    FitGeometry fit_geometry() const;
    /// Cross-field checks: Nyquist, IF plan, mode frequencies against both sample rates.
    void validate() const;
};

/// Parse scenario text. `source` prefixes error messages ("source:line: ...").
/// Throws ValidationError on syntax errors, unknown sections or keys, and invariant violations.
Scenario parse_scenario(std::string_view text, std::string_view source = "<scenario>");

Scenario load_scenario(const std::filesystem::path& path);

}  // namespace jitterlink
