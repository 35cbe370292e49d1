#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "jitterlink/jitter_motion.hpp"
#include "jitterlink/rng.hpp"

namespace jitterlink {

/// Static channel terms folded into the constant C = h_pl * h_a * sqrt(G_t G_r).
struct LinkBudgetInputs {
    double h_pl = 1.0;    ///< free-space path loss, amplitude fraction
    double h_a = 1.0;     ///< atmospheric absorption, amplitude fraction
    double g_t = 1.0;     ///< linear transmit antenna gain
    double g_r = 1.0;     ///< linear receive antenna gain
    double v_tx_v = 1.0;  ///< transmitted amplitude
};

struct LinkBudget {
    double h_pl = 0.0;
    double h_a = 0.0;
    double g_t = 0.0;
    double g_r = 0.0;
    double v_tx_v = 0.0;
    double c_static = 0.0;
    double v_rx_v = 0.0;
};

/// Populate C and V_rx = C * V_tx. Fractions must lie in (0, 1], gains must be >= 1.
LinkBudget static_gain(const LinkBudgetInputs& inputs);

/// Amplitude free-space path loss lambda / (4 pi d).
double free_space_amplitude(double carrier_frequency_hz, double distance_m);

double dbi_to_linear(double gain_dbi);

/// IF capture parameters.
struct SignalConfig {
    double f_if_hz = 400e3;
    std::optional<double> f_lo_hz;
    std::optional<double> carrier_frequency_hz;
    double sample_rate_hz = 5e6;
    double duration_s = 1.0;
    double noise_sigma_v = 0.0;
    std::uint64_t seed = 1;

    /// Nyquist (sample_rate > 2 f_if), positive duration, non-negative noise and, when the
    /// carrier and LO are both given, f_if == f_c - f_lo to 1 Hz.
    void validate() const;
    std::size_t sample_count() const noexcept;
};

/// AWGN standard deviation for a tone of peak amplitude `amplitude_v` at `snr_db`, with SNR
/// defined as tone power (A^2 / 2) over per-sample noise power.
double noise_sigma_for_snr(double amplitude_v, double snr_db);

/// Streams y[k] = v_rx * h(t_k) * sin(2 pi f_if t_k) + n[k] block by block.
///
/// The gain trace is held (zero-order) onto the IF grid. Noise is drawn from `cfg.seed`.
class IfSynthesizer {
public:
    IfSynthesizer(const PointingTrace& gain, const SignalConfig& cfg, double v_rx_v);

    /// Fill up to out.size() samples; returns the count written (0 once exhausted).
    std::size_t generate(std::span<double> out);

    std::size_t position() const noexcept { return position_; }
    std::size_t total() const noexcept { return total_; }
    bool done() const noexcept { return position_ >= total_; }

private:
    const PointingTrace* gain_;
    SignalConfig cfg_;
    double v_rx_v_;
    std::size_t position_ = 0;
    std::size_t total_;
    Rng rng_;
};

/// Whole-buffer convenience over IfSynthesizer.
std::vector<double> synthesize_if_signal(const PointingTrace& gain, const SignalConfig& cfg,
                                         double v_rx_v);

struct EnvelopeOptions {
    double cutoff_hz = 2000.0;
    /// Output rate of the decimated envelope; 0 selects max(10 kSps, 5 x cutoff).
    double output_rate_hz = 0.0;
};

/// Amplitude envelope of a sampled IF tone.
struct EnvelopeTrace {
    double sample_rate_hz = 0.0;
    double group_delay_s = 0.0;
    std::vector<double> sample_times_s;  ///< delay-compensated
    std::vector<double> envelope_v;
    std::optional<std::vector<double>> normalized;

    std::size_t size() const noexcept { return envelope_v.size(); }
    /// Filter settling interval: `group_delays` group delays from capture start.
    double settle_time_s(double group_delays = 5.0) const noexcept { return group_delays * group_delay_s; }
    /// Index of the first sample at or after `settle_s`.
    std::size_t first_settled(double settle_s) const noexcept;
};

/// Streaming quadrature demodulator.
///
/// Each input sample is mixed with exp(-j 2 pi f_if t), the I/Q pair is low-pass filtered by a
/// linear-phase FIR and the magnitude is doubled. Outputs are produced every D-th input sample
/// (D = sample_rate / output_rate), so the filter cost scales with the output rate only.
/// Blocks may be pushed in any sizes; the filter state carries over between them.
class EnvelopeDetector {
public:
    EnvelopeDetector(double f_if_hz, double sample_rate_hz, const EnvelopeOptions& options = {});

    void push(std::span<const double> samples);

    /// Move the accumulated outputs out of the detector.
    EnvelopeTrace take();

    double output_rate_hz() const noexcept { return sample_rate_hz_ / static_cast<double>(decimation_); }
    std::size_t decimation() const noexcept { return decimation_; }
    const std::vector<double>& taps() const noexcept { return taps_; }
    double group_delay_s() const noexcept;
    /// Sum of squared taps: envelope noise std per quadrature is noise_sigma * sqrt(2 * this).
    double noise_gain() const noexcept;

private:
    double f_if_hz_;
    double sample_rate_hz_;
    std::size_t decimation_;
    std::vector<double> taps_;
    std::vector<double> buf_i_;
    std::vector<double> buf_q_;
    std::size_t head_ = 0;
    std::size_t index_ = 0;
    EnvelopeTrace out_;
};

/// Envelope of a complete capture. ValidationError when cutoff >= f_if.
EnvelopeTrace extract_envelope(std::span<const double> samples, const SignalConfig& cfg,
                               double lowpass_cutoff_hz);

/// Mean envelope after discarding `settle_skip_s`. ValidationError on an empty window.
double baseline_reference(const EnvelopeTrace& env, double settle_skip_s);

/// normalized[k] = envelope[k] / epsilon_0.
EnvelopeTrace normalize_envelope(EnvelopeTrace env, double epsilon_0_v);

/// Normalized envelope samples after the settling interval.
std::vector<double> settled_normalized(const EnvelopeTrace& env, double settle_skip_s);

}  // namespace jitterlink
