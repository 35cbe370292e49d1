#pragma once

#include <cstddef>
#include <vector>

namespace jitterlink {

/// Linear-phase Blackman-windowed-sinc low-pass FIR.
///
/// `cutoff_hz` is the -6 dB point. The tap count is the smallest odd number giving a
/// transition band no wider than `transition_hz` (Blackman main-lobe width 5.5 / N).
/// Taps are normalized to unit DC gain.
std::vector<double> design_lowpass(double cutoff_hz, double sample_rate_hz, double transition_hz);

/// Group delay of a symmetric FIR in samples.
inline double group_delay_samples(std::size_t tap_count) noexcept {
    return 0.5 * static_cast<double>(tap_count - 1);
}

/// Phase 2*pi*frac(f * k / fs) of a tone at sample index k, exact for the integer-valued
/// frequencies and rates used by the signal chain and accurate to rounding otherwise.
double tone_phase(double frequency_hz, double sample_rate_hz, std::size_t index) noexcept;

}  // namespace jitterlink
