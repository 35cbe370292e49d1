#include "jitterlink/dsp.hpp"

#include <cmath>
#include <numbers>

#include "jitterlink/error.hpp"

namespace jitterlink {

std::vector<double> design_lowpass(double cutoff_hz, double sample_rate_hz, double transition_hz) {
    detail::require_positive(cutoff_hz, "cutoff_hz");
    detail::require_positive(transition_hz, "transition_hz");
    detail::require(cutoff_hz < 0.5 * sample_rate_hz, "low-pass cutoff must lie below Nyquist");

    using std::numbers::pi;
    auto taps = static_cast<std::size_t>(std::ceil(5.5 * sample_rate_hz / transition_hz));
    taps |= 1U;
    if (taps < 3) taps = 3;

    const double fc = cutoff_hz / sample_rate_hz;
    const double centre = group_delay_samples(taps);
    const double span = static_cast<double>(taps - 1);
    std::vector<double> h(taps);
    double sum = 0.0;
    for (std::size_t i = 0; i < taps; ++i) {
        const double n = static_cast<double>(i) - centre;
        const double sinc = n == 0.0 ? 2.0 * fc : std::sin(2.0 * pi * fc * n) / (pi * n);
        const double x = static_cast<double>(i) / span;
        const double window = 0.42 - 0.5 * std::cos(2.0 * pi * x) + 0.08 * std::cos(4.0 * pi * x);
        h[i] = sinc * window;
        sum += h[i];
    }
    for (auto& v : h) v /= sum;
    return h;
}

double tone_phase(double frequency_hz, double sample_rate_hz, std::size_t index) noexcept {
    const double cycles = std::fmod(frequency_hz * static_cast<double>(index), sample_rate_hz);
    return 2.0 * std::numbers::pi * (cycles / sample_rate_hz);
}

}  // namespace jitterlink
