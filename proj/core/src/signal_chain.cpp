#include "jitterlink/signal_chain.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "jitterlink/dsp.hpp"
#include "jitterlink/error.hpp"

namespace jitterlink {

LinkBudget static_gain(const LinkBudgetInputs& in) {
    detail::require(in.h_pl > 0.0 && in.h_pl <= 1.0, "h_pl must lie in (0, 1]");
    detail::require(in.h_a > 0.0 && in.h_a <= 1.0, "h_a must lie in (0, 1]");
    detail::require(in.g_t >= 1.0 && in.g_r >= 1.0, "antenna gains must be >= 1 (linear)");
    detail::require_positive(in.v_tx_v, "v_tx");
    LinkBudget b;
    b.h_pl = in.h_pl;
    b.h_a = in.h_a;
    b.g_t = in.g_t;
    b.g_r = in.g_r;
    b.v_tx_v = in.v_tx_v;
    b.c_static = in.h_pl * in.h_a * std::sqrt(in.g_t * in.g_r);
    b.v_rx_v = b.c_static * in.v_tx_v;
    return b;
}

double free_space_amplitude(double carrier_frequency_hz, double distance_m) {
    detail::require_positive(carrier_frequency_hz, "carrier_frequency");
    detail::require_positive(distance_m, "distance");
    const double wavelength = kSpeedOfLight / carrier_frequency_hz;
    return wavelength / (4.0 * std::numbers::pi * distance_m);
}

double dbi_to_linear(double gain_dbi) { return std::pow(10.0, gain_dbi / 10.0); }

void SignalConfig::validate() const {
    detail::require_positive(f_if_hz, "f_if_hz");
    detail::require_positive(sample_rate_hz, "sample_rate_hz");
    detail::require(sample_rate_hz > 2.0 * f_if_hz, "sample_rate_hz must exceed 2 x f_if_hz (Nyquist)");
    detail::require_positive(duration_s, "duration_s");
    detail::require_non_negative(noise_sigma_v, "noise_sigma_v");
    if (f_lo_hz) detail::require_positive(*f_lo_hz, "f_lo_hz");
    if (f_lo_hz && carrier_frequency_hz) {
        detail::require(std::abs(*carrier_frequency_hz - *f_lo_hz - f_if_hz) <= 1.0,
                        "f_if_hz must equal carrier_frequency_hz - f_lo_hz");
    }
    detail::require(sample_count() >= 2, "capture must contain at least two samples");
}

std::size_t SignalConfig::sample_count() const noexcept {
    return static_cast<std::size_t>(std::llround(duration_s * sample_rate_hz));
}

double noise_sigma_for_snr(double amplitude_v, double snr_db) {
    detail::require_positive(amplitude_v, "amplitude");
    return amplitude_v / std::sqrt(2.0) * std::pow(10.0, -snr_db / 20.0);
}

IfSynthesizer::IfSynthesizer(const PointingTrace& gain, const SignalConfig& cfg, double v_rx_v)
    : gain_(&gain), cfg_(cfg), v_rx_v_(v_rx_v), total_(cfg.sample_count()), rng_(cfg.seed) {
    cfg_.validate();
    detail::require(gain.has_gain(), "gain trace has no gain samples");
    detail::require_positive(gain.sample_rate_hz, "gain trace rate");
    detail::require_non_negative(v_rx_v, "v_rx");
    const double covered = static_cast<double>(gain.size()) / gain.sample_rate_hz;
    detail::require(covered + 1e-9 >= cfg_.duration_s, "gain trace does not cover the capture duration");
}

std::size_t IfSynthesizer::generate(std::span<double> out) {
    const std::size_t count = std::min(out.size(), total_ - position_);
    const double rate_ratio = gain_->sample_rate_hz / cfg_.sample_rate_hz;
    const std::size_t last_gain = gain_->size() - 1;
    for (std::size_t i = 0; i < count; ++i) {
        const std::size_t k = position_ + i;
        // Zero-order hold; the small offset keeps exact ratios from rounding down.
        auto j = static_cast<std::size_t>(static_cast<double>(k) * rate_ratio + 1e-9);
        j = std::min(j, last_gain);
        double y = v_rx_v_ * gain_->gain[j] * std::sin(tone_phase(cfg_.f_if_hz, cfg_.sample_rate_hz, k));
        if (cfg_.noise_sigma_v > 0.0) y += cfg_.noise_sigma_v * rng_.normal();
        out[i] = y;
    }
    position_ += count;
    return count;
}

std::vector<double> synthesize_if_signal(const PointingTrace& gain, const SignalConfig& cfg,
                                         double v_rx_v) {
    IfSynthesizer synth(gain, cfg, v_rx_v);
    std::vector<double> out(synth.total());
    synth.generate(out);
    return out;
}

std::size_t EnvelopeTrace::first_settled(double settle_s) const noexcept {
    const auto it = std::lower_bound(sample_times_s.begin(), sample_times_s.end(), settle_s);
    return static_cast<std::size_t>(it - sample_times_s.begin());
}

EnvelopeDetector::EnvelopeDetector(double f_if_hz, double sample_rate_hz, const EnvelopeOptions& options)
    : f_if_hz_(f_if_hz), sample_rate_hz_(sample_rate_hz) {
    detail::require_positive(f_if_hz, "f_if_hz");
    detail::require(sample_rate_hz > 2.0 * f_if_hz, "sample rate must exceed 2 x f_if");
    detail::require_positive(options.cutoff_hz, "low-pass cutoff");
    if (!(options.cutoff_hz < f_if_hz)) {
        throw ValidationError("low-pass cutoff must lie below f_if");
    }
    const double wanted = options.output_rate_hz > 0.0 ? options.output_rate_hz
                                                       : std::max(10e3, 5.0 * options.cutoff_hz);
    decimation_ = std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(sample_rate_hz / wanted)));
    taps_ = design_lowpass(options.cutoff_hz, sample_rate_hz, options.cutoff_hz);
    buf_i_.assign(2 * taps_.size(), 0.0);
    buf_q_.assign(2 * taps_.size(), 0.0);
    out_.sample_rate_hz = output_rate_hz();
    out_.group_delay_s = group_delay_s();
}

double EnvelopeDetector::group_delay_s() const noexcept {
    return group_delay_samples(taps_.size()) / sample_rate_hz_;
}

double EnvelopeDetector::noise_gain() const noexcept {
    return std::inner_product(taps_.begin(), taps_.end(), taps_.begin(), 0.0);
}

void EnvelopeDetector::push(std::span<const double> samples) {
    const std::size_t n = taps_.size();
    const double delay = group_delay_s();
    for (const double y : samples) {
        const double phase = tone_phase(f_if_hz_, sample_rate_hz_, index_);
        const double zi = y * std::cos(phase);
        const double zq = -y * std::sin(phase);
        buf_i_[head_] = buf_i_[head_ + n] = zi;
        buf_q_[head_] = buf_q_[head_ + n] = zq;
        if (index_ % decimation_ == 0) {
            // Oldest to newest sample of the window is buf[head + 1 .. head + n].
            const double* wi = buf_i_.data() + head_ + 1;
            const double* wq = buf_q_.data() + head_ + 1;
            double acc_i = 0.0;
            double acc_q = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                acc_i += taps_[j] * wi[j];
                acc_q += taps_[j] * wq[j];
            }
            out_.envelope_v.push_back(2.0 * std::sqrt(acc_i * acc_i + acc_q * acc_q));
            out_.sample_times_s.push_back(static_cast<double>(index_) / sample_rate_hz_ - delay);
        }
        head_ = (head_ + 1) % n;
        ++index_;
    }
}

EnvelopeTrace EnvelopeDetector::take() {
    EnvelopeTrace result = std::move(out_);
    out_ = EnvelopeTrace{};
    out_.sample_rate_hz = output_rate_hz();
    out_.group_delay_s = group_delay_s();
    return result;
}

EnvelopeTrace extract_envelope(std::span<const double> samples, const SignalConfig& cfg,
                               double lowpass_cutoff_hz) {
    EnvelopeDetector detector(cfg.f_if_hz, cfg.sample_rate_hz, EnvelopeOptions{lowpass_cutoff_hz, 0.0});
    detector.push(samples);
    return detector.take();
}

double baseline_reference(const EnvelopeTrace& env, double settle_skip_s) {
    const std::size_t first = env.first_settled(settle_skip_s);
    if (first >= env.size()) throw ValidationError("baseline envelope is empty after the settling window");
    long double sum = 0.0L;
    for (std::size_t k = first; k < env.size(); ++k) sum += env.envelope_v[k];
    const double eps0 = static_cast<double>(sum / static_cast<long double>(env.size() - first));
    if (!(eps0 > 0.0)) throw ValidationError("baseline envelope mean must be positive");
    return eps0;
}

EnvelopeTrace normalize_envelope(EnvelopeTrace env, double epsilon_0_v) {
    detail::require_positive(epsilon_0_v, "epsilon_0");
    std::vector<double> normalized(env.size());
    std::transform(env.envelope_v.begin(), env.envelope_v.end(), normalized.begin(),
                   [epsilon_0_v](double e) { return e / epsilon_0_v; });
    env.normalized = std::move(normalized);
    return env;
}

std::vector<double> settled_normalized(const EnvelopeTrace& env, double settle_skip_s) {
    detail::require(env.normalized.has_value(), "envelope has not been normalized");
    const std::size_t first = env.first_settled(settle_skip_s);
    return {env.normalized->begin() + static_cast<std::ptrdiff_t>(first), env.normalized->end()};
}

}  // namespace jitterlink
