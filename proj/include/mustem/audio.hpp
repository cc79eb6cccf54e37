#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace mustem {

/// Mono PCM audio. Samples are normalized amplitudes in [-1, 1].
struct PcmClip {
    std::vector<double> samples;
    double rate = 0.0;  // Hz

    double duration() const { return rate > 0.0 ? static_cast<double>(samples.size()) / rate : 0.0; }
    bool empty() const { return samples.empty(); }

    // Nearest-sample lookup at time t seconds; out-of-range clamps to the edges.
    double sample_at(double t) const {
        if (samples.empty()) return 0.0;
        auto idx = static_cast<long long>(std::llround(t * rate));
        idx = std::clamp<long long>(idx, 0, static_cast<long long>(samples.size()) - 1);
        return samples[static_cast<std::size_t>(idx)];
    }
};

/// 10-bit ADC sample stream as seen by an engine front end.
struct AdcStream {
    std::vector<int> samples;  // each in [0, 1023]
    double rate = 0.0;         // Hz
    int bias = 512;            // nominal quiet level
};

inline constexpr int kAdcMax = 1023;
inline constexpr int kAdcBias = 512;
inline constexpr double kAdcHalfScale = 511.0;

/// Pure sine test tone: samples[i] = amp * sin(2*pi*freq*i/rate + phase).
inline PcmClip synth_tone(double freq, double dur, double amp, double rate, double phase = 0.0) {
    if (rate <= 0.0) throw std::invalid_argument("synth_tone: rate must be positive");
    if (freq <= 0.0 || freq >= rate / 2.0)
        throw std::invalid_argument("synth_tone: frequency must lie in (0, rate/2)");
    if (dur < 0.0) throw std::invalid_argument("synth_tone: negative duration");
    amp = std::clamp(amp, 0.0, 1.0);

    PcmClip clip;
    clip.rate = rate;
    const auto n = static_cast<std::size_t>(std::llround(dur * rate));
    clip.samples.resize(n);
    const double w = 2.0 * std::numbers::pi * freq / rate;
    for (std::size_t i = 0; i < n; ++i)
        clip.samples[i] = amp * std::sin(w * static_cast<double>(i) + phase);
    return clip;
}

namespace detail {

inline double sinc(double x) {
    if (x == 0.0) return 1.0;
    const double px = std::numbers::pi * x;
    return std::sin(px) / px;
}

}  // namespace detail

/// Anti-aliased rate conversion: windowed-sinc low-pass below target/2, then
/// interpolation onto the target grid. `quality` is the number of sinc lobes
/// kept on each side (more lobes, sharper transition band).
inline PcmClip resample(const PcmClip& clip, double target, int quality = 32) {
    if (target <= 0.0) throw std::invalid_argument("resample: target rate must be positive");
    if (clip.rate <= 0.0) throw std::invalid_argument("resample: source clip has no rate");
    if (clip.rate == target) return clip;
    if (quality < 4) quality = 4;

    const double ratio = target / clip.rate;
    const double cutoff = std::min(1.0, ratio);  // fraction of the input Nyquist
    const double half = static_cast<double>(quality) / cutoff;  // kernel half-width, input samples

    PcmClip out;
    out.rate = target;
    const auto n_in = static_cast<long long>(clip.samples.size());
    const auto n_out = static_cast<std::size_t>(
        std::llround(static_cast<double>(n_in) * target / clip.rate));
    out.samples.resize(n_out);

    for (std::size_t j = 0; j < n_out; ++j) {
        const double t = static_cast<double>(j) * clip.rate / target;  // position in input samples
        const auto lo = std::max<long long>(0, static_cast<long long>(std::ceil(t - half)));
        const auto hi = std::min<long long>(n_in - 1, static_cast<long long>(std::floor(t + half)));
        double acc = 0.0;
        for (long long i = lo; i <= hi; ++i) {
            const double u = (static_cast<double>(i) - t) / half;  // [-1, 1]
            const double w = 0.42 + 0.5 * std::cos(std::numbers::pi * u) +
                             0.08 * std::cos(2.0 * std::numbers::pi * u);
            acc += clip.samples[static_cast<std::size_t>(i)] * cutoff *
                   detail::sinc((static_cast<double>(i) - t) * cutoff) * w;
        }
        out.samples[j] = acc;
    }
    return out;
}

/// One normalized sample through the emulated 10-bit ADC front end.
inline int adc_quantize(double x, int bias, double gain) {
    const auto raw = static_cast<long long>(std::llround(bias + gain * kAdcHalfScale * x));
    return static_cast<int>(std::clamp<long long>(raw, 0, kAdcMax));
}

/// Quantize a whole clip: sample = clamp(round(bias + gain*511*x), 0, 1023).
inline AdcStream to_adc(const PcmClip& clip, int bias = kAdcBias, double gain = 1.0) {
    if (bias < 0 || bias > kAdcMax) throw std::invalid_argument("to_adc: bias out of [0, 1023]");
    AdcStream out;
    out.rate = clip.rate;
    out.bias = bias;
    out.samples.reserve(clip.samples.size());
    for (double x : clip.samples) out.samples.push_back(adc_quantize(x, bias, gain));
    return out;
}

}  // namespace mustem
