#pragma once

#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "mustem/audio.hpp"
#include "mustem/config.hpp"
#include "mustem/fft.hpp"
#include "mustem/spectral.hpp"

namespace mustem {

/// Frequency-detection validation sweep. Tones are synthesized at 44.1 kHz
/// (standing in for the external calibrated tone generator) with cosine
/// phase — a sine at exactly Nyquist would vanish on the 4 kHz grid — and fed
/// through the normal ingest path: resample to 4 kHz, quantize, DC-center,
/// window, FFT, peak detection.
struct SweepTone {
    double freq_hz = 0.0;
    std::optional<double> detected_hz;
    double error_hz = 0.0;         // absolute; infinity when nothing detected
    bool in_validated_range = false;  // [100, 2000] Hz
    bool interior_peak = false;    // >= 3 bins from DC and below the Nyquist edge bin
};

struct SweepResult {
    std::vector<SweepTone> tones;
    double max_error_hz = 0.0;           // over the validated range
    double max_error_interior_hz = 0.0;  // validated range, interior peaks only
    bool pass_10hz = false;
    bool pass_2hz = false;
};

/// Detect a single tone the way the visual pipeline sees it. Returns the
/// refined peak frequency, or nothing when the spectrum has no dominant peak.
inline std::optional<Peak> detect_tone(double freq_hz, const Config& cfg,
                                       double source_rate = 44100.0) {
    const PcmClip tone = synth_tone(freq_hz, 0.3, 0.8, source_rate, std::numbers::pi / 2.0);
    const PcmClip at4k = resample(tone, kSpectralRate);
    const AdcStream adc = to_adc(at4k, cfg.adc_bias, cfg.adc_gain);

    std::vector<double> window(kFftSize, 0.0);
    // Skip the first 512 samples so the resampler's edge transient settles.
    for (int i = 0; i < kFftSize; ++i) {
        const std::size_t src = static_cast<std::size_t>(kFftSize + i);
        if (src < adc.samples.size())
            window[static_cast<std::size_t>(i)] =
                static_cast<double>(adc.samples[src] - cfg.adc_bias);
    }
    return detect_peak(fft_magnitudes(hamming_window(window)), cfg.spectral.peak);
}

inline SweepResult run_sweep(const Config& cfg = {}, double from_hz = 100.0, double to_hz = 2000.0,
                             double step_hz = 25.0) {
    SweepResult result;
    for (double f = from_hz; f <= to_hz + 1e-9; f += step_hz) {
        SweepTone tone;
        tone.freq_hz = f;
        tone.in_validated_range = f >= 100.0 && f <= 2000.0;
        const auto peak = detect_tone(f, cfg);
        if (peak) {
            tone.detected_hz = peak->freq_hz;
            tone.error_hz = std::fabs(peak->freq_hz - f);
            tone.interior_peak = peak->bin >= 3 && peak->bin <= kSpectrumBins - 2;
        } else {
            tone.error_hz = std::numeric_limits<double>::infinity();
        }
        if (tone.in_validated_range) {
            result.max_error_hz = std::max(result.max_error_hz, tone.error_hz);
            if (tone.interior_peak)
                result.max_error_interior_hz =
                    std::max(result.max_error_interior_hz, tone.error_hz);
        }
        result.tones.push_back(tone);
    }
    result.pass_10hz = result.max_error_hz <= 10.0;
    result.pass_2hz = result.max_error_interior_hz <= 2.0;
    return result;
}

inline std::string sweep_report(const SweepResult& result, bool verbose = false) {
    std::string out;
    char buf[160];
    if (verbose) {
        out += "freq_hz,detected_hz,error_hz,validated,interior\n";
        for (const SweepTone& t : result.tones) {
            char detected[32];
            if (t.detected_hz)
                std::snprintf(detected, sizeof(detected), "%.3f", *t.detected_hz);
            else
                std::snprintf(detected, sizeof(detected), "SILENT");
            std::snprintf(buf, sizeof(buf), "%.1f,%s,%.3f,%d,%d\n", t.freq_hz, detected,
                          t.error_hz, t.in_validated_range ? 1 : 0, t.interior_peak ? 1 : 0);
            out += buf;
        }
    }
    int validated = 0, excluded = 0;
    for (const SweepTone& t : result.tones) (t.in_validated_range ? validated : excluded)++;
    std::snprintf(buf, sizeof(buf), "tones: %zu (%d validated, %d outside 100-2000 Hz)\n",
                  result.tones.size(), validated, excluded);
    out += buf;
    std::snprintf(buf, sizeof(buf), "max abs error (validated range): %.3f Hz -> %s (limit 10 Hz)\n",
                  result.max_error_hz, result.pass_10hz ? "PASS" : "FAIL");
    out += buf;
    std::snprintf(buf, sizeof(buf),
                  "max abs error (interior peaks): %.3f Hz -> %s (limit 2 Hz)\n",
                  result.max_error_interior_hz, result.pass_2hz ? "PASS" : "FAIL");
    out += buf;
    return out;
}

}  // namespace mustem
