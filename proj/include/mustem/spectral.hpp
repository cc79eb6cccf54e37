#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <deque>
#include <optional>
#include <stdexcept>
#include <vector>

#include "mustem/colormap.hpp"
#include "mustem/fft.hpp"

namespace mustem {

inline constexpr double kSpectralRate = 4000.0;            // Hz, visual-path sampling rate
inline constexpr double kBinHz = kSpectralRate / kFftSize;  // 7.8125 Hz per bin
inline constexpr int kAnalysisHop = 160;                    // samples, 40 ms at 4 kHz

/// A refined spectral peak: bin index, sub-bin offset and the resulting
/// frequency estimate.
struct Peak {
    double freq_hz = 0.0;
    double magnitude = 0.0;
    int bin = 0;
    double delta = 0.0;  // sub-bin offset in [-0.5, 0.5]
};

struct PeakParams {
    double sigma_mult = 3.0;  // accept max only above mu + sigma_mult*sigma
    double abs_floor = 25.0;  // absolute magnitude floor; rejects sigma~0 silence
};

/// mu + 3*sigma peak picking over bins 2..255 with three-point parabolic
/// refinement. Returns nothing when no bin dominates the spectrum.
inline std::optional<Peak> detect_peak(const std::vector<double>& mags,
                                       const PeakParams& params = {},
                                       double bin_hz = kBinHz) {
    if (mags.size() != kSpectrumBins)
        throw std::invalid_argument("detect_peak: expected 256 magnitudes");

    // DC and bin 1 are excluded from both the statistics and the candidates.
    constexpr int lo = 2;
    const int hi = kSpectrumBins - 1;
    double sum = 0.0, sum2 = 0.0;
    int best = lo;
    for (int k = lo; k <= hi; ++k) {
        const double m = mags[static_cast<std::size_t>(k)];
        sum += m;
        sum2 += m * m;
        if (m > mags[static_cast<std::size_t>(best)]) best = k;
    }
    const double count = static_cast<double>(hi - lo + 1);
    const double mu = sum / count;
    const double var = std::max(0.0, sum2 / count - mu * mu);
    const double sigma = std::sqrt(var);

    const double peak_mag = mags[static_cast<std::size_t>(best)];
    if (peak_mag <= mu + params.sigma_mult * sigma) return std::nullopt;
    if (peak_mag <= params.abs_floor) return std::nullopt;

    double delta = 0.0;
    if (best > lo && best < hi) {
        const double a = mags[static_cast<std::size_t>(best - 1)];
        const double b = peak_mag;
        const double c = mags[static_cast<std::size_t>(best + 1)];
        const double den = a - 2.0 * b + c;
        if (den != 0.0) delta = std::clamp(0.5 * (a - c) / den, -0.5, 0.5);
    }
    return Peak{(static_cast<double>(best) + delta) * bin_hz, peak_mag, best, delta};
}

/// Frequency hold with hysteresis: a valid peak replaces the held value
/// immediately; misses keep the last value until `hold_limit` consecutive
/// misses, after which the output is SILENT (nullopt).
class FreqTracker {
  public:
    explicit FreqTracker(int hold_limit = 3) : hold_limit_(hold_limit) {}

    std::optional<double> update(const std::optional<Peak>& peak) {
        if (peak) {
            held_ = peak->freq_hz;
            misses_ = 0;
        } else if (held_) {
            misses_ = std::min(misses_ + 1, hold_limit_);
            if (misses_ >= hold_limit_) held_.reset();
        }
        return held_;
    }

    std::optional<double> held() const { return held_; }
    int misses() const { return misses_; }

  private:
    int hold_limit_;
    int misses_ = 0;
    std::optional<double> held_;
};

/// Band edges actually applied at a given sampling rate. Table edges are
/// nominal for the full audio range; at 4 kHz the treble band (2400+ Hz)
/// would be empty, so it is driven by the top of the observable spectrum
/// instead (a fidelity artifact of the hardware's sampling rate).
struct EffectiveBands {
    std::array<double, kBandCount9> low;
    std::array<double, kBandCount9> high;
};

inline EffectiveBands effective_bands(double nyquist_hz, double treble_fallback_low = 1920.0) {
    EffectiveBands eb{};
    const auto& table = band_table();
    for (int i = 0; i < kBandCount9; ++i) {
        eb.low[static_cast<std::size_t>(i)] = table[static_cast<std::size_t>(i)].low_hz;
        eb.high[static_cast<std::size_t>(i)] = table[static_cast<std::size_t>(i)].high_hz;
    }
    if (table[kBandCount9 - 1].low_hz >= nyquist_hz) {
        eb.low[kBandCount9 - 1] = treble_fallback_low;
        eb.high[kBandCount9 - 2] = treble_fallback_low;
    }
    eb.high[kBandCount9 - 1] = nyquist_hz + kBinHz;  // top band closes just past Nyquist
    return eb;
}

enum class BandEnergyMode { mean, sum };

/// Raw per-band energy from one magnitude frame: mean (or sum) of the
/// magnitudes of bins whose center frequency falls in [low, high).
inline std::array<double, kBandCount9> band_energies_raw(const std::vector<double>& mags,
                                                         const EffectiveBands& bands,
                                                         double bin_hz = kBinHz,
                                                         BandEnergyMode mode = BandEnergyMode::mean) {
    if (mags.size() != kSpectrumBins)
        throw std::invalid_argument("band_energies_raw: expected 256 magnitudes");
    std::array<double, kBandCount9> acc{};
    std::array<int, kBandCount9> counts{};
    for (int k = 0; k < kSpectrumBins; ++k) {
        const double f = static_cast<double>(k) * bin_hz;
        for (int b = 0; b < kBandCount9; ++b) {
            if (f >= bands.low[static_cast<std::size_t>(b)] && f < bands.high[static_cast<std::size_t>(b)]) {
                acc[static_cast<std::size_t>(b)] += mags[static_cast<std::size_t>(k)];
                counts[static_cast<std::size_t>(b)] += 1;
                break;
            }
        }
    }
    if (mode == BandEnergyMode::mean) {
        for (int b = 0; b < kBandCount9; ++b)
            if (counts[static_cast<std::size_t>(b)] > 0)
                acc[static_cast<std::size_t>(b)] /= counts[static_cast<std::size_t>(b)];
    }
    return acc;
}

/// First-order IIR smoother for the analyzer bars:
/// smoothed = (1-alpha)*prev + alpha*raw, alpha = 0.30.
class BandSmoother {
  public:
    explicit BandSmoother(double alpha = 0.30) : alpha_(alpha) {}

    const std::array<double, kBandCount9>& update(const std::array<double, kBandCount9>& raw) {
        for (int b = 0; b < kBandCount9; ++b) {
            auto i = static_cast<std::size_t>(b);
            state_[i] = (1.0 - alpha_) * state_[i] + alpha_ * raw[i];
        }
        return state_;
    }

    const std::array<double, kBandCount9>& value() const { return state_; }

  private:
    double alpha_;
    std::array<double, kBandCount9> state_{};
};

/// RMS of one 512-sample DC-centered frame, in ADC units.
inline double compute_rms(const std::vector<double>& centered) {
    if (centered.size() != kFftSize)
        throw std::invalid_argument("compute_rms: frame must have exactly 512 samples");
    double acc = 0.0;
    for (double x : centered) acc += x * x;
    return std::sqrt(acc / static_cast<double>(centered.size()));
}

struct OnsetParams {
    int window_frames = 25;    // 1 s of history at the 25 Hz analysis rate
    double sigma_mult = 1.5;
};

/// Half-wave-rectified spectral flux with an adaptive mu + 1.5*sigma
/// threshold over a sliding 1 s window. Emits a strength in [0, 1] on frames
/// whose flux exceeds the threshold; 0 otherwise (including warm-up).
class OnsetDetector {
  public:
    explicit OnsetDetector(const OnsetParams& params = {}) : params_(params) {}

    double update(const std::vector<double>& mags) {
        if (mags.size() != kSpectrumBins)
            throw std::invalid_argument("OnsetDetector: expected 256 magnitudes");
        double flux = 0.0;
        if (have_prev_) {
            for (int k = 0; k < kSpectrumBins; ++k) {
                auto i = static_cast<std::size_t>(k);
                flux += std::max(0.0, mags[i] - prev_[i]);
            }
        }
        prev_ = mags;
        have_prev_ = true;

        double strength = 0.0;
        if (static_cast<int>(history_.size()) >= params_.window_frames) {
            double sum = 0.0, sum2 = 0.0;
            for (double h : history_) {
                sum += h;
                sum2 += h * h;
            }
            const auto n = static_cast<double>(history_.size());
            const double mu = sum / n;
            const double sigma = std::sqrt(std::max(0.0, sum2 / n - mu * mu));
            const double threshold = mu + params_.sigma_mult * sigma;
            if (threshold > 0.0 && flux > threshold)
                strength = std::clamp((flux - threshold) / threshold, 0.0, 1.0);
        }

        history_.push_back(flux);
        while (static_cast<int>(history_.size()) > params_.window_frames) history_.pop_front();
        return strength;
    }

  private:
    OnsetParams params_;
    std::vector<double> prev_ = std::vector<double>(kSpectrumBins, 0.0);
    bool have_prev_ = false;
    std::deque<double> history_;
};

/// One analysis frame of the visual pipeline.
struct SpectralFrame {
    std::vector<double> magnitudes;             // 256 bins
    std::optional<Peak> peak;                   // raw per-frame peak
    std::optional<double> freq_hz;              // tracked frequency; nullopt = SILENT
    double rms = 0.0;                           // ADC units
    std::array<double, kBandCount9> band_energy{};
    double beat_strength = 0.0;                 // [0, 1]
    double peak_threshold = 0.0;                // mu + 3*sigma gate used this frame
    double peak_candidate_mag = 0.0;            // strongest bin magnitude (gated or not)
};

struct SpectralParams {
    PeakParams peak;
    int hold_limit = 3;
    double band_alpha = 0.30;
    BandEnergyMode band_mode = BandEnergyMode::mean;
    OnsetParams onset;
    double treble_fallback_low = 1920.0;
};

/// Stateful per-frame analyzer: window, FFT, peak, tracker, bands, RMS and
/// onset strength. One caller at a time.
class SpectralAnalyzer {
  public:
    explicit SpectralAnalyzer(const SpectralParams& params = {})
        : params_(params),
          tracker_(params.hold_limit),
          smoother_(params.band_alpha),
          onset_(params.onset),
          bands_(effective_bands(kSpectralRate / 2.0, params.treble_fallback_low)) {}

    SpectralFrame analyze(const std::vector<double>& centered512) {
        SpectralFrame frame;
        frame.magnitudes = fft_magnitudes(hamming_window(centered512));
        frame.peak = detect_peak(frame.magnitudes, params_.peak);
        frame.freq_hz = tracker_.update(frame.peak);
        frame.rms = compute_rms(centered512);
        frame.band_energy = smoother_.update(
            band_energies_raw(frame.magnitudes, bands_, kBinHz, params_.band_mode));
        frame.beat_strength = onset_.update(frame.magnitudes);

        // Gate transparency for the debug overlay: strongest candidate vs the
        // acceptance threshold it was measured against.
        double sum = 0.0, sum2 = 0.0, best = 0.0;
        for (int k = 2; k < kSpectrumBins; ++k) {
            const double m = frame.magnitudes[static_cast<std::size_t>(k)];
            sum += m;
            sum2 += m * m;
            best = std::max(best, m);
        }
        const double n = static_cast<double>(kSpectrumBins - 2);
        const double mu = sum / n;
        const double sigma = std::sqrt(std::max(0.0, sum2 / n - mu * mu));
        frame.peak_candidate_mag = best;
        frame.peak_threshold = mu + params_.peak.sigma_mult * sigma;
        return frame;
    }

    const EffectiveBands& bands() const { return bands_; }

  private:
    SpectralParams params_;
    FreqTracker tracker_;
    BandSmoother smoother_;
    OnsetDetector onset_;
    EffectiveBands bands_;
};

}  // namespace mustem
