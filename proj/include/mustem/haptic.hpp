#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>

#include "mustem/audio.hpp"

namespace mustem {

inline constexpr int kHapticBands = 4;
inline constexpr int kHapticTickMs = 8;
inline constexpr int kDebugPeriodMs = 120;  // every 15th tick

enum class Band : int { kick = 0, bass = 1, voice = 2, treble = 3 };

/// Fixed band identity: psychoacoustic range label plus the PWM channel id
/// carried over from the firmware pin assignment.
struct BandInfo {
    const char* name;
    double low_hz;
    double high_hz;
    int channel;  // firmware pins D11/D10/D9/D8
};

inline const std::array<BandInfo, kHapticBands>& band_info() {
    static const std::array<BandInfo, kHapticBands> info = {{
        {"kick", 20.0, 80.0, 11},
        {"bass", 80.0, 300.0, 10},
        {"voice", 300.0, 2000.0, 9},
        {"treble", 2000.0, 8000.0, 8},
    }};
    return info;
}

/// Per-band tuning: EMA coefficient, gate threshold, compression exponent
/// and PWM ceiling. The saturation level closes the normalization span for
/// the power-law compressor.
struct BandParams {
    double alpha = 0.30;       // (0, 1]
    double threshold = 50.0;   // ADC units
    double gamma = 0.8;        // [0.5, 1.0]
    int pwm_max = 255;         // duty ceiling while active
    double saturation = 250.0; // ADC units; level mapping to full intensity
};

struct CueParams {
    double rise_delta = 25.0;      // ADC units/tick of envelope rise for a kick boost
    double kick_boost = 20.0;      // added to the kick level while the cue is live
    double hat_boost = 15.0;       // added to the treble level while the cue is live
    double bass_quiet_ratio = 0.5; // hi-hat fires only when E_bass < ratio*T_bass
    int duration_ms = 40;
};

struct HapticParams {
    double alpha_envelope = 0.20;
    int pwm_min = 80;
    int tick_ms = kHapticTickMs;
    std::array<BandParams, kHapticBands> bands = {{
        {0.08, 45.0, 0.90, 255, 245.0},
        {0.30, 58.0, 0.70, 240, 258.0},
        {0.45, 52.0, 0.80, 200, 252.0},
        {0.80, 30.0, 0.85, 180, 230.0},
    }};
    CueParams cues;
    int calibration_reads = 150;
    int calibration_spacing_ms = 3;
};

/// One 8 ms output frame: four duty cycles plus the activity LED that mirrors
/// the per-frame maximum.
struct PwmFrame {
    int t_ms = 0;
    std::array<int, kHapticBands> duty{};
    int led = 0;
};

/// Which cues fired on a given tick (exposed for inspection/tests).
struct CueEvents {
    bool kick = false;
    bool hat = false;
};

/// First-order EMA step: (1-alpha)*prev + alpha*x. Fixed point is x for
/// constant input.
inline double ema_update(double prev, double x, double alpha) {
    return (1.0 - alpha) * prev + alpha * x;
}

/// Mean of the first n samples of a quiet stream, rounded to the nearest
/// integer; in the emulated timeline these reads are spaced ~3 ms apart.
inline int calibrate_baseline(const AdcStream& stream, int n = 150) {
    if (n <= 0) throw std::invalid_argument("calibrate_baseline: need at least one read");
    if (static_cast<int>(stream.samples.size()) < n)
        throw std::runtime_error("calibrate_baseline: stream shorter than calibration window");
    long long acc = 0;
    for (int i = 0; i < n; ++i) acc += stream.samples[static_cast<std::size_t>(i)];
    return static_cast<int>(std::llround(static_cast<double>(acc) / n));
}

/// Deterministic emulation of the vibrotactile controller loop: rectify
/// against the calibrated baseline, track the full-band envelope, run four
/// quasi-band EMAs, add event cues, gate each band against its threshold and
/// compress the surplus through a power law into a PWM duty.
///
/// Sequential state machine advanced by explicit step calls; a single
/// instance must not be stepped concurrently. Instances are independent.
class HapticEngine {
  public:
    explicit HapticEngine(const HapticParams& params = {}) : params_(params) {
        validate(params_);
    }

    void calibrate(const AdcStream& quiet) {
        baseline_ = calibrate_baseline(quiet, params_.calibration_reads);
        calibrated_ = true;
    }

    void calibrate_to(int baseline) {
        if (baseline < 0 || baseline > kAdcMax)
            throw std::invalid_argument("calibrate_to: baseline out of ADC range");
        baseline_ = baseline;
        calibrated_ = true;
    }

    /// Advance one 8 ms loop tick with a single ADC read.
    PwmFrame step(int adc_sample) {
        if (!calibrated_) throw std::runtime_error("HapticEngine: step before calibration");

        const double rectified = std::fabs(static_cast<double>(adc_sample) - baseline_);
        prev_envelope_ = envelope_;
        envelope_ = ema_update(envelope_, rectified, params_.alpha_envelope);

        for (int k = 0; k < kHapticBands; ++k) {
            auto i = static_cast<std::size_t>(k);
            energy_[i] = ema_update(energy_[i], envelope_, params_.bands[i].alpha);
        }

        last_cues_ = detect_cues();

        PwmFrame frame;
        frame.t_ms = tick_ * params_.tick_ms;
        for (int k = 0; k < kHapticBands; ++k) {
            auto i = static_cast<std::size_t>(k);
            const BandParams& bp = params_.bands[i];
            const double level = energy_[i] + active_cue(static_cast<Band>(k));
            int duty = 0;
            if (level > bp.threshold) {  // ties keep the gate closed
                const double span = bp.saturation - bp.threshold;
                const double norm = std::clamp((level - bp.threshold) / span, 0.0, 1.0);
                const double intensity = std::pow(norm, bp.gamma);
                duty = static_cast<int>(
                    std::lround(params_.pwm_min + intensity * (bp.pwm_max - params_.pwm_min)));
            }
            frame.duty[i] = duty;
            frame.led = std::max(frame.led, duty);
        }

        for (auto& timer : cue_timer_ms_) timer = std::max(0, timer - params_.tick_ms);
        ++tick_;
        last_frame_ = frame;
        return frame;
    }

    /// Cue detection for the current tick: kick boost on a sharp envelope
    /// rise, hi-hat boost when treble energy is high while bass is quiet.
    /// Invoked once per step; calling it again re-arms the cue timers.
    CueEvents detect_cues() {
        CueEvents events;
        if ((envelope_ - prev_envelope_) > params_.cues.rise_delta) {
            cue_timer_ms_[static_cast<std::size_t>(Band::kick)] = params_.cues.duration_ms;
            events.kick = true;
        }
        const auto treble = static_cast<std::size_t>(Band::treble);
        const auto bass = static_cast<std::size_t>(Band::bass);
        if (energy_[treble] > params_.bands[treble].threshold &&
            energy_[bass] < params_.cues.bass_quiet_ratio * params_.bands[bass].threshold) {
            cue_timer_ms_[treble] = params_.cues.duration_ms;
            events.hat = true;
        }
        return events;
    }

    /// Compact status line, printed every ~120 ms of emulated time.
    /// Format: `t=<ms> K:<E> B:<E> V:<E> T:<E> PWM:<k>,<b>,<v>,<t>`
    std::string debug_line() const {
        char buf[128];
        std::snprintf(buf, sizeof(buf), "t=%d K:%d B:%d V:%d T:%d PWM:%d,%d,%d,%d",
                      last_frame_.t_ms, static_cast<int>(std::llround(energy_[0])),
                      static_cast<int>(std::llround(energy_[1])),
                      static_cast<int>(std::llround(energy_[2])),
                      static_cast<int>(std::llround(energy_[3])), last_frame_.duty[0],
                      last_frame_.duty[1], last_frame_.duty[2], last_frame_.duty[3]);
        return buf;
    }

    bool calibrated() const { return calibrated_; }
    int baseline() const { return baseline_; }
    double envelope() const { return envelope_; }
    double band_energy(Band b) const { return energy_[static_cast<std::size_t>(b)]; }
    double active_cue(Band b) const {
        const auto i = static_cast<std::size_t>(b);
        if (cue_timer_ms_[i] <= 0) return 0.0;
        if (b == Band::kick) return params_.cues.kick_boost;
        if (b == Band::treble) return params_.cues.hat_boost;
        return 0.0;
    }
    int tick() const { return tick_; }
    const CueEvents& last_cues() const { return last_cues_; }
    const HapticParams& params() const { return params_; }

    static void validate(const HapticParams& p) {
        if (p.alpha_envelope <= 0.0 || p.alpha_envelope > 1.0)
            throw std::invalid_argument("haptic: alpha_envelope out of (0, 1]");
        if (p.pwm_min <= 0 || p.pwm_min > 255)
            throw std::invalid_argument("haptic: pwm_min out of (0, 255]");
        if (p.tick_ms <= 0) throw std::invalid_argument("haptic: tick_ms must be positive");
        for (const BandParams& bp : p.bands) {
            if (bp.alpha <= 0.0 || bp.alpha > 1.0)
                throw std::invalid_argument("haptic: band alpha out of (0, 1]");
            if (bp.threshold <= 0.0) throw std::invalid_argument("haptic: threshold must be > 0");
            if (bp.gamma < 0.5 || bp.gamma > 1.0)
                throw std::invalid_argument("haptic: gamma out of [0.5, 1.0]");
            if (bp.pwm_max < p.pwm_min || bp.pwm_max > 255)
                throw std::invalid_argument("haptic: pwm_max out of [pwm_min, 255]");
            if (bp.saturation <= bp.threshold)
                throw std::invalid_argument("haptic: saturation must exceed threshold");
        }
    }

  private:
    HapticParams params_;
    bool calibrated_ = false;
    int baseline_ = kAdcBias;
    double envelope_ = 0.0;
    double prev_envelope_ = 0.0;
    std::array<double, kHapticBands> energy_{};
    std::array<int, kHapticBands> cue_timer_ms_{};
    CueEvents last_cues_;
    PwmFrame last_frame_;
    int tick_ = 0;
};

}  // namespace mustem
