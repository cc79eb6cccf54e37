#pragma once

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "mustem/audio.hpp"
#include "mustem/config.hpp"
#include "mustem/haptic.hpp"
#include "mustem/renderer.hpp"
#include "mustem/spectral.hpp"

namespace mustem {

enum class RunMode { offline, realtime };

struct RunOptions {
    bool haptics = true;
    bool visuals = true;
    RunMode mode = RunMode::offline;
    // Invoked once per phyllotaxis tick after all same-timestamp draws.
    std::function<void(int index, const FrameBuffer&)> frame_sink;
};

/// One row of the per-frame analysis dump.
struct AnalysisRow {
    int t_ms = 0;
    std::optional<double> freq_hz;  // nullopt = SILENT
    double rms = 0.0;
    double beat = 0.0;
    std::array<double, kBandCount9> bands{};
};

struct RunStats {
    int duration_ms = 0;
    int haptic_ticks = 0;
    int phyllotaxis_ticks = 0;
    int waveform_ticks = 0;
    int bars_ticks = 0;
    int overlay_ticks = 0;
    int debug_lines = 0;
    int frames_exported = 0;

    // Haptic stimulus-step activations, in emulated time (deterministic).
    struct Activation {
        int band = 0;
        int stimulus_ms = 0;
        int activation_ms = 0;
    };
    std::vector<Activation> activations;

    // Wall-clock cost of each analysis+render cycle (measured, not part of
    // the deterministic outputs).
    double visual_cycle_mean_ms = 0.0;
    double visual_cycle_max_ms = 0.0;
    double wall_seconds = 0.0;

    SchedulerPeriods periods;
};

struct RunResult {
    std::vector<PwmFrame> pwm;
    std::vector<std::string> debug_lines;
    std::vector<AnalysisRow> analysis;
    RunStats stats;
};

namespace detail {

// Stimulus-step detector for latency accounting: a rectified haptic-path
// sample >= 64 ADC units after at least 3 ticks below 16, with a 200 ms
// refractory period between events.
inline std::vector<int> stimulus_ticks(const std::vector<int>& adc, int baseline, int tick_ms) {
    constexpr double kQuiet = 16.0;
    constexpr double kLoud = 64.0;
    constexpr int kRefractoryMs = 200;
    std::vector<int> events;
    int quiet_run = 0;
    int last_event_ms = -kRefractoryMs;
    for (std::size_t i = 0; i < adc.size(); ++i) {
        const double rectified = std::fabs(static_cast<double>(adc[i]) - baseline);
        const int t_ms = static_cast<int>(i) * tick_ms;
        if (rectified >= kLoud && quiet_run >= 3 && t_ms - last_event_ms >= kRefractoryMs) {
            events.push_back(static_cast<int>(i));
            last_event_ms = t_ms;
        }
        quiet_run = rectified < kQuiet ? quiet_run + 1 : 0;
    }
    return events;
}

}  // namespace detail

/// Drive both engines over the emulated timeline: the 8 ms haptic loop with
/// its 120 ms debug cadence, and the staggered 25/20/10/5 Hz visual clocks.
/// The engines consume the same clip through independent cursors and never
/// exchange state. Offline mode is bit-deterministic; realtime mode paces the
/// same work against absolute wall-clock deadlines.
inline RunResult run_timeline(const PcmClip& clip, const Config& cfg, const RunOptions& opt = {}) {
    validate_config(cfg);
    if (clip.empty() || clip.rate <= 0.0)
        throw std::invalid_argument("run_timeline: clip is empty");
    const int duration_ms = static_cast<int>(
        static_cast<long long>(clip.samples.size()) * 1000 / static_cast<long long>(clip.rate));
    if (duration_ms <= 0) throw std::invalid_argument("run_timeline: clip duration is zero");

    const auto wall_start = std::chrono::steady_clock::now();

    RunResult result;
    result.stats.duration_ms = duration_ms;
    result.stats.periods = cfg.sched;
    const SchedulerPeriods& per = cfg.sched;
    const int debug_every_ticks = std::max(1, per.debug_period_ms / per.haptic_tick_ms);

    // Haptic front end: one instantaneous ADC read per loop tick, plus a
    // quiet pre-roll for baseline calibration.
    HapticEngine engine(cfg.haptic);
    std::vector<int> haptic_adc;
    if (opt.haptics) {
        AdcStream quiet;
        quiet.bias = cfg.adc_bias;
        quiet.rate = 1000.0 / cfg.haptic.calibration_spacing_ms;
        quiet.samples.assign(static_cast<std::size_t>(cfg.haptic.calibration_reads),
                             adc_quantize(0.0, cfg.adc_bias, cfg.adc_gain));
        engine.calibrate(quiet);
        haptic_adc.reserve(static_cast<std::size_t>(duration_ms / per.haptic_tick_ms) + 1);
        for (int t = 0; t < duration_ms; t += per.haptic_tick_ms)
            haptic_adc.push_back(
                adc_quantize(clip.sample_at(t / 1000.0), cfg.adc_bias, cfg.adc_gain));
    }

    // Visual front end: the 4 kHz stream, DC-centered against the same
    // calibrated quiet level.
    std::vector<double> centered;
    SpectralAnalyzer analyzer(cfg.spectral);
    Renderer renderer(cfg.layout, cfg.viz);
    const int samples_per_ms = static_cast<int>(kSpectralRate) / 1000;
    if (opt.visuals) {
        const PcmClip at4k = clip.rate == kSpectralRate ? clip : resample(clip, kSpectralRate);
        const AdcStream adc = to_adc(at4k, cfg.adc_bias, cfg.adc_gain);
        centered.reserve(adc.samples.size());
        for (int s : adc.samples) centered.push_back(static_cast<double>(s - cfg.adc_bias));
    }

    std::optional<double> latest_freq;
    double latest_rms = 0.0;
    double latest_beat = 0.0;
    std::array<double, kBandCount9> latest_bands{};
    double latest_gate_energy = 0.0;
    double latest_gate_threshold = 0.0;
    double cycle_cost_sum = 0.0;

    std::vector<double> window(kFftSize, 0.0);
    int frame_index = 0;

    for (int t = 0; t < duration_ms; ++t) {
        if (opt.mode == RunMode::realtime)
            std::this_thread::sleep_until(wall_start + std::chrono::milliseconds(t));

        const bool haptic_tick = opt.haptics && t % per.haptic_tick_ms == 0;
        const bool phyl_tick = opt.visuals && t % per.phyllotaxis_period_ms == 0;

        // Same-timestamp priority: haptic, phyllotaxis, waveform, bars,
        // overlay, debug; the frame snapshot closes the tick.
        if (haptic_tick) {
            const auto idx = static_cast<std::size_t>(t / per.haptic_tick_ms);
            result.pwm.push_back(engine.step(haptic_adc[idx]));
            ++result.stats.haptic_ticks;
        }

        if (phyl_tick) {
            const auto cycle_start = std::chrono::steady_clock::now();
            const long long cursor = std::min<long long>(
                static_cast<long long>(t) * samples_per_ms,
                static_cast<long long>(centered.size()));
            std::fill(window.begin(), window.end(), 0.0);
            const long long lo = std::max<long long>(0, cursor - kFftSize);
            for (long long i = lo; i < cursor; ++i)
                window[static_cast<std::size_t>(kFftSize - (cursor - i))] =
                    centered[static_cast<std::size_t>(i)];

            const SpectralFrame frame = analyzer.analyze(window);
            latest_freq = frame.freq_hz;
            latest_rms = frame.rms;
            latest_beat = frame.beat_strength;
            latest_bands = frame.band_energy;
            latest_gate_energy = frame.peak_candidate_mag;
            latest_gate_threshold = frame.peak_threshold;

            renderer.phyllotaxis_step(latest_freq, latest_rms, per.phyllotaxis_period_ms);
            renderer.draw_beat_indicator(latest_beat, per.phyllotaxis_period_ms);

            result.analysis.push_back(
                {t, latest_freq, latest_rms, latest_beat, latest_bands});
            ++result.stats.phyllotaxis_ticks;

            const double cost =
                std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                          cycle_start)
                    .count();
            cycle_cost_sum += cost;
            result.stats.visual_cycle_max_ms = std::max(result.stats.visual_cycle_max_ms, cost);
        }

        if (opt.visuals && t % per.waveform_period_ms == 0) {
            renderer.draw_waveform(latest_freq, latest_rms);
            ++result.stats.waveform_ticks;
        }
        if (opt.visuals && t % per.bars_period_ms == 0) {
            renderer.draw_spectrum_bars(latest_bands);
            ++result.stats.bars_ticks;
        }
        if (opt.visuals && t % per.overlay_period_ms == 0) {
            renderer.draw_debug_overlay(latest_gate_energy, latest_gate_threshold, latest_freq);
            ++result.stats.overlay_ticks;
        }
        if (haptic_tick && (t / per.haptic_tick_ms) % debug_every_ticks == 0) {
            result.debug_lines.push_back(engine.debug_line());
            ++result.stats.debug_lines;
        }
        if (phyl_tick && opt.frame_sink) {
            opt.frame_sink(frame_index++, renderer.framebuffer());
            ++result.stats.frames_exported;
        }
    }

    if (result.stats.phyllotaxis_ticks > 0)
        result.stats.visual_cycle_mean_ms = cycle_cost_sum / result.stats.phyllotaxis_ticks;

    if (opt.haptics) {
        const auto events =
            detail::stimulus_ticks(haptic_adc, engine.baseline(), per.haptic_tick_ms);
        for (int ev : events) {
            for (int band = 0; band < kHapticBands; ++band) {
                for (std::size_t j = static_cast<std::size_t>(ev); j < result.pwm.size(); ++j) {
                    if (result.pwm[j].duty[static_cast<std::size_t>(band)] > 0) {
                        result.stats.activations.push_back(
                            {band, ev * per.haptic_tick_ms,
                             static_cast<int>(j) * per.haptic_tick_ms});
                        break;
                    }
                }
            }
        }
    }

    result.stats.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - wall_start).count();
    return result;
}

/// Latency/budget summary: subsystem rates with achieved counts, haptic
/// onset-to-PWM activation latency vs the ~100 ms budget, and visual cycle
/// cost vs the 50 ms budget.
inline std::string latency_report(const RunStats& stats) {
    char buf[256];
    std::string out;
    std::snprintf(buf, sizeof(buf), "timeline: %d ms emulated, %.3f s wall\n", stats.duration_ms,
                  stats.wall_seconds);
    out += buf;

    const struct {
        const char* name;
        int period_ms;
        int count;
    } rows[] = {
        {"haptic", stats.periods.haptic_tick_ms, stats.haptic_ticks},
        {"phyllotaxis", stats.periods.phyllotaxis_period_ms, stats.phyllotaxis_ticks},
        {"waveform", stats.periods.waveform_period_ms, stats.waveform_ticks},
        {"bars", stats.periods.bars_period_ms, stats.bars_ticks},
        {"overlay", stats.periods.overlay_period_ms, stats.overlay_ticks},
        {"debug", stats.periods.debug_period_ms, stats.debug_lines},
    };
    for (const auto& row : rows) {
        std::snprintf(buf, sizeof(buf), "%s: %.1f Hz nominal (%d ms), %d ticks\n", row.name,
                      1000.0 / row.period_ms, row.period_ms, row.count);
        out += buf;
    }

    if (stats.activations.empty()) {
        out += "haptic activation latency: n/a (no stimulus events)\n";
    } else {
        double sum = 0.0;
        int max_ms = 0;
        for (const auto& a : stats.activations) {
            const int lat = a.activation_ms - a.stimulus_ms;
            sum += lat;
            max_ms = std::max(max_ms, lat);
        }
        std::snprintf(buf, sizeof(buf),
                      "haptic activation latency: %zu events, mean %.1f ms, max %d ms, budget "
                      "100 ms [%s]\n",
                      stats.activations.size(), sum / static_cast<double>(stats.activations.size()),
                      max_ms, max_ms <= 100 ? "OK" : "VIOLATION");
        out += buf;
    }

    std::snprintf(buf, sizeof(buf),
                  "visual cycle cost: mean %.3f ms, max %.3f ms, budget 50 ms [%s]\n",
                  stats.visual_cycle_mean_ms, stats.visual_cycle_max_ms,
                  stats.visual_cycle_max_ms < 50.0 ? "OK" : "VIOLATION");
    out += buf;
    return out;
}

inline std::string pwm_csv(const std::vector<PwmFrame>& pwm) {
    std::string out = "t_ms,kick,bass,voice,treble,led\n";
    char buf[96];
    for (const PwmFrame& f : pwm) {
        std::snprintf(buf, sizeof(buf), "%d,%d,%d,%d,%d,%d\n", f.t_ms, f.duty[0], f.duty[1],
                      f.duty[2], f.duty[3], f.led);
        out += buf;
    }
    return out;
}

inline std::string analysis_csv(const std::vector<AnalysisRow>& rows) {
    std::string out = "t_ms,freq_hz,rms,beat,e0,e1,e2,e3,e4,e5,e6,e7,e8\n";
    char buf[320];
    for (const AnalysisRow& r : rows) {
        char freq[32];
        if (r.freq_hz)
            std::snprintf(freq, sizeof(freq), "%.2f", *r.freq_hz);
        else
            std::snprintf(freq, sizeof(freq), "SILENT");
        std::snprintf(buf, sizeof(buf),
                      "%d,%s,%.3f,%.4f,%.3f,%.3f,%.3f,%.3f,%.3f,%.3f,%.3f,%.3f,%.3f\n", r.t_ms,
                      freq, r.rms, r.beat, r.bands[0], r.bands[1], r.bands[2], r.bands[3],
                      r.bands[4], r.bands[5], r.bands[6], r.bands[7], r.bands[8]);
        out += buf;
    }
    return out;
}

/// Flat JSON object with the run statistics.
inline std::string stats_json(const RunStats& stats) {
    char buf[160];
    std::string out = "{\n";
    auto add_int = [&out, &buf](const char* key, long long v, bool last = false) {
        std::snprintf(buf, sizeof(buf), "  \"%s\": %lld%s\n", key, v, last ? "" : ",");
        out += buf;
    };
    auto add_real = [&out, &buf](const char* key, double v, bool last = false) {
        std::snprintf(buf, sizeof(buf), "  \"%s\": %.6f%s\n", key, v, last ? "" : ",");
        out += buf;
    };
    add_int("duration_ms", stats.duration_ms);
    add_int("haptic_ticks", stats.haptic_ticks);
    add_int("phyllotaxis_ticks", stats.phyllotaxis_ticks);
    add_int("waveform_ticks", stats.waveform_ticks);
    add_int("bars_ticks", stats.bars_ticks);
    add_int("overlay_ticks", stats.overlay_ticks);
    add_int("debug_lines", stats.debug_lines);
    add_int("frames_exported", stats.frames_exported);
    add_int("activation_events", static_cast<long long>(stats.activations.size()));
    int max_lat = 0;
    for (const auto& a : stats.activations)
        max_lat = std::max(max_lat, a.activation_ms - a.stimulus_ms);
    add_int("max_activation_latency_ms", max_lat);
    add_real("visual_cycle_mean_ms", stats.visual_cycle_mean_ms);
    add_real("visual_cycle_max_ms", stats.visual_cycle_max_ms);
    add_real("wall_seconds", stats.wall_seconds, true);
    out += "}\n";
    return out;
}

inline void write_text_file(const std::string& path, const std::string& body) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out.write(body.data(), static_cast<std::streamsize>(body.size()));
    if (!out) throw std::runtime_error("write failed for " + path);
}

}  // namespace mustem
