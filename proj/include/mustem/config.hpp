#pragma once

#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "mustem/haptic.hpp"
#include "mustem/renderer.hpp"
#include "mustem/spectral.hpp"

namespace mustem {

/// Emulated-timeline periods for the two engine clocks and the staggered
/// visual update rates.
struct SchedulerPeriods {
    int haptic_tick_ms = 8;
    int debug_period_ms = 120;
    int phyllotaxis_period_ms = 40;  // 25 Hz
    int waveform_period_ms = 50;     // 20 Hz
    int bars_period_ms = 100;        // 10 Hz
    int overlay_period_ms = 200;     // 5 Hz
};

/// Every tunable of the pipeline with its documented default. Values carry a
/// provenance tag: `paper` for constants lifted from the reference firmware
/// description, `artifact` for gap-filling defaults of this implementation,
/// `user` once overridden from a config file.
struct Config {
    int adc_bias = kAdcBias;
    double adc_gain = 1.0;
    HapticParams haptic;
    SpectralParams spectral;
    VizParams viz;
    Layout layout;
    SchedulerPeriods sched;
    std::set<std::string> user_set;  // keys overridden by a loaded file
};

enum class Provenance { paper, artifact };

namespace detail {

struct ConfigField {
    std::string key;  // section.name
    Provenance origin;
    std::function<std::string(const Config&)> get;
    std::function<void(Config&, const std::string&)> set;
};

inline std::string format_int(long long v) { return std::to_string(v); }

inline std::string format_real(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);  // shortest round-trip form
}

inline long long parse_int(const std::string& key, const std::string& s) {
    long long v = 0;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    const auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc{} || res.ptr != last)
        throw std::runtime_error("config: bad integer for " + key + ": '" + s + "'");
    return v;
}

inline double parse_real(const std::string& key, const std::string& s) {
    double v = 0.0;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    const auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc{} || res.ptr != last)
        throw std::runtime_error("config: bad number for " + key + ": '" + s + "'");
    return v;
}

inline std::vector<long long> parse_int_list(const std::string& key, const std::string& s,
                                             std::size_t expected) {
    std::vector<long long> out;
    std::string token;
    std::istringstream in(s);
    while (std::getline(in, token, ',')) out.push_back(parse_int(key, token));
    if (out.size() != expected)
        throw std::runtime_error("config: " + key + " expects " + std::to_string(expected) +
                                 " comma-separated integers");
    return out;
}

inline std::vector<ConfigField> config_fields() {
    std::vector<ConfigField> f;
    auto real_field = [&f](const char* key, Provenance p, auto getter, auto setter) {
        f.push_back({key, p, [getter](const Config& c) { return format_real(getter(c)); },
                     [setter, key = std::string(key)](Config& c, const std::string& s) {
                         setter(c, parse_real(key, s));
                     }});
    };
    auto int_field = [&f](const char* key, Provenance p, auto getter, auto setter) {
        f.push_back({key, p, [getter](const Config& c) { return format_int(getter(c)); },
                     [setter, key = std::string(key)](Config& c, const std::string& s) {
                         setter(c, static_cast<int>(parse_int(key, s)));
                     }});
    };

    int_field("adc.bias", Provenance::artifact, [](const Config& c) { return c.adc_bias; },
              [](Config& c, int v) { c.adc_bias = v; });
    real_field("adc.gain", Provenance::artifact, [](const Config& c) { return c.adc_gain; },
               [](Config& c, double v) { c.adc_gain = v; });

    real_field("haptic.alpha_envelope", Provenance::artifact,
               [](const Config& c) { return c.haptic.alpha_envelope; },
               [](Config& c, double v) { c.haptic.alpha_envelope = v; });
    static const char* band_names[kHapticBands] = {"kick", "bass", "voice", "treble"};
    static const Provenance gamma_origin[kHapticBands] = {
        Provenance::paper, Provenance::paper, Provenance::paper,
        Provenance::artifact};  // paper gives treble gamma only as a range
    for (int b = 0; b < kHapticBands; ++b) {
        const auto i = static_cast<std::size_t>(b);
        real_field(("haptic.alpha_" + std::string(band_names[b])).c_str(), Provenance::paper,
                   [i](const Config& c) { return c.haptic.bands[i].alpha; },
                   [i](Config& c, double v) { c.haptic.bands[i].alpha = v; });
        real_field(("haptic.threshold_" + std::string(band_names[b])).c_str(), Provenance::paper,
                   [i](const Config& c) { return c.haptic.bands[i].threshold; },
                   [i](Config& c, double v) { c.haptic.bands[i].threshold = v; });
        real_field(("haptic.gamma_" + std::string(band_names[b])).c_str(), gamma_origin[b],
                   [i](const Config& c) { return c.haptic.bands[i].gamma; },
                   [i](Config& c, double v) { c.haptic.bands[i].gamma = v; });
        int_field(("haptic.pwm_max_" + std::string(band_names[b])).c_str(), Provenance::paper,
                  [i](const Config& c) { return c.haptic.bands[i].pwm_max; },
                  [i](Config& c, int v) { c.haptic.bands[i].pwm_max = v; });
        real_field(("haptic.saturation_" + std::string(band_names[b])).c_str(),
                   Provenance::artifact,
                   [i](const Config& c) { return c.haptic.bands[i].saturation; },
                   [i](Config& c, double v) { c.haptic.bands[i].saturation = v; });
    }
    int_field("haptic.pwm_min", Provenance::paper,
              [](const Config& c) { return c.haptic.pwm_min; },
              [](Config& c, int v) { c.haptic.pwm_min = v; });
    real_field("haptic.rise_delta", Provenance::artifact,
               [](const Config& c) { return c.haptic.cues.rise_delta; },
               [](Config& c, double v) { c.haptic.cues.rise_delta = v; });
    real_field("haptic.cue_kick", Provenance::artifact,
               [](const Config& c) { return c.haptic.cues.kick_boost; },
               [](Config& c, double v) { c.haptic.cues.kick_boost = v; });
    real_field("haptic.cue_hat", Provenance::artifact,
               [](const Config& c) { return c.haptic.cues.hat_boost; },
               [](Config& c, double v) { c.haptic.cues.hat_boost = v; });
    real_field("haptic.bass_quiet_ratio", Provenance::artifact,
               [](const Config& c) { return c.haptic.cues.bass_quiet_ratio; },
               [](Config& c, double v) { c.haptic.cues.bass_quiet_ratio = v; });
    int_field("haptic.cue_duration_ms", Provenance::artifact,
              [](const Config& c) { return c.haptic.cues.duration_ms; },
              [](Config& c, int v) { c.haptic.cues.duration_ms = v; });
    int_field("haptic.calibration_reads", Provenance::paper,
              [](const Config& c) { return c.haptic.calibration_reads; },
              [](Config& c, int v) { c.haptic.calibration_reads = v; });
    int_field("haptic.calibration_spacing_ms", Provenance::paper,
              [](const Config& c) { return c.haptic.calibration_spacing_ms; },
              [](Config& c, int v) { c.haptic.calibration_spacing_ms = v; });

    real_field("spectral.peak_sigma", Provenance::paper,
               [](const Config& c) { return c.spectral.peak.sigma_mult; },
               [](Config& c, double v) { c.spectral.peak.sigma_mult = v; });
    real_field("spectral.peak_floor", Provenance::artifact,
               [](const Config& c) { return c.spectral.peak.abs_floor; },
               [](Config& c, double v) { c.spectral.peak.abs_floor = v; });
    int_field("spectral.hold_limit", Provenance::artifact,
              [](const Config& c) { return c.spectral.hold_limit; },
              [](Config& c, int v) { c.spectral.hold_limit = v; });
    real_field("spectral.band_alpha", Provenance::paper,
               [](const Config& c) { return c.spectral.band_alpha; },
               [](Config& c, double v) { c.spectral.band_alpha = v; });
    f.push_back({"spectral.band_mode", Provenance::artifact,
                 [](const Config& c) {
                     return std::string(c.spectral.band_mode == BandEnergyMode::mean ? "mean"
                                                                                     : "sum");
                 },
                 [](Config& c, const std::string& s) {
                     if (s == "mean")
                         c.spectral.band_mode = BandEnergyMode::mean;
                     else if (s == "sum")
                         c.spectral.band_mode = BandEnergyMode::sum;
                     else
                         throw std::runtime_error("config: spectral.band_mode must be mean|sum");
                 }});
    int_field("spectral.onset_window_frames", Provenance::artifact,
              [](const Config& c) { return c.spectral.onset.window_frames; },
              [](Config& c, int v) { c.spectral.onset.window_frames = v; });
    real_field("spectral.onset_sigma", Provenance::artifact,
               [](const Config& c) { return c.spectral.onset.sigma_mult; },
               [](Config& c, double v) { c.spectral.onset.sigma_mult = v; });
    real_field("spectral.treble_fallback_low_hz", Provenance::artifact,
               [](const Config& c) { return c.spectral.treble_fallback_low; },
               [](Config& c, double v) { c.spectral.treble_fallback_low = v; });

    real_field("visual.rotation_gain", Provenance::paper,
               [](const Config& c) { return c.viz.rotation_gain; },
               [](Config& c, double v) { c.viz.rotation_gain = v; });
    real_field("visual.r_base", Provenance::artifact,
               [](const Config& c) { return c.viz.r_base; },
               [](Config& c, double v) { c.viz.r_base = v; });
    real_field("visual.k_pulse", Provenance::artifact,
               [](const Config& c) { return c.viz.k_pulse; },
               [](Config& c, double v) { c.viz.k_pulse = v; });
    real_field("visual.h_wave", Provenance::artifact,
               [](const Config& c) { return c.viz.h_wave; },
               [](Config& c, double v) { c.viz.h_wave = v; });
    real_field("visual.e_full", Provenance::artifact,
               [](const Config& c) { return c.viz.e_full; },
               [](Config& c, double v) { c.viz.e_full = v; });
    real_field("visual.wave_phase_step", Provenance::artifact,
               [](const Config& c) { return c.viz.wave_phase_step; },
               [](Config& c, double v) { c.viz.wave_phase_step = v; });
    int_field("visual.cycle_ms", Provenance::paper,
              [](const Config& c) { return c.viz.cycle_ms; },
              [](Config& c, int v) { c.viz.cycle_ms = v; });
    int_field("visual.points_per_frame", Provenance::paper,
              [](const Config& c) { return c.viz.points_per_frame; },
              [](Config& c, int v) { c.viz.points_per_frame = v; });
    int_field("visual.connect_stride", Provenance::paper,
              [](const Config& c) { return c.viz.connect_stride; },
              [](Config& c, int v) { c.viz.connect_stride = v; });

    for (int b = 0; b < kBandCount9; ++b) {
        const auto i = static_cast<std::size_t>(b);
        f.push_back({"palette.band" + std::to_string(b), Provenance::artifact,
                     [i](const Config& c) {
                         const Rgb888& p = c.viz.palette[i];
                         return std::to_string(p.r) + "," + std::to_string(p.g) + "," +
                                std::to_string(p.b);
                     },
                     [i](Config& c, const std::string& s) {
                         const auto v = parse_int_list("palette.band", s, 3);
                         for (long long x : v)
                             if (x < 0 || x > 255)
                                 throw std::runtime_error("config: palette channel out of 0..255");
                         c.viz.palette[i] = {static_cast<std::uint8_t>(v[0]),
                                             static_cast<std::uint8_t>(v[1]),
                                             static_cast<std::uint8_t>(v[2])};
                     }});
    }

    static const char* region_names[5] = {"waveform", "spiral", "indicator", "overlay", "bars"};
    using RegionMember = Rect Layout::*;
    static const RegionMember region_members[5] = {&Layout::waveform, &Layout::spiral,
                                                   &Layout::indicator, &Layout::overlay,
                                                   &Layout::bars};
    for (int r = 0; r < 5; ++r) {
        const RegionMember member = region_members[r];
        f.push_back({"layout." + std::string(region_names[r]), Provenance::artifact,
                     [member](const Config& c) {
                         const Rect& rect = c.layout.*member;
                         return std::to_string(rect.x) + "," + std::to_string(rect.y) + "," +
                                std::to_string(rect.w) + "," + std::to_string(rect.h);
                     },
                     [member](Config& c, const std::string& s) {
                         const auto v = parse_int_list("layout", s, 4);
                         c.layout.*member = {static_cast<int>(v[0]), static_cast<int>(v[1]),
                                             static_cast<int>(v[2]), static_cast<int>(v[3])};
                     }});
    }

    int_field("sched.haptic_tick_ms", Provenance::paper,
              [](const Config& c) { return c.sched.haptic_tick_ms; },
              [](Config& c, int v) { c.sched.haptic_tick_ms = v; });
    int_field("sched.debug_period_ms", Provenance::paper,
              [](const Config& c) { return c.sched.debug_period_ms; },
              [](Config& c, int v) { c.sched.debug_period_ms = v; });
    int_field("sched.phyllotaxis_period_ms", Provenance::paper,
              [](const Config& c) { return c.sched.phyllotaxis_period_ms; },
              [](Config& c, int v) { c.sched.phyllotaxis_period_ms = v; });
    int_field("sched.waveform_period_ms", Provenance::paper,
              [](const Config& c) { return c.sched.waveform_period_ms; },
              [](Config& c, int v) { c.sched.waveform_period_ms = v; });
    int_field("sched.bars_period_ms", Provenance::paper,
              [](const Config& c) { return c.sched.bars_period_ms; },
              [](Config& c, int v) { c.sched.bars_period_ms = v; });
    int_field("sched.overlay_period_ms", Provenance::paper,
              [](const Config& c) { return c.sched.overlay_period_ms; },
              [](Config& c, int v) { c.sched.overlay_period_ms = v; });
    return f;
}

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

}  // namespace detail

inline void validate_config(const Config& c) {
    HapticEngine::validate(c.haptic);
    if (c.adc_bias < 0 || c.adc_bias > kAdcMax)
        throw std::runtime_error("config: adc.bias out of [0, 1023]");
    if (c.spectral.hold_limit < 1) throw std::runtime_error("config: spectral.hold_limit < 1");
    if (c.spectral.band_alpha <= 0.0 || c.spectral.band_alpha > 1.0)
        throw std::runtime_error("config: spectral.band_alpha out of (0, 1]");
    if (c.spectral.onset.window_frames < 2)
        throw std::runtime_error("config: spectral.onset_window_frames < 2");
    if (c.viz.points_per_frame < 1 || c.viz.connect_stride < 1 || c.viz.cycle_ms < 1000)
        throw std::runtime_error("config: visual spiral parameters out of range");
    const int periods[] = {c.sched.haptic_tick_ms,      c.sched.debug_period_ms,
                           c.sched.phyllotaxis_period_ms, c.sched.waveform_period_ms,
                           c.sched.bars_period_ms,        c.sched.overlay_period_ms};
    for (int p : periods)
        if (p <= 0) throw std::runtime_error("config: scheduler periods must be positive");
    c.layout.validate();
}

/// Parse a flat `section` / `key = value` file into the config. `#` comments
/// and a trailing parenthesized provenance tag (as produced by the dump) are
/// ignored, so dump output loads back unchanged.
inline void load_config_stream(Config& cfg, std::istream& in, const std::string& origin) {
    const auto fields = detail::config_fields();
    std::string line, section;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::string s = detail::trim(line);
        if (s.empty()) continue;
        if (s.front() == '[' && s.back() == ']') {
            section = detail::trim(s.substr(1, s.size() - 2));
            continue;
        }
        const auto eq = s.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error(origin + ":" + std::to_string(line_no) +
                                     ": expected key = value");
        const std::string key_part = detail::trim(s.substr(0, eq));
        std::string value = detail::trim(s.substr(eq + 1));
        if (!value.empty() && value.back() == ')') {
            if (const auto open = value.rfind('('); open != std::string::npos)
                value = detail::trim(value.substr(0, open));
        }
        const std::string key = section.empty() ? key_part : section + "." + key_part;
        bool found = false;
        for (const auto& field : fields) {
            if (field.key == key) {
                field.set(cfg, value);
                cfg.user_set.insert(key);
                found = true;
                break;
            }
        }
        if (!found)
            throw std::runtime_error(origin + ":" + std::to_string(line_no) + ": unknown key '" +
                                     key + "'");
    }
    validate_config(cfg);
}

inline Config load_config(const std::string& path, Config base = {}) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("config: cannot open " + path);
    load_config_stream(base, in, path);
    return base;
}

/// Effective settings, one `key = value (provenance)` line per tunable,
/// grouped by section. The output is itself a loadable config file.
inline std::string dump_config(const Config& cfg) {
    const auto fields = detail::config_fields();
    std::string out;
    std::string section;
    for (const auto& field : fields) {
        const auto dot = field.key.find('.');
        const std::string sec = field.key.substr(0, dot);
        const std::string name = field.key.substr(dot + 1);
        if (sec != section) {
            if (!out.empty()) out += "\n";
            out += "[" + sec + "]\n";
            section = sec;
        }
        const char* tag = cfg.user_set.count(field.key)
                              ? "user"
                              : (field.origin == Provenance::paper ? "paper" : "artifact");
        out += name + " = " + field.get(cfg) + " (" + tag + ")\n";
    }
    return out;
}

}  // namespace mustem
