#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "mustem/colormap.hpp"
#include "mustem/framebuffer.hpp"

namespace mustem {

/// Screen regions owned by the five visual elements. The defaults tile the
/// 320x240 canvas exactly; overrides must stay inside the canvas and must not
/// overlap each other.
struct Layout {
    Rect waveform = {0, 0, 320, 40};
    Rect spiral = {0, 40, 160, 140};
    Rect indicator = {160, 40, 40, 140};
    Rect overlay = {200, 40, 120, 140};
    Rect bars = {0, 180, 320, 60};

    std::array<const Rect*, 5> all() const { return {&waveform, &spiral, &indicator, &overlay, &bars}; }

    void validate() const {
        const Rect canvas = FrameBuffer::bounds();
        const auto regions = all();
        for (const Rect* r : regions) {
            if (r->w <= 0 || r->h <= 0 || r->x < 0 || r->y < 0 || r->x + r->w > canvas.w ||
                r->y + r->h > canvas.h)
                throw std::invalid_argument("layout: region outside the 320x240 canvas");
        }
        for (std::size_t i = 0; i < regions.size(); ++i)
            for (std::size_t j = i + 1; j < regions.size(); ++j)
                if (regions[i]->overlaps(*regions[j]))
                    throw std::invalid_argument("layout: regions overlap");
    }
};

struct VizParams {
    double rotation_gain = 0.05;   // rad/frame at 440 Hz
    double r_base = 40.0;          // px, spiral radius at RMS 0
    double k_pulse = 8.0;          // px, beat circle expansion at strength 1
    double h_wave = 16.0;          // px, waveform amplitude at RMS 50
    double e_full = 6000.0;        // band energy mapping to a full-height bar
    double wave_phase_step = 0.30; // rad per waveform tick
    int cycle_ms = 8000;           // spiral reset period
    int points_per_frame = 12;
    int connect_stride = 5;        // chord from point n back to n-stride
    std::array<Rgb888, kBandCount9> palette = [] {
        std::array<Rgb888, kBandCount9> p{};
        for (int i = 0; i < kBandCount9; ++i)
            p[static_cast<std::size_t>(i)] = band_table()[static_cast<std::size_t>(i)].color;
        return p;
    }();
};

inline constexpr double kGoldenAngleRad = 137.5 * std::numbers::pi / 180.0;

/// Beat circle radius for a given onset strength (Stevens power scaling).
inline double beat_radius(double strength, double k_pulse = 8.0) {
    return 8.0 + k_pulse * std::pow(std::clamp(strength, 0.0, 1.0), 0.67);
}

/// Draws the four visual elements plus the debug overlay into an owned
/// framebuffer. Rendering is a pure function of the call sequence; identical
/// inputs produce byte-identical frames.
class Renderer {
  public:
    explicit Renderer(const Layout& layout = {}, const VizParams& params = {})
        : layout_(layout), params_(params) {
        layout_.validate();
        fb_.fill(kBackground);
    }

    struct SpiralTick {
        int points_drawn = 0;
        int segments_drawn = 0;
        bool cycle_reset = false;
        double outer_radius = 0.0;
    };

    /// One 25 Hz phyllotaxis tick: advance rotation, place 12 new points at
    /// successive golden angles with r = c*sqrt(n), chord each to the point
    /// `stride` earlier, reset the region every cycle.
    SpiralTick phyllotaxis_step(std::optional<double> freq_hz, double rms, int dt_ms = 40) {
        SpiralTick result;
        cycle_clock_ms_ += dt_ms;
        if (cycle_clock_ms_ > params_.cycle_ms) {
            fb_.fill_rect(layout_.spiral, kBackground, layout_.spiral);
            points_.clear();
            cycle_clock_ms_ = dt_ms;
            result.cycle_reset = true;
        }

        if (freq_hz) omega_ += (*freq_hz / 440.0) * params_.rotation_gain;

        const double outer = std::clamp(params_.r_base + (rms / 50.0) * 25.0, 20.0, 80.0);
        result.outer_radius = outer;
        const Rgb565 color = freq_hz
                                 ? hsv_to_rgb565({freq_to_hue(*freq_hz), 0.95, 0.90})
                                 : kSilentGray;

        const int cx = layout_.spiral.x + layout_.spiral.w / 2;
        const int cy = layout_.spiral.y + layout_.spiral.h / 2;
        const int base = static_cast<int>(points_.size());
        const int newest = base + params_.points_per_frame - 1;
        const double scale = newest > 0 ? outer / std::sqrt(static_cast<double>(newest)) : outer;

        for (int j = 0; j < params_.points_per_frame; ++j) {
            const int idx = base + j;
            const double theta = static_cast<double>(idx) * kGoldenAngleRad + omega_;
            const double r = scale * std::sqrt(static_cast<double>(idx));
            const int x = cx + static_cast<int>(std::lround(r * std::cos(theta)));
            const int y = cy + static_cast<int>(std::lround(r * std::sin(theta)));
            fb_.fill_circle(x, y, 1.0, color, layout_.spiral);
            ++result.points_drawn;
            const int back = idx - params_.connect_stride;
            if (back >= 0) {
                fb_.draw_line(x, y, points_[static_cast<std::size_t>(back)].first,
                              points_[static_cast<std::size_t>(back)].second, color,
                              layout_.spiral);
                ++result.segments_drawn;
            }
            points_.emplace_back(x, y);
        }
        return result;
    }

    /// 10 Hz spectrum bars: nine bands in table order, height proportional to
    /// smoothed energy, luminance graded from 50% at the base to 100% at the
    /// tip.
    void draw_spectrum_bars(const std::array<double, kBandCount9>& energies) {
        const Rect& r = layout_.bars;
        fb_.fill_rect(r, kBackground, r);
        const int slot = r.w / kBandCount9;
        const int bar_w = std::max(1, slot - 4);
        const int max_h = r.h - 4;
        for (int b = 0; b < kBandCount9; ++b) {
            const double norm =
                std::clamp(energies[static_cast<std::size_t>(b)] / params_.e_full, 0.0, 1.0);
            const int h = static_cast<int>(std::lround(norm * max_h));
            const Rgb888 c = params_.palette[static_cast<std::size_t>(b)];
            const int x0 = r.x + b * slot + 2;
            const int y_base = r.y + r.h - 2;
            for (int row = 0; row < h; ++row) {
                const double lum = 0.5 + 0.5 * static_cast<double>(row + 1) / h;
                const Rgb565 shade = pack565(static_cast<std::uint8_t>(std::lround(c.r * lum)),
                                             static_cast<std::uint8_t>(std::lround(c.g * lum)),
                                             static_cast<std::uint8_t>(std::lround(c.b * lum)));
                for (int x = x0; x < x0 + bar_w; ++x) fb_.set(x, y_base - row, shade, r);
            }
        }
    }

    /// 20 Hz synthetic waveform: wavelength mapped from the detected
    /// frequency (100-2000 Hz onto 20-80 px), amplitude from RMS, phase
    /// accumulating for apparent motion. SILENT draws a flat centerline.
    void draw_waveform(std::optional<double> freq_hz, double rms) {
        const Rect& r = layout_.waveform;
        fb_.fill_rect(r, kBackground, r);
        const int mid = r.y + r.h / 2;
        wave_phase_ += params_.wave_phase_step;
        if (wave_phase_ > 2.0 * std::numbers::pi) wave_phase_ -= 2.0 * std::numbers::pi;

        if (!freq_hz) {
            fb_.draw_line(r.x, mid, r.x + r.w - 1, mid, kSilentGray, r);
            return;
        }
        const double lambda = wavelength_px(*freq_hz);
        const double amp = std::min((rms / 50.0) * params_.h_wave, r.h / 2.0);
        const Rgb565 color = hsv_to_rgb565({freq_to_hue(*freq_hz), 0.95, 0.90});
        int prev_y = mid;
        for (int x = 0; x < r.w; ++x) {
            const double y = amp * std::sin(2.0 * std::numbers::pi * x / lambda + wave_phase_);
            const int yy = mid + static_cast<int>(std::lround(y));
            if (x == 0)
                fb_.set(r.x, yy, color, r);
            else
                fb_.draw_line(r.x + x - 1, prev_y, r.x + x, yy, color, r);
            prev_y = yy;
        }
    }

    /// map(f, 100-2000 Hz -> 20-80 px) with embedded-style input clamping.
    static double wavelength_px(double freq_hz) {
        const double f = std::clamp(freq_hz, 100.0, 2000.0);
        return 20.0 + (f - 100.0) * 60.0 / 1900.0;
    }

    /// Beat circle: 8 px at rest, expanding by k_pulse*strength^0.67 on an
    /// onset and decaying back over 150 ms.
    void draw_beat_indicator(double strength, int dt_ms = 40) {
        if (strength > 0.0) {
            pulse_extra_ = beat_radius(strength, params_.k_pulse) - 8.0;
            pulse_remaining_ms_ = kPulseDecayMs;
        }
        const double radius =
            8.0 + (pulse_remaining_ms_ > 0
                       ? pulse_extra_ * static_cast<double>(pulse_remaining_ms_) / kPulseDecayMs
                       : 0.0);
        const Rect& r = layout_.indicator;
        fb_.fill_rect(r, kBackground, r);
        const int cx = r.x + std::min(r.w, 40) / 2;
        const int cy = r.y + std::min(r.h, 40) / 2;
        fb_.fill_circle(cx, cy, radius, kBeatColor, r);
        pulse_remaining_ms_ = std::max(0, pulse_remaining_ms_ - dt_ms);
    }

    /// 5 Hz debug overlay: gate energy vs threshold, detected frequency (or
    /// SILENT) and a swatch of the current frequency-hue mapping.
    void draw_debug_overlay(double energy, double threshold, std::optional<double> freq_hz) {
        const Rect& r = layout_.overlay;
        fb_.fill_rect(r, kBackground, r);
        char line[48];
        std::snprintf(line, sizeof(line), "E:%d T:%d", static_cast<int>(std::llround(energy)),
                      static_cast<int>(std::llround(threshold)));
        fb_.draw_text(r.x + 4, r.y + 4, line, kTextColor, r);
        if (freq_hz) {
            std::snprintf(line, sizeof(line), "%d HZ", static_cast<int>(std::llround(*freq_hz)));
            fb_.draw_text(r.x + 4, r.y + 14, line, kTextColor, r);
            const Rgb565 swatch = hsv_to_rgb565({freq_to_hue(*freq_hz), 0.95, 0.90});
            fb_.fill_rect({r.x + 4, r.y + 24, 24, 12}, swatch, r);
        } else {
            fb_.draw_text(r.x + 4, r.y + 14, "SILENT", kTextColor, r);
            fb_.fill_rect({r.x + 4, r.y + 24, 24, 12}, kSilentGray, r);
        }
    }

    const FrameBuffer& framebuffer() const { return fb_; }
    const Layout& layout() const { return layout_; }
    int spiral_point_count() const { return static_cast<int>(points_.size()); }
    double omega() const { return omega_; }

    static constexpr Rgb565 kBackground = 0x0000;
    static constexpr Rgb565 kTextColor = 0xFFFF;
    static constexpr Rgb565 kBeatColor = 0xFFFF;
    static constexpr Rgb565 kSilentGray = pack565(96, 96, 96);
    static constexpr int kPulseDecayMs = 150;

  private:
    Layout layout_;
    VizParams params_;
    FrameBuffer fb_;
    std::vector<std::pair<int, int>> points_;  // screen coords of this cycle's points
    double omega_ = 0.0;
    double wave_phase_ = 0.0;
    int cycle_clock_ms_ = 0;
    double pulse_extra_ = 0.0;
    int pulse_remaining_ms_ = 0;
};

}  // namespace mustem
