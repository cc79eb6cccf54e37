#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace mustem {

struct HsvColor {
    double h = 0.0;  // degrees, [0, 360)
    double s = 0.95;
    double v = 0.90;
};

struct Rgb888 {
    std::uint8_t r = 0, g = 0, b = 0;
};

using Rgb565 = std::uint16_t;

inline constexpr Rgb565 pack565(std::uint8_t r, std::uint8_t g, std::uint8_t b) {
    return static_cast<Rgb565>((static_cast<std::uint16_t>(r >> 3) << 11) |
                               (static_cast<std::uint16_t>(g >> 2) << 5) |
                               static_cast<std::uint16_t>(b >> 3));
}

// 5/6-bit channels back to 8 bits by replicating high-order bits.
inline constexpr Rgb888 unpack565(Rgb565 c) {
    const auto r5 = static_cast<std::uint8_t>((c >> 11) & 0x1F);
    const auto g6 = static_cast<std::uint8_t>((c >> 5) & 0x3F);
    const auto b5 = static_cast<std::uint8_t>(c & 0x1F);
    return {static_cast<std::uint8_t>((r5 << 3) | (r5 >> 2)),
            static_cast<std::uint8_t>((g6 << 2) | (g6 >> 4)),
            static_cast<std::uint8_t>((b5 << 3) | (b5 >> 2))};
}

/// Log-frequency hue on the 12-tone equal-temperament scale, referenced to
/// A1 = 55 Hz: s = 12*log2(f/55), hue = ((s mod 84)/84)*360. Octaves of A
/// land on the same hue family; 55*2^7 wraps back to 0.
inline double freq_to_hue(double f) {
    if (f <= 0.0) throw std::invalid_argument("freq_to_hue: frequency must be positive");
    const double s = 12.0 * std::log2(f / 55.0);
    double m = std::fmod(s, 84.0);
    if (m < 0.0) m += 84.0;  // floored modulo; f < 55 Hz still maps into [0, 360)
    return m / 84.0 * 360.0;
}

inline Rgb888 hsv_to_rgb888(const HsvColor& c) {
    double h = std::fmod(c.h, 360.0);
    if (h < 0.0) h += 360.0;
    const double s = std::clamp(c.s, 0.0, 1.0);
    const double v = std::clamp(c.v, 0.0, 1.0);

    const double chroma = v * s;
    const double hp = h / 60.0;
    const double x = chroma * (1.0 - std::fabs(std::fmod(hp, 2.0) - 1.0));
    double r = 0.0, g = 0.0, b = 0.0;
    switch (static_cast<int>(hp)) {
        case 0: r = chroma; g = x; break;
        case 1: r = x; g = chroma; break;
        case 2: g = chroma; b = x; break;
        case 3: g = x; b = chroma; break;
        case 4: r = x; b = chroma; break;
        default: r = chroma; b = x; break;
    }
    const double m = v - chroma;
    auto q8 = [](double u) { return static_cast<std::uint8_t>(std::lround(u * 255.0)); };
    return {q8(r + m), q8(g + m), q8(b + m)};
}

inline Rgb565 hsv_to_rgb565(const HsvColor& c) {
    const Rgb888 rgb = hsv_to_rgb888(c);
    return pack565(rgb.r, rgb.g, rgb.b);
}

inline constexpr int kBandCount9 = 9;

/// One row of the 9-band analyzer table: edges in Hz plus the display color.
struct BandSpec {
    double low_hz;
    double high_hz;
    double center_hz;
    const char* color_name;
    Rgb888 color;
};

/// Nine psychoacoustic analyzer bands with their palette. The color names are
/// fixed; the RGB values are display constants and may be overridden from the
/// [palette] config section.
inline const std::array<BandSpec, kBandCount9>& band_table() {
    static const std::array<BandSpec, kBandCount9> table = {{
        {20.0, 60.0, 40.0, "deep-red", {180, 0, 0}},
        {60.0, 80.0, 70.0, "orange", {255, 128, 0}},
        {80.0, 110.0, 95.0, "yellow", {255, 255, 0}},
        {110.0, 165.0, 135.0, "yellow-green", {170, 255, 0}},
        {165.0, 360.0, 250.0, "green", {0, 200, 0}},
        {360.0, 630.0, 500.0, "cyan", {0, 255, 255}},
        {630.0, 960.0, 800.0, "light-blue", {80, 160, 255}},
        {960.0, 2400.0, 1500.0, "dark-blue", {0, 0, 200}},
        {2400.0, 8000.0, 6000.0, "purple-magenta", {200, 0, 255}},
    }};
    return table;
}

inline Rgb565 band_color(int index) {
    if (index < 0 || index >= kBandCount9) throw std::out_of_range("band_color: index out of 0..8");
    const Rgb888 c = band_table()[static_cast<std::size_t>(index)].color;
    return pack565(c.r, c.g, c.b);
}

}  // namespace mustem
