#pragma once

#include <array>
#include <cctype>
#include <cstdint>

namespace mustem {

// Firmware-style 5x7 bitmap font, one byte per row, bit 4 = leftmost pixel.
// Covers digits, uppercase letters and the punctuation the overlay needs;
// lowercase is folded to uppercase, anything else renders blank.
using Glyph5x7 = std::array<std::uint8_t, 7>;

inline const Glyph5x7& font5x7(char ch) {
    static const Glyph5x7 blank = {0, 0, 0, 0, 0, 0, 0};
    static const std::array<Glyph5x7, 10> digits = {{
        {0x0E, 0x11, 0x13, 0x15, 0x19, 0x11, 0x0E},  // 0
        {0x04, 0x0C, 0x04, 0x04, 0x04, 0x04, 0x0E},  // 1
        {0x0E, 0x11, 0x01, 0x06, 0x08, 0x10, 0x1F},  // 2
        {0x1F, 0x02, 0x04, 0x02, 0x01, 0x11, 0x0E},  // 3
        {0x02, 0x06, 0x0A, 0x12, 0x1F, 0x02, 0x02},  // 4
        {0x1F, 0x10, 0x1E, 0x01, 0x01, 0x11, 0x0E},  // 5
        {0x06, 0x08, 0x10, 0x1E, 0x11, 0x11, 0x0E},  // 6
        {0x1F, 0x01, 0x02, 0x04, 0x08, 0x08, 0x08},  // 7
        {0x0E, 0x11, 0x11, 0x0E, 0x11, 0x11, 0x0E},  // 8
        {0x0E, 0x11, 0x11, 0x0F, 0x01, 0x02, 0x0C},  // 9
    }};
    static const std::array<Glyph5x7, 26> letters = {{
        {0x0E, 0x11, 0x11, 0x1F, 0x11, 0x11, 0x11},  // A
        {0x1E, 0x11, 0x11, 0x1E, 0x11, 0x11, 0x1E},  // B
        {0x0E, 0x11, 0x10, 0x10, 0x10, 0x11, 0x0E},  // C
        {0x1C, 0x12, 0x11, 0x11, 0x11, 0x12, 0x1C},  // D
        {0x1F, 0x10, 0x10, 0x1E, 0x10, 0x10, 0x1F},  // E
        {0x1F, 0x10, 0x10, 0x1E, 0x10, 0x10, 0x10},  // F
        {0x0E, 0x11, 0x10, 0x17, 0x11, 0x11, 0x0F},  // G
        {0x11, 0x11, 0x11, 0x1F, 0x11, 0x11, 0x11},  // H
        {0x0E, 0x04, 0x04, 0x04, 0x04, 0x04, 0x0E},  // I
        {0x07, 0x02, 0x02, 0x02, 0x02, 0x12, 0x0C},  // J
        {0x11, 0x12, 0x14, 0x18, 0x14, 0x12, 0x11},  // K
        {0x10, 0x10, 0x10, 0x10, 0x10, 0x10, 0x1F},  // L
        {0x11, 0x1B, 0x15, 0x15, 0x11, 0x11, 0x11},  // M
        {0x11, 0x11, 0x19, 0x15, 0x13, 0x11, 0x11},  // N
        {0x0E, 0x11, 0x11, 0x11, 0x11, 0x11, 0x0E},  // O
        {0x1E, 0x11, 0x11, 0x1E, 0x10, 0x10, 0x10},  // P
        {0x0E, 0x11, 0x11, 0x11, 0x15, 0x12, 0x0D},  // Q
        {0x1E, 0x11, 0x11, 0x1E, 0x14, 0x12, 0x11},  // R
        {0x0F, 0x10, 0x10, 0x0E, 0x01, 0x01, 0x1E},  // S
        {0x1F, 0x04, 0x04, 0x04, 0x04, 0x04, 0x04},  // T
        {0x11, 0x11, 0x11, 0x11, 0x11, 0x11, 0x0E},  // U
        {0x11, 0x11, 0x11, 0x11, 0x11, 0x0A, 0x04},  // V
        {0x11, 0x11, 0x11, 0x15, 0x15, 0x15, 0x0A},  // W
        {0x11, 0x11, 0x0A, 0x04, 0x0A, 0x11, 0x11},  // X
        {0x11, 0x11, 0x0A, 0x04, 0x04, 0x04, 0x04},  // Y
        {0x1F, 0x01, 0x02, 0x04, 0x08, 0x10, 0x1F},  // Z
    }};
    static const Glyph5x7 colon = {0x00, 0x04, 0x04, 0x00, 0x04, 0x04, 0x00};
    static const Glyph5x7 dot = {0x00, 0x00, 0x00, 0x00, 0x00, 0x06, 0x06};
    static const Glyph5x7 dash = {0x00, 0x00, 0x00, 0x0E, 0x00, 0x00, 0x00};
    static const Glyph5x7 plus = {0x00, 0x04, 0x04, 0x1F, 0x04, 0x04, 0x00};
    static const Glyph5x7 equals = {0x00, 0x00, 0x1F, 0x00, 0x1F, 0x00, 0x00};
    static const Glyph5x7 slash = {0x01, 0x02, 0x02, 0x04, 0x08, 0x08, 0x10};
    static const Glyph5x7 comma = {0x00, 0x00, 0x00, 0x00, 0x06, 0x04, 0x08};

    const auto c = static_cast<unsigned char>(ch);
    if (c >= '0' && c <= '9') return digits[static_cast<std::size_t>(c - '0')];
    const auto upper = static_cast<unsigned char>(std::toupper(c));
    if (upper >= 'A' && upper <= 'Z') return letters[static_cast<std::size_t>(upper - 'A')];
    switch (c) {
        case ':': return colon;
        case '.': return dot;
        case '-': return dash;
        case '+': return plus;
        case '=': return equals;
        case '/': return slash;
        case ',': return comma;
        default: return blank;
    }
}

}  // namespace mustem
