#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "mustem/colormap.hpp"
#include "mustem/font5x7.hpp"

namespace mustem {

struct Rect {
    int x = 0, y = 0, w = 0, h = 0;

    bool contains(int px, int py) const {
        return px >= x && px < x + w && py >= y && py < y + h;
    }
    bool overlaps(const Rect& o) const {
        return x < o.x + o.w && o.x < x + w && y < o.y + o.h && o.y < y + h;
    }
    long long area() const { return static_cast<long long>(w) * h; }
};

/// 320x240 RGB565 pixel grid mirroring the TFT. All drawing is clipped to a
/// caller-supplied rectangle so each renderer element stays inside the region
/// it owns.
class FrameBuffer {
  public:
    static constexpr int kWidth = 320;
    static constexpr int kHeight = 240;

    FrameBuffer() : px_(static_cast<std::size_t>(kWidth) * kHeight, 0) {}

    static Rect bounds() { return {0, 0, kWidth, kHeight}; }

    Rgb565 at(int x, int y) const {
        if (x < 0 || x >= kWidth || y < 0 || y >= kHeight)
            throw std::out_of_range("FrameBuffer::at: pixel out of bounds");
        return px_[static_cast<std::size_t>(y) * kWidth + static_cast<std::size_t>(x)];
    }

    void set(int x, int y, Rgb565 c, const Rect& clip) {
        if (!clip.contains(x, y)) return;
        if (x < 0 || x >= kWidth || y < 0 || y >= kHeight) return;
        px_[static_cast<std::size_t>(y) * kWidth + static_cast<std::size_t>(x)] = c;
    }

    void fill(Rgb565 c) { std::fill(px_.begin(), px_.end(), c); }

    void fill_rect(const Rect& r, Rgb565 c, const Rect& clip) {
        for (int y = r.y; y < r.y + r.h; ++y)
            for (int x = r.x; x < r.x + r.w; ++x) set(x, y, c, clip);
    }

    void draw_line(int x0, int y0, int x1, int y1, Rgb565 c, const Rect& clip) {
        int dx = std::abs(x1 - x0), sx = x0 < x1 ? 1 : -1;
        int dy = -std::abs(y1 - y0), sy = y0 < y1 ? 1 : -1;
        int err = dx + dy;
        for (;;) {
            set(x0, y0, c, clip);
            if (x0 == x1 && y0 == y1) break;
            const int e2 = 2 * err;
            if (e2 >= dy) {
                err += dy;
                x0 += sx;
            }
            if (e2 <= dx) {
                err += dx;
                y0 += sy;
            }
        }
    }

    void fill_circle(int cx, int cy, double radius, Rgb565 c, const Rect& clip) {
        const int r = static_cast<int>(std::ceil(radius));
        const double r2 = radius * radius;
        for (int dy = -r; dy <= r; ++dy)
            for (int dx = -r; dx <= r; ++dx)
                if (static_cast<double>(dx) * dx + static_cast<double>(dy) * dy <= r2)
                    set(cx + dx, cy + dy, c, clip);
    }

    void draw_text(int x, int y, std::string_view text, Rgb565 c, const Rect& clip) {
        for (char ch : text) {
            const Glyph5x7& glyph = font5x7(ch);
            for (int row = 0; row < 7; ++row)
                for (int col = 0; col < 5; ++col)
                    if (glyph[static_cast<std::size_t>(row)] & (0x10 >> col))
                        set(x + col, y + row, c, clip);
            x += 6;  // 5 px glyph + 1 px spacing
        }
    }

    /// Binary PPM (P6) bytes: RGB565 expanded to 8 bits per channel by bit
    /// replication. Byte-exact across platforms.
    std::vector<unsigned char> ppm_bytes() const {
        const std::string header = "P6\n320 240\n255\n";
        std::vector<unsigned char> out(header.begin(), header.end());
        out.reserve(out.size() + px_.size() * 3);
        for (Rgb565 p : px_) {
            const Rgb888 c = unpack565(p);
            out.push_back(c.r);
            out.push_back(c.g);
            out.push_back(c.b);
        }
        return out;
    }

    void write_ppm(const std::string& path) const {
        std::ofstream out(path, std::ios::binary);
        if (!out) throw std::runtime_error("write_ppm: cannot open " + path);
        const auto bytes = ppm_bytes();
        out.write(reinterpret_cast<const char*>(bytes.data()),
                  static_cast<std::streamsize>(bytes.size()));
        if (!out) throw std::runtime_error("write_ppm: write failed for " + path);
    }

    const std::vector<Rgb565>& pixels() const { return px_; }

  private:
    std::vector<Rgb565> px_;
};

}  // namespace mustem
