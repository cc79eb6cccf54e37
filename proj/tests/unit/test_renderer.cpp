#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "mustem/renderer.hpp"

using namespace mustem;

namespace {

// Count pixels inside/outside a region that differ from a reference buffer.
int changed_outside(const FrameBuffer& before, const FrameBuffer& after, const Rect& region) {
    int changed = 0;
    for (int y = 0; y < FrameBuffer::kHeight; ++y)
        for (int x = 0; x < FrameBuffer::kWidth; ++x)
            if (!region.contains(x, y) && before.at(x, y) != after.at(x, y)) ++changed;
    return changed;
}

}  // namespace

TEST_CASE("default layout: five disjoint rectangles covering the canvas") {
    const Layout layout;
    layout.validate();
    long long area = 0;
    for (const Rect* r : layout.all()) area += r->area();
    CHECK(area == 320LL * 240LL);
}

TEST_CASE("layout validation rejects overlap and out-of-canvas regions") {
    Layout overlapping;
    overlapping.spiral = {0, 30, 160, 150};  // bleeds into the waveform strip
    CHECK_THROWS_AS(overlapping.validate(), std::invalid_argument);

    Layout outside;
    outside.bars = {0, 200, 320, 60};  // bottom edge at 260 > 240
    CHECK_THROWS_AS(outside.validate(), std::invalid_argument);
}

TEST_CASE("each draw op stays inside its region") {
    Renderer renderer;
    const Layout& layout = renderer.layout();

    FrameBuffer before = renderer.framebuffer();
    renderer.phyllotaxis_step(440.0, 80.0);  // large rms pushes radius to the clamp
    CHECK(changed_outside(before, renderer.framebuffer(), layout.spiral) == 0);

    before = renderer.framebuffer();
    std::array<double, kBandCount9> energies{};
    energies.fill(1e9);  // saturated bars
    renderer.draw_spectrum_bars(energies);
    CHECK(changed_outside(before, renderer.framebuffer(), layout.bars) == 0);

    before = renderer.framebuffer();
    renderer.draw_waveform(440.0, 500.0);  // amplitude clipped to half-height
    CHECK(changed_outside(before, renderer.framebuffer(), layout.waveform) == 0);

    before = renderer.framebuffer();
    renderer.draw_beat_indicator(1.0);
    CHECK(changed_outside(before, renderer.framebuffer(), layout.indicator) == 0);

    before = renderer.framebuffer();
    renderer.draw_debug_overlay(1234.0, 567.0, 440.0);
    CHECK(changed_outside(before, renderer.framebuffer(), layout.overlay) == 0);
}

TEST_CASE("first phyllotaxis point lands at the spiral center") {
    Renderer renderer;
    const auto tick = renderer.phyllotaxis_step(440.0, 0.0);
    CHECK(tick.points_drawn == 12);
    const Rect& spiral = renderer.layout().spiral;
    const int cx = spiral.x + spiral.w / 2;
    const int cy = spiral.y + spiral.h / 2;
    CHECK(renderer.framebuffer().at(cx, cy) != Renderer::kBackground);  // point 0, r = 0
}

TEST_CASE("rotation advances by exactly the gain at 440 Hz") {
    Renderer renderer;
    renderer.phyllotaxis_step(440.0, 10.0);
    CHECK(renderer.omega() == doctest::Approx(0.05).epsilon(1e-12));
    renderer.phyllotaxis_step(880.0, 10.0);
    CHECK(renderer.omega() == doctest::Approx(0.15).epsilon(1e-12));
    renderer.phyllotaxis_step(std::nullopt, 10.0);  // SILENT freezes rotation
    CHECK(renderer.omega() == doctest::Approx(0.15).epsilon(1e-12));
}

TEST_CASE("spiral radius follows the formula and the 20-80 clamp") {
    VizParams params;
    params.r_base = 0.0;
    Renderer small(Layout{}, params);
    CHECK(small.phyllotaxis_step(440.0, 0.0).outer_radius == doctest::Approx(20.0));  // clamped up

    Renderer normal;  // default r_base = 40
    CHECK(normal.phyllotaxis_step(440.0, 50.0).outer_radius == doctest::Approx(65.0));  // 40 + 25
    CHECK(normal.phyllotaxis_step(440.0, 1e6).outer_radius == doctest::Approx(80.0));  // clamped down
}

TEST_CASE("spiral resets every 8 seconds and accumulates 12 points per tick") {
    Renderer renderer;
    for (int tick = 0; tick < 200; ++tick) {
        const auto result = renderer.phyllotaxis_step(440.0, 10.0);
        CHECK_FALSE(result.cycle_reset);
    }
    CHECK(renderer.spiral_point_count() == 2400);
    const auto reset_tick = renderer.phyllotaxis_step(440.0, 10.0);  // t crosses 8 s
    CHECK(reset_tick.cycle_reset);
    CHECK(renderer.spiral_point_count() == 12);
}

TEST_CASE("wavelength map anchors") {
    CHECK(Renderer::wavelength_px(100.0) == doctest::Approx(20.0));
    CHECK(Renderer::wavelength_px(2000.0) == doctest::Approx(80.0));
    CHECK(Renderer::wavelength_px(1050.0) == doctest::Approx(50.0));
    CHECK(Renderer::wavelength_px(50.0) == doctest::Approx(20.0));    // clamped
    CHECK(Renderer::wavelength_px(3000.0) == doctest::Approx(80.0));  // clamped
}

TEST_CASE("zero RMS draws a flat line at the waveform center") {
    Renderer renderer;
    renderer.draw_waveform(440.0, 0.0);
    const Rect& r = renderer.layout().waveform;
    const int mid = r.y + r.h / 2;
    for (int x = r.x; x < r.x + r.w; ++x) {
        CHECK(renderer.framebuffer().at(x, mid) != Renderer::kBackground);
        if (mid + 3 < r.y + r.h) CHECK(renderer.framebuffer().at(x, mid + 3) == Renderer::kBackground);
    }
}

TEST_CASE("SILENT draws the centerline in gray") {
    Renderer renderer;
    renderer.draw_waveform(std::nullopt, 100.0);
    const Rect& r = renderer.layout().waveform;
    CHECK(renderer.framebuffer().at(r.x + r.w / 2, r.y + r.h / 2) == Renderer::kSilentGray);
}

TEST_CASE("beat radius formula") {
    CHECK(beat_radius(0.0) == doctest::Approx(8.0));
    CHECK(beat_radius(1.0) == doctest::Approx(16.0));
    // 8 + 8 * 0.5^0.67 = 13.028 (power evaluated independently)
    CHECK(beat_radius(0.5) == doctest::Approx(13.0281).epsilon(1e-4));
}

TEST_CASE("resting beat indicator is a circle of exactly 8 px radius") {
    Renderer renderer;
    renderer.draw_beat_indicator(0.0);
    const Rect& r = renderer.layout().indicator;
    const int cx = r.x + std::min(r.w, 40) / 2;
    const int cy = r.y + std::min(r.h, 40) / 2;
    int min_x = cx, max_x = cx;
    for (int x = r.x; x < r.x + r.w; ++x) {
        if (renderer.framebuffer().at(x, cy) == Renderer::kBeatColor) {
            min_x = std::min(min_x, x);
            max_x = std::max(max_x, x);
        }
    }
    CHECK(cx - min_x == 8);
    CHECK(max_x - cx == 8);
}

TEST_CASE("beat pulse decays back to rest within 150 ms") {
    Renderer renderer;
    renderer.draw_beat_indicator(1.0);  // radius 16 on the onset tick
    const Rect& r = renderer.layout().indicator;
    const int cx = r.x + std::min(r.w, 40) / 2;
    const int cy = r.y + std::min(r.h, 40) / 2;
    CHECK(renderer.framebuffer().at(cx + 15, cy) == Renderer::kBeatColor);
    for (int tick = 0; tick < 4; ++tick) renderer.draw_beat_indicator(0.0);  // 160 ms later
    CHECK(renderer.framebuffer().at(cx + 9, cy) == Renderer::kBackground);
    CHECK(renderer.framebuffer().at(cx + 8, cy) == Renderer::kBeatColor);
}

TEST_CASE("overlay swatch carries the hue of the detected frequency") {
    Renderer renderer;
    renderer.draw_debug_overlay(100.0, 42.0, 440.0);
    const Rect& r = renderer.layout().overlay;
    const Rgb565 expected = hsv_to_rgb565({freq_to_hue(440.0), 0.95, 0.90});
    CHECK(renderer.framebuffer().at(r.x + 10, r.y + 30) == expected);
}

TEST_CASE("overlay shows SILENT without a hue swatch") {
    Renderer renderer;
    renderer.draw_debug_overlay(0.0, 0.0, std::nullopt);
    const Rect& r = renderer.layout().overlay;
    CHECK(renderer.framebuffer().at(r.x + 10, r.y + 30) == Renderer::kSilentGray);
    // Some text pixels must exist on the SILENT line.
    int text_px = 0;
    for (int x = r.x; x < r.x + 60; ++x)
        for (int y = r.y + 14; y < r.y + 21; ++y)
            if (renderer.framebuffer().at(x, y) == Renderer::kTextColor) ++text_px;
    CHECK(text_px > 0);
}

TEST_CASE("full-height bar uses the band color at the tip") {
    Renderer renderer;
    std::array<double, kBandCount9> energies{};
    energies[4] = 1e9;  // green band, saturated
    renderer.draw_spectrum_bars(energies);
    const Rect& r = renderer.layout().bars;
    const int slot = r.w / kBandCount9;
    const int x = r.x + 4 * slot + slot / 2;
    // Tip row is full-brightness band color; base row is at half value.
    const Rgb888 green = band_table()[4].color;
    CHECK(renderer.framebuffer().at(x, r.y + r.h - 2 - (r.h - 4) + 1) ==
          pack565(green.r, green.g, green.b));
    // Other bars are empty.
    const int x0 = r.x + 0 * slot + slot / 2;
    CHECK(renderer.framebuffer().at(x0, r.y + r.h - 3) == Renderer::kBackground);
}

TEST_CASE("PPM export: black frame, red frame, determinism") {
    FrameBuffer fb;
    const auto black = fb.ppm_bytes();
    const std::string header = "P6\n320 240\n255\n";
    REQUIRE(black.size() == header.size() + 320 * 240 * 3);
    CHECK(std::equal(header.begin(), header.end(), black.begin()));
    for (std::size_t i = header.size(); i < black.size(); ++i) CHECK(black[i] == 0);

    fb.fill(0xF800);
    const auto red = fb.ppm_bytes();
    for (std::size_t i = header.size(); i < red.size(); i += 3) {
        CHECK(red[i] == 255);  // 5-bit 31 replicates to 255
        CHECK(red[i + 1] == 0);
        CHECK(red[i + 2] == 0);
    }

    const auto path1 = std::filesystem::temp_directory_path() / "mustem_frame_a.ppm";
    const auto path2 = std::filesystem::temp_directory_path() / "mustem_frame_b.ppm";
    fb.write_ppm(path1.string());
    fb.write_ppm(path2.string());
    std::ifstream a(path1, std::ios::binary), b(path2, std::ios::binary);
    const std::string bytes_a((std::istreambuf_iterator<char>(a)), std::istreambuf_iterator<char>());
    const std::string bytes_b((std::istreambuf_iterator<char>(b)), std::istreambuf_iterator<char>());
    CHECK(bytes_a == bytes_b);
    CHECK(bytes_a.size() == black.size());
    std::filesystem::remove(path1);
    std::filesystem::remove(path2);
}
