#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

#include "mustem/colormap.hpp"

using namespace mustem;

TEST_CASE("freq_to_hue anchors on the A octaves") {
    CHECK(freq_to_hue(55.0) == 0.0);                                   // A1, red
    CHECK(freq_to_hue(440.0) == doctest::Approx(154.2857142857).epsilon(1e-9));   // A4
    CHECK(freq_to_hue(3520.0) == doctest::Approx(308.5714285714).epsilon(1e-9));  // A7
    CHECK(std::fabs(freq_to_hue(7040.0)) <= 1e-9);                     // mod-84 wrap
}

TEST_CASE("freq_to_hue rejects non-positive frequencies") {
    CHECK_THROWS_AS(freq_to_hue(0.0), std::invalid_argument);
    CHECK_THROWS_AS(freq_to_hue(-100.0), std::invalid_argument);
}

TEST_CASE("freq_to_hue maps sub-reference frequencies into [0, 360)") {
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> dist(1.0, 54.9);
    for (int i = 0; i < 100; ++i) {
        const double hue = freq_to_hue(dist(rng));
        CHECK(hue >= 0.0);
        CHECK(hue < 360.0);
    }
}

TEST_CASE("octave equivalence: doubling advances hue by 12 semitone steps") {
    const double octave_step = 12.0 / 84.0 * 360.0;  // 51.4286 degrees
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> dist(55.0, 3520.0);
    for (int i = 0; i < 200; ++i) {
        const double f = dist(rng);
        double diff = std::fabs(freq_to_hue(2.0 * f) - freq_to_hue(f));
        const double remainder = std::fabs(std::remainder(diff, octave_step));
        CHECK(remainder <= 1e-9);
    }
}

TEST_CASE("freq_to_hue is strictly increasing before the wrap") {
    double prev = freq_to_hue(55.001);
    for (double f = 56.0; f < 7040.0; f += 10.0) {
        const double h = freq_to_hue(f);
        CHECK(h > prev);
        prev = h;
    }
}

TEST_CASE("hsv_to_rgb565 primary anchors") {
    CHECK(hsv_to_rgb565({0.0, 0.0, 0.0}) == 0x0000);    // black
    CHECK(hsv_to_rgb565({0.0, 1.0, 1.0}) == 0xF800);    // pure red
    CHECK(hsv_to_rgb565({120.0, 1.0, 1.0}) == 0x07E0);  // pure green
    CHECK(hsv_to_rgb565({240.0, 1.0, 1.0}) == 0x001F);  // pure blue
}

TEST_CASE("565 pack/unpack round-trips its own fields") {
    std::mt19937 rng(17);
    std::uniform_int_distribution<int> dist(0, 255);
    for (int i = 0; i < 300; ++i) {
        const auto r = static_cast<std::uint8_t>(dist(rng));
        const auto g = static_cast<std::uint8_t>(dist(rng));
        const auto b = static_cast<std::uint8_t>(dist(rng));
        const Rgb888 back = unpack565(pack565(r, g, b));
        // One quantization step per channel at most.
        CHECK(std::abs(back.r - r) <= 8);
        CHECK(std::abs(back.g - g) <= 4);
        CHECK(std::abs(back.b - b) <= 8);
        // Re-packing the replicated value is lossless.
        CHECK(pack565(back.r, back.g, back.b) == pack565(r, g, b));
    }
}

TEST_CASE("band palette has nine distinct entries with the right families") {
    std::set<Rgb565> distinct;
    for (int i = 0; i < kBandCount9; ++i) distinct.insert(band_color(i));
    CHECK(distinct.size() == 9);

    const Rgb888 sub_bass = unpack565(band_color(0));  // deep red
    CHECK(sub_bass.r > sub_bass.g);
    CHECK(sub_bass.r > sub_bass.b);
    const Rgb888 low_mid = unpack565(band_color(4));  // green
    CHECK(low_mid.g > low_mid.r);
    CHECK(low_mid.g > low_mid.b);

    CHECK_THROWS_AS(band_color(9), std::out_of_range);
    CHECK_THROWS_AS(band_color(-1), std::out_of_range);
}
