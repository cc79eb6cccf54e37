#include <doctest.h>

#include <random>

#include "mustem/audio.hpp"
#include "mustem/spectral.hpp"
#include "oracles.hpp"

using namespace mustem;

namespace {

std::vector<double> flat_spectrum(double value) { return std::vector<double>(256, value); }

std::vector<double> spike_spectrum(int bin, double left, double mid, double right) {
    std::vector<double> mags(256, 0.0);
    mags[static_cast<std::size_t>(bin - 1)] = left;
    mags[static_cast<std::size_t>(bin)] = mid;
    mags[static_cast<std::size_t>(bin + 1)] = right;
    return mags;
}

std::vector<double> tone_frame(double freq, double amp_adc, double rate = 4000.0) {
    const PcmClip tone = synth_tone(freq, 0.2, 1.0, rate);
    std::vector<double> frame(tone.samples.begin(), tone.samples.begin() + 512);
    for (double& v : frame) v *= amp_adc;
    return frame;
}

}  // namespace

TEST_CASE("detect_peak ignores flat and empty spectra") {
    CHECK_FALSE(detect_peak(flat_spectrum(0.0)).has_value());
    CHECK_FALSE(detect_peak(flat_spectrum(100.0)).has_value());  // max == mu, sigma == 0
}

TEST_CASE("detect_peak applies the absolute floor when sigma is tiny") {
    auto mags = flat_spectrum(0.0);
    mags[50] = 20.0;  // above mu+3*sigma but below the floor of 25
    CHECK_FALSE(detect_peak(mags).has_value());
    mags[50] = 200.0;
    const auto peak = detect_peak(mags);
    REQUIRE(peak.has_value());
    CHECK(peak->bin == 50);
}

TEST_CASE("parabolic refinement: symmetric peak has zero offset") {
    const auto peak = detect_peak(spike_spectrum(100, 1000.0, 2000.0, 1000.0));
    REQUIRE(peak.has_value());
    CHECK(peak->delta == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(peak->freq_hz == doctest::Approx(100 * 7.8125));
}

TEST_CASE("parabolic refinement: (1, 2, 1.5) shifts by +1/6 bin") {
    const auto peak = detect_peak(spike_spectrum(100, 1000.0, 2000.0, 1500.0));
    REQUIRE(peak.has_value());
    CHECK(peak->delta == doctest::Approx(1.0 / 6.0).epsilon(1e-12));
    CHECK(peak->freq_hz == doctest::Approx((100.0 + 1.0 / 6.0) * 7.8125).epsilon(1e-12));
}

TEST_CASE("parabolic offset is clamped to half a bin") {
    // Degenerate shoulder shapes cannot push the estimate past the bin edge.
    const auto peak = detect_peak(spike_spectrum(100, 1999.0, 2000.0, 1999.9));
    REQUIRE(peak.has_value());
    CHECK(peak->delta <= 0.5);
    CHECK(peak->delta >= -0.5);
    // A tied neighbor puts the estimate exactly on the bin edge.
    const auto tied = detect_peak(spike_spectrum(100, 1000.0, 2000.0, 2000.0));
    REQUIRE(tied.has_value());
    CHECK(tied->delta == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("tracker holds through misses and goes SILENT on the third") {
    FreqTracker tracker(3);
    const Peak peak{440.0, 1000.0, 56, 0.32};
    CHECK(tracker.update(peak) == 440.0);
    CHECK(tracker.update(std::nullopt) == 440.0);  // miss 1: hold
    CHECK(tracker.update(std::nullopt) == 440.0);  // miss 2: hold
    CHECK_FALSE(tracker.update(std::nullopt).has_value());  // miss 3: SILENT
}

TEST_CASE("tracker output is constant for constant peaks") {
    FreqTracker tracker;
    const Peak peak{523.25, 900.0, 67, -0.02};
    for (int i = 0; i < 10; ++i) CHECK(tracker.update(peak) == 523.25);
}

TEST_CASE("a valid peak resets the miss counter") {
    FreqTracker tracker(3);
    const Peak peak{330.0, 500.0, 42, 0.0};
    tracker.update(peak);
    tracker.update(std::nullopt);
    tracker.update(std::nullopt);
    CHECK(tracker.update(peak) == 330.0);
    CHECK(tracker.update(std::nullopt) == 330.0);  // counter restarted
}

TEST_CASE("every bin in [20, 2000) belongs to exactly one band") {
    const EffectiveBands bands = effective_bands(2000.0);
    for (int k = 0; k < 256; ++k) {
        const double f = k * kBinHz;
        int owners = 0;
        for (int b = 0; b < kBandCount9; ++b)
            if (f >= bands.low[static_cast<std::size_t>(b)] &&
                f < bands.high[static_cast<std::size_t>(b)])
                ++owners;
        if (f >= 20.0 && f < 2000.0)
            CHECK(owners == 1);
        else if (f < 20.0)
            CHECK(owners == 0);
    }
}

TEST_CASE("treble band falls back below Nyquist at 4 kHz") {
    const EffectiveBands bands = effective_bands(2000.0);
    CHECK(bands.low[8] == 1920.0);
    CHECK(bands.high[7] == 1920.0);
    // At a rate where 2400 Hz is observable the nominal edge is kept.
    const EffectiveBands wide = effective_bands(4000.0);
    CHECK(wide.low[8] == 2400.0);
}

TEST_CASE("a 40 Hz sine concentrates energy in the sub-bass band") {
    const auto mags = fft_magnitudes(hamming_window(tone_frame(40.0, 511.0)));
    const auto raw = band_energies_raw(mags, effective_bands(2000.0));
    for (int b = 1; b < kBandCount9; ++b)
        CHECK(raw[0] > raw[static_cast<std::size_t>(b)]);
}

TEST_CASE("band smoother follows the IIR closed form") {
    BandSmoother smoother(0.30);
    std::array<double, kBandCount9> raw{};
    raw.fill(10.0);
    CHECK(smoother.update(raw)[0] == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(smoother.update(raw)[0] == doctest::Approx(5.1).epsilon(1e-12));
    CHECK(smoother.update(raw)[0] == doctest::Approx(6.57).epsilon(1e-12));
    for (int i = 0; i < 200; ++i) smoother.update(raw);
    CHECK(smoother.value()[0] == doctest::Approx(10.0).epsilon(1e-9));
}

TEST_CASE("zero input from zero state stays at zero") {
    BandSmoother smoother(0.30);
    std::array<double, kBandCount9> raw{};
    const auto& out = smoother.update(raw);
    for (double v : out) CHECK(v == 0.0);
}

TEST_CASE("smoothed bands never move more than 30% of the raw step") {
    BandSmoother smoother(0.30);
    std::mt19937 rng(31);
    std::uniform_real_distribution<double> dist(0.0, 1000.0);
    std::array<double, kBandCount9> prev{};
    for (int frame = 0; frame < 100; ++frame) {
        std::array<double, kBandCount9> raw{};
        for (double& v : raw) v = dist(rng);
        prev = smoother.value();
        const auto& out = smoother.update(raw);
        for (int b = 0; b < kBandCount9; ++b) {
            auto i = static_cast<std::size_t>(b);
            CHECK(std::fabs(out[i] - prev[i]) <= 0.30 * std::fabs(raw[i] - prev[i]) + 1e-9);
        }
    }
}

TEST_CASE("compute_rms basics") {
    CHECK(compute_rms(std::vector<double>(512, 0.0)) == 0.0);
    CHECK(compute_rms(std::vector<double>(512, 50.0)) == doctest::Approx(50.0).epsilon(1e-12));
    std::vector<double> square(512);
    for (int i = 0; i < 512; ++i) square[static_cast<std::size_t>(i)] = i % 2 == 0 ? 511.0 : -511.0;
    CHECK(compute_rms(square) == doctest::Approx(511.0).epsilon(1e-12));
}

TEST_CASE("onset detector stays quiet on stationary and decaying input") {
    OnsetDetector detector;
    const auto steady = flat_spectrum(100.0);
    for (int i = 0; i < 50; ++i) CHECK(detector.update(steady) == 0.0);

    OnsetDetector decay_detector;
    for (int i = 0; i < 50; ++i) {
        const auto frame = flat_spectrum(1000.0 / (i + 1));  // monotone decay
        if (i >= 25) CHECK(decay_detector.update(frame) == 0.0);
        else decay_detector.update(frame);
    }
}

TEST_CASE("onset detector fires on spaced magnitude bursts") {
    OnsetDetector detector;
    int onsets = 0;
    std::vector<int> onset_frames;
    for (int frame = 0; frame < 150; ++frame) {
        const bool click = frame % 13 == 0;
        const double strength = detector.update(flat_spectrum(click ? 80.0 : 2.0));
        if (strength > 0.0) {
            ++onsets;
            onset_frames.push_back(frame);
        }
    }
    CHECK(onsets >= 8);  // every click after the 25-frame warm-up
    for (int f : onset_frames) CHECK(f % 13 == 0);
}

TEST_CASE("analyzer keeps a sustained 440 Hz tone stable across frames") {
    SpectralAnalyzer analyzer;
    const PcmClip tone = synth_tone(440.0, 1.0, 0.8, 4000.0);
    std::vector<double> detected;
    for (int frame = 0; frame < 10; ++frame) {
        std::vector<double> window(512);
        for (int i = 0; i < 512; ++i)
            window[static_cast<std::size_t>(i)] =
                511.0 * tone.samples[static_cast<std::size_t>(frame * kAnalysisHop + i)];
        const SpectralFrame out = analyzer.analyze(window);
        REQUIRE(out.freq_hz.has_value());  // zero flicker to SILENT
        detected.push_back(*out.freq_hz);
    }
    for (double f : detected) CHECK(f == doctest::Approx(440.0).epsilon(0.005));
}
