#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace mustem {

inline constexpr int kFftSize = 512;
inline constexpr int kSpectrumBins = kFftSize / 2;  // bins 0..255

/// Hamming window for the analysis frame: w[n] = 0.54 - 0.46*cos(2*pi*n/511).
inline std::vector<double> hamming_window(const std::vector<double>& frame) {
    if (frame.size() != kFftSize)
        throw std::invalid_argument("hamming_window: frame must have exactly 512 samples");
    std::vector<double> out(kFftSize);
    for (int n = 0; n < kFftSize; ++n) {
        const double w =
            0.54 - 0.46 * std::cos(2.0 * std::numbers::pi * n / static_cast<double>(kFftSize - 1));
        out[static_cast<std::size_t>(n)] = frame[static_cast<std::size_t>(n)] * w;
    }
    return out;
}

/// In-place iterative radix-2 Cooley-Tukey transform. Size must be a power
/// of two.
inline void fft_inplace(std::vector<std::complex<double>>& a) {
    const std::size_t n = a.size();
    if (n == 0 || (n & (n - 1)) != 0) throw std::invalid_argument("fft: size must be a power of 2");

    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }

    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = -2.0 * std::numbers::pi / static_cast<double>(len);
        for (std::size_t i = 0; i < n; i += len) {
            for (std::size_t k = 0; k < len / 2; ++k) {
                const auto w = std::polar(1.0, ang * static_cast<double>(k));
                const auto u = a[i + k];
                const auto v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
            }
        }
    }
}

/// Magnitudes of bins 0..255 of the 512-point transform of a windowed frame.
inline std::vector<double> fft_magnitudes(const std::vector<double>& windowed) {
    if (windowed.size() != kFftSize)
        throw std::invalid_argument("fft_magnitudes: frame must have exactly 512 samples");
    std::vector<std::complex<double>> a(windowed.begin(), windowed.end());
    fft_inplace(a);
    std::vector<double> mags(kSpectrumBins);
    for (int k = 0; k < kSpectrumBins; ++k) mags[static_cast<std::size_t>(k)] = std::abs(a[static_cast<std::size_t>(k)]);
    return mags;
}

}  // namespace mustem
