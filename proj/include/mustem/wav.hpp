#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "mustem/audio.hpp"

namespace mustem {

namespace detail {

inline std::uint32_t read_u32(const unsigned char* p) {
    return static_cast<std::uint32_t>(p[0]) | static_cast<std::uint32_t>(p[1]) << 8 |
           static_cast<std::uint32_t>(p[2]) << 16 | static_cast<std::uint32_t>(p[3]) << 24;
}

inline std::uint16_t read_u16(const unsigned char* p) {
    return static_cast<std::uint16_t>(p[0] | p[1] << 8);
}

inline bool tag_is(const unsigned char* p, const char* tag) { return std::memcmp(p, tag, 4) == 0; }

}  // namespace detail

/// Load a RIFF/WAVE file: PCM 16-bit or IEEE float 32-bit, mono or stereo.
/// Stereo is downmixed to mono by averaging; samples end up in [-1, 1].
inline PcmClip load_wav(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("load_wav: cannot open " + path);
    std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                     std::istreambuf_iterator<char>());
    if (bytes.size() < 44 || !detail::tag_is(bytes.data(), "RIFF") ||
        !detail::tag_is(bytes.data() + 8, "WAVE"))
        throw std::runtime_error("load_wav: " + path + " is not a RIFF/WAVE file");

    std::uint16_t format = 0, channels = 0, bits = 0;
    std::uint32_t rate = 0;
    const unsigned char* data = nullptr;
    std::size_t data_len = 0;

    std::size_t pos = 12;
    while (pos + 8 <= bytes.size()) {
        const unsigned char* hdr = bytes.data() + pos;
        const std::uint32_t chunk_len = detail::read_u32(hdr + 4);
        const unsigned char* body = hdr + 8;
        if (pos + 8 + chunk_len > bytes.size())
            throw std::runtime_error("load_wav: truncated chunk in " + path);
        if (detail::tag_is(hdr, "fmt ")) {
            if (chunk_len < 16) throw std::runtime_error("load_wav: malformed fmt chunk");
            format = detail::read_u16(body);
            channels = detail::read_u16(body + 2);
            rate = detail::read_u32(body + 4);
            bits = detail::read_u16(body + 14);
        } else if (detail::tag_is(hdr, "data")) {
            data = body;
            data_len = chunk_len;
        }
        pos += 8 + chunk_len + (chunk_len & 1);  // chunks are word-aligned
    }

    if (rate == 0 || channels == 0) throw std::runtime_error("load_wav: missing fmt chunk");
    if (data == nullptr) throw std::runtime_error("load_wav: missing data chunk");
    if (channels > 2) throw std::runtime_error("load_wav: more than 2 channels unsupported");
    const bool pcm16 = format == 1 && bits == 16;
    const bool f32 = format == 3 && bits == 32;
    if (!pcm16 && !f32)
        throw std::runtime_error("load_wav: unsupported codec (need PCM16 or float32), format=" +
                                 std::to_string(format) + " bits=" + std::to_string(bits));

    const std::size_t bytes_per = bits / 8u;
    const std::size_t frames = data_len / (bytes_per * channels);
    PcmClip clip;
    clip.rate = static_cast<double>(rate);
    clip.samples.resize(frames);
    for (std::size_t f = 0; f < frames; ++f) {
        double acc = 0.0;
        for (std::uint16_t c = 0; c < channels; ++c) {
            const unsigned char* s = data + (f * channels + c) * bytes_per;
            if (pcm16) {
                const auto v = static_cast<std::int16_t>(detail::read_u16(s));
                acc += static_cast<double>(v) / 32768.0;
            } else {
                float v;
                std::memcpy(&v, s, 4);
                acc += std::clamp(static_cast<double>(v), -1.0, 1.0);
            }
        }
        clip.samples[f] = acc / channels;
    }
    return clip;
}

/// Write a mono 16-bit PCM WAV (debug/fixture output). Values from a prior
/// load_wav round-trip bit-exactly.
inline void write_wav(const PcmClip& clip, const std::string& path) {
    if (clip.rate <= 0.0) throw std::invalid_argument("write_wav: clip has no rate");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("write_wav: cannot open " + path);

    const auto n = static_cast<std::uint32_t>(clip.samples.size());
    const std::uint32_t data_len = n * 2;
    const auto rate = static_cast<std::uint32_t>(std::llround(clip.rate));
    const std::uint32_t byte_rate = rate * 2;

    auto put_u32 = [&out](std::uint32_t v) {
        const char b[4] = {static_cast<char>(v), static_cast<char>(v >> 8),
                           static_cast<char>(v >> 16), static_cast<char>(v >> 24)};
        out.write(b, 4);
    };
    auto put_u16 = [&out](std::uint16_t v) {
        const char b[2] = {static_cast<char>(v), static_cast<char>(v >> 8)};
        out.write(b, 2);
    };

    out.write("RIFF", 4);
    put_u32(36 + data_len);
    out.write("WAVE", 4);
    out.write("fmt ", 4);
    put_u32(16);
    put_u16(1);  // PCM
    put_u16(1);  // mono
    put_u32(rate);
    put_u32(byte_rate);
    put_u16(2);   // block align
    put_u16(16);  // bits
    out.write("data", 4);
    put_u32(data_len);
    for (double x : clip.samples) {
        const auto v = static_cast<std::int16_t>(
            std::clamp<long>(std::lround(x * 32768.0), -32768L, 32767L));
        put_u16(static_cast<std::uint16_t>(v));
    }
    if (!out) throw std::runtime_error("write_wav: write failed for " + path);
}

}  // namespace mustem
