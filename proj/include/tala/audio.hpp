#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include "tala/errors.hpp"

namespace tala {

inline constexpr int kCanonicalRateHz = 44100;

// Uniformly sampled mono waveform. Samples are kept in [-1, 1].
struct AudioClip {
    std::vector<double> samples;
    int sample_rate_hz = kCanonicalRateHz;

    double duration_s() const {
        return static_cast<double>(samples.size()) / sample_rate_hz;
    }
};

namespace detail {

inline uint32_t read_u32(const unsigned char* p) {
    return static_cast<uint32_t>(p[0]) | (static_cast<uint32_t>(p[1]) << 8) |
           (static_cast<uint32_t>(p[2]) << 16) | (static_cast<uint32_t>(p[3]) << 24);
}

inline uint16_t read_u16(const unsigned char* p) {
    return static_cast<uint16_t>(p[0] | (p[1] << 8));
}

}  // namespace detail

// Decodes a RIFF/WAV file into a mono clip. PCM integer (8/16/24 bit) and
// IEEE float (32 bit) encodings, 1 or 2 channels. Stereo is averaged.
inline AudioClip load_clip(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw UnreadableFile("cannot open '" + path + "'");
    std::vector<unsigned char> raw((std::istreambuf_iterator<char>(f)),
                                   std::istreambuf_iterator<char>());
    if (raw.size() < 44 || std::memcmp(raw.data(), "RIFF", 4) != 0 ||
        std::memcmp(raw.data() + 8, "WAVE", 4) != 0) {
        throw UnreadableFile("'" + path + "' is not a RIFF/WAVE file");
    }

    uint16_t format = 0, channels = 0, bits = 0;
    uint32_t rate = 0;
    const unsigned char* data = nullptr;
    size_t data_len = 0;

    size_t pos = 12;
    while (pos + 8 <= raw.size()) {
        const unsigned char* hdr = raw.data() + pos;
        uint32_t chunk_len = detail::read_u32(hdr + 4);
        const unsigned char* body = hdr + 8;
        if (pos + 8 + chunk_len > raw.size()) chunk_len = static_cast<uint32_t>(raw.size() - pos - 8);
        if (std::memcmp(hdr, "fmt ", 4) == 0 && chunk_len >= 16) {
            format = detail::read_u16(body);
            channels = detail::read_u16(body + 2);
            rate = detail::read_u32(body + 4);
            bits = detail::read_u16(body + 14);
            if (format == 0xFFFE && chunk_len >= 40) {
                // WAVE_FORMAT_EXTENSIBLE: first two bytes of the GUID carry the tag.
                format = detail::read_u16(body + 24);
            }
        } else if (std::memcmp(hdr, "data", 4) == 0) {
            data = body;
            data_len = chunk_len;
        }
        pos += 8 + chunk_len + (chunk_len & 1);
    }

    if (rate == 0 || channels == 0 || data == nullptr)
        throw UnreadableFile("'" + path + "': missing fmt or data chunk");
    if (channels > 2)
        throw UnsupportedEncoding("'" + path + "': more than 2 channels");
    if (format == 1) {
        if (bits != 8 && bits != 16 && bits != 24)
            throw UnsupportedEncoding("'" + path + "': unsupported PCM depth " + std::to_string(bits));
    } else if (format == 3) {
        if (bits != 32)
            throw UnsupportedEncoding("'" + path + "': unsupported float depth " + std::to_string(bits));
    } else {
        throw UnsupportedEncoding("'" + path + "': compressed WAV (format tag " +
                                  std::to_string(format) + ")");
    }

    const size_t bytes_per_sample = bits / 8;
    const size_t frame_bytes = bytes_per_sample * channels;
    const size_t n_frames = data_len / frame_bytes;

    AudioClip clip;
    clip.sample_rate_hz = static_cast<int>(rate);
    clip.samples.resize(n_frames);

    for (size_t i = 0; i < n_frames; ++i) {
        double acc = 0.0;
        for (int c = 0; c < channels; ++c) {
            const unsigned char* s = data + i * frame_bytes + c * bytes_per_sample;
            double v = 0.0;
            if (format == 3) {
                float fv;
                std::memcpy(&fv, s, 4);
                v = fv;
            } else if (bits == 16) {
                int16_t iv = static_cast<int16_t>(s[0] | (s[1] << 8));
                v = iv / 32768.0;
            } else if (bits == 8) {
                v = (static_cast<int>(s[0]) - 128) / 128.0;
            } else {  // 24 bit
                int32_t iv = static_cast<int32_t>(s[0] | (s[1] << 8) | (s[2] << 16));
                if (iv & 0x800000) iv |= ~0xFFFFFF;
                v = iv / 8388608.0;
            }
            acc += v;
        }
        double m = acc / channels;
        if (!std::isfinite(m)) m = 0.0;
        clip.samples[i] = std::clamp(m, -1.0, 1.0);
    }
    return clip;
}

// Writes a 16-bit PCM mono WAV.
inline void save_wav(const std::string& path, const AudioClip& clip) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw UnreadableFile("cannot write '" + path + "'");
    auto put_u32 = [&](uint32_t v) {
        char b[4] = {char(v & 0xFF), char((v >> 8) & 0xFF), char((v >> 16) & 0xFF), char((v >> 24) & 0xFF)};
        f.write(b, 4);
    };
    auto put_u16 = [&](uint16_t v) {
        char b[2] = {char(v & 0xFF), char((v >> 8) & 0xFF)};
        f.write(b, 2);
    };
    const uint32_t n = static_cast<uint32_t>(clip.samples.size());
    f.write("RIFF", 4);
    put_u32(36 + n * 2);
    f.write("WAVE", 4);
    f.write("fmt ", 4);
    put_u32(16);
    put_u16(1);  // PCM
    put_u16(1);  // mono
    put_u32(static_cast<uint32_t>(clip.sample_rate_hz));
    put_u32(static_cast<uint32_t>(clip.sample_rate_hz) * 2);
    put_u16(2);
    put_u16(16);
    f.write("data", 4);
    put_u32(n * 2);
    for (double s : clip.samples) {
        int v = static_cast<int>(std::lround(std::clamp(s, -1.0, 1.0) * 32767.0));
        put_u16(static_cast<uint16_t>(static_cast<int16_t>(v)));
    }
}

// Linear-interpolation resampler. Identity (bitwise) when rates match.
inline AudioClip resample(const AudioClip& clip, int target_rate_hz) {
    if (target_rate_hz <= 0) throw InvalidSpec("resample: target rate must be positive");
    if (clip.sample_rate_hz == target_rate_hz) return clip;

    AudioClip out;
    out.sample_rate_hz = target_rate_hz;
    const size_t n = clip.samples.size();
    if (n == 0) return out;

    const double ratio = static_cast<double>(clip.sample_rate_hz) / target_rate_hz;
    const size_t out_n = static_cast<size_t>(
        std::llround(static_cast<double>(n) * target_rate_hz / clip.sample_rate_hz));
    out.samples.resize(out_n);
    for (size_t i = 0; i < out_n; ++i) {
        double p = i * ratio;
        size_t k = static_cast<size_t>(p);
        if (k >= n - 1) {
            out.samples[i] = clip.samples[n - 1];
        } else {
            double frac = p - k;
            out.samples[i] = clip.samples[k] * (1.0 - frac) + clip.samples[k + 1] * frac;
        }
    }
    return out;
}

}  // namespace tala
