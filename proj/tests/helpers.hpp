#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <string>
#include <vector>

#include "tala/audio.hpp"

namespace testutil {

inline std::string temp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / name).string();
}

inline tala::AudioClip sine_clip(double freq_hz, double duration_s, int rate_hz,
                                 double amp = 1.0) {
    tala::AudioClip c;
    c.sample_rate_hz = rate_hz;
    const size_t n = static_cast<size_t>(duration_s * rate_hz);
    c.samples.resize(n);
    for (size_t i = 0; i < n; ++i)
        c.samples[i] = amp * std::sin(2.0 * std::numbers::pi * freq_hz * i / rate_hz);
    return c;
}

inline double rms_interior(const std::vector<double>& x, int rate_hz, double skip_s = 0.1) {
    const size_t skip = static_cast<size_t>(skip_s * rate_hz);
    double acc = 0.0;
    size_t n = 0;
    for (size_t i = skip; i + skip < x.size(); ++i, ++n) acc += x[i] * x[i];
    return n ? std::sqrt(acc / n) : 0.0;
}

// Minimal hand-rolled WAV writer for crafting encodings save_wav does not emit.
struct WavBuilder {
    std::vector<unsigned char> bytes;

    void u16(uint16_t v) {
        bytes.push_back(v & 0xFF);
        bytes.push_back((v >> 8) & 0xFF);
    }
    void u32(uint32_t v) {
        for (int i = 0; i < 4; ++i) bytes.push_back((v >> (8 * i)) & 0xFF);
    }
    void tag(const char* t) {
        for (int i = 0; i < 4; ++i) bytes.push_back(static_cast<unsigned char>(t[i]));
    }

    // format: 1 = PCM, 3 = IEEE float; data supplied raw.
    void build(uint16_t format, uint16_t channels, uint32_t rate, uint16_t bits,
               const std::vector<unsigned char>& data) {
        tag("RIFF");
        u32(36 + static_cast<uint32_t>(data.size()));
        tag("WAVE");
        tag("fmt ");
        u32(16);
        u16(format);
        u16(channels);
        u32(rate);
        u32(rate * channels * bits / 8);
        u16(channels * bits / 8);
        u16(bits);
        tag("data");
        u32(static_cast<uint32_t>(data.size()));
        bytes.insert(bytes.end(), data.begin(), data.end());
    }

    void write(const std::string& path) const {
        std::ofstream f(path, std::ios::binary);
        f.write(reinterpret_cast<const char*>(bytes.data()),
                static_cast<std::streamsize>(bytes.size()));
    }
};

}  // namespace testutil
