#include <cmath>
#include <cstring>

#include <doctest.h>

#include "helpers.hpp"
#include "tala/audio.hpp"
#include "tala/errors.hpp"

using namespace tala;
using testutil::temp_path;
using testutil::WavBuilder;

TEST_CASE("save/load round trip preserves rate, duration and samples") {
    AudioClip src = testutil::sine_clip(100.0, 2.0, 44100, 0.8);
    const std::string path = temp_path("roundtrip.wav");
    save_wav(path, src);
    AudioClip got = load_clip(path);
    CHECK(got.sample_rate_hz == 44100);
    CHECK(got.samples.size() == src.samples.size());
    CHECK(got.duration_s() == doctest::Approx(2.0));
    for (size_t i = 0; i < src.samples.size(); i += 97)
        CHECK(std::abs(got.samples[i] - src.samples[i]) <= 1.5 / 32768.0);
}

TEST_CASE("all-zero file decodes to zeros") {
    AudioClip zeros;
    zeros.sample_rate_hz = 44100;
    zeros.samples.assign(44100, 0.0);
    const std::string path = temp_path("zeros.wav");
    save_wav(path, zeros);
    AudioClip got = load_clip(path);
    for (double s : got.samples) CHECK(s == 0.0);
}

TEST_CASE("stereo channels x and -x average to silence") {
    std::vector<unsigned char> data;
    WavBuilder wb;
    for (int i = 0; i < 1000; ++i) {
        const int16_t v = static_cast<int16_t>(8000 * std::sin(0.01 * i));
        const int16_t nv = static_cast<int16_t>(-v);
        data.push_back(v & 0xFF);
        data.push_back((v >> 8) & 0xFF);
        data.push_back(nv & 0xFF);
        data.push_back((nv >> 8) & 0xFF);
    }
    wb.build(1, 2, 44100, 16, data);
    const std::string path = temp_path("stereo_cancel.wav");
    wb.write(path);
    AudioClip got = load_clip(path);
    CHECK(got.samples.size() == 1000);
    for (double s : got.samples) CHECK(s == 0.0);
}

TEST_CASE("8-bit and 24-bit PCM and 32-bit float decode") {
    {
        WavBuilder wb;
        wb.build(1, 1, 8000, 8, {128, 255, 0, 128});
        const std::string p = temp_path("pcm8.wav");
        wb.write(p);
        AudioClip c = load_clip(p);
        REQUIRE(c.samples.size() == 4);
        CHECK(c.samples[0] == doctest::Approx(0.0));
        CHECK(c.samples[1] == doctest::Approx(127.0 / 128.0));
        CHECK(c.samples[2] == doctest::Approx(-1.0));
    }
    {
        WavBuilder wb;
        // 0x400000 = +0.5, 0xC00000 = -0.5 in signed 24 bit
        wb.build(1, 1, 8000, 24, {0x00, 0x00, 0x40, 0x00, 0x00, 0xC0});
        const std::string p = temp_path("pcm24.wav");
        wb.write(p);
        AudioClip c = load_clip(p);
        REQUIRE(c.samples.size() == 2);
        CHECK(c.samples[0] == doctest::Approx(0.5));
        CHECK(c.samples[1] == doctest::Approx(-0.5));
    }
    {
        WavBuilder wb;
        std::vector<unsigned char> data(12);
        const float vals[3] = {0.25f, -0.75f, std::nanf("")};
        std::memcpy(data.data(), vals, 12);
        wb.build(3, 1, 8000, 32, data);
        const std::string p = temp_path("f32.wav");
        wb.write(p);
        AudioClip c = load_clip(p);
        REQUIRE(c.samples.size() == 3);
        CHECK(c.samples[0] == doctest::Approx(0.25));
        CHECK(c.samples[1] == doctest::Approx(-0.75));
        CHECK(c.samples[2] == 0.0);  // NaN sanitized
        for (double s : c.samples) CHECK(std::isfinite(s));
    }
}

TEST_CASE("unreadable and unsupported files raise") {
    CHECK_THROWS_AS(load_clip(temp_path("no_such_file.wav")), UnreadableFile);

    const std::string junk = temp_path("junk.wav");
    {
        std::ofstream f(junk, std::ios::binary);
        f << "this is not a wav file at all, just text padding to 60 bytes....";
    }
    CHECK_THROWS_AS(load_clip(junk), UnreadableFile);

    WavBuilder wb;
    wb.build(85, 1, 44100, 16, std::vector<unsigned char>(64, 0));  // MP3 format tag
    const std::string comp = temp_path("compressed.wav");
    wb.write(comp);
    CHECK_THROWS_AS(load_clip(comp), UnsupportedEncoding);
}

TEST_CASE("resample identity is bitwise") {
    AudioClip c = testutil::sine_clip(100.0, 1.0, 44100);
    AudioClip r = resample(c, 44100);
    CHECK(r.samples == c.samples);
}

TEST_CASE("resampling a constant stays constant") {
    AudioClip c;
    c.sample_rate_hz = 22050;
    c.samples.assign(22050, 0.5);
    AudioClip r = resample(c, 44100);
    CHECK(r.sample_rate_hz == 44100);
    for (double s : r.samples) CHECK(s == doctest::Approx(0.5));
}

TEST_CASE("100 Hz sinusoid resamples within 1e-3 of the ideal") {
    AudioClip c = testutil::sine_clip(100.0, 1.0, 48000);
    AudioClip r = resample(c, 44100);
    CHECK(std::abs(r.duration_s() - 1.0) <= 1.0 / 44100.0);
    double worst = 0.0;
    for (size_t i = 0; i + 1 < r.samples.size(); ++i) {
        const double ideal = std::sin(2.0 * std::numbers::pi * 100.0 * i / 44100.0);
        worst = std::max(worst, std::abs(r.samples[i] - ideal));
    }
    CHECK(worst < 1e-3);
}

TEST_CASE("round-trip resampling preserves duration within 2 sample periods") {
    AudioClip c = testutil::sine_clip(100.0, 1.3, 44100);
    AudioClip back = resample(resample(c, 32000), 44100);
    CHECK(std::abs(back.duration_s() - c.duration_s()) <= 2.0 / 44100.0);
}
