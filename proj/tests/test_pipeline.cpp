#include <cmath>

#include <doctest.h>
#include <json.hpp>

#include "tala/pipeline.hpp"
#include "tala/synth.hpp"

using namespace tala;

namespace {

AnalysisReport detect_synth(const std::string& tala_name, double bpm, int avarts,
                            unsigned long long seed = 1) {
    SynthSpec spec;
    spec.theka = *find_theka(builtin_thekas(), tala_name);
    spec.tempo_bpm = bpm;
    spec.n_avarts = avarts;
    spec.seed = seed;
    auto [clip, gt] = synthesize(spec);
    return detect(clip);
}

}  // namespace

TEST_CASE("clean dadra clip detects exactly with tempo inside 1%") {
    AnalysisReport r = detect_synth("dadra", 240.0, 20);
    CHECK(r.error.empty());
    CHECK(r.detection.tala_name == "dadra");
    CHECK(r.detection.exact);
    CHECK(std::abs(r.tempo.bpm - 240.0) / 240.0 <= 0.01);
    CHECK(r.matra_bpm == doctest::Approx(r.tempo.bpm));  // dadra: 1 pulse per matra
    CHECK(!r.timings.empty());
}

TEST_CASE("clean rupak clip lands on the 4-10 pattern") {
    AnalysisReport r = detect_synth("rupak", 300.0, 12);
    CHECK(r.detection.tala_name == "rupak");
    const std::pair<int, int> dom{r.dominant.pcmax_1, r.dominant.pcmax_2};
    const bool ok = dom == std::pair<int, int>{4, 10} || dom == std::pair<int, int>{10, 4};
    CHECK(ok);
    // rupak pulses are half-matras
    CHECK(r.matra_bpm == doctest::Approx(r.tempo.bpm * 0.5));
}

TEST_CASE("silence degrades to a none detection, not a crash") {
    AudioClip silence;
    silence.sample_rate_hz = 44100;
    silence.samples.assign(60 * 44100, 0.0);
    AnalysisReport r = detect(silence);
    CHECK(r.detection.is_none());
    CHECK(!r.error.empty());
}

TEST_CASE("too-short clips degrade to none") {
    AudioClip blip;
    blip.sample_rate_hz = 44100;
    blip.samples.assign(2 * 44100, 0.1);
    AnalysisReport r = detect(blip);
    CHECK(r.detection.is_none());
    CHECK(!r.error.empty());
}

TEST_CASE("detect is deterministic") {
    SynthSpec spec;
    spec.theka = *find_theka(builtin_thekas(), "kaharba");
    spec.tempo_bpm = 300.0;
    spec.n_avarts = 12;
    spec.timing_jitter_s = 0.01;
    spec.noise_floor = 0.05;
    spec.seed = 5;
    auto [clip, gt] = synthesize(spec);
    const nlohmann::json a = detect(clip);
    const nlohmann::json b = detect(clip);
    // Stage timings vary run to run; everything else must not.
    auto strip = [](nlohmann::json j) {
        j.erase("timings");
        return j;
    };
    CHECK(strip(a) == strip(b));
}

TEST_CASE("non-canonical input rates are resampled, not rejected") {
    SynthSpec spec;
    spec.theka = *find_theka(builtin_thekas(), "dadra");
    spec.tempo_bpm = 240.0;
    spec.n_avarts = 16;
    auto [clip, gt] = synthesize(spec);
    AudioClip odd = resample(clip, 22050);
    AnalysisReport r = detect(odd);
    CHECK(r.detection.tala_name == "dadra");
    CHECK(std::abs(r.tempo.bpm - 240.0) / 240.0 <= 0.01);
}

TEST_CASE("report JSON round trip is lossless") {
    AnalysisReport r = detect_synth("bhajani", 320.0, 10);
    r.input_path = "clip.wav";
    const nlohmann::json j1 = r;
    AnalysisReport back = j1.get<AnalysisReport>();
    const nlohmann::json j2 = back;
    CHECK(j1 == j2);
    CHECK(j1.at("schema_version") == kReportSchemaVersion);
}

TEST_CASE("stage timings cover the full chain on success") {
    AnalysisReport r = detect_synth("kaharba", 300.0, 10);
    REQUIRE(r.error.empty());
    std::vector<std::string> stages;
    for (const auto& t : r.timings) stages.push_back(t.stage);
    for (const char* s : {"canonicalize", "extract_bayan_band", "envelope_band",
                          "envelope_full", "peaks_band", "peaks_full", "threshold_bayan",
                          "count_pulses", "build_matrix", "dominant_pattern", "classify",
                          "estimate_tempo"})
        CHECK(std::find(stages.begin(), stages.end(), s) != stages.end());
}
