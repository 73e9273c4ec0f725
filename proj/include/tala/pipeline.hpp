#pragma once

#include <chrono>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "tala/audio.hpp"
#include "tala/cooccurrence.hpp"
#include "tala/envelope.hpp"
#include "tala/errors.hpp"
#include "tala/filterbank.hpp"
#include "tala/stroke.hpp"
#include "tala/tala_grammar.hpp"
#include "tala/tempo.hpp"

namespace tala {

inline constexpr int kReportSchemaVersion = 1;
inline constexpr double kMinAnalyzableDurationS = 5.0;

struct DetectConfig {
    double d_f = kDefaultPeakContrast;     // peak contrast factor
    double window_s = kRefineWindowS;      // refinement window
    double band_low_hz = kBayanBandLowHz;
    double band_high_hz = kBayanBandHighHz;
    double epsilon_s = kPulseAlignEpsilonS;
    double peak_floor = 0.05;              // full-band peaks below peak_floor*l_max are noise
    std::vector<Theka> thekas = builtin_thekas();
};

struct StageTiming {
    std::string stage;
    double elapsed_ms = 0.0;
};

struct AnalysisReport {
    std::string input_path;
    double clip_duration_s = 0.0;
    TalaDetection detection;
    TempoEstimate tempo;
    double matra_bpm = 0.0;
    CooccurrenceMatrix matrix;
    DominantPattern dominant;
    std::vector<double> bayan_stroke_times_s;
    std::vector<double> peak_times_s;
    std::vector<int> pulse_counts;
    std::vector<std::string> warnings;
    std::vector<StageTiming> timings;
    std::string error;  // empty on success; detection is NONE when set
};

namespace detail {

class StageClock {
  public:
    explicit StageClock(std::vector<StageTiming>& sink) : sink_(sink) {}
    template <typename F>
    auto run(const std::string& stage, F&& f) {
        const auto t0 = std::chrono::steady_clock::now();
        auto result = f();
        const auto t1 = std::chrono::steady_clock::now();
        sink_.push_back({stage, std::chrono::duration<double, std::milli>(t1 - t0).count()});
        return result;
    }

  private:
    std::vector<StageTiming>& sink_;
};

}  // namespace detail

// Full detection chain. Stage failures degrade to a NONE detection with the
// error recorded; the function never throws.
inline AnalysisReport detect(const AudioClip& input, const DetectConfig& config = {}) {
    AnalysisReport report;
    report.clip_duration_s = input.duration_s();
    detail::StageClock clock(report.timings);

    try {
        if (input.duration_s() < kMinAnalyzableDurationS)
            throw ClipTooShort("clip shorter than 5 s cannot hold three bayan strokes");

        const AudioClip clip = clock.run("canonicalize", [&] {
            return resample(input, kCanonicalRateHz);
        });
        const AudioClip band = clock.run("extract_bayan_band", [&] {
            return extract_bayan_band(clip, config.band_low_hz, config.band_high_hz);
        });
        const Envelope band_env = clock.run("envelope_band", [&] {
            return compute_envelope(band);
        });
        const Envelope full_env = clock.run("envelope_full", [&] {
            return compute_envelope(clip);
        });
        PeakSignal band_peaks = clock.run("peaks_band", [&] {
            return pick_peaks(band_env, config.d_f);
        });
        PeakSignal full_peaks = clock.run("peaks_full", [&] {
            return pick_peaks(full_env, config.d_f);
        });

        // Gate the full-band peak signal against the noise sea: a genuine
        // stroke peak sits far above peak_floor of the loudest peak.
        if (config.peak_floor > 0.0 && full_peaks.l_max > 0.0) {
            const double floor = config.peak_floor * full_peaks.l_max;
            std::erase_if(full_peaks.peaks,
                          [&](const EnvelopePeak& p) { return p.amplitude < floor; });
        }

        BayanStrokeSignal bayan = clock.run("threshold_bayan", [&] {
            return threshold_bayan_peaks(band_peaks);
        });
        bayan = clock.run("refine_bayan", [&] { return refine(bayan, config.window_s); });
        full_peaks = clock.run("refine_peaks", [&] {
            return refine(full_peaks, config.window_s);
        });
        if (bayan.fallback_used)
            report.warnings.push_back("bayan threshold fallback: fewer than 3 strokes above mu+sigma");

        const PulseCountSeries series = clock.run("count_pulses", [&] {
            return count_pulses(full_peaks, bayan, config.epsilon_s);
        });
        if (series.clamped)
            report.warnings.push_back("pulse counts clamped to [1,16]");

        report.matrix = clock.run("build_matrix", [&] { return build_matrix(series); });
        report.dominant = clock.run("dominant_pattern", [&] {
            return dominant_pattern(report.matrix);
        });

        const std::vector<PulsePattern> grammars = build_grammars(config.thekas);
        report.detection = clock.run("classify", [&] {
            return classify(report.dominant, grammars, &report.matrix);
        });

        report.tempo = clock.run("estimate_tempo", [&] {
            return estimate_tempo(bayan, series, report.dominant);
        });
        if (!report.detection.is_none()) {
            if (const Theka* t = find_theka(config.thekas, report.detection.tala_name))
                report.matra_bpm = report.tempo.bpm *
                                   static_cast<double>(t->matras_per_avart) /
                                   static_cast<double>(t->pulses_per_avart);
        }

        for (const EnvelopePeak& s : bayan.strokes) report.bayan_stroke_times_s.push_back(s.time_s);
        for (const EnvelopePeak& p : full_peaks.peaks) report.peak_times_s.push_back(p.time_s);
        report.pulse_counts = series.counts;
    } catch (const Error& e) {
        report.detection = TalaDetection{};
        report.error = e.what();
    } catch (const std::exception& e) {
        report.detection = TalaDetection{};
        report.error = e.what();
    }
    return report;
}

// --- JSON serialization -----------------------------------------------------

inline void to_json(nlohmann::json& j, const TalaDetection::Candidate& c) {
    j = {{"tala", c.tala_name},
         {"pair", {c.matched_pair.first, c.matched_pair.second}},
         {"basic", c.basic},
         {"exact", c.exact}};
}

inline void from_json(const nlohmann::json& j, TalaDetection::Candidate& c) {
    c.tala_name = j.at("tala").get<std::string>();
    c.matched_pair = {j.at("pair")[0].get<int>(), j.at("pair")[1].get<int>()};
    c.basic = j.at("basic").get<bool>();
    c.exact = j.at("exact").get<bool>();
}

inline void to_json(nlohmann::json& j, const TalaDetection& d) {
    j = {{"tala", d.tala_name},
         {"matched_pair", {d.matched_pair.first, d.matched_pair.second}},
         {"exact", d.exact},
         {"candidates", d.candidates}};
}

inline void from_json(const nlohmann::json& j, TalaDetection& d) {
    d.tala_name = j.at("tala").get<std::string>();
    d.matched_pair = {j.at("matched_pair")[0].get<int>(), j.at("matched_pair")[1].get<int>()};
    d.exact = j.at("exact").get<bool>();
    d.candidates = j.at("candidates").get<std::vector<TalaDetection::Candidate>>();
}

inline void to_json(nlohmann::json& j, const TempoEstimate& t) {
    j = {{"bpm", t.bpm},
         {"bayan_dur_s", t.bayan_dur_s},
         {"count_pulse", t.count_pulse},
         {"pulse_dur_s", t.pulse_dur_s},
         {"n", t.n}};
}

inline void from_json(const nlohmann::json& j, TempoEstimate& t) {
    t.bpm = j.at("bpm").get<double>();
    t.bayan_dur_s = j.at("bayan_dur_s").get<double>();
    t.count_pulse = j.at("count_pulse").get<int>();
    t.pulse_dur_s = j.at("pulse_dur_s").get<double>();
    t.n = j.at("n").get<int>();
}

inline void to_json(nlohmann::json& j, const CooccurrenceMatrix& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (int r = 1; r <= kMaxPulseCount; ++r) {
        nlohmann::json row = nlohmann::json::array();
        for (int c = 1; c <= kMaxPulseCount; ++c) row.push_back(m.at(r, c));
        rows.push_back(row);
    }
    j = {{"total", m.total}, {"cells", rows}};
}

inline void from_json(const nlohmann::json& j, CooccurrenceMatrix& m) {
    m = CooccurrenceMatrix{};
    m.total = j.at("total").get<int>();
    const auto& rows = j.at("cells");
    for (int r = 0; r < kMaxPulseCount; ++r)
        for (int c = 0; c < kMaxPulseCount; ++c) m.cells[r][c] = rows[r][c].get<int>();
}

inline void to_json(nlohmann::json& j, const DominantPattern& d) {
    j = {{"pcmax_1", d.pcmax_1}, {"pcmax_2", d.pcmax_2}, {"occurrences", d.occurrences}};
}

inline void from_json(const nlohmann::json& j, DominantPattern& d) {
    d.pcmax_1 = j.at("pcmax_1").get<int>();
    d.pcmax_2 = j.at("pcmax_2").get<int>();
    d.occurrences = j.at("occurrences").get<int>();
}

inline void to_json(nlohmann::json& j, const StageTiming& t) {
    j = {{"stage", t.stage}, {"elapsed_ms", t.elapsed_ms}};
}

inline void from_json(const nlohmann::json& j, StageTiming& t) {
    t.stage = j.at("stage").get<std::string>();
    t.elapsed_ms = j.at("elapsed_ms").get<double>();
}

inline void to_json(nlohmann::json& j, const AnalysisReport& r) {
    j = {{"schema_version", kReportSchemaVersion},
         {"input_path", r.input_path},
         {"clip_duration_s", r.clip_duration_s},
         {"detection", r.detection},
         {"tempo", r.tempo},
         {"matra_bpm", r.matra_bpm},
         {"matrix", r.matrix},
         {"dominant", r.dominant},
         {"bayan_stroke_times_s", r.bayan_stroke_times_s},
         {"peak_times_s", r.peak_times_s},
         {"pulse_counts", r.pulse_counts},
         {"warnings", r.warnings},
         {"timings", r.timings},
         {"error", r.error}};
}

inline void from_json(const nlohmann::json& j, AnalysisReport& r) {
    if (j.at("schema_version").get<int>() != kReportSchemaVersion)
        throw InvalidSpec("unsupported report schema version");
    r.input_path = j.at("input_path").get<std::string>();
    r.clip_duration_s = j.at("clip_duration_s").get<double>();
    r.detection = j.at("detection").get<TalaDetection>();
    r.tempo = j.at("tempo").get<TempoEstimate>();
    r.matra_bpm = j.at("matra_bpm").get<double>();
    r.matrix = j.at("matrix").get<CooccurrenceMatrix>();
    r.dominant = j.at("dominant").get<DominantPattern>();
    r.bayan_stroke_times_s = j.at("bayan_stroke_times_s").get<std::vector<double>>();
    r.peak_times_s = j.at("peak_times_s").get<std::vector<double>>();
    r.pulse_counts = j.at("pulse_counts").get<std::vector<int>>();
    r.warnings = j.at("warnings").get<std::vector<std::string>>();
    r.timings = j.at("timings").get<std::vector<StageTiming>>();
    r.error = j.at("error").get<std::string>();
}

}  // namespace tala
