#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "tala/errors.hpp"
#include "tala/pipeline.hpp"

namespace tala {

inline constexpr double kTempoToleranceFrac = 0.05;

struct AnnotationRecord {
    std::string path;
    std::string tala_name;
    double tempo_bpm = 0.0;
};

struct EvalResult {
    AnnotationRecord truth;
    AnalysisReport report;
    bool tala_correct = false;
    bool tala_top2 = false;  // truth within the top two ranked candidates
    bool tempo_correct = false;
};

struct EvalSummary {
    // rows = truth tala, cols = predicted tala or "none"; percentages per row
    std::vector<std::string> truth_labels;
    std::vector<std::string> predicted_labels;
    std::map<std::string, std::map<std::string, double>> confusion_pct;
    std::map<std::string, int> clips_per_tala;
    std::map<std::string, double> tala_accuracy_pct;
    std::map<std::string, double> tala_top2_pct;
    std::map<std::string, double> tempo_accuracy_pct;
    double gross_tala_pct = 0.0;
    double gross_tempo_pct = 0.0;
    int total_clips = 0;
    std::vector<EvalResult> results;
};

// Manifest CSV: header `path,tala,tempo_bpm`, one record per line. Paths may
// not contain commas; nothing in the corpus needs quoting.
inline std::vector<AnnotationRecord> load_manifest(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw UnreadableFile("cannot open manifest '" + path + "'");
    std::string line;
    if (!std::getline(f, line)) throw InvalidSpec("manifest '" + path + "' is empty");
    auto strip = [](std::string s) {
        while (!s.empty() && (s.back() == '\r' || s.back() == ' ')) s.pop_back();
        size_t i = 0;
        while (i < s.size() && s[i] == ' ') ++i;
        return s.substr(i);
    };
    if (strip(line) != "path,tala,tempo_bpm")
        throw InvalidSpec("manifest '" + path + "': expected header 'path,tala,tempo_bpm'");

    std::vector<AnnotationRecord> records;
    size_t lineno = 1;
    while (std::getline(f, line)) {
        ++lineno;
        line = strip(line);
        if (line.empty()) continue;
        std::istringstream ss(line);
        AnnotationRecord rec;
        std::string bpm;
        if (!std::getline(ss, rec.path, ',') || !std::getline(ss, rec.tala_name, ',') ||
            !std::getline(ss, bpm))
            throw InvalidSpec("manifest '" + path + "': malformed line " +
                              std::to_string(lineno));
        try {
            rec.tempo_bpm = std::stod(bpm);
        } catch (const std::exception&) {
            throw InvalidSpec("manifest '" + path + "': bad tempo on line " +
                              std::to_string(lineno));
        }
        records.push_back(std::move(rec));
    }
    if (records.empty()) throw InvalidSpec("manifest '" + path + "' has no records");
    return records;
}

// Analyze every manifest entry, in parallel, preserving manifest order.
inline EvalSummary evaluate(const std::vector<AnnotationRecord>& records,
                            const DetectConfig& config = {}, int workers = 0) {
    if (records.empty()) throw InvalidSpec("no records to evaluate");
    if (workers <= 0)
        workers = std::max(1u, std::thread::hardware_concurrency());
    workers = std::min<int>(workers, static_cast<int>(records.size()));

    std::vector<EvalResult> results(records.size());
    std::atomic<size_t> next{0};
    auto worker = [&] {
        for (size_t i = next.fetch_add(1); i < records.size(); i = next.fetch_add(1)) {
            EvalResult& r = results[i];
            r.truth = records[i];
            try {
                const AudioClip clip = load_clip(records[i].path);
                r.report = detect(clip, config);
            } catch (const std::exception& e) {
                r.report.error = e.what();
            }
            r.report.input_path = records[i].path;
            r.tala_correct = r.report.detection.tala_name == r.truth.tala_name;
            const auto& cands = r.report.detection.candidates;
            for (size_t c = 0; c < cands.size() && c < 2; ++c)
                if (cands[c].tala_name == r.truth.tala_name) r.tala_top2 = true;
            if (r.truth.tempo_bpm > 0.0 && r.report.tempo.bpm > 0.0)
                r.tempo_correct = std::abs(r.report.tempo.bpm - r.truth.tempo_bpm) /
                                      r.truth.tempo_bpm <=
                                  kTempoToleranceFrac;
        }
    };
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();

    EvalSummary sum;
    sum.total_clips = static_cast<int>(results.size());
    std::map<std::string, std::map<std::string, int>> counts;
    for (const EvalResult& r : results) {
        counts[r.truth.tala_name][r.report.detection.tala_name]++;
        sum.clips_per_tala[r.truth.tala_name]++;
        if (std::find(sum.truth_labels.begin(), sum.truth_labels.end(), r.truth.tala_name) ==
            sum.truth_labels.end())
            sum.truth_labels.push_back(r.truth.tala_name);
        const std::string& pred = r.report.detection.tala_name;
        if (std::find(sum.predicted_labels.begin(), sum.predicted_labels.end(), pred) ==
            sum.predicted_labels.end())
            sum.predicted_labels.push_back(pred);
    }
    if (std::find(sum.predicted_labels.begin(), sum.predicted_labels.end(), "none") ==
        sum.predicted_labels.end())
        sum.predicted_labels.push_back("none");

    int gross_tala = 0, gross_tempo = 0;
    for (const std::string& truth : sum.truth_labels) {
        const int n = sum.clips_per_tala[truth];
        int correct = 0, top2 = 0, tempo_ok = 0;
        for (const EvalResult& r : results) {
            if (r.truth.tala_name != truth) continue;
            correct += r.tala_correct;
            top2 += r.tala_top2;
            tempo_ok += r.tempo_correct;
        }
        for (const std::string& pred : sum.predicted_labels)
            sum.confusion_pct[truth][pred] = 100.0 * counts[truth][pred] / n;
        sum.tala_accuracy_pct[truth] = 100.0 * correct / n;
        sum.tala_top2_pct[truth] = 100.0 * top2 / n;
        sum.tempo_accuracy_pct[truth] = 100.0 * tempo_ok / n;
        gross_tala += correct;
        gross_tempo += tempo_ok;
    }
    sum.gross_tala_pct = 100.0 * gross_tala / sum.total_clips;
    sum.gross_tempo_pct = 100.0 * gross_tempo / sum.total_clips;
    sum.results = std::move(results);
    return sum;
}

inline std::string render_summary(const EvalSummary& sum) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(2);
    os << "Confusion matrix (% of truth row)\n";
    os << std::setw(10) << "truth";
    for (const auto& p : sum.predicted_labels) os << std::setw(10) << p;
    os << "\n";
    for (const auto& truth : sum.truth_labels) {
        os << std::setw(10) << truth;
        for (const auto& pred : sum.predicted_labels)
            os << std::setw(10) << sum.confusion_pct.at(truth).at(pred);
        os << "\n";
    }
    os << "\nTempo accuracy (+-5%)\n";
    for (const auto& truth : sum.truth_labels)
        os << std::setw(10) << truth << std::setw(10) << sum.tempo_accuracy_pct.at(truth)
           << "  (clips: " << sum.clips_per_tala.at(truth) << ")\n";
    os << "\nGross averages\n";
    os << "  tala detection:  " << sum.gross_tala_pct << "%\n";
    os << "  tempo detection: " << sum.gross_tempo_pct << "%\n";
    return os.str();
}

inline void to_json(nlohmann::json& j, const EvalSummary& sum) {
    j = {{"schema_version", kReportSchemaVersion},
         {"total_clips", sum.total_clips},
         {"truth_labels", sum.truth_labels},
         {"predicted_labels", sum.predicted_labels},
         {"confusion_pct", sum.confusion_pct},
         {"clips_per_tala", sum.clips_per_tala},
         {"tala_accuracy_pct", sum.tala_accuracy_pct},
         {"tala_top2_pct", sum.tala_top2_pct},
         {"tempo_accuracy_pct", sum.tempo_accuracy_pct},
         {"gross_tala_pct", sum.gross_tala_pct},
         {"gross_tempo_pct", sum.gross_tempo_pct}};
}

}  // namespace tala
