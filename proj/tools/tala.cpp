// tala: analyze clips, synthesize labeled corpora, run batch evaluation.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "tala/eval.hpp"
#include "tala/pipeline.hpp"
#include "tala/synth.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitIo = 2;
constexpr int kExitUsage = 64;
constexpr int kExitBadManifest = 65;

struct ConfigFlags {
    double d_f = tala::kDefaultPeakContrast;
    double window_s = tala::kRefineWindowS;
    double band_low = tala::kBayanBandLowHz;
    double band_high = tala::kBayanBandHighHz;
    std::string theka_path;
};

void add_config_flags(CLI::App* cmd, ConfigFlags& cf) {
    cmd->add_option("--d-f", cf.d_f, "peak contrast factor relative to the envelope maximum");
    cmd->add_option("--window", cf.window_s, "peak refinement window in seconds");
    cmd->add_option("--band-low", cf.band_low, "bayan band lower edge in Hz");
    cmd->add_option("--band-high", cf.band_high, "bayan band upper edge in Hz");
    cmd->add_option("--thekas", cf.theka_path,
                    "theka grammar JSON (default: built-in; TALA_THEKA_PATH overrides)");
}

tala::DetectConfig make_config(const ConfigFlags& cf) {
    tala::DetectConfig config;
    config.d_f = cf.d_f;
    config.window_s = cf.window_s;
    config.band_low_hz = cf.band_low;
    config.band_high_hz = cf.band_high;
    std::string path = cf.theka_path;
    if (path.empty())
        if (const char* env = std::getenv("TALA_THEKA_PATH")) path = env;
    if (!path.empty()) config.thekas = tala::load_thekas(path);
    return config;
}

void print_pretty(const tala::AnalysisReport& r) {
    std::cout << std::fixed << std::setprecision(2);
    std::cout << std::left << std::setw(18) << "tala" << r.detection.tala_name
              << (r.detection.exact ? " (exact)" : "") << "\n";
    std::cout << std::setw(18) << "pulse bpm" << r.tempo.bpm << "\n";
    std::cout << std::setw(18) << "matra bpm" << r.matra_bpm << "\n";
    std::cout << std::setw(18) << "dominant pair"
              << "(" << r.dominant.pcmax_1 << ", " << r.dominant.pcmax_2 << ") x"
              << r.dominant.occurrences << "\n";
    std::cout << std::setw(18) << "bayan strokes" << r.bayan_stroke_times_s.size() << "\n";
    std::cout << "matrix nonzeros:\n";
    for (int row = 1; row <= tala::kMaxPulseCount; ++row)
        for (int col = 1; col <= tala::kMaxPulseCount; ++col)
            if (r.matrix.at(row, col) > 0)
                std::cout << "  (" << row << ", " << col << ") = " << r.matrix.at(row, col)
                          << "\n";
    for (const auto& w : r.warnings) std::cout << "warning: " << w << "\n";
    if (!r.error.empty()) std::cout << "error: " << r.error << "\n";
}

int run_analyze(const std::vector<std::string>& inputs, const ConfigFlags& cf, bool pretty) {
    tala::DetectConfig config;
    try {
        config = make_config(cf);
    } catch (const std::exception& e) {
        std::cerr << "tala: " << e.what() << "\n";
        return kExitUsage;
    }
    for (const std::string& path : inputs) {
        tala::AudioClip clip;
        try {
            clip = tala::load_clip(path);
        } catch (const std::exception& e) {
            std::cerr << "tala: " << e.what() << "\n";
            return kExitIo;
        }
        tala::AnalysisReport report = tala::detect(clip, config);
        report.input_path = path;
        if (pretty) {
            if (inputs.size() > 1) std::cout << path << "\n";
            print_pretty(report);
        } else {
            std::cout << nlohmann::json(report).dump(2) << "\n";
        }
    }
    return kExitOk;
}

void write_truth(const std::string& path, const tala::GroundTruth& gt) {
    nlohmann::json j = {{"tala", gt.tala_name},
                        {"tempo_bpm", gt.tempo_bpm},
                        {"stroke_times_s", gt.stroke_times_s},
                        {"stressed_positions", gt.stressed_positions}};
    std::ofstream f(path);
    if (!f) throw tala::UnreadableFile("cannot write '" + path + "'");
    f << j.dump(2) << "\n";
}

std::string truth_path_for(const std::string& wav_path) {
    std::filesystem::path p(wav_path);
    p.replace_extension(".truth.json");
    return p.string();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"tala cycle and tempo detection for tabla-accompanied clips"};
    app.require_subcommand(1);

    // analyze
    auto* analyze = app.add_subcommand("analyze", "analyze WAV clip(s), print a JSON report");
    std::vector<std::string> inputs;
    bool pretty = false;
    ConfigFlags analyze_cf;
    analyze->add_option("inputs", inputs, "WAV files")->required();
    analyze->add_flag("--pretty", pretty, "human-readable table instead of JSON");
    add_config_flags(analyze, analyze_cf);

    // synth
    auto* synth = app.add_subcommand("synth", "synthesize labeled clips");
    std::string synth_tala = "dadra", synth_out = "out.wav", out_dir = "corpus";
    std::string bpm_range, theka_path_synth;
    double bpm = 240.0, jitter = 0.0, amp_jitter = 0.0, noise = 0.0, stress_prob = 0.0;
    int avarts = 8, corpus_n = 0;
    unsigned long long seed = 1;
    synth->add_option("--tala", synth_tala, "theka name")->required();
    synth->add_option("--bpm", bpm, "tempo in pulses per minute");
    synth->add_option("--avarts", avarts, "cycles to render");
    synth->add_option("--seed", seed, "RNG seed");
    synth->add_option("--jitter", jitter, "per-stroke timing jitter bound in seconds");
    synth->add_option("--amp-jitter", amp_jitter, "relative amplitude jitter in [0,1)");
    synth->add_option("--noise", noise, "broadband noise RMS in [0,1)");
    synth->add_option("--stress-prob", stress_prob,
                      "chance each optional bayan bol is stressed per avart");
    synth->add_option("-o,--output", synth_out, "output WAV path");
    synth->add_option("--corpus", corpus_n, "emit N randomized clips plus a manifest CSV");
    synth->add_option("--bpm-range", bpm_range, "corpus BPM range as lo:hi");
    synth->add_option("--out-dir", out_dir, "corpus output directory");
    synth->add_option("--thekas", theka_path_synth, "theka grammar JSON");

    // eval
    auto* eval = app.add_subcommand("eval", "batch evaluation against a manifest CSV");
    std::string manifest_path, json_out;
    int workers = 0;
    ConfigFlags eval_cf;
    eval->add_option("manifest", manifest_path, "CSV with header path,tala,tempo_bpm")
        ->required();
    eval->add_option("--workers", workers, "parallel workers (default: hardware threads)");
    eval->add_option("--json", json_out, "also write the summary as JSON to this path");
    add_config_flags(eval, eval_cf);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    if (analyze->parsed()) return run_analyze(inputs, analyze_cf, pretty);

    if (synth->parsed()) {
        std::vector<tala::Theka> thekas;
        try {
            std::string tp = theka_path_synth;
            if (tp.empty())
                if (const char* env = std::getenv("TALA_THEKA_PATH")) tp = env;
            thekas = tp.empty() ? tala::builtin_thekas() : tala::load_thekas(tp);
        } catch (const std::exception& e) {
            std::cerr << "tala: " << e.what() << "\n";
            return kExitUsage;
        }
        const tala::Theka* theka = tala::find_theka(thekas, synth_tala);
        if (!theka) {
            std::cerr << "tala: unknown tala '" << synth_tala << "'\n";
            return kExitUsage;
        }

        tala::SynthSpec spec;
        spec.theka = *theka;
        spec.tempo_bpm = bpm;
        spec.n_avarts = avarts;
        spec.timing_jitter_s = jitter;
        spec.amplitude_jitter = amp_jitter;
        spec.noise_floor = noise;
        spec.optional_stress_probability = stress_prob;
        spec.seed = seed;

        try {
            if (corpus_n > 0) {
                double lo = bpm, hi = bpm;
                if (!bpm_range.empty()) {
                    std::istringstream ss(bpm_range);
                    char sep = 0;
                    if (!(ss >> lo >> sep >> hi) || sep != ':' || lo <= 0 || hi < lo)
                        throw tala::InvalidSpec("--bpm-range must be lo:hi with 0 < lo <= hi");
                }
                std::filesystem::create_directories(out_dir);
                std::ofstream manifest(std::filesystem::path(out_dir) / "manifest.csv");
                manifest << "path,tala,tempo_bpm\n";
                std::mt19937_64 rng(seed);
                std::uniform_real_distribution<double> pick(lo, hi);
                for (int i = 0; i < corpus_n; ++i) {
                    tala::SynthSpec s = spec;
                    s.tempo_bpm = pick(rng);
                    s.seed = rng();
                    auto [clip, gt] = tala::synthesize(s);
                    std::ostringstream name;
                    name << synth_tala << "_" << std::setfill('0') << std::setw(3) << i
                         << ".wav";
                    const std::string wav =
                        (std::filesystem::path(out_dir) / name.str()).string();
                    tala::save_wav(wav, clip);
                    write_truth(truth_path_for(wav), gt);
                    manifest << wav << "," << gt.tala_name << "," << gt.tempo_bpm << "\n";
                }
            } else {
                auto [clip, gt] = tala::synthesize(spec);
                tala::save_wav(synth_out, clip);
                write_truth(truth_path_for(synth_out), gt);
            }
        } catch (const tala::InvalidSpec& e) {
            std::cerr << "tala: " << e.what() << "\n";
            return kExitUsage;
        } catch (const std::exception& e) {
            std::cerr << "tala: " << e.what() << "\n";
            return kExitIo;
        }
        return kExitOk;
    }

    if (eval->parsed()) {
        try {
            const tala::DetectConfig config = make_config(eval_cf);
            const auto records = tala::load_manifest(manifest_path);
            const tala::EvalSummary summary = tala::evaluate(records, config, workers);
            std::cout << tala::render_summary(summary);
            if (!json_out.empty()) {
                std::ofstream f(json_out);
                if (!f) throw tala::UnreadableFile("cannot write '" + json_out + "'");
                f << nlohmann::json(summary).dump(2) << "\n";
            }
        } catch (const tala::Error& e) {
            std::cerr << "tala: " << e.what() << "\n";
            return kExitBadManifest;
        } catch (const std::exception& e) {
            std::cerr << "tala: " << e.what() << "\n";
            return kExitBadManifest;
        }
        return kExitOk;
    }
    return kExitUsage;
}
