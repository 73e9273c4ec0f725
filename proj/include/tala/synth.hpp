#pragma once

#include <cmath>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "tala/audio.hpp"
#include "tala/errors.hpp"
#include "tala/tala_grammar.hpp"

namespace tala {

inline constexpr double kSynthLeadS = 0.5;        // silence before/after the train
inline constexpr double kBayanBurstHz = 130.0;    // inside the analysis band
inline constexpr double kBayanDecayS = 0.080;
inline constexpr double kDayanBurstHz = 600.0;    // safely above the band edge
inline constexpr double kDayanDecayS = 0.050;
inline constexpr double kStressedAmp = 1.0;
inline constexpr double kUnstressedAmp = 0.55;
inline constexpr double kRestAmp = 0.4;

struct SynthSpec {
    Theka theka;
    double tempo_bpm = 240.0;  // pulses per minute
    int n_avarts = 8;
    double timing_jitter_s = 0.0;
    double amplitude_jitter = 0.0;
    double noise_floor = 0.0;
    double optional_stress_probability = 0.0;
    unsigned long long seed = 1;
};

struct GroundTruth {
    std::string tala_name;
    double tempo_bpm = 0.0;
    std::vector<double> stroke_times_s;   // actual (jittered) onsets
    std::vector<int> stressed_positions;  // 0-based stroke indices
};

namespace detail {

inline void validate_spec(const SynthSpec& s) {
    if (!(s.tempo_bpm > 0.0)) throw InvalidSpec("tempo_bpm must be positive");
    if (s.n_avarts < 1) throw InvalidSpec("n_avarts must be positive");
    if (s.timing_jitter_s < 0.0) throw InvalidSpec("timing_jitter_s must be non-negative");
    if (!(60.0 / s.tempo_bpm > 2.0 * s.timing_jitter_s))
        throw InvalidSpec("timing jitter too large: strokes could reorder");
    if (s.amplitude_jitter < 0.0 || s.amplitude_jitter >= 1.0)
        throw InvalidSpec("amplitude_jitter must be in [0,1)");
    if (s.noise_floor < 0.0 || s.noise_floor >= 1.0)
        throw InvalidSpec("noise_floor must be in [0,1)");
    if (s.optional_stress_probability < 0.0 || s.optional_stress_probability > 1.0)
        throw InvalidSpec("optional_stress_probability must be in [0,1]");
    validate_theka(s.theka);
}

inline void add_burst(std::vector<double>& out, int fs, double onset_s, double freq_hz,
                      double decay_s, double amp) {
    const double dur = 5.0 * decay_s;
    const long start = std::lround(onset_s * fs);
    const long n = std::lround(dur * fs);
    for (long k = 0; k < n; ++k) {
        const long idx = start + k;
        if (idx < 0 || idx >= static_cast<long>(out.size())) continue;
        const double t = static_cast<double>(k) / fs;
        out[idx] += amp * std::exp(-t / decay_s) *
                    std::sin(2.0 * std::numbers::pi * freq_hz * t);
    }
}

}  // namespace detail

// Render a theka as a train of decaying tone bursts, one per pulse position.
// Deterministic given the seed.
inline std::pair<AudioClip, GroundTruth> synthesize(const SynthSpec& spec) {
    detail::validate_spec(spec);

    const int fs = kCanonicalRateHz;
    const double pulse_s = 60.0 / spec.tempo_bpm;
    const int P = spec.theka.pulses_per_avart;
    const int n_strokes = spec.n_avarts * P;
    const double total_s = 2.0 * kSynthLeadS + n_strokes * pulse_s;

    std::mt19937_64 rng(spec.seed);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    std::uniform_real_distribution<double> uni01(0.0, 1.0);
    std::normal_distribution<double> gauss(0.0, 1.0);

    AudioClip clip;
    clip.sample_rate_hz = fs;
    clip.samples.assign(static_cast<size_t>(std::lround(total_s * fs)), 0.0);

    GroundTruth gt;
    gt.tala_name = spec.theka.tala_name;
    gt.tempo_bpm = spec.tempo_bpm;

    for (int a = 0; a < spec.n_avarts; ++a) {
        for (int p = 0; p < P; ++p) {
            const Bol& bol = spec.theka.bols[p];
            const int idx = a * P + p;
            const double nominal = kSynthLeadS + idx * pulse_s;

            bool stressed = bol.mandatory_stressed;
            if (!stressed && bol.has_bayan && !bol.is_rest &&
                spec.optional_stress_probability > 0.0)
                stressed = uni01(rng) < spec.optional_stress_probability;

            double amp = bol.is_rest ? kRestAmp : (stressed ? kStressedAmp : kUnstressedAmp);
            if (spec.amplitude_jitter > 0.0) amp *= 1.0 + spec.amplitude_jitter * uni(rng);

            double onset = nominal;
            if (spec.timing_jitter_s > 0.0) onset += spec.timing_jitter_s * uni(rng);

            if (bol.has_bayan && !bol.is_rest)
                detail::add_burst(clip.samples, fs, onset, kBayanBurstHz, kBayanDecayS, amp);
            else
                detail::add_burst(clip.samples, fs, onset, kDayanBurstHz, kDayanDecayS, amp);

            gt.stroke_times_s.push_back(onset);
            if (stressed) gt.stressed_positions.push_back(idx);
        }
    }

    if (spec.noise_floor > 0.0)
        for (double& s : clip.samples) s += spec.noise_floor * gauss(rng);

    double peak = 0.0;
    for (double s : clip.samples) peak = std::max(peak, std::abs(s));
    if (peak > 1.0)
        for (double& s : clip.samples) s /= peak;

    return {std::move(clip), std::move(gt)};
}

}  // namespace tala
