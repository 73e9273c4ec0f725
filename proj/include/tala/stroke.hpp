#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "tala/envelope.hpp"
#include "tala/errors.hpp"

namespace tala {

inline constexpr double kRefineWindowS = 0.1;
// Amplitude clusters tighter than this ratio are treated as one stroke
// class when the mu+sigma cut lands inside a cluster.
inline constexpr double kClusterGapRatio = 0.8;

// High-strength strokes surviving the mu+sigma cut on the bayan-band peaks.
struct BayanStrokeSignal {
    std::vector<EnvelopePeak> strokes;
    double mu_bp = 0.0;
    double sigma_bp = 0.0;   // population standard deviation
    double threshold = 0.0;  // mu_bp + sigma_bp
    bool fallback_used = false;
};

// Keeps candidates strictly above mu + sigma. Two guards handle degenerate
// amplitude distributions where the cut lands inside the stressed cluster:
//  * survivors are extended downward through any amplitude whose ratio to
//    the previous kept amplitude exceeds kClusterGapRatio (cluster walk,
//    scale invariant);
//  * if fewer than 3 peaks remain the threshold relaxes to mu (fallback),
//    since the pipeline needs 3 strokes for one co-occurrence pair.
inline BayanStrokeSignal threshold_bayan_peaks(const PeakSignal& candidates) {
    if (candidates.peaks.empty())
        throw EmptyPeakSet("no percussive peaks in the bayan band");

    BayanStrokeSignal out;
    const size_t n = candidates.peaks.size();
    double sum = 0.0, sq = 0.0;
    for (const auto& p : candidates.peaks) {
        sum += p.amplitude;
        sq += p.amplitude * p.amplitude;
    }
    out.mu_bp = sum / n;
    const double var = std::max(0.0, sq / n - out.mu_bp * out.mu_bp);
    out.sigma_bp = std::sqrt(var);
    out.threshold = out.mu_bp + out.sigma_bp;

    std::vector<double> amps;
    amps.reserve(n);
    for (const auto& p : candidates.peaks) amps.push_back(p.amplitude);
    std::sort(amps.begin(), amps.end(), std::greater<>());

    double cut = out.threshold;  // retain amplitudes strictly above this
    size_t kept = 0;
    while (kept < n && amps[kept] > out.threshold) ++kept;
    if (kept > 0) {
        // Walk down the amplitude cluster the survivors belong to.
        while (kept < n && amps[kept] > amps[kept - 1] * kClusterGapRatio) ++kept;
        if (kept < n) cut = amps[kept];          // exclusive lower bound
        else cut = amps[n - 1] * kClusterGapRatio;
    }

    auto retain = [&](double floor_exclusive, bool inclusive_mu) {
        out.strokes.clear();
        for (const auto& p : candidates.peaks) {
            if (inclusive_mu ? p.amplitude >= floor_exclusive : p.amplitude > floor_exclusive)
                out.strokes.push_back(p);
        }
    };
    if (kept > 0) retain(cut, false);
    if (out.strokes.size() < 3) {
        retain(out.mu_bp, true);
        out.fallback_used = true;
    }
    return out;
}

// Fixed-grid window refinement: within each [k*w, (k+1)*w) only the
// strongest peak survives; a greedy pass then enforces a minimum spacing of
// w between consecutive survivors (stronger of any closer pair wins).
inline std::vector<EnvelopePeak> refine_peaks(const std::vector<EnvelopePeak>& peaks,
                                              double window_s = kRefineWindowS) {
    std::vector<EnvelopePeak> winners;
    for (const auto& p : peaks) {
        const long long cell = static_cast<long long>(p.time_s / window_s);
        if (!winners.empty() &&
            static_cast<long long>(winners.back().time_s / window_s) == cell) {
            if (p.amplitude > winners.back().amplitude) winners.back() = p;
        } else {
            winners.push_back(p);
        }
    }
    std::vector<EnvelopePeak> out;
    for (const auto& p : winners) {
        if (!out.empty() && p.time_s - out.back().time_s < window_s) {
            if (p.amplitude > out.back().amplitude) out.back() = p;
        } else {
            out.push_back(p);
        }
    }
    return out;
}

inline PeakSignal refine(const PeakSignal& sig, double window_s = kRefineWindowS) {
    PeakSignal out = sig;
    out.peaks = refine_peaks(sig.peaks, window_s);
    return out;
}

inline BayanStrokeSignal refine(const BayanStrokeSignal& sig, double window_s = kRefineWindowS) {
    BayanStrokeSignal out = sig;
    out.strokes = refine_peaks(sig.strokes, window_s);
    return out;
}

}  // namespace tala
