#pragma once

#include <algorithm>
#include <array>
#include <vector>

#include "tala/errors.hpp"
#include "tala/stroke.hpp"

namespace tala {

inline constexpr int kMaxPulseCount = 16;
// Bayan-stroke and full-band peaks come from different envelopes and never
// coincide bit-exactly; half a refinement window aligns them without
// double-counting.
inline constexpr double kPulseAlignEpsilonS = 0.05;

// pc_1 .. pc_k: peak-signal pulses inside each consecutive bayan interval.
struct PulseCountSeries {
    std::vector<int> counts;
    bool clamped = false;  // some raw count exceeded kMaxPulseCount
};

// 16x16 tally of consecutive pulse-count pairs. Indices are 1-based counts.
struct CooccurrenceMatrix {
    std::array<std::array<int, kMaxPulseCount>, kMaxPulseCount> cells{};
    int total = 0;

    int at(int row, int col) const { return cells[row - 1][col - 1]; }
    int& at(int row, int col) { return cells[row - 1][col - 1]; }
};

struct DominantPattern {
    int pcmax_1 = 0;
    int pcmax_2 = 0;
    int occurrences = 0;
};

// Counts refined peak-signal pulses in each half-open interval
// [b_i - eps, b_{i+1} - eps): the pulse of the opening bayan stroke is
// counted, the closing one belongs to the next interval.
inline PulseCountSeries count_pulses(const PeakSignal& peaks, const BayanStrokeSignal& bayan,
                                     double epsilon_s = kPulseAlignEpsilonS) {
    if (bayan.strokes.size() < 3)
        throw InsufficientBayanStrokes("need at least 3 bayan strokes to form a pulse-count pair");
    if (peaks.peaks.empty()) throw EmptyPeakSet("refined peak-signal is empty");

    std::vector<double> times;
    times.reserve(peaks.peaks.size());
    for (const auto& p : peaks.peaks) times.push_back(p.time_s);

    PulseCountSeries series;
    for (size_t i = 0; i + 1 < bayan.strokes.size(); ++i) {
        const double lo = bayan.strokes[i].time_s - epsilon_s;
        const double hi = bayan.strokes[i + 1].time_s - epsilon_s;
        const auto first = std::lower_bound(times.begin(), times.end(), lo);
        const auto last = std::lower_bound(times.begin(), times.end(), hi);
        int pc = static_cast<int>(last - first);
        if (pc > kMaxPulseCount) {
            pc = kMaxPulseCount;
            series.clamped = true;
        }
        // The interval always holds the pulse of its opening stroke.
        series.counts.push_back(std::max(1, pc));
    }
    return series;
}

inline CooccurrenceMatrix build_matrix(const PulseCountSeries& series) {
    if (series.counts.size() < 2) throw SeriesTooShort("need at least 2 pulse counts");
    CooccurrenceMatrix m;
    for (size_t i = 0; i + 1 < series.counts.size(); ++i) {
        m.at(series.counts[i], series.counts[i + 1]) += 1;
        m.total += 1;
    }
    return m;
}

// Argmax cell; ties resolve to the smallest row, then smallest column.
inline DominantPattern dominant_pattern(const CooccurrenceMatrix& m) {
    if (m.total < 1) throw EmptyMatrix("co-occurrence matrix has no entries");
    DominantPattern best;
    for (int r = 1; r <= kMaxPulseCount; ++r) {
        for (int c = 1; c <= kMaxPulseCount; ++c) {
            if (m.at(r, c) > best.occurrences) {
                best = {r, c, m.at(r, c)};
            }
        }
    }
    return best;
}

}  // namespace tala
