#pragma once

#include <vector>

#include "tala/cooccurrence.hpp"
#include "tala/errors.hpp"
#include "tala/stroke.hpp"

namespace tala {

struct TempoEstimate {
    double bpm = 0.0;          // pulses per minute
    double bayan_dur_s = 0.0;  // total duration of contributing bayan intervals
    int count_pulse = 0;       // n * (pcmax_1 + pcmax_2)
    double pulse_dur_s = 0.0;  // bayan_dur_s / count_pulse
    int n = 0;                 // consecutive pairs equal to the dominant pattern
};

// Mean pulse duration over every consecutive pulse-count pair equal to the
// dominant pattern. Overlapping pairs double-count their shared interval by
// design; for a steady tempo the mean is unchanged.
inline TempoEstimate estimate_tempo(const BayanStrokeSignal& bayan,
                                    const PulseCountSeries& series,
                                    const DominantPattern& dominant) {
    const auto& counts = series.counts;
    const auto& strokes = bayan.strokes;
    if (counts.size() < 2 || strokes.size() != counts.size() + 1)
        throw SeriesTooShort("pulse-count series and stroke list are inconsistent");

    TempoEstimate est;
    for (size_t i = 0; i + 1 < counts.size(); ++i) {
        if (counts[i] != dominant.pcmax_1 || counts[i + 1] != dominant.pcmax_2) continue;
        est.bayan_dur_s += strokes[i + 2].time_s - strokes[i].time_s;
        est.n += 1;
    }
    est.count_pulse = est.n * (dominant.pcmax_1 + dominant.pcmax_2);
    if (est.n == 0 || est.count_pulse <= 0 || est.bayan_dur_s <= 0.0)
        throw NoMatchingPairs("no consecutive pair matches the dominant pattern");

    est.pulse_dur_s = est.bayan_dur_s / est.count_pulse;
    est.bpm = 60.0 / est.pulse_dur_s;
    return est;
}

}  // namespace tala
