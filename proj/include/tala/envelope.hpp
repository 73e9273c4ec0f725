#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "tala/audio.hpp"
#include "tala/errors.hpp"

namespace tala {

inline constexpr double kEnvelopeFrameRateHz = 200.0;
inline constexpr double kEnvelopeSmoothWindowS = 0.044;  // -3 dB near 10 Hz
inline constexpr double kDefaultPeakContrast = 0.01;     // d_f
inline constexpr double kMinClipDurationS = 0.5;

// Differential amplitude envelope: rectify, smooth, downsample, first
// difference, half-wave rectify. Values are non-negative.
struct Envelope {
    std::vector<double> values;
    double frame_rate_hz = kEnvelopeFrameRateHz;
    double source_duration_s = 0.0;
};

struct EnvelopePeak {
    double time_s = 0.0;
    double amplitude = 0.0;
};

struct PeakSignal {
    std::vector<EnvelopePeak> peaks;  // strictly increasing times
    double l_max = 0.0;               // global envelope maximum
    double d_f = kDefaultPeakContrast;
};

inline Envelope compute_envelope(const AudioClip& clip) {
    if (clip.duration_s() < kMinClipDurationS)
        throw ClipTooShort("clip shorter than 0.5 s");

    const size_t n = clip.samples.size();
    const double fs = clip.sample_rate_hz;

    // Causal moving-average of |x| via a running sum; window start before
    // t=0 reads as silence. A second, short pass suppresses the rectified
    // carrier ripple (>=120 Hz for in-band strokes) that the main window,
    // not being an integer number of carrier periods, lets through.
    auto boxcar = [n](std::vector<double>& v, size_t win) {
        double acc = 0.0;
        std::vector<double> out(n);
        for (size_t i = 0; i < n; ++i) {
            acc += v[i];
            if (i >= win) acc -= v[i - win];
            out[i] = acc / win;
        }
        v = std::move(out);
    };
    const size_t win = std::max<size_t>(1, static_cast<size_t>(std::lround(kEnvelopeSmoothWindowS * fs)));
    const size_t ripple_win = std::max<size_t>(1, static_cast<size_t>(std::lround(0.008 * fs)));
    std::vector<double> smooth(n);
    for (size_t i = 0; i < n; ++i) smooth[i] = std::fabs(clip.samples[i]);
    boxcar(smooth, win);
    boxcar(smooth, ripple_win);

    Envelope env;
    env.source_duration_s = clip.duration_s();
    const size_t frames = static_cast<size_t>(env.source_duration_s * kEnvelopeFrameRateHz);
    env.values.resize(frames);

    double prev = 0.0;
    for (size_t k = 0; k < frames; ++k) {
        const double p = k / kEnvelopeFrameRateHz * fs;
        const size_t i = static_cast<size_t>(p);
        double v;
        if (i >= n - 1) {
            v = smooth[n - 1];
        } else {
            const double frac = p - i;
            v = smooth[i] * (1.0 - frac) + smooth[i + 1] * frac;
        }
        env.values[k] = std::max(0.0, v - prev);
        prev = v;
    }
    return env;
}

namespace detail {

struct Extremum {
    size_t idx;
    double value;
    bool is_max;
};

// Alternating minima/maxima with plateaus collapsed to their first sample.
// First and last entries are boundary minima.
inline std::vector<Extremum> alternating_extrema(const std::vector<double>& v) {
    std::vector<Extremum> ext;
    if (v.empty()) return ext;

    // Collapse runs of equal values.
    std::vector<std::pair<size_t, double>> pts;
    for (size_t i = 0; i < v.size(); ++i) {
        if (pts.empty() || v[i] != pts.back().second) pts.emplace_back(i, v[i]);
    }
    if (pts.size() == 1) return ext;  // constant signal: no peaks

    ext.push_back({pts.front().first, pts.front().second, false});
    for (size_t i = 1; i + 1 < pts.size(); ++i) {
        const double a = pts[i - 1].second, b = pts[i].second, c = pts[i + 1].second;
        if (b > a && b > c) ext.push_back({pts[i].first, b, true});
        else if (b < a && b < c) ext.push_back({pts[i].first, b, false});
    }
    ext.push_back({pts.back().first, pts.back().second, false});
    return ext;
}

}  // namespace detail

// Local-maxima extraction with a contrast threshold of d_f * l_max: a summit
// must rise above its adjoining valleys by more than the threshold. Shallow
// valleys are merged first (the lower of the two summits they separate is
// dropped), so twin summits over a faint dip count as one peak.
inline PeakSignal pick_peaks(const Envelope& env, double d_f = kDefaultPeakContrast) {
    PeakSignal out;
    out.d_f = d_f;
    if (env.values.empty()) return out;
    out.l_max = *std::max_element(env.values.begin(), env.values.end());
    if (out.l_max <= 0.0) return out;

    const double threshold = d_f * out.l_max;
    auto ext = detail::alternating_extrema(env.values);

    // Merge interior valleys whose depth does not exceed the threshold,
    // shallowest first. ext alternates min, max, ..., max, min.
    while (true) {
        size_t best = 0;
        double best_depth = 0.0;
        bool found = false;
        for (size_t i = 2; i + 1 < ext.size(); i += 2) {
            // ext[i] is an interior minimum between maxima ext[i-1], ext[i+1].
            const double depth = std::min(ext[i - 1].value, ext[i + 1].value) - ext[i].value;
            if (depth <= threshold && (!found || depth < best_depth)) {
                best = i;
                best_depth = depth;
                found = true;
            }
        }
        if (!found) break;
        // Drop the valley and the smaller neighboring summit (ties: the later).
        const size_t drop_max = ext[best - 1].value < ext[best + 1].value ? best - 1 : best + 1;
        const size_t lo = std::min(best, drop_max);
        ext.erase(ext.begin() + lo, ext.begin() + lo + 2);
    }

    for (size_t i = 1; i + 1 < ext.size(); ++i) {
        if (!ext[i].is_max) continue;
        if (ext[i].value - ext[i - 1].value > threshold &&
            ext[i].value - ext[i + 1].value > threshold) {
            out.peaks.push_back({ext[i].idx / env.frame_rate_hz, ext[i].value});
        }
    }
    return out;
}

}  // namespace tala
