#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

namespace tala {

// Direct form I biquad section (audio-EQ-cookbook coefficients).
struct Biquad {
    double b0 = 1.0, b1 = 0.0, b2 = 0.0;
    double a1 = 0.0, a2 = 0.0;

    static Biquad lowpass(double fc_hz, double fs_hz, double q = std::numbers::sqrt2 / 2.0) {
        const double w = 2.0 * std::numbers::pi * fc_hz / fs_hz;
        const double alpha = std::sin(w) / (2.0 * q);
        const double c = std::cos(w);
        const double a0 = 1.0 + alpha;
        Biquad s;
        s.b0 = (1.0 - c) / 2.0 / a0;
        s.b1 = (1.0 - c) / a0;
        s.b2 = s.b0;
        s.a1 = -2.0 * c / a0;
        s.a2 = (1.0 - alpha) / a0;
        return s;
    }

    static Biquad highpass(double fc_hz, double fs_hz, double q = std::numbers::sqrt2 / 2.0) {
        const double w = 2.0 * std::numbers::pi * fc_hz / fs_hz;
        const double alpha = std::sin(w) / (2.0 * q);
        const double c = std::cos(w);
        const double a0 = 1.0 + alpha;
        Biquad s;
        s.b0 = (1.0 + c) / 2.0 / a0;
        s.b1 = -(1.0 + c) / a0;
        s.b2 = s.b0;
        s.a1 = -2.0 * c / a0;
        s.a2 = (1.0 - alpha) / a0;
        return s;
    }

    void apply_forward(std::vector<double>& x) const {
        double x1 = 0.0, x2 = 0.0, y1 = 0.0, y2 = 0.0;
        for (double& v : x) {
            const double y = b0 * v + b1 * x1 + b2 * x2 - a1 * y1 - a2 * y2;
            x2 = x1;
            x1 = v;
            y2 = y1;
            y1 = y;
            v = y;
        }
    }
};

// Zero-phase filtering: run the cascade forward, then again over the
// time-reversed signal. Squares the magnitude response and cancels phase.
inline void filtfilt(const std::vector<Biquad>& sections, std::vector<double>& x) {
    for (const Biquad& s : sections) s.apply_forward(x);
    std::reverse(x.begin(), x.end());
    for (const Biquad& s : sections) s.apply_forward(x);
    std::reverse(x.begin(), x.end());
}

}  // namespace tala
