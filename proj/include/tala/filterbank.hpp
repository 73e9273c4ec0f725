#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include "tala/audio.hpp"
#include "tala/biquad.hpp"
#include "tala/errors.hpp"

namespace tala {

// The second ERB band of a 20-band bank at 44100 Hz covers the bass-drum
// range; these are the realized band-pass edges.
inline constexpr double kBayanBandLowHz = 60.0;
inline constexpr double kBayanBandHighHz = 200.0;

// Glasberg-Moore ERB-rate scale.
inline double erb_rate(double f_hz) {
    return 21.4 * std::log10(0.00437 * f_hz + 1.0);
}

inline double erb_rate_inverse(double e) {
    return (std::pow(10.0, e / 21.4) - 1.0) / 0.00437;
}

// Bank of heavily overlapping auditory bands with centers spaced uniformly
// on the ERB-rate scale. A band's edges sit at the neighboring centers,
// which is where adjacent overlapping filters cross well below peak.
struct ErbBank {
    int n_bands = 0;
    std::vector<std::pair<double, double>> band_edges_hz;
    std::vector<double> center_frequencies_hz;
};

inline ErbBank design_erb_bank(int n_bands, int sample_rate_hz) {
    if (n_bands < 2) throw InvalidBankSpec("need at least 2 bands");
    if (sample_rate_hz < 8000) throw InvalidBankSpec("sample rate below 8 kHz");

    const double e_lo = erb_rate(50.0);
    const double e_hi = erb_rate(sample_rate_hz / 2.0);
    const double step = (e_hi - e_lo) / (n_bands - 1);

    ErbBank bank;
    bank.n_bands = n_bands;
    for (int k = 0; k < n_bands; ++k) {
        const double e_c = e_lo + k * step;
        bank.center_frequencies_hz.push_back(erb_rate_inverse(e_c));
        const double e_low = std::max(e_c - step, erb_rate(1.0));
        const double e_high = std::min(e_c + step, erb_rate(sample_rate_hz / 2.0 - 1.0));
        bank.band_edges_hz.emplace_back(erb_rate_inverse(e_low), erb_rate_inverse(e_high));
    }
    return bank;
}

// Band-passes the clip to the bayan range [60, 200] Hz: cascaded 2nd-order
// Butterworth high-pass and low-pass, applied forward and backward so stroke
// peaks stay time-aligned with the unfiltered signal.
inline AudioClip extract_bayan_band(const AudioClip& clip,
                                    double low_hz = kBayanBandLowHz,
                                    double high_hz = kBayanBandHighHz) {
    if (clip.sample_rate_hz != kCanonicalRateHz)
        throw WrongSampleRate("clip must be canonicalized to 44100 Hz before analysis");

    const double fs = clip.sample_rate_hz;
    std::vector<Biquad> sections = {Biquad::highpass(low_hz, fs), Biquad::lowpass(high_hz, fs)};

    AudioClip out = clip;
    filtfilt(sections, out.samples);
    return out;
}

}  // namespace tala
