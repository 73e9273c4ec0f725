#include <map>
#include <random>

#include <doctest.h>

#include "tala/cooccurrence.hpp"

using namespace tala;

namespace {

PeakSignal peaks_at(const std::vector<double>& times) {
    PeakSignal sig;
    for (double t : times) sig.peaks.push_back({t, 1.0});
    sig.l_max = 1.0;
    return sig;
}

BayanStrokeSignal strokes_at(const std::vector<double>& times) {
    BayanStrokeSignal sig;
    for (double t : times) sig.strokes.push_back({t, 1.0});
    return sig;
}

}  // namespace

TEST_CASE("five interior peaks plus the opening stroke count as six pulses") {
    // Bayan strokes at 0.5, 2.0, 3.5; in each interval the opening stroke's
    // peak plus five interior ones.
    std::vector<double> times;
    for (double b : {0.5, 2.0}) {
        times.push_back(b);
        for (int i = 1; i <= 5; ++i) times.push_back(b + 0.23 * i);
    }
    times.push_back(3.5);
    PulseCountSeries series =
        count_pulses(peaks_at(times), strokes_at({0.5, 2.0, 3.5}));
    REQUIRE(series.counts.size() == 2);
    CHECK(series.counts[0] == 6);
    CHECK(series.counts[1] == 6);
    CHECK(!series.clamped);
}

TEST_CASE("an interval holding only its opening stroke counts one pulse") {
    PulseCountSeries series =
        count_pulses(peaks_at({0.5, 2.0, 3.5}), strokes_at({0.5, 2.0, 3.5}));
    REQUIRE(series.counts.size() == 2);
    CHECK(series.counts[0] == 1);
    CHECK(series.counts[1] == 1);
}

TEST_CASE("counts above 16 clamp and set the flag") {
    std::vector<double> times;
    times.push_back(0.0);
    for (int i = 1; i <= 25; ++i) times.push_back(0.0 + i * 0.11);
    times.push_back(5.0);
    PulseCountSeries series = count_pulses(peaks_at(times), strokes_at({0.0, 4.0, 5.0}));
    CHECK(series.counts[0] == 16);
    CHECK(series.clamped);
}

TEST_CASE("count preconditions") {
    CHECK_THROWS_AS(count_pulses(peaks_at({0.5}), strokes_at({0.5, 1.0})),
                    InsufficientBayanStrokes);
    CHECK_THROWS_AS(count_pulses(PeakSignal{}, strokes_at({0.5, 1.0, 1.5})), EmptyPeakSet);
}

TEST_CASE("matrix of (4, 6, 6)") {
    CooccurrenceMatrix m = build_matrix({{4, 6, 6}, false});
    CHECK(m.at(4, 6) == 1);
    CHECK(m.at(6, 6) == 1);
    CHECK(m.total == 2);
}

TEST_CASE("constant series fills one diagonal cell") {
    CooccurrenceMatrix m = build_matrix({std::vector<int>(12, 6), false});
    CHECK(m.at(6, 6) == 11);
    CHECK(m.total == 11);
    for (int r = 1; r <= 16; ++r)
        for (int c = 1; c <= 16; ++c)
            if (r != 6 || c != 6) CHECK(m.at(r, c) == 0);
}

TEST_CASE("a length-2 series yields exactly one unit cell") {
    CooccurrenceMatrix m = build_matrix({{3, 13}, false});
    CHECK(m.total == 1);
    CHECK(m.at(3, 13) == 1);
}

TEST_CASE("series shorter than 2 raises") {
    CHECK_THROWS_AS(build_matrix({{6}, false}), SeriesTooShort);
}

TEST_CASE("dominant pattern basics and tie-breaking") {
    CooccurrenceMatrix single = build_matrix({{3, 13}, false});
    DominantPattern d = dominant_pattern(single);
    CHECK(d.pcmax_1 == 3);
    CHECK(d.pcmax_2 == 13);
    CHECK(d.occurrences == 1);

    CooccurrenceMatrix tie;
    tie.at(6, 6) = 5;
    tie.at(8, 8) = 5;
    tie.total = 10;
    DominantPattern t = dominant_pattern(tie);
    CHECK(t.pcmax_1 == 6);
    CHECK(t.pcmax_2 == 6);
    CHECK(t.occurrences == 5);

    CHECK_THROWS_AS(dominant_pattern(CooccurrenceMatrix{}), EmptyMatrix);
}

TEST_CASE("brute-force oracle over random series") {
    std::mt19937 rng(29);
    std::uniform_int_distribution<int> len(2, 200);
    std::uniform_int_distribution<int> val(1, 16);
    for (int trial = 0; trial < 1000; ++trial) {
        std::vector<int> counts(len(rng));
        for (int& c : counts) c = val(rng);
        CooccurrenceMatrix m = build_matrix({counts, false});

        std::map<std::pair<int, int>, int> oracle;
        for (size_t i = 0; i + 1 < counts.size(); ++i) oracle[{counts[i], counts[i + 1]}]++;
        int total = 0;
        for (int r = 1; r <= 16; ++r)
            for (int c = 1; c <= 16; ++c) {
                const auto it = oracle.find({r, c});
                REQUIRE(m.at(r, c) == (it == oracle.end() ? 0 : it->second));
                total += m.at(r, c);
            }
        REQUIRE(m.total == static_cast<int>(counts.size()) - 1);
        REQUIRE(m.total == total);

        DominantPattern d = dominant_pattern(m);
        int best = 0;
        for (int r = 1; r <= 16; ++r)
            for (int c = 1; c <= 16; ++c) best = std::max(best, m.at(r, c));
        REQUIRE(d.occurrences == best);
        REQUIRE(m.at(d.pcmax_1, d.pcmax_2) == best);
    }
}
