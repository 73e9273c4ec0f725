#pragma once

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "tala/cooccurrence.hpp"
#include "tala/errors.hpp"

namespace tala {

// One pulse position of a theka.
struct Bol {
    std::string name;
    bool has_bayan = false;
    bool is_rest = false;             // absent bol "*"; keeps its pulse slot
    bool mandatory_stressed = false;  // sam / tali-vibhaga boundary with bayan
};

// Canonical cyclic bol sequence of a tala.
struct Theka {
    std::string tala_name;
    int pulses_per_avart = 0;
    int matras_per_avart = 0;
    std::vector<Bol> bols;
    std::vector<int> vibhaga_boundaries;  // 1-based pulse indices
    bool enabled_for_detection = true;

    std::vector<int> mandatory_positions() const {  // 0-based
        std::vector<int> out;
        for (size_t i = 0; i < bols.size(); ++i)
            if (bols[i].mandatory_stressed) out.push_back(static_cast<int>(i));
        return out;
    }

    std::vector<int> optional_bayan_positions() const {  // 0-based
        std::vector<int> out;
        for (size_t i = 0; i < bols.size(); ++i)
            if (bols[i].has_bayan && !bols[i].mandatory_stressed && !bols[i].is_rest)
                out.push_back(static_cast<int>(i));
        return out;
    }
};

// Admissible ordered pairs of consecutive inter-bayan pulse counts.
struct PulsePattern {
    enum class Provenance { Basic, Extended };
    std::string tala_name;
    std::set<std::pair<int, int>> pairs;
    Provenance provenance = Provenance::Basic;
};

struct TalaDetection {
    struct Candidate {
        std::string tala_name;
        std::pair<int, int> matched_pair;
        bool basic = false;
        bool exact = false;
    };
    std::string tala_name = "none";
    std::pair<int, int> matched_pair{0, 0};
    bool exact = false;
    std::vector<Candidate> candidates;

    bool is_none() const { return tala_name == "none"; }
};

namespace detail {

inline void validate_theka(const Theka& t) {
    if (t.pulses_per_avart <= 0 || t.bols.size() != static_cast<size_t>(t.pulses_per_avart))
        throw InvalidSpec("theka '" + t.tala_name + "': bol count must equal pulses per avart");
    bool any_stress = false;
    for (const Bol& b : t.bols) {
        if (b.is_rest && b.mandatory_stressed)
            throw InvalidSpec("theka '" + t.tala_name + "': a rest cannot be stressed");
        if (b.mandatory_stressed && !b.has_bayan)
            throw InvalidSpec("theka '" + t.tala_name + "': stressed bol lacks a bayan component");
        any_stress = any_stress || b.mandatory_stressed;
    }
    if (!any_stress)
        throw InvalidSpec("theka '" + t.tala_name + "': needs at least one stressed bol");
}

// Consecutive inter-stress gap pairs of the periodic stress walk. With m
// stresses per avart the gap sequence is periodic with period m, so pairs
// (g_i, g_{i+1 mod m}) cover every consecutive pair over any progression.
inline void add_stress_walk_pairs(std::set<std::pair<int, int>>& pairs, int pulses_per_avart,
                                  const std::vector<int>& stressed_positions) {
    const int m = static_cast<int>(stressed_positions.size());
    if (m == 0) return;
    std::vector<int> gaps(m);
    for (int i = 0; i < m; ++i) {
        const int next = (i + 1 < m) ? stressed_positions[i + 1]
                                     : stressed_positions[0] + pulses_per_avart;
        gaps[i] = next - stressed_positions[i];
    }
    for (int i = 0; i < m; ++i) {
        const int a = gaps[i], b = gaps[(i + 1) % m];
        if (a >= 1 && a <= kMaxPulseCount && b >= 1 && b <= kMaxPulseCount)
            pairs.insert({a, b});
    }
}

}  // namespace detail

// Pulse-count pairs from the mandatory stresses alone, plus the full-cycle
// (P, P) pair covering a progression where only the sam is caught.
inline PulsePattern basic_patterns(const Theka& theka) {
    PulsePattern p;
    p.tala_name = theka.tala_name;
    p.provenance = PulsePattern::Provenance::Basic;
    detail::add_stress_walk_pairs(p.pairs, theka.pulses_per_avart, theka.mandatory_positions());
    const int P = theka.pulses_per_avart;
    if (P >= 1 && P <= kMaxPulseCount) p.pairs.insert({P, P});
    return p;
}

// Every subset of the optional bayan bols may additionally be stressed, and
// each avart realises its own subset; mandatory stresses are always on.
// Three consecutive stresses span at most three avarts (every avart holds a
// mandatory stress), so walking every subset choice over a three-avart
// window enumerates every realisable consecutive gap pair. Merged with the
// basic patterns.
inline PulsePattern extended_patterns(const Theka& theka) {
    PulsePattern p = basic_patterns(theka);
    p.provenance = PulsePattern::Provenance::Extended;

    const auto mandatory = theka.mandatory_positions();
    const auto optional = theka.optional_bayan_positions();
    const int m = static_cast<int>(optional.size());
    const int P = theka.pulses_per_avart;

    std::vector<std::vector<int>> subset_stresses(1u << m);
    for (unsigned mask = 0; mask < (1u << m); ++mask) {
        std::vector<int> s = mandatory;
        for (int i = 0; i < m; ++i)
            if (mask & (1u << i)) s.push_back(optional[i]);
        std::sort(s.begin(), s.end());
        subset_stresses[mask] = std::move(s);
    }

    bool seen[kMaxPulseCount + 1][kMaxPulseCount + 1] = {};
    std::vector<int> walk;
    for (unsigned a = 0; a < (1u << m); ++a)
        for (unsigned b = 0; b < (1u << m); ++b)
            for (unsigned c = 0; c < (1u << m); ++c) {
                walk.clear();
                for (int pos : subset_stresses[a]) walk.push_back(pos);
                for (int pos : subset_stresses[b]) walk.push_back(pos + P);
                for (int pos : subset_stresses[c]) walk.push_back(pos + 2 * P);
                for (size_t i = 0; i + 2 < walk.size(); ++i) {
                    const int g1 = walk[i + 1] - walk[i];
                    const int g2 = walk[i + 2] - walk[i + 1];
                    if (g1 >= 1 && g1 <= kMaxPulseCount && g2 >= 1 && g2 <= kMaxPulseCount)
                        seen[g1][g2] = true;
                }
            }
    for (int g1 = 1; g1 <= kMaxPulseCount; ++g1)
        for (int g2 = 1; g2 <= kMaxPulseCount; ++g2)
            if (seen[g1][g2]) p.pairs.insert({g1, g2});
    return p;
}

// Two-stage match of the dominant pair: exact first, then each component
// within +-1. Candidates are ranked basic-before-extended; within a rank,
// the tala whose pair set explains more co-occurrence mass wins (matrix
// optional), then declaration order.
inline TalaDetection classify(const DominantPattern& dominant,
                              const std::vector<PulsePattern>& grammars,
                              const CooccurrenceMatrix* matrix = nullptr) {
    const std::pair<int, int> target{dominant.pcmax_1, dominant.pcmax_2};

    auto mass_explained = [&](const PulsePattern& g) {
        if (!matrix) return 0;
        int mass = 0;
        for (const auto& pr : g.pairs) mass += matrix->at(pr.first, pr.second);
        return mass;
    };

    struct Hit {
        TalaDetection::Candidate cand;
        int mass;
        size_t order;
    };
    auto collect = [&](bool exact_stage) {
        std::vector<Hit> hits;
        for (size_t gi = 0; gi < grammars.size(); ++gi) {
            const PulsePattern& g = grammars[gi];
            std::optional<std::pair<int, int>> match;
            if (exact_stage) {
                if (g.pairs.count(target)) match = target;
            } else {
                for (const auto& pr : g.pairs) {
                    if (std::abs(pr.first - target.first) <= 1 &&
                        std::abs(pr.second - target.second) <= 1) {
                        match = pr;
                        break;
                    }
                }
            }
            if (!match) continue;
            // Keep only the best-ranked hit per tala.
            const bool basic = g.provenance == PulsePattern::Provenance::Basic;
            auto prev = std::find_if(hits.begin(), hits.end(), [&](const Hit& h) {
                return h.cand.tala_name == g.tala_name;
            });
            if (prev != hits.end()) {
                if (basic && !prev->cand.basic) {
                    prev->cand.basic = true;
                    prev->cand.matched_pair = *match;
                }
                continue;
            }
            hits.push_back({{g.tala_name, *match, basic, exact_stage}, mass_explained(g), gi});
        }
        return hits;
    };

    std::vector<Hit> hits = collect(true);
    if (hits.empty()) hits = collect(false);

    std::stable_sort(hits.begin(), hits.end(), [](const Hit& a, const Hit& b) {
        if (a.cand.basic != b.cand.basic) return a.cand.basic;
        if (a.mass != b.mass) return a.mass > b.mass;
        return a.order < b.order;
    });

    TalaDetection det;
    for (const Hit& h : hits) det.candidates.push_back(h.cand);
    if (!det.candidates.empty()) {
        det.tala_name = det.candidates.front().tala_name;
        det.matched_pair = det.candidates.front().matched_pair;
        det.exact = det.candidates.front().exact;
    }
    return det;
}

// --- Theka data ------------------------------------------------------------

// Bundled grammar. Bold bols in the source tables are mandatory stresses;
// jhaptal and tintal are carried as data but excluded from detection.
inline const char* builtin_theka_json() {
    return R"json({
  "schema_version": 1,
  "thekas": [
    {
      "name": "dadra", "matras_per_avart": 6, "pulses_per_avart": 6,
      "enabled_for_detection": true, "vibhaga_boundaries": [1, 4],
      "bols": [
        {"name": "dha", "bayan": true,  "stressed": true},
        {"name": "dhi", "bayan": true},
        {"name": "na"},
        {"name": "na"},
        {"name": "ti"},
        {"name": "na"}
      ]
    },
    {
      "name": "kaharba", "matras_per_avart": 8, "pulses_per_avart": 8,
      "enabled_for_detection": true, "vibhaga_boundaries": [1, 5],
      "bols": [
        {"name": "dha", "bayan": true, "stressed": true},
        {"name": "ge",  "bayan": true},
        {"name": "na"},
        {"name": "ti"},
        {"name": "na"},
        {"name": "ke"},
        {"name": "dhi", "bayan": true},
        {"name": "na"}
      ]
    },
    {
      "name": "rupak", "matras_per_avart": 7, "pulses_per_avart": 14,
      "enabled_for_detection": true, "vibhaga_boundaries": [1, 7, 11],
      "bols": [
        {"name": "tun"},
        {"name": "na"},
        {"name": "tun"},
        {"name": "na"},
        {"name": "ti"},
        {"name": "te"},
        {"name": "dhin", "bayan": true, "stressed": true},
        {"name": "dhin", "bayan": true},
        {"name": "dha",  "bayan": true},
        {"name": "dha",  "bayan": true},
        {"name": "dhin", "bayan": true, "stressed": true},
        {"name": "dhin", "bayan": true},
        {"name": "dha",  "bayan": true},
        {"name": "dha",  "bayan": true}
      ]
    },
    {
      "name": "bhajani", "matras_per_avart": 8, "pulses_per_avart": 16,
      "enabled_for_detection": true, "vibhaga_boundaries": [1, 9],
      "bols": [
        {"name": "dhin", "bayan": true, "stressed": true},
        {"name": "*", "rest": true},
        {"name": "na"},
        {"name": "dhin", "bayan": true, "stressed": true},
        {"name": "*", "rest": true},
        {"name": "dhin", "bayan": true},
        {"name": "na"},
        {"name": "*", "rest": true},
        {"name": "tin"},
        {"name": "*", "rest": true},
        {"name": "na"},
        {"name": "tin"},
        {"name": "*", "rest": true},
        {"name": "tin"},
        {"name": "na"},
        {"name": "*", "rest": true}
      ]
    },
    {
      "name": "jhaptal", "matras_per_avart": 10, "pulses_per_avart": 10,
      "enabled_for_detection": false, "vibhaga_boundaries": [1, 3, 6, 8],
      "bols": [
        {"name": "dhi", "bayan": true, "stressed": true},
        {"name": "na"},
        {"name": "dhi", "bayan": true, "stressed": true},
        {"name": "dhi", "bayan": true},
        {"name": "na"},
        {"name": "ti"},
        {"name": "na"},
        {"name": "dhi", "bayan": true, "stressed": true},
        {"name": "dhi", "bayan": true},
        {"name": "na"}
      ]
    },
    {
      "name": "tintal", "matras_per_avart": 16, "pulses_per_avart": 16,
      "enabled_for_detection": false, "vibhaga_boundaries": [1, 5, 9, 13],
      "bols": [
        {"name": "dha",  "bayan": true, "stressed": true},
        {"name": "dhin", "bayan": true},
        {"name": "dhin", "bayan": true},
        {"name": "dha",  "bayan": true},
        {"name": "dha",  "bayan": true, "stressed": true},
        {"name": "dhin", "bayan": true},
        {"name": "dhin", "bayan": true},
        {"name": "dha",  "bayan": true},
        {"name": "na"},
        {"name": "tin"},
        {"name": "tin"},
        {"name": "na"},
        {"name": "te-Te"},
        {"name": "dhin", "bayan": true},
        {"name": "dhin", "bayan": true},
        {"name": "dha",  "bayan": true}
      ]
    }
  ]
})json";
}

inline std::vector<Theka> parse_thekas(const nlohmann::json& doc) {
    if (!doc.contains("thekas") || !doc["thekas"].is_array())
        throw InvalidSpec("theka file: missing 'thekas' array");
    std::vector<Theka> out;
    for (const auto& jt : doc["thekas"]) {
        Theka t;
        t.tala_name = jt.at("name").get<std::string>();
        t.pulses_per_avart = jt.at("pulses_per_avart").get<int>();
        t.matras_per_avart = jt.value("matras_per_avart", t.pulses_per_avart);
        t.enabled_for_detection = jt.value("enabled_for_detection", true);
        if (jt.contains("vibhaga_boundaries"))
            t.vibhaga_boundaries = jt["vibhaga_boundaries"].get<std::vector<int>>();
        for (const auto& jb : jt.at("bols")) {
            Bol b;
            b.name = jb.at("name").get<std::string>();
            b.has_bayan = jb.value("bayan", false);
            b.is_rest = jb.value("rest", false);
            b.mandatory_stressed = jb.value("stressed", false);
            t.bols.push_back(b);
        }
        detail::validate_theka(t);
        out.push_back(std::move(t));
    }
    return out;
}

inline std::vector<Theka> builtin_thekas() {
    return parse_thekas(nlohmann::json::parse(builtin_theka_json()));
}

inline std::vector<Theka> load_thekas(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw UnreadableFile("cannot open theka file '" + path + "'");
    nlohmann::json doc;
    try {
        f >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw InvalidSpec("theka file '" + path + "': " + e.what());
    }
    return parse_thekas(doc);
}

// Grammar for classification: basic and extended patterns of every
// detection-enabled theka, basic block first.
inline std::vector<PulsePattern> build_grammars(const std::vector<Theka>& thekas) {
    std::vector<PulsePattern> out;
    for (const Theka& t : thekas)
        if (t.enabled_for_detection) out.push_back(basic_patterns(t));
    for (const Theka& t : thekas)
        if (t.enabled_for_detection) out.push_back(extended_patterns(t));
    return out;
}

inline const Theka* find_theka(const std::vector<Theka>& thekas, const std::string& name) {
    for (const Theka& t : thekas)
        if (t.tala_name == name) return &t;
    return nullptr;
}

}  // namespace tala
