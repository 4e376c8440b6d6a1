#pragma once
// Bundled curve records and a small corpus of standard models used by tests and offline runs.

#include <string_view>

#include "ingest.hpp"

namespace lambda_transfer::fixtures {

inline constexpr std::string_view k19a1 = R"({
  "label": "19a1",
  "ainvs": ["0", "1", "1", "-9", "-15"],
  "certificate": {
    "heegner_point_infinite_order": true,
    "rank_one": true,
    "sha_p_trivial": true,
    "residually_irreducible": true,
    "source": "19a1 over Q(sqrt(-51)), p = 5: y_K of infinite order, rank E(K) = 1, Sha(E/K)[5^inf] = 0 (SageMath); class 19a has no 5-isogeny"
  },
  "source": "fixture"
}
)";

inline constexpr std::string_view k817b1 = R"({
  "label": "817b1",
  "ainvs": ["0", "1", "1", "-16649", "821406"],
  "certificate": {
    "heegner_point_infinite_order": true,
    "heegner_index_equals_tamagawa_p_part": true,
    "residually_irreducible": true,
    "source": "817b1 over Q(sqrt(-51)), p = 5: [E(K) : y_K] = 10 = prod c_l (SageMath); E[5] = 19a1[5] irreducible"
  },
  "source": "fixture"
}
)";

struct NamedCurve {
  std::string_view label;
  std::array<std::int64_t, 5> ainvs;
  std::int64_t conductor;
};

/// Standard minimal models with their conductors.
inline constexpr NamedCurve kCorpus[] = {
    {"11a1", {0, -1, 1, -10, -20}, 11},    {"11a2", {0, -1, 1, -7820, -263580}, 11},
    {"11a3", {0, -1, 1, 0, 0}, 11},        {"14a1", {1, 0, 1, 4, -6}, 14},
    {"15a1", {1, 1, 1, -10, -10}, 15},     {"19a1", {0, 1, 1, -9, -15}, 19},
    {"19a2", {0, 1, 1, -769, -8470}, 19},  {"19a3", {0, 1, 1, 1, 0}, 19},
    {"27a1", {0, 0, 1, 0, -7}, 27},        {"32a1", {0, 0, 0, 4, 0}, 32},
    {"36a1", {0, 0, 0, 0, 1}, 36},         {"37a1", {0, 0, 1, -1, 0}, 37},
    {"43a1", {0, 1, 1, 0, 0}, 43},         {"49a1", {1, -1, 0, -2, -1}, 49},
    {"64a1", {0, 0, 0, -4, 0}, 64},        {"389a1", {0, 1, 1, -2, 0}, 389},
    {"817b1", {0, 1, 1, -16649, 821406}, 817}, {"5077a1", {0, 0, 1, -7, 6}, 5077},
};

inline EllipticCurveQ curve(const NamedCurve& c) {
  return EllipticCurveQ(BigInt(c.ainvs[0]), BigInt(c.ainvs[1]), BigInt(c.ainvs[2]), BigInt(c.ainvs[3]),
                        BigInt(c.ainvs[4]), std::string(c.label));
}

/// Bundled record for a label, if any.
inline std::optional<CurveRecord> bundled(std::string_view label) {
  std::string_view text;
  if (label == "19a1")
    text = k19a1;
  else if (label == "817b1")
    text = k817b1;
  else
    return std::nullopt;
  return std::get<CurveRecord>(parse_record(text, RecordSource::fixture));
}

}  // namespace lambda_transfer::fixtures
