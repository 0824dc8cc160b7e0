#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "nsbox/attack.hpp"
#include "nsbox/box.hpp"
#include "nsbox/eval.hpp"
#include "nsbox/verify.hpp"

namespace nsbox {

using Json = nlohmann::json;

// {"parties": [{"inputs", "outputs", "rounds"}, ...],
//  "probabilities": ["p/q", ...]} with the table in row-major order.
Json box_to_json(const Box& box);
Box box_from_json(const Json& j);

// A constructed attack: the joint distribution plus how it was built. A set
// `eps` marks an assembled mixture over subsets; a set `s_members` marks a
// single-subset attack. The joint is stored exactly, entry (a, e) at index
// a * 2 + e with a packed big-endian.
struct AttackRecord {
  std::string kind;  // "prefix" or "majority"
  int n = 0;
  std::optional<Rat> eps;
  std::optional<std::vector<int>> s_members;
  std::optional<std::vector<std::string>> code;  // prefix attacks only
  ClassicalJoint joint;
};

Json attack_to_json(const AttackRecord& rec);
AttackRecord attack_from_json(const Json& j);

Json violations_to_json(const ViolationReport& report);

// Pinned column set; rationals as "p/q", asymptotic columns as floats.
std::string csv_from_rows(const std::vector<SweepRow>& rows);

// Stable serialization: sorted keys, two-space indent, trailing newline.
std::string dump_json(const Json& j);

}  // namespace nsbox
