#include "nsbox/json_io.hpp"

#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace nsbox {

namespace {

[[noreturn]] void bad(const std::string& what) {
  throw std::invalid_argument("json: " + what);
}

int require_int(const Json& j, const char* key, long long lo, long long hi) {
  if (!j.contains(key) || !j[key].is_number_integer()) bad(std::string(key) + " must be an integer");
  const long long v = j[key].get<long long>();
  if (v < lo || v > hi) bad(std::string(key) + " out of range");
  return static_cast<int>(v);
}

Rat require_rat(const Json& j) {
  if (!j.is_string()) bad("probabilities must be \"p/q\" strings");
  return parse_rat(j.get<std::string>());
}

std::string format_float(double v) {
  std::ostringstream out;
  out << std::setprecision(12) << v;
  return out.str();
}

}  // namespace

Json box_to_json(const Box& box) {
  Json parties = Json::array();
  for (const PartySpec& p : box.parties)
    parties.push_back(Json{{"inputs", p.inputs}, {"outputs", p.outputs}, {"rounds", p.rounds}});
  Json probs = Json::array();
  for (const Rat& v : box.table) probs.push_back(format_rat(v));
  return Json{{"parties", std::move(parties)}, {"probabilities", std::move(probs)}};
}

Box box_from_json(const Json& j) {
  if (!j.is_object()) bad("box must be an object");
  if (!j.contains("parties") || !j["parties"].is_array() || j["parties"].empty())
    bad("parties must be a nonempty array");
  std::vector<PartySpec> parties;
  for (const Json& p : j["parties"]) {
    if (!p.is_object()) bad("each party must be an object");
    PartySpec spec;
    spec.inputs = require_int(p, "inputs", 1, 1 << 20);
    spec.outputs = require_int(p, "outputs", 1, 1 << 20);
    spec.rounds = require_int(p, "rounds", 1, 1 << 20);
    parties.push_back(spec);
  }
  Box box = make_box(std::move(parties));
  if (!j.contains("probabilities") || !j["probabilities"].is_array())
    bad("probabilities must be an array");
  const Json& probs = j["probabilities"];
  if (probs.size() != box.table.size())
    bad("probabilities has " + std::to_string(probs.size()) + " entries, expected " +
        std::to_string(box.table.size()));
  for (std::size_t t = 0; t < box.table.size(); ++t) box.table[t] = require_rat(probs[t]);
  return box;
}

Json attack_to_json(const AttackRecord& rec) {
  Json j;
  j["kind"] = rec.kind;
  j["n"] = rec.n;
  j["eps"] = rec.eps ? Json(format_rat(*rec.eps)) : Json(nullptr);
  j["S"] = rec.s_members ? Json(*rec.s_members) : Json(nullptr);
  j["code"] = rec.code ? Json(*rec.code) : Json(nullptr);
  Json joint = Json::array();
  for (const Rat& v : rec.joint.p) joint.push_back(format_rat(v));
  j["joint"] = std::move(joint);
  return j;
}

AttackRecord attack_from_json(const Json& j) {
  if (!j.is_object()) bad("attack must be an object");
  AttackRecord rec;
  if (!j.contains("kind") || !j["kind"].is_string()) bad("kind must be a string");
  rec.kind = j["kind"].get<std::string>();
  rec.n = require_int(j, "n", 1, 25);
  if (j.contains("eps") && !j["eps"].is_null()) {
    if (!j["eps"].is_string()) bad("eps must be a \"p/q\" string or null");
    rec.eps = parse_rat(j["eps"].get<std::string>());
  }
  if (j.contains("S") && !j["S"].is_null()) {
    if (!j["S"].is_array()) bad("S must be an array of rounds or null");
    std::vector<int> members;
    for (const Json& m : j["S"]) {
      if (!m.is_number_integer()) bad("S members must be integers");
      members.push_back(m.get<int>());
    }
    rec.s_members = std::move(members);
  }
  if (j.contains("code") && !j["code"].is_null()) {
    if (!j["code"].is_array()) bad("code must be an array of codewords or null");
    std::vector<std::string> words;
    for (const Json& w : j["code"]) {
      if (!w.is_string()) bad("codewords must be strings");
      words.push_back(w.get<std::string>());
    }
    rec.code = std::move(words);
  }
  if (!j.contains("joint") || !j["joint"].is_array()) bad("joint must be an array");
  const Json& joint = j["joint"];
  const std::size_t expected = 1ULL << (rec.n + 1);
  if (joint.size() != expected)
    bad("joint has " + std::to_string(joint.size()) + " entries, expected " +
        std::to_string(expected));
  rec.joint.n = rec.n;
  rec.joint.p.resize(expected);
  for (std::size_t t = 0; t < expected; ++t) rec.joint.p[t] = require_rat(joint[t]);
  return rec;
}

Json violations_to_json(const ViolationReport& report) {
  Json list = Json::array();
  for (const Violation& v : report.violations) {
    Json item;
    item["kind"] = v.kind;
    if (v.kind == "tons") {
      item["i"] = v.i;
      item["j"] = v.j;
      item["k"] = v.k;
    }
    item["inputs_a"] = v.inputs_a;
    item["inputs_b"] = v.inputs_b;
    item["outputs"] = v.outputs;
    item["lhs"] = format_rat(v.lhs);
    item["rhs"] = format_rat(v.rhs);
    list.push_back(std::move(item));
  }
  return Json{{"checked", report.checked},
              {"ok", report.ok()},
              {"violations", std::move(list)}};
}

std::string csv_from_rows(const std::vector<SweepRow>& rows) {
  std::ostringstream out;
  out << "n,eps,lemma2_bias,majority_bias,ratio,rotem_bound,theorem2_limit_at_2eps\n";
  for (const SweepRow& row : rows) {
    out << row.n << ',' << format_rat(row.eps) << ',' << format_float(row.prefix_bias)
        << ',' << format_float(row.majority_bias) << ',' << format_float(row.ratio)
        << ',' << format_float(row.baseline) << ',' << format_float(row.limit_at_2eps)
        << '\n';
  }
  return out.str();
}

std::string dump_json(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace nsbox
