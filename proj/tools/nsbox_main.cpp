#include <fstream>
#include <iostream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "nsbox/attack.hpp"
#include "nsbox/boolfun.hpp"
#include "nsbox/box.hpp"
#include "nsbox/eval.hpp"
#include "nsbox/json_io.hpp"
#include "nsbox/oracle.hpp"
#include "nsbox/verify.hpp"

namespace {

using nsbox::Box;
using nsbox::Json;
using nsbox::Rat;

Json read_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  return Json::parse(in);
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << text;
  if (!out) throw std::runtime_error("failed writing " + path);
}

void emit(const std::optional<std::string>& path, const std::string& text) {
  if (path)
    write_text_file(*path, text);
  else
    std::cout << text;
}

nsbox::BooleanFunction parse_function(const std::string& selector, int n) {
  if (selector == "maj") return nsbox::BooleanFunction::majority(n);
  if (selector == "parity") return nsbox::BooleanFunction::parity(n);
  if (selector.rfind("bit:", 0) == 0)
    return nsbox::BooleanFunction::bit(n, std::stoi(selector.substr(4)));
  if (selector.rfind("const:", 0) == 0) {
    const std::string v = selector.substr(6);
    if (v != "0" && v != "1")
      throw std::runtime_error("const selector must be const:0 or const:1");
    return nsbox::BooleanFunction::constant(n, v == "1" ? 1 : 0);
  }
  if (selector.rfind("table:", 0) == 0) {
    const Json j = read_json_file(selector.substr(6));
    if (!j.is_object() || !j.contains("n") || !j["n"].is_number_integer() ||
        !j.contains("values") || !j["values"].is_array())
      throw std::runtime_error("function table must be {\"n\": int, \"values\": [0|1, ...]}");
    if (j["n"].get<int>() != n)
      throw std::runtime_error("function table arity " + j["n"].dump() + " does not match n=" +
                               std::to_string(n));
    std::vector<std::uint8_t> values;
    for (const Json& v : j["values"]) {
      if (!v.is_number_integer() || (v.get<int>() != 0 && v.get<int>() != 1))
        throw std::runtime_error("function table values must be 0 or 1");
      values.push_back(static_cast<std::uint8_t>(v.get<int>()));
    }
    return nsbox::BooleanFunction::from_table(n, std::move(values));
  }
  throw std::runtime_error("unknown function selector: " + selector +
                           " (expected maj, parity, bit:i, const:0|1 or table:<path>)");
}

Box parse_base_box(const std::string& selector) {
  if (selector == "pr") return nsbox::make_pr();
  if (selector == "uniform")
    return nsbox::make_uniform({nsbox::PartySpec{2, 2, 1}, nsbox::PartySpec{2, 2, 1}});
  return nsbox::box_from_json(read_json_file(selector));
}

// "1,3|2,4" with 1-based system indices -> two 0-based groups
std::pair<std::vector<int>, std::vector<int>> parse_partition(const std::string& text) {
  const std::size_t bar = text.find('|');
  if (bar == std::string::npos || text.find('|', bar + 1) != std::string::npos)
    throw std::runtime_error("partition must contain exactly one '|'");
  auto parse_group = [](const std::string& part) {
    std::vector<int> group;
    std::size_t pos = 0;
    while (pos < part.size()) {
      std::size_t next = part.find(',', pos);
      if (next == std::string::npos) next = part.size();
      const std::string tok = part.substr(pos, next - pos);
      if (tok.empty()) throw std::runtime_error("empty system index in partition");
      group.push_back(std::stoi(tok) - 1);
      pos = next + 1;
    }
    if (group.empty()) throw std::runtime_error("empty partition group");
    return group;
  };
  return {parse_group(text.substr(0, bar)), parse_group(text.substr(bar + 1))};
}

std::vector<long> parse_n_list(const std::string& spec) {
  std::vector<long> ns;
  const std::size_t colon = spec.find(':');
  if (colon != std::string::npos) {
    const std::size_t colon2 = spec.find(':', colon + 1);
    if (colon2 == std::string::npos)
      throw std::runtime_error("range spec must look like first:last:odd");
    if (spec.substr(colon2 + 1) != "odd")
      throw std::runtime_error("only odd ranges are supported (first:last:odd)");
    const long first = std::stol(spec.substr(0, colon));
    const long last = std::stol(spec.substr(colon + 1, colon2 - colon - 1));
    if (first % 2 == 0 || first < 1 || last < first)
      throw std::runtime_error("range must start at an odd n >= 1 with last >= first");
    for (long v = first; v <= last; v += 2) ns.push_back(v);
  } else {
    std::size_t pos = 0;
    while (pos < spec.size()) {
      std::size_t next = spec.find(',', pos);
      if (next == std::string::npos) next = spec.size();
      ns.push_back(std::stol(spec.substr(pos, next - pos)));
      pos = next + 1;
    }
  }
  if (ns.empty()) throw std::runtime_error("empty n list");
  return ns;
}

std::vector<std::string> normalize_code(const std::vector<std::string>& raw) {
  std::vector<std::string> words;
  for (const std::string& w : raw) words.push_back(w == "." ? "" : w);
  return words;
}

struct VerifyArgs {
  std::string box_path;
  std::string mode;
  std::string partition;
};

int run_verify(const VerifyArgs& args) {
  Box box = nsbox::box_from_json(read_json_file(args.box_path));
  std::string why;
  if (!box.valid(&why)) throw std::runtime_error("box is not a distribution: " + why);
  nsbox::ViolationReport report;
  if (args.mode == "tons") {
    if (!args.partition.empty())
      throw std::runtime_error("--partition applies to --mode ns only");
    report = nsbox::check_tons(box, nsbox::causal_order_of(box));
  } else {
    if (args.partition.empty())
      throw std::runtime_error("--mode ns requires --partition, e.g. --partition 1,2|3");
    const auto [left, right] = parse_partition(args.partition);
    report = nsbox::check_no_signalling(box, left, right);
    const auto back = nsbox::check_no_signalling(box, right, left);
    report.checked += back.checked;
    report.violations.insert(report.violations.end(), back.violations.begin(),
                             back.violations.end());
  }
  std::cout << nsbox::dump_json(nsbox::violations_to_json(report));
  return report.ok() ? 0 : 1;
}

struct BuildArgs {
  std::string kind;
  int n = 0;
  std::string eps;
  std::vector<int> s_members;
  bool s_given = false;
  std::vector<std::string> code;
  std::string f_selector;
  std::optional<std::string> out;
};

int run_build(const BuildArgs& args) {
  if (args.eps.empty() == !args.s_given)
    throw std::runtime_error("give exactly one of --eps (assembled mixture) or --S (single subset)");
  nsbox::AttackRecord rec;
  rec.kind = args.kind;
  rec.n = args.n;

  nsbox::PrefixCode code;
  std::optional<nsbox::BooleanFunction> f;
  if (args.kind == "prefix") {
    if (args.f_selector.empty() || args.code.empty())
      throw std::runtime_error("--kind prefix requires --f and --code");
    code.codewords = normalize_code(args.code);
    nsbox::validate_prefix_code(code, args.n);
    f = parse_function(args.f_selector, args.n);
    rec.code = code.codewords;
  } else {
    if (!args.f_selector.empty() || !args.code.empty())
      throw std::runtime_error("--f and --code apply to --kind prefix only");
  }

  if (!args.eps.empty()) {
    const Rat eps = nsbox::parse_rat(args.eps);
    rec.eps = eps;
    const auto family = args.kind == "prefix" ? nsbox::prefix_attack_family(*f, code)
                                              : nsbox::majority_attack_family(args.n);
    rec.joint = nsbox::assemble_divisible(family, args.n, eps);
  } else {
    const auto s = nsbox::SubsetS::from_members(args.n, args.s_members);
    rec.s_members = s.members();
    rec.joint = args.kind == "prefix" ? nsbox::prefix_code_attack(*f, code, s)
                                      : nsbox::majority_attack(args.n, s);
  }
  emit(args.out, nsbox::dump_json(nsbox::attack_to_json(rec)));
  return 0;
}

struct EvalArgs {
  std::string attack_path;
  std::string f_selector;
  std::string delta = "1/20";
  std::optional<std::string> out;
};

int run_eval(const EvalArgs& args) {
  const nsbox::AttackRecord rec = nsbox::attack_from_json(read_json_file(args.attack_path));
  std::string why;
  if (!rec.joint.valid(&why)) throw std::runtime_error("attack joint is invalid: " + why);
  const nsbox::BooleanFunction f = parse_function(args.f_selector, rec.n);
  const Rat guess = nsbox::guessing_probability(rec.joint, f);

  Json out;
  out["n"] = rec.n;
  out["kind"] = rec.kind;
  out["eps"] = rec.eps ? Json(nsbox::format_rat(*rec.eps)) : Json(nullptr);
  out["guess_probability"] = nsbox::format_rat(guess);
  out["bias"] = nsbox::to_double(guess) - 0.5;
  out["baseline_bound"] = Json(nullptr);
  out["prefix_majority_value"] = Json(nullptr);
  out["majority_value"] = Json(nullptr);
  out["asymptotic_limit_at_2eps"] = Json(nullptr);
  out["asymptotic_bound"] = Json(nullptr);
  if (rec.eps) {
    const double e = nsbox::to_double(*rec.eps);
    out["baseline_bound"] = nsbox::baseline_bound(rec.n, e);
    if (rec.n % 2 == 1) {
      out["prefix_majority_value"] = nsbox::format_rat(nsbox::prefix_majority_value(rec.n, *rec.eps));
      out["majority_value"] = nsbox::format_rat(nsbox::divisible_majority_value(rec.n, *rec.eps));
    }
    const double c = 2.0 * e;
    out["asymptotic_limit_at_2eps"] =
        c <= 0.0 ? 0.5 : c >= 1.0 ? 1.0 : nsbox::asymptotic_majority_value(c);
    const double delta = nsbox::to_double(nsbox::parse_rat(args.delta));
    if (c - delta > 0.0 && c - delta < 1.0)
      out["asymptotic_bound"] = nsbox::asymptotic_divisible_bound(e, delta);
  }
  emit(args.out, nsbox::dump_json(out));
  return 0;
}

struct ExtendArgs {
  std::string attack_path;
  std::string v_selector = "pr";
  std::optional<std::string> out;
};

int run_extend(const ExtendArgs& args) {
  const nsbox::AttackRecord rec = nsbox::attack_from_json(read_json_file(args.attack_path));
  std::string why;
  if (!rec.joint.valid(&why)) throw std::runtime_error("attack joint is invalid: " + why);
  if (!rec.s_members)
    throw std::runtime_error("extend needs a single-subset attack (field S); assembled mixtures have no single extension");
  const auto s = nsbox::SubsetS::from_members(rec.n, *rec.s_members);
  const Box v = parse_base_box(args.v_selector);
  const Box ext = nsbox::build_tons_extension(rec.joint, s, v);

  const int n = rec.n;
  const auto tons = nsbox::check_tons(ext, nsbox::causal_order_of(ext));

  // Marginal on the first two parties must equal the round-wise product of
  // the uniform box (rounds in S) and v (rounds outside S).
  const Box uniform_round = nsbox::make_uniform(v.parties);
  std::vector<Box> factors;
  for (int i = 1; i <= n; ++i) factors.push_back(s.contains(i) ? uniform_round : v);
  const Box product = nsbox::tensor(factors);
  std::vector<int> kept;
  for (int sys = 0; sys < 2 * n; ++sys) kept.push_back(sys);
  const auto against_product = nsbox::check_extension(ext, product, kept);

  // Marginal on the first party plus the side value must equal the joint.
  std::vector<int> ae;
  for (int sys = 0; sys < n; ++sys) ae.push_back(sys);
  ae.push_back(2 * n);
  const Box ae_marginal = nsbox::marginal(ext, ae);
  bool joint_ok = true;
  for (std::size_t i = 0; i < ae_marginal.in_dim() && joint_ok; ++i)
    for (std::size_t o = 0; o < ae_marginal.out_dim(); ++o)
      if (ae_marginal.at(i, o) != rec.joint.p[o]) {
        joint_ok = false;
        break;
      }

  const bool ok = tons.ok() && against_product.ok && joint_ok;
  Json report;
  report["ok"] = ok;
  report["tons"] = nsbox::violations_to_json(tons);
  report["product_marginal_ok"] = against_product.ok;
  report["joint_marginal_ok"] = joint_ok;
  std::cout << nsbox::dump_json(report);
  if (args.out) write_text_file(*args.out, nsbox::dump_json(nsbox::box_to_json(ext)));
  return ok ? 0 : 1;
}

struct SweepArgs {
  std::string n_spec;
  std::string eps;
  std::optional<std::string> csv;
};

int run_sweep(const SweepArgs& args) {
  const auto rows = nsbox::separation_sweep(parse_n_list(args.n_spec), nsbox::parse_rat(args.eps));
  emit(args.csv, nsbox::csv_from_rows(rows));
  return 0;
}

struct OracleArgs {
  std::string base = "pr";
  std::string eps = "0";
  int n = 1;
  std::string f_selector;
  std::string method = "lp";
  std::optional<std::string> witness_out;
};

int run_oracle(const OracleArgs& args) {
  Box single = parse_base_box(args.base);
  const Rat eps = nsbox::parse_rat(args.eps);
  if (eps != 0) single = nsbox::mix_noise(single, eps);
  Box base = single;
  if (args.n > 1) base = nsbox::tensor(std::vector<Box>(static_cast<std::size_t>(args.n), single));
  const nsbox::BooleanFunction f = parse_function(args.f_selector, args.n);
  const auto method = args.method == "enum" ? nsbox::OracleMethod::Enum : nsbox::OracleMethod::Lp;
  const auto result = nsbox::optimal_tons_attack(base, f, method);

  Json out;
  out["method"] = args.method;
  out["value"] = nsbox::format_rat(result.value);
  out["witness"] = Json(nullptr);
  if (args.witness_out) {
    write_text_file(*args.witness_out, nsbox::dump_json(nsbox::box_to_json(result.witness)));
    out["witness"] = *args.witness_out;
  }
  std::cout << nsbox::dump_json(out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Construct, verify and evaluate time-ordered no-signalling attacks"};
  app.require_subcommand(1);

  VerifyArgs verify_args;
  CLI::App* verify = app.add_subcommand("verify", "Check a box for (time-ordered) no-signalling");
  verify->add_option("--box", verify_args.box_path, "box JSON file")->required();
  verify->add_option("--mode", verify_args.mode, "ns or tons")
      ->required()
      ->check(CLI::IsMember({"ns", "tons"}));
  verify->add_option("--partition", verify_args.partition,
                     "two groups of 1-based systems, e.g. 1,2|3 (ns mode)");

  CLI::App* attack = app.add_subcommand("attack", "Build or evaluate attack joints");
  attack->require_subcommand(1);

  BuildArgs build_args;
  std::string build_out;
  CLI::App* build = attack->add_subcommand("build", "Construct an attack joint");
  build->add_option("--kind", build_args.kind, "majority or prefix")
      ->required()
      ->check(CLI::IsMember({"majority", "prefix"}));
  build->add_option("--n", build_args.n, "number of rounds")->required()->check(CLI::PositiveNumber);
  build->add_option("--eps", build_args.eps, "noise level p/q: assemble the divisible mixture");
  CLI::Option* s_opt =
      build->add_option("--S", build_args.s_members, "subset of rounds, e.g. 1,3")->delimiter(',');
  build->add_option("--code", build_args.code, "prefix codewords, '.' for the empty word")
      ->delimiter(',');
  build->add_option("--f", build_args.f_selector, "maj|parity|bit:i|const:0|1|table:<path>");
  build->add_option("--out", build_out, "write the attack JSON here instead of stdout");

  EvalArgs eval_args;
  std::string eval_out;
  CLI::App* eval = attack->add_subcommand("eval", "Evaluate guessing probability and bounds");
  eval->add_option("--attack", eval_args.attack_path, "attack JSON file")->required();
  eval->add_option("--f", eval_args.f_selector, "maj|parity|bit:i|const:0|1|table:<path>")
      ->required();
  eval->add_option("--delta", eval_args.delta, "margin for the asymptotic bound (default 1/20)");
  eval->add_option("--out", eval_out, "write the report here instead of stdout");

  ExtendArgs extend_args;
  std::string extend_out;
  CLI::App* extend = app.add_subcommand("extend", "Build and verify the time-ordered extension");
  extend->add_option("--attack", extend_args.attack_path, "single-subset attack JSON")->required();
  extend->add_option("--v", extend_args.v_selector, "pr, uniform, or a box JSON path (default pr)");
  extend->add_option("--out", extend_out, "write the extension box JSON here");

  SweepArgs sweep_args;
  std::string sweep_csv;
  CLI::App* sweep = app.add_subcommand("sweep", "Tabulate biases across n");
  sweep->add_option("--n", sweep_args.n_spec, "odd range first:last:odd or list 3,5,7")->required();
  sweep->add_option("--eps", sweep_args.eps, "noise level p/q")->required();
  sweep->add_option("--csv", sweep_csv, "write CSV here instead of stdout");

  OracleArgs oracle_args;
  std::string oracle_witness;
  CLI::App* oracle = app.add_subcommand("oracle", "Exact optimum over all time-ordered extensions");
  oracle->add_option("--base", oracle_args.base, "pr, uniform, or a box JSON path (default pr)");
  oracle->add_option("--eps", oracle_args.eps, "noise level p/q applied to the base (default 0)");
  oracle->add_option("--n", oracle_args.n, "tensor power of the base (default 1)")
      ->check(CLI::PositiveNumber);
  oracle->add_option("--f", oracle_args.f_selector, "maj|parity|bit:i|const:0|1|table:<path>")
      ->required();
  oracle->add_option("--method", oracle_args.method, "lp or enum (default lp)")
      ->check(CLI::IsMember({"lp", "enum"}));
  oracle->add_option("--witness-out", oracle_witness, "write the witness box JSON here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (verify->parsed()) return run_verify(verify_args);
    if (attack->parsed()) {
      if (build->parsed()) {
        build_args.s_given = s_opt->count() > 0;
        if (!build_out.empty()) build_args.out = build_out;
        return run_build(build_args);
      }
      if (!eval_out.empty()) eval_args.out = eval_out;
      return run_eval(eval_args);
    }
    if (extend->parsed()) {
      if (!extend_out.empty()) extend_args.out = extend_out;
      return run_extend(extend_args);
    }
    if (sweep->parsed()) {
      if (!sweep_csv.empty()) sweep_args.csv = sweep_csv;
      return run_sweep(sweep_args);
    }
    if (!oracle_witness.empty()) oracle_args.witness_out = oracle_witness;
    return run_oracle(oracle_args);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
