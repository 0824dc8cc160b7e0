#pragma once

#include <string>
#include <vector>

#include "nsbox/box.hpp"

namespace nsbox {

// Round structure used by the time-ordered check: three parties, the first
// two with an equal number of time-ordered rounds, the third ("Eve") with a
// single input-free round.
struct CausalOrder {
  std::vector<int> per_party_rounds;
};

CausalOrder causal_order_of(const Box& box);

// One failed exact equality. `kind` is "ns", "tons" or "marginal"; i/j/k are
// the time-ordered prefix sizes (meaningful for "tons" only). inputs_a and
// inputs_b are the two full input settings whose marginals differ on the
// fixed `outputs`.
struct Violation {
  std::string kind;
  int i = -1, j = -1, k = -1;
  std::vector<int> inputs_a, inputs_b;
  std::vector<int> outputs;
  Rat lhs, rhs;
};

struct ViolationReport {
  std::vector<Violation> violations;
  long long checked = 0;  // number of scalar equalities compared
  bool ok() const { return violations.empty(); }
};

// Checks that the marginal on `to` is independent of the inputs of `from`,
// for every fixed setting of the remaining systems' inputs. All input pairs
// are compared.
ViolationReport check_no_signalling(const Box& box, const std::vector<int>& from,
                                    const std::vector<int>& to);

enum class TonsMode { Auto, AllPairs, VersusFirst };

// Checks every time-ordered condition: for all prefix sizes (i, j, k) the
// marginal on the first i + j rounds plus (if k = 1) Eve is independent of
// the later inputs. Auto mode compares all input pairs for n <= 2 and
// against the first setting otherwise.
ViolationReport check_tons(const Box& box, const CausalOrder& order,
                           TonsMode mode = TonsMode::Auto);

struct ExtensionCheck {
  bool ok = false;
  ViolationReport report;
};

// True iff the extension is no-signalling between the kept systems and the
// rest (both directions) and its marginal on `kept` equals `base` exactly.
ExtensionCheck check_extension(const Box& extension, const Box& base,
                               const std::vector<int>& kept);

}  // namespace nsbox
