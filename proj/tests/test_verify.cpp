#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <stdexcept>
#include <vector>

#include "nsbox/box.hpp"
#include "nsbox/verify.hpp"

using namespace nsbox;

namespace {

// b = x (first party's input), a uniform: signals from party 0 to party 1.
Box make_signalling_box() {
  Box box = make_box({{2, 2, 1}, {2, 2, 1}});
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y)
      for (int a = 0; a < 2; ++a)
        box.at(pack_index(box.in_dims(), {x, y}),
               pack_index(box.out_dims(), {a, x})) = Rat(1, 2);
  return box;
}

// n = 1 tripartite box where a = y: Alice's output leaks Bob's input.
Box make_a_equals_y_box() {
  Box box = make_box({{2, 2, 1}, {2, 2, 1}, {1, 2, 1}});
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y)
      for (int b = 0; b < 2; ++b)
        for (int e = 0; e < 2; ++e)
          box.at(pack_index(box.in_dims(), {x, y, 0}),
                 pack_index(box.out_dims(), {y, b, e})) = Rat(1, 4);
  return box;
}

// n = 2 tripartite box where a1 = x2: the first-round output anticipates the
// second-round input. Everything else uniform.
Box make_a1_equals_x2_box() {
  Box box = make_box({{2, 2, 2}, {2, 2, 2}, {1, 2, 1}});
  const auto in_dims = box.in_dims(), out_dims = box.out_dims();
  for (std::size_t I = 0; I < box.in_dim(); ++I) {
    const auto xs = unpack_index(in_dims, I);
    for (std::size_t O = 0; O < box.out_dim(); ++O) {
      const auto as = unpack_index(out_dims, O);
      if (as[0] == xs[1]) box.at(I, O) = Rat(1, 16);
    }
  }
  return box;
}

}  // namespace

TEST_CASE("check_no_signalling accepts PR and uniform") {
  const Box pr = make_pr();
  const auto r1 = check_no_signalling(pr, {0}, {1});
  CHECK(r1.ok());
  CHECK(r1.checked == 4);
  const auto r2 = check_no_signalling(pr, {1}, {0});
  CHECK(r2.ok());
  CHECK(r2.checked == 4);

  const Box u = make_uniform({{2, 2, 1}, {2, 2, 1}});
  CHECK(check_no_signalling(u, {0}, {1}).ok());
  CHECK(check_no_signalling(u, {1}, {0}).ok());
}

TEST_CASE("check_no_signalling flags a signalling box") {
  const Box sig = make_signalling_box();
  const auto rep = check_no_signalling(sig, {0}, {1});
  REQUIRE_FALSE(rep.ok());
  for (const auto& v : rep.violations) {
    CHECK(v.kind == "ns");
    CHECK(v.lhs != v.rhs);
    REQUIRE(v.inputs_a.size() == 2);
    REQUIRE(v.inputs_b.size() == 2);
    CHECK(v.inputs_a[0] != v.inputs_b[0]);  // differ in the from-party input
    CHECK(v.inputs_a[1] == v.inputs_b[1]);
    CHECK(v.outputs.size() == 1);
  }
  // no signalling in the other direction
  CHECK(check_no_signalling(sig, {1}, {0}).ok());
}

TEST_CASE("check_no_signalling argument validation") {
  const Box pr = make_pr();
  CHECK_THROWS_AS(check_no_signalling(pr, {0}, {0}), std::invalid_argument);
  CHECK_THROWS_AS(check_no_signalling(pr, {0}, {2}), std::invalid_argument);
  CHECK_THROWS_AS(check_no_signalling(pr, {-1}, {0}), std::invalid_argument);
}

TEST_CASE("causal_order_of reads the round structure") {
  const Box ext = append_uniform_eve(make_pr());
  CHECK(causal_order_of(ext).per_party_rounds == std::vector<int>{1, 1, 1});
  const Box ext2 = append_uniform_eve(tensor({make_pr(), make_pr()}));
  CHECK(causal_order_of(ext2).per_party_rounds == std::vector<int>{2, 2, 1});
}

TEST_CASE("check_tons accepts product extensions and counts equalities") {
  const Box ext1 = append_uniform_eve(make_pr());
  const auto rep1 = check_tons(ext1, causal_order_of(ext1));
  CHECK(rep1.ok());
  CHECK(rep1.checked == 42);  // all-pairs comparisons over every prefix split

  const Box ext2 = append_uniform_eve(tensor({make_pr(), make_pr()}));
  const auto rep2 = check_tons(ext2, causal_order_of(ext2));
  CHECK(rep2.ok());
  CHECK(rep2.checked == 2280);

  // explicit modes agree on a clean box
  CHECK(check_tons(ext2, causal_order_of(ext2), TonsMode::AllPairs).ok());
  CHECK(check_tons(ext2, causal_order_of(ext2), TonsMode::VersusFirst).ok());
}

TEST_CASE("check_tons flags output depending on a later input (n=1)") {
  const Box bad = make_a_equals_y_box();
  REQUIRE(bad.valid());
  const auto rep = check_tons(bad, causal_order_of(bad));
  REQUIRE_FALSE(rep.ok());
  bool found = false;
  for (const auto& v : rep.violations) {
    CHECK(v.kind == "tons");
    if (v.i == 1 && v.j == 0) found = true;
  }
  CHECK(found);
}

TEST_CASE("check_tons flags a first-round output anticipating round two (n=2)") {
  const Box bad = make_a1_equals_x2_box();
  REQUIRE(bad.valid());
  for (const TonsMode mode : {TonsMode::AllPairs, TonsMode::VersusFirst}) {
    const auto rep = check_tons(bad, causal_order_of(bad), mode);
    REQUIRE_FALSE(rep.ok());
    bool found_full_prefix = false;
    for (const auto& v : rep.violations) {
      CHECK(v.kind == "tons");
      CHECK(v.i == 1);  // only splits exposing x2 as a future input can fail
      if (v.j == 2 && v.k == 1) found_full_prefix = true;
    }
    CHECK(found_full_prefix);
  }
}

TEST_CASE("check_tons validates shape and order") {
  const Box ext = append_uniform_eve(make_pr());
  CHECK_THROWS_AS(check_tons(ext, CausalOrder{{2, 2, 1}}), std::invalid_argument);
  CHECK_THROWS_AS(check_tons(make_pr(), CausalOrder{{1, 1}}), std::invalid_argument);
  const Box mismatched = append_uniform_eve(make_uniform({{2, 2, 2}, {2, 2, 1}}));
  CHECK_THROWS_AS(check_tons(mismatched, causal_order_of(mismatched)),
                  std::invalid_argument);
}

TEST_CASE("a passing box is also no-signalling across the system/eve split") {
  const Box ext = append_uniform_eve(tensor({make_pr(), make_pr()}));
  REQUIRE(check_tons(ext, causal_order_of(ext)).ok());
  CHECK(check_no_signalling(ext, {0, 1, 2, 3}, {4}).ok());
  CHECK(check_no_signalling(ext, {4}, {0, 1, 2, 3}).ok());
}

TEST_CASE("check_extension accepts a product extension") {
  const Box pr = make_pr();
  const Box ext = append_uniform_eve(pr);
  const auto chk = check_extension(ext, pr, {0, 1});
  CHECK(chk.ok);
  CHECK(chk.report.ok());
  CHECK(chk.report.checked > 0);
}

TEST_CASE("check_extension flags a wrong marginal") {
  const Box pr = make_pr();
  Box ext = append_uniform_eve(pr);
  // swap P(a=0,b=0,e=0|0,0) with P(a=0,b=1,e=0|0,0): keeps every row sum and
  // Eve's marginal, but changes the joint marginal on the base systems
  std::swap(ext.at(0, pack_index(ext.out_dims(), {0, 0, 0})),
            ext.at(0, pack_index(ext.out_dims(), {0, 1, 0})));
  REQUIRE(ext.valid());
  const auto chk = check_extension(ext, pr, {0, 1});
  CHECK_FALSE(chk.ok);
  REQUIRE_FALSE(chk.report.ok());
  bool marginal_kind = false;
  for (const auto& v : chk.report.violations)
    if (v.kind == "marginal") marginal_kind = true;
  CHECK(marginal_kind);
}

TEST_CASE("check_extension rejects a base shape mismatch") {
  const Box ext = append_uniform_eve(make_pr());
  CHECK_THROWS_AS(check_extension(ext, make_uniform({{2, 2, 1}}), {0, 1}),
                  std::invalid_argument);
}

TEST_CASE("reports are deterministic") {
  const Box bad = make_a1_equals_x2_box();
  const auto r1 = check_tons(bad, causal_order_of(bad));
  const auto r2 = check_tons(bad, causal_order_of(bad));
  REQUIRE(r1.violations.size() == r2.violations.size());
  CHECK(r1.checked == r2.checked);
  for (std::size_t v = 0; v < r1.violations.size(); ++v) {
    CHECK(r1.violations[v].kind == r2.violations[v].kind);
    CHECK(r1.violations[v].i == r2.violations[v].i);
    CHECK(r1.violations[v].j == r2.violations[v].j);
    CHECK(r1.violations[v].k == r2.violations[v].k);
    CHECK(r1.violations[v].inputs_a == r2.violations[v].inputs_a);
    CHECK(r1.violations[v].inputs_b == r2.violations[v].inputs_b);
    CHECK(r1.violations[v].outputs == r2.violations[v].outputs);
    CHECK(r1.violations[v].lhs == r2.violations[v].lhs);
    CHECK(r1.violations[v].rhs == r2.violations[v].rhs);
  }
}
