#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdint>
#include <map>
#include <random>
#include <stdexcept>
#include <vector>

#include "nsbox/attack.hpp"
#include "nsbox/verify.hpp"

using namespace nsbox;

TEST_CASE("SubsetS membership round trip") {
  const auto s = SubsetS::from_members(5, {1, 3, 4});
  CHECK(s.size() == 3);
  CHECK(s.contains(1));
  CHECK_FALSE(s.contains(2));
  CHECK(s.contains(3));
  CHECK(s.contains(4));
  CHECK_FALSE(s.contains(5));
  CHECK(s.members() == std::vector<int>{1, 3, 4});
  CHECK(SubsetS::from_members(3, {}).mask == 0);
  CHECK_THROWS_AS(SubsetS::from_members(3, {4}), std::invalid_argument);
  CHECK_THROWS_AS(SubsetS::from_members(3, {0}), std::invalid_argument);
}

TEST_CASE("ClassicalJoint validity") {
  CHECK(uniform_joint(3).valid());
  ClassicalJoint bad;
  bad.n = 2;
  bad.p.assign(4, Rat(1, 4));  // wrong size: needs 2^(n+1) = 8
  std::string why;
  CHECK_FALSE(bad.valid(&why));
  CHECK_FALSE(why.empty());

  ClassicalJoint neg = uniform_joint(1);
  neg.p[0] = -neg.p[0];
  CHECK_FALSE(neg.valid());

  ClassicalJoint off = uniform_joint(1);
  off.p[0] *= 2;
  CHECK_FALSE(off.valid());
}

TEST_CASE("prefix code validation") {
  validate_prefix_code({{""}}, 3);
  validate_prefix_code({{"0", "1"}}, 3);
  validate_prefix_code({{"0", "10", "11"}}, 4);
  CHECK_THROWS_AS(validate_prefix_code({{"0", "01"}}, 4), std::invalid_argument);
  CHECK_THROWS_AS(validate_prefix_code({{"", "0"}}, 4), std::invalid_argument);
  CHECK_THROWS_AS(validate_prefix_code({{"2"}}, 4), std::invalid_argument);
  CHECK_THROWS_AS(validate_prefix_code({{"000"}}, 3), std::invalid_argument);
  validate_prefix_code({{"00"}}, 3);  // length n - 1 is allowed
}

TEST_CASE("is_complete_code") {
  CHECK(is_complete_code({{""}}));
  CHECK(is_complete_code({{"0", "1"}}));
  CHECK(is_complete_code({{"0", "10", "11"}}));
  CHECK_FALSE(is_complete_code({{"0"}}));
  CHECK_FALSE(is_complete_code({{"0", "10"}}));
  CHECK_FALSE(is_complete_code({std::vector<std::string>{}}));
}

TEST_CASE("weight of a subset") {
  const auto s0 = SubsetS::from_members(3, {});
  const auto s13 = SubsetS::from_members(3, {1, 3});
  CHECK(weight(s0, Rat(0)) == Rat(1));
  CHECK(weight(s13, Rat(0)) == Rat(0));
  CHECK(weight(SubsetS::from_members(2, {1}), Rat(1, 4)) == Rat(1, 4));
  CHECK(weight(s13, Rat(1, 10)) == Rat(4, 100) * Rat(8, 10));
  CHECK_THROWS_AS(weight(s0, Rat(-1, 10)), std::invalid_argument);
  CHECK_THROWS_AS(weight(s0, Rat(2, 3)), std::invalid_argument);

  // weights over all subsets form a distribution
  for (int n = 1; n <= 6; ++n)
    for (const Rat eps : {Rat(0), Rat(1, 10), Rat(1, 4), Rat(1, 2)}) {
      Rat total(0);
      for (std::uint64_t mask = 0; mask < (std::uint64_t(1) << n); ++mask) {
        SubsetS s;
        s.n = n;
        s.mask = mask;
        total += weight(s, eps);
      }
      CHECK(total == Rat(1));
    }
}

TEST_CASE("uniform joint is S-influenceable for every S") {
  const auto q = uniform_joint(3);
  for (std::uint64_t mask = 0; mask < 8; ++mask) {
    SubsetS s;
    s.n = 3;
    s.mask = mask;
    CHECK(validate_s_influenceable(q, s).ok);
  }
}

TEST_CASE("majority attacks are S-influenceable exactly on their subset") {
  for (int n = 1; n <= 6; ++n)
    for (std::uint64_t mask = 1; mask < (std::uint64_t(1) << n); ++mask) {
      SubsetS s;
      s.n = n;
      s.mask = mask;
      const auto q = majority_attack(n, s);
      CHECK(validate_s_influenceable(q, s).ok);
    }
  // a joint forcing a_1 = e is not {2}-influenceable
  const auto leak = majority_attack(2, SubsetS::from_members(2, {1}));
  const auto chk = validate_s_influenceable(leak, SubsetS::from_members(2, {2}));
  CHECK_FALSE(chk.ok);
  CHECK_FALSE(chk.diagnostics.empty());
}

TEST_CASE("prefix attacks are S-influenceable") {
  const auto maj = BooleanFunction::majority(3);
  const auto par = BooleanFunction::parity(4);
  for (const PrefixCode& code : {PrefixCode{{""}}, PrefixCode{{"0", "1"}}}) {
    for (std::uint64_t mask = 0; mask < 8; ++mask) {
      SubsetS s;
      s.n = 3;
      s.mask = mask;
      CHECK(validate_s_influenceable(prefix_code_attack(maj, code, s), s).ok);
    }
    for (std::uint64_t mask = 0; mask < 16; ++mask) {
      SubsetS s;
      s.n = 4;
      s.mask = mask;
      CHECK(validate_s_influenceable(prefix_code_attack(par, code, s), s).ok);
    }
  }
}

TEST_CASE("prefix attack tables") {
  const auto maj = BooleanFunction::majority(3);
  // empty-word code, S = {1}: first bit copies e, the rest stay fair
  const auto q = prefix_code_attack(maj, {{""}}, SubsetS::from_members(3, {1}));
  REQUIRE(q.valid());
  for (std::uint64_t a = 0; a < 8; ++a)
    for (int e = 0; e < 2; ++e) {
      const int a1 = static_cast<int>(a >> 2);
      CHECK(q.p[a * 2 + static_cast<std::uint64_t>(e)] ==
            (a1 == e ? Rat(1, 8) : Rat(0)));
    }

  // S empty: no bias anywhere
  const auto base = prefix_code_attack(maj, {{""}}, SubsetS::from_members(3, {}));
  CHECK(base.p == uniform_joint(3).p);

  // the biased round must lie in S; otherwise that round stays fair
  const auto partial = prefix_code_attack(maj, {{""}}, SubsetS::from_members(3, {2}));
  CHECK(partial.p == uniform_joint(3).p);  // codeword "" biases round 1 only

  CHECK_THROWS_AS(prefix_code_attack(maj, {{"00", "0"}}, SubsetS::from_members(3, {1})),
                  std::invalid_argument);
  CHECK_THROWS_AS(prefix_code_attack(maj, {{""}}, SubsetS::from_members(4, {1})),
                  std::invalid_argument);
}

TEST_CASE("majority_s drops the largest index when S is even") {
  const auto s12 = SubsetS::from_members(2, {1, 2});
  // effective majority bit: a_1
  CHECK(majority_s(0b10, s12) == 1);
  CHECK(majority_s(0b01, s12) == 0);
  const auto s = SubsetS::from_members(4, {1, 2, 3, 4});
  // drops 4, majority of first three
  CHECK(majority_s(0b0111, s) == 1);
  CHECK(majority_s(0b1100, s) == 1);
  CHECK(majority_s(0b1001, s) == 0);
  CHECK_THROWS_AS(majority_s(0, SubsetS::from_members(3, {})), std::invalid_argument);
}

TEST_CASE("majority attack table") {
  const auto s = SubsetS::from_members(3, {1, 2, 3});
  const auto q = majority_attack(3, s);
  REQUIRE(q.valid());
  for (std::uint64_t a = 0; a < 8; ++a)
    for (int e = 0; e < 2; ++e)
      CHECK(q.p[a * 2 + static_cast<std::uint64_t>(e)] ==
            (majority_s(a, s) == e ? Rat(1, 8) : Rat(0)));
  CHECK_THROWS_AS(majority_attack(3, SubsetS::from_members(3, {})), std::invalid_argument);
}

TEST_CASE("assemble_divisible of uniform members is uniform") {
  std::map<std::uint64_t, ClassicalJoint> family;
  for (std::uint64_t mask = 0; mask < 8; ++mask) family.emplace(mask, uniform_joint(3));
  const auto q = assemble_divisible(family, 3, Rat(1, 10));
  CHECK(q.p == uniform_joint(3).p);
}

TEST_CASE("assemble_divisible of the empty-word prefix family") {
  const auto maj = BooleanFunction::majority(3);
  const auto family = prefix_attack_family(maj, {{""}});
  REQUIRE(family.size() == 8);
  const Rat eps(1, 10);
  const auto q = assemble_divisible(family, 3, eps);
  REQUIRE(q.valid());
  // Q(a, e) = (1 + 2 eps)/16 when a_1 = e, else (1 - 2 eps)/16
  for (std::uint64_t a = 0; a < 8; ++a)
    for (int e = 0; e < 2; ++e) {
      const int a1 = static_cast<int>(a >> 2);
      CHECK(q.p[a * 2 + static_cast<std::uint64_t>(e)] ==
            (a1 == e ? Rat((1 + 2 * eps) / 16) : Rat((1 - 2 * eps) / 16)));
    }
}

TEST_CASE("assemble_divisible endpoints and errors") {
  const auto family = majority_attack_family(3);
  // eps = 0: only the empty subset survives
  CHECK(assemble_divisible(family, 3, Rat(0)).p == family.at(0).p);
  // eps = 1/2: only the full subset survives
  CHECK(assemble_divisible(family, 3, Rat(1, 2)).p == family.at(7).p);

  auto missing = family;
  missing.erase(3);
  CHECK_THROWS_AS(assemble_divisible(missing, 3, Rat(1, 10)), std::invalid_argument);

  auto invalid = family;
  invalid.at(0) = majority_attack(3, SubsetS::from_members(3, {1}));  // not 0-influenceable
  CHECK_THROWS_AS(assemble_divisible(invalid, 3, Rat(1, 10)), std::invalid_argument);
}

TEST_CASE("random_s_influenceable is valid and seed-deterministic") {
  for (int n : {1, 2, 3, 4, 5}) {
    for (std::uint64_t mask : {std::uint64_t(0), (std::uint64_t(1) << n) - 1,
                               std::uint64_t(1), std::uint64_t(1) << (n - 1)}) {
      SubsetS s;
      s.n = n;
      s.mask = mask;
      for (unsigned seed = 1; seed <= 5; ++seed) {
        std::mt19937_64 rng(seed);
        const auto q = random_s_influenceable(n, s, rng);
        const auto chk = validate_s_influenceable(q, s);
        CHECK(chk.ok);
      }
      std::mt19937_64 r1(42), r2(42);
      CHECK(random_s_influenceable(n, s, r1).p == random_s_influenceable(n, s, r2).p);
    }
  }
}

TEST_CASE("code enumeration counts") {
  CHECK(enumerate_complete_codes(0).size() == 1);
  CHECK(enumerate_complete_codes(1).size() == 2);
  CHECK(enumerate_complete_codes(2).size() == 5);
  CHECK(enumerate_complete_codes(3).size() == 26);
  CHECK(enumerate_complete_codes(4).size() == 677);
  CHECK_THROWS_AS(enumerate_complete_codes(5), std::invalid_argument);

  CHECK(enumerate_prefix_codes(0).size() == 1);
  CHECK(enumerate_prefix_codes(1).size() == 4);
  CHECK(enumerate_prefix_codes(2).size() == 25);
  CHECK(enumerate_prefix_codes(3).size() == 676);
  CHECK_THROWS_AS(enumerate_prefix_codes(5), std::invalid_argument);

  for (const auto& code : enumerate_complete_codes(3)) {
    validate_prefix_code(code, 5);
    CHECK(is_complete_code(code));
  }
  int complete = 0;
  for (const auto& code : enumerate_prefix_codes(2)) {
    validate_prefix_code(code, 4);
    if (is_complete_code(code)) ++complete;
  }
  CHECK(complete == 5);  // the complete ones among all depth-2 codes
}

TEST_CASE("attack families") {
  const auto fam = majority_attack_family(3);
  REQUIRE(fam.size() == 8);
  CHECK(fam.at(0).p == uniform_joint(3).p);
  for (const auto& [mask, q] : fam) {
    SubsetS s;
    s.n = 3;
    s.mask = mask;
    CHECK(validate_s_influenceable(q, s).ok);
  }

  const auto pf = prefix_attack_family(BooleanFunction::majority(3), {{"0", "1"}});
  REQUIRE(pf.size() == 8);
  for (const auto& [mask, q] : pf) {
    SubsetS s;
    s.n = 3;
    s.mask = mask;
    CHECK(validate_s_influenceable(q, s).ok);
  }
}

TEST_CASE("build_tons_extension of a uniform joint is a product box") {
  const Box pr = make_pr();
  for (int n : {1, 2}) {
    for (std::uint64_t mask = 0; mask < (std::uint64_t(1) << n); ++mask) {
      SubsetS s;
      s.n = n;
      s.mask = mask;
      const Box ext = build_tons_extension(uniform_joint(n), s, pr);
      std::vector<Box> factors;
      for (int i = 1; i <= n; ++i)
        factors.push_back(s.contains(i) ? make_uniform({{2, 2, 1}, {2, 2, 1}}) : pr);
      const Box expected = append_uniform_eve(tensor(factors));
      CHECK(ext.parties == expected.parties);
      CHECK(ext.table == expected.table);
    }
  }
}

TEST_CASE("build_tons_extension satisfies all three structural claims") {
  // n = 2, S = {1}: Eve reads a_1; round 2 behaves like the v box
  const auto s = SubsetS::from_members(2, {1});
  const auto q = majority_attack(2, SubsetS::from_members(2, {1, 2}));  // e = a_1
  REQUIRE(validate_s_influenceable(q, s).ok);
  const Box pr = make_pr();
  const Box ext = build_tons_extension(q, s, pr);
  REQUIRE(ext.valid());

  // time-ordered conditions hold
  CHECK(check_tons(ext, causal_order_of(ext)).ok());

  // marginal on the two main parties is the round-wise product
  const Box ab = marginal(ext, {0, 1, 2, 3});
  const Box expected_ab = tensor({make_uniform({{2, 2, 1}, {2, 2, 1}}), pr});
  CHECK(ab.table == expected_ab.table);

  // marginal on Alice's rounds plus Eve reproduces the joint at every input
  const Box ae = marginal(ext, {0, 1, 4});
  for (std::size_t I = 0; I < ae.in_dim(); ++I)
    for (std::size_t O = 0; O < ae.out_dim(); ++O) CHECK(ae.at(I, O) == q.p[O]);

  // and the full extension check agrees
  CHECK(check_extension(ext, expected_ab, {0, 1, 2, 3}).ok);
}

TEST_CASE("build_tons_extension with a deterministic joint") {
  const auto s = SubsetS::from_members(1, {1});
  const auto q = majority_attack(1, s);  // e = a_1, both uniform
  const Box ext = build_tons_extension(q, s, make_pr());
  REQUIRE(ext.valid());
  // P(a = e) = 1 at the single input
  Rat agree(0);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      agree += ext.at(0, pack_index(ext.out_dims(), {a, b, a}));
  CHECK(agree == Rat(1));
  CHECK(check_tons(ext, causal_order_of(ext)).ok());
}

TEST_CASE("build_tons_extension input validation") {
  const auto s1 = SubsetS::from_members(2, {2});
  const auto q_bad = majority_attack(2, SubsetS::from_members(2, {1}));  // e = a_1
  CHECK_THROWS_AS(build_tons_extension(q_bad, s1, make_pr()), std::invalid_argument);

  // v box with a deterministic first output is rejected
  Box det = make_box({{2, 2, 1}, {2, 2, 1}});
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y)
      for (int b = 0; b < 2; ++b)
        det.at(pack_index(det.in_dims(), {x, y}),
               pack_index(det.out_dims(), {x, b})) = Rat(1, 2);
  const auto q = uniform_joint(2);
  CHECK_THROWS_AS(build_tons_extension(q, SubsetS::from_members(2, {1}), det),
                  std::invalid_argument);
}
