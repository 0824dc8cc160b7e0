#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "nsbox/rational.hpp"

namespace nsbox {

// One party holding `rounds` time-ordered subsystems, each with the same
// input/output alphabet.
struct PartySpec {
  int inputs = 1;
  int outputs = 2;
  int rounds = 1;

  bool operator==(const PartySpec&) const = default;
};

// Conditional probability table P(outputs | inputs) over the flattened system
// list (party-major, then round order). Index layout is row-major over the
// tuple (all inputs, then all outputs), earlier systems most significant,
// symbol 0 first:
//   table[input_index * out_dim() + output_index]
struct Box {
  std::vector<PartySpec> parties;
  std::vector<Rat> table;

  std::vector<int> in_dims() const;   // per-system input alphabet sizes
  std::vector<int> out_dims() const;  // per-system output alphabet sizes
  std::size_t in_dim() const;
  std::size_t out_dim() const;
  int systems() const;

  const Rat& at(std::size_t input_index, std::size_t output_index) const {
    return table[input_index * out_dim() + output_index];
  }
  Rat& at(std::size_t input_index, std::size_t output_index) {
    return table[input_index * out_dim() + output_index];
  }

  // Nonnegative entries, each input row summing to exactly 1.
  bool valid(std::string* why = nullptr) const;
};

// Allocates a zeroed box of the given shape, enforcing the entry-count guard.
Box make_box(std::vector<PartySpec> parties);

// Mixed-radix big-endian packing of digit tuples.
std::size_t pack_index(const std::vector<int>& dims, const std::vector<int>& digits);
std::vector<int> unpack_index(const std::vector<int>& dims, std::size_t index);

// Entry-count guard: 2^26 by default, overridable via env NSBOX_MAX_TABLE.
std::size_t max_table_entries();

Box make_uniform(const std::vector<PartySpec>& parties);

// The bipartite binary box with P(ab|xy) = 1/2 iff a xor b = x.y, else 0.
Box make_pr();

// (1-2e) * box + 2e * uniform, entrywise. Requires 0 <= e <= 1/2.
Box mix_noise(const Box& box, const Rat& eps);

// Round-wise product: every factor contributes one round to each party.
// Factors must agree on party count and per-party alphabets and be
// single-round.
Box tensor(const std::vector<Box>& factors);

// Marginal onto the kept systems (flattened indices, any order; result uses
// ascending order). Verifies that the result is independent of the discarded
// systems' inputs and throws std::runtime_error naming the violated equality
// otherwise.
Box marginal(const Box& box, const std::vector<int>& keep);

// Same marginal but with the discarded inputs pinned to a given setting and
// no independence check. `discarded_inputs` lists digits for the discarded
// systems in ascending system order.
Box marginal_fixing(const Box& box, const std::vector<int>& keep,
                    const std::vector<int>& discarded_inputs);

struct VCheck {
  bool ok = false;
  std::string diagnostic;
};

// True iff box is a valid bipartite single-round box, no-signalling in both
// directions, with binary uniformly distributed first-party output.
VCheck is_valid_v_box(const Box& box);

// Adjoins an input-free uniform binary party ("Eve") to the box.
Box append_uniform_eve(const Box& box);

}  // namespace nsbox
