#include "nsbox/box.hpp"

#include <algorithm>
#include <cstdlib>
#include <sstream>
#include <stdexcept>

namespace nsbox {

namespace {

std::string digits_str(const std::vector<int>& d) {
  std::ostringstream os;
  os << "(";
  for (std::size_t i = 0; i < d.size(); ++i) os << (i ? "," : "") << d[i];
  os << ")";
  return os.str();
}

void check_party_specs(const std::vector<PartySpec>& parties) {
  if (parties.empty()) throw std::invalid_argument("box needs at least one party");
  for (const auto& p : parties)
    if (p.inputs < 1 || p.outputs < 1 || p.rounds < 1)
      throw std::invalid_argument("party alphabet sizes and rounds must be >= 1");
}

std::size_t guarded_product(const std::vector<int>& dims) {
  std::size_t total = 1;
  for (int d : dims) {
    total *= static_cast<std::size_t>(d);
    if (total > (std::size_t(1) << 40))
      throw std::invalid_argument("table exceeds the entry guard (see NSBOX_MAX_TABLE)");
  }
  return total;
}

}  // namespace

std::vector<int> Box::in_dims() const {
  std::vector<int> d;
  for (const auto& p : parties) d.insert(d.end(), p.rounds, p.inputs);
  return d;
}

std::vector<int> Box::out_dims() const {
  std::vector<int> d;
  for (const auto& p : parties) d.insert(d.end(), p.rounds, p.outputs);
  return d;
}

std::size_t Box::in_dim() const { return guarded_product(in_dims()); }

std::size_t Box::out_dim() const { return guarded_product(out_dims()); }

int Box::systems() const {
  int s = 0;
  for (const auto& p : parties) s += p.rounds;
  return s;
}

bool Box::valid(std::string* why) const {
  const std::size_t id = in_dim(), od = out_dim();
  if (table.size() != id * od) {
    if (why) *why = "table size mismatch";
    return false;
  }
  for (std::size_t i = 0; i < id; ++i) {
    Rat sum(0);
    for (std::size_t o = 0; o < od; ++o) {
      const Rat& v = table[i * od + o];
      if (v < 0) {
        if (why) *why = "negative entry at input " + std::to_string(i);
        return false;
      }
      sum += v;
    }
    if (sum != 1) {
      if (why)
        *why = "input " + std::to_string(i) + " sums to " + format_rat(sum);
      return false;
    }
  }
  return true;
}

std::size_t max_table_entries() {
  if (const char* env = std::getenv("NSBOX_MAX_TABLE")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
    throw std::invalid_argument("NSBOX_MAX_TABLE is not a positive integer");
  }
  return std::size_t(1) << 26;
}

Box make_box(std::vector<PartySpec> parties) {
  check_party_specs(parties);
  Box b;
  b.parties = std::move(parties);
  std::size_t entries = guarded_product(b.in_dims()) * guarded_product(b.out_dims());
  if (entries > max_table_entries())
    throw std::invalid_argument("table with " + std::to_string(entries) +
                                " entries exceeds the guard of " +
                                std::to_string(max_table_entries()) +
                                " (override with NSBOX_MAX_TABLE)");
  b.table.assign(entries, Rat(0));
  return b;
}

std::size_t pack_index(const std::vector<int>& dims, const std::vector<int>& digits) {
  if (dims.size() != digits.size()) throw std::invalid_argument("pack_index: size mismatch");
  std::size_t idx = 0;
  for (std::size_t i = 0; i < dims.size(); ++i) {
    if (digits[i] < 0 || digits[i] >= dims[i])
      throw std::invalid_argument("pack_index: digit out of range");
    idx = idx * static_cast<std::size_t>(dims[i]) + static_cast<std::size_t>(digits[i]);
  }
  return idx;
}

std::vector<int> unpack_index(const std::vector<int>& dims, std::size_t index) {
  std::vector<int> digits(dims.size(), 0);
  for (std::size_t i = dims.size(); i-- > 0;) {
    digits[i] = static_cast<int>(index % static_cast<std::size_t>(dims[i]));
    index /= static_cast<std::size_t>(dims[i]);
  }
  if (index != 0) throw std::invalid_argument("unpack_index: index out of range");
  return digits;
}

Box make_uniform(const std::vector<PartySpec>& parties) {
  Box b = make_box(parties);
  const Rat u = Rat(1) / Rat(static_cast<long>(b.out_dim()));
  for (auto& v : b.table) v = u;
  return b;
}

Box make_pr() {
  Box b = make_box({PartySpec{2, 2, 1}, PartySpec{2, 2, 1}});
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y)
      for (int a = 0; a < 2; ++a)
        for (int bb = 0; bb < 2; ++bb)
          if ((a ^ bb) == (x & y))
            b.at(static_cast<std::size_t>(x * 2 + y),
                 static_cast<std::size_t>(a * 2 + bb)) = Rat(1, 2);
  return b;
}

Box mix_noise(const Box& box, const Rat& eps) {
  if (eps < 0 || eps > Rat(1, 2))
    throw std::invalid_argument("noise level must lie in [0, 1/2], got " + format_rat(eps));
  std::string why;
  if (!box.valid(&why)) throw std::invalid_argument("mix_noise: invalid box: " + why);
  Box out = box;
  const Rat keep = 1 - 2 * eps;
  const Rat u = (2 * eps) / Rat(static_cast<long>(box.out_dim()));
  for (auto& v : out.table) v = keep * v + u;
  return out;
}

Box tensor(const std::vector<Box>& factors) {
  if (factors.empty()) throw std::invalid_argument("tensor: no factors");
  const std::size_t m = factors[0].parties.size();
  for (const auto& f : factors) {
    if (f.parties.size() != m) throw std::invalid_argument("tensor: party count mismatch");
    for (std::size_t j = 0; j < m; ++j) {
      if (f.parties[j].rounds != 1)
        throw std::invalid_argument("tensor: factors must be single-round");
      if (f.parties[j].inputs != factors[0].parties[j].inputs ||
          f.parties[j].outputs != factors[0].parties[j].outputs)
        throw std::invalid_argument("tensor: alphabet mismatch across factors");
    }
  }
  const int rounds = static_cast<int>(factors.size());
  std::vector<PartySpec> parties = factors[0].parties;
  for (auto& p : parties) p.rounds = rounds;
  Box out = make_box(parties);

  const auto in_dims = out.in_dims(), out_dims = out.out_dims();
  std::vector<int> fin(m), fout(m);
  for (std::size_t I = 0; I < out.in_dim(); ++I) {
    const auto xs = unpack_index(in_dims, I);
    for (std::size_t O = 0; O < out.out_dim(); ++O) {
      const auto as = unpack_index(out_dims, O);
      Rat v(1);
      for (int f = 0; f < rounds && v != 0; ++f) {
        for (std::size_t j = 0; j < m; ++j) {
          fin[j] = xs[j * rounds + f];
          fout[j] = as[j * rounds + f];
        }
        const Box& fb = factors[static_cast<std::size_t>(f)];
        v *= fb.at(pack_index(fb.in_dims(), fin), pack_index(fb.out_dims(), fout));
      }
      out.at(I, O) = v;
    }
  }
  return out;
}

namespace {

struct SplitPlan {
  std::vector<int> keep;                 // ascending kept system indices
  std::vector<int> kept_in, kept_out;    // dims
  std::vector<int> disc_in, disc_out;
  std::vector<PartySpec> kept_parties;
};

SplitPlan split_plan(const Box& box, const std::vector<int>& keep_arg) {
  SplitPlan p;
  p.keep = keep_arg;
  std::sort(p.keep.begin(), p.keep.end());
  p.keep.erase(std::unique(p.keep.begin(), p.keep.end()), p.keep.end());
  if (p.keep.empty()) throw std::invalid_argument("marginal: empty keep set");
  if (p.keep.front() < 0 || p.keep.back() >= box.systems())
    throw std::invalid_argument("marginal: system index out of range");

  const auto in_dims = box.in_dims(), out_dims = box.out_dims();
  std::size_t ki = 0;
  for (int s = 0; s < box.systems(); ++s) {
    if (ki < p.keep.size() && p.keep[ki] == s) {
      p.kept_in.push_back(in_dims[s]);
      p.kept_out.push_back(out_dims[s]);
      ++ki;
    } else {
      p.disc_in.push_back(in_dims[s]);
      p.disc_out.push_back(out_dims[s]);
    }
  }

  int sys = 0;
  ki = 0;
  for (const auto& party : box.parties) {
    int kept_rounds = 0;
    for (int r = 0; r < party.rounds; ++r, ++sys)
      if (ki < p.keep.size() && p.keep[ki] == sys) {
        ++kept_rounds;
        ++ki;
      }
    if (kept_rounds > 0)
      p.kept_parties.push_back({party.inputs, party.outputs, kept_rounds});
  }
  return p;
}

// acc[(K * D_in + D) * K_out + KO] = sum over discarded outputs
std::vector<Rat> accumulate_split(const Box& box, const SplitPlan& p) {
  const auto in_dims = box.in_dims(), out_dims = box.out_dims();
  const std::size_t K_in = guarded_product(p.kept_in), D_in = guarded_product(p.disc_in);
  const std::size_t K_out = guarded_product(p.kept_out);
  std::vector<Rat> acc(K_in * D_in * K_out, Rat(0));
  std::vector<int> kd(p.kept_in.size()), dd(p.disc_in.size());
  std::vector<int> ko(p.kept_out.size()), doo(p.disc_out.size());
  for (std::size_t I = 0; I < box.in_dim(); ++I) {
    const auto xs = unpack_index(in_dims, I);
    std::size_t ki = 0, di = 0;
    for (int s = 0; s < box.systems(); ++s) {
      if (ki < p.keep.size() && p.keep[static_cast<std::size_t>(ki)] == s)
        kd[ki++] = xs[static_cast<std::size_t>(s)];
      else
        dd[di++] = xs[static_cast<std::size_t>(s)];
    }
    const std::size_t K = pack_index(p.kept_in, kd), D = pack_index(p.disc_in, dd);
    for (std::size_t O = 0; O < box.out_dim(); ++O) {
      const auto as = unpack_index(out_dims, O);
      std::size_t ko_i = 0, do_i = 0;
      for (int s = 0; s < box.systems(); ++s) {
        if (ko_i < p.keep.size() && p.keep[ko_i] == s)
          ko[ko_i++] = as[static_cast<std::size_t>(s)];
        else
          doo[do_i++] = as[static_cast<std::size_t>(s)];
      }
      acc[(K * D_in + D) * K_out + pack_index(p.kept_out, ko)] += box.at(I, O);
    }
  }
  return acc;
}

}  // namespace

Box marginal(const Box& box, const std::vector<int>& keep) {
  const SplitPlan p = split_plan(box, keep);
  const std::size_t K_in = guarded_product(p.kept_in), D_in = guarded_product(p.disc_in);
  const std::size_t K_out = guarded_product(p.kept_out);
  const auto acc = accumulate_split(box, p);
  for (std::size_t K = 0; K < K_in; ++K)
    for (std::size_t D = 1; D < D_in; ++D)
      for (std::size_t KO = 0; KO < K_out; ++KO) {
        const Rat& a = acc[(K * D_in + 0) * K_out + KO];
        const Rat& b = acc[(K * D_in + D) * K_out + KO];
        if (a != b) {
          std::ostringstream os;
          os << "signalling into kept systems: kept input "
             << digits_str(unpack_index(p.kept_in, K)) << ", kept output "
             << digits_str(unpack_index(p.kept_out, KO)) << ": marginal is "
             << format_rat(a) << " under discarded inputs "
             << digits_str(unpack_index(p.disc_in, 0)) << " but "
             << format_rat(b) << " under "
             << digits_str(unpack_index(p.disc_in, D));
          throw std::runtime_error(os.str());
        }
      }
  Box out = make_box(p.kept_parties);
  for (std::size_t K = 0; K < K_in; ++K)
    for (std::size_t KO = 0; KO < K_out; ++KO)
      out.at(K, KO) = acc[(K * D_in + 0) * K_out + KO];
  return out;
}

Box marginal_fixing(const Box& box, const std::vector<int>& keep,
                    const std::vector<int>& discarded_inputs) {
  const SplitPlan p = split_plan(box, keep);
  const std::size_t D = pack_index(p.disc_in, discarded_inputs);
  const std::size_t D_in = guarded_product(p.disc_in);
  const std::size_t K_in = guarded_product(p.kept_in), K_out = guarded_product(p.kept_out);
  const auto acc = accumulate_split(box, p);
  Box out = make_box(p.kept_parties);
  for (std::size_t K = 0; K < K_in; ++K)
    for (std::size_t KO = 0; KO < K_out; ++KO)
      out.at(K, KO) = acc[(K * D_in + D) * K_out + KO];
  return out;
}

VCheck is_valid_v_box(const Box& box) {
  if (box.parties.size() != 2 || box.parties[0].rounds != 1 || box.parties[1].rounds != 1)
    return {false, "expected a bipartite single-round box"};
  if (box.parties[0].outputs != 2)
    return {false, "first party's output alphabet must be binary"};
  std::string why;
  if (!box.valid(&why)) return {false, "invalid table: " + why};

  const int X = box.parties[0].inputs, Y = box.parties[1].inputs;
  const int A = box.parties[0].outputs, B = box.parties[1].outputs;
  // first party's marginal independent of y, and uniform
  for (int x = 0; x < X; ++x)
    for (int a = 0; a < A; ++a) {
      for (int y = 0; y < Y; ++y) {
        Rat m(0);
        for (int b = 0; b < B; ++b)
          m += box.at(static_cast<std::size_t>(x * Y + y),
                      static_cast<std::size_t>(a * B + b));
        if (m != Rat(1, 2))
          return {false, "first-party marginal P(a=" + std::to_string(a) + "|x=" +
                             std::to_string(x) + ",y=" + std::to_string(y) + ") = " +
                             format_rat(m) + ", want 1/2"};
      }
    }
  // second party's marginal independent of x
  for (int y = 0; y < Y; ++y)
    for (int b = 0; b < B; ++b) {
      Rat first(0);
      for (int x = 0; x < X; ++x) {
        Rat m(0);
        for (int a = 0; a < A; ++a)
          m += box.at(static_cast<std::size_t>(x * Y + y),
                      static_cast<std::size_t>(a * B + b));
        if (x == 0)
          first = m;
        else if (m != first)
          return {false, "second-party marginal P(b=" + std::to_string(b) + "|y=" +
                             std::to_string(y) + ") depends on x: " + format_rat(first) +
                             " vs " + format_rat(m)};
      }
    }
  return {true, ""};
}

Box append_uniform_eve(const Box& box) {
  std::vector<PartySpec> parties = box.parties;
  parties.push_back({1, 2, 1});
  Box out = make_box(parties);
  const std::size_t od = box.out_dim();
  for (std::size_t I = 0; I < box.in_dim(); ++I)
    for (std::size_t O = 0; O < od; ++O)
      for (std::size_t e = 0; e < 2; ++e)
        out.at(I, O * 2 + e) = box.at(I, O) / 2;
  return out;
}

}  // namespace nsbox
