#include "nsbox/verify.hpp"

#include <algorithm>
#include <stdexcept>

namespace nsbox {

namespace {

std::size_t dims_product(const std::vector<int>& dims) {
  std::size_t t = 1;
  for (int d : dims) t *= static_cast<std::size_t>(d);
  return t;
}

}  // namespace

CausalOrder causal_order_of(const Box& box) {
  CausalOrder o;
  for (const auto& p : box.parties) o.per_party_rounds.push_back(p.rounds);
  return o;
}

ViolationReport check_no_signalling(const Box& box, const std::vector<int>& from,
                                    const std::vector<int>& to) {
  std::vector<int> f = from, t = to;
  std::sort(f.begin(), f.end());
  std::sort(t.begin(), t.end());
  for (int s : f)
    if (std::binary_search(t.begin(), t.end(), s))
      throw std::invalid_argument("check_no_signalling: sets overlap");
  const int S = box.systems();
  for (int s : f)
    if (s < 0 || s >= S) throw std::invalid_argument("check_no_signalling: index out of range");
  for (int s : t)
    if (s < 0 || s >= S) throw std::invalid_argument("check_no_signalling: index out of range");
  std::string why;
  if (!box.valid(&why)) throw std::invalid_argument("check_no_signalling: invalid box: " + why);

  const auto in_dims = box.in_dims(), out_dims = box.out_dims();
  std::vector<int> from_in, to_in, rest_in, to_out;
  std::vector<char> cls(static_cast<std::size_t>(S), 'r');
  for (int s : f) cls[static_cast<std::size_t>(s)] = 'f';
  for (int s : t) cls[static_cast<std::size_t>(s)] = 't';
  for (int s = 0; s < S; ++s) {
    if (cls[static_cast<std::size_t>(s)] == 'f') from_in.push_back(in_dims[s]);
    if (cls[static_cast<std::size_t>(s)] == 't') {
      to_in.push_back(in_dims[s]);
      to_out.push_back(out_dims[s]);
    }
    if (cls[static_cast<std::size_t>(s)] == 'r') rest_in.push_back(in_dims[s]);
  }
  const std::size_t F = dims_product(from_in), G = dims_product(to_in) * dims_product(rest_in);
  const std::size_t TO = dims_product(to_out);

  // acc[(group * F + f) * TO + to_output]
  std::vector<Rat> acc(G * F * TO, Rat(0));
  std::vector<int> fd(from_in.size()), td(to_in.size()), rd(rest_in.size()), tod(to_out.size());
  for (std::size_t I = 0; I < box.in_dim(); ++I) {
    const auto xs = unpack_index(in_dims, I);
    std::size_t fi = 0, ti = 0, ri = 0;
    for (int s = 0; s < S; ++s) {
      char c = cls[static_cast<std::size_t>(s)];
      if (c == 'f') fd[fi++] = xs[static_cast<std::size_t>(s)];
      else if (c == 't') td[ti++] = xs[static_cast<std::size_t>(s)];
      else rd[ri++] = xs[static_cast<std::size_t>(s)];
    }
    const std::size_t Fi = pack_index(from_in, fd);
    const std::size_t Gi = pack_index(to_in, td) * dims_product(rest_in) + pack_index(rest_in, rd);
    for (std::size_t O = 0; O < box.out_dim(); ++O) {
      const auto as = unpack_index(out_dims, O);
      std::size_t toi = 0;
      for (int s = 0; s < S; ++s)
        if (cls[static_cast<std::size_t>(s)] == 't') tod[toi++] = as[static_cast<std::size_t>(s)];
      acc[(Gi * F + Fi) * TO + pack_index(to_out, tod)] += box.at(I, O);
    }
  }

  // reconstructs the full input digit vector for (group, from-setting)
  auto full_inputs = [&](std::size_t Gi, std::size_t Fi) {
    const auto td2 = unpack_index(to_in, Gi / dims_product(rest_in));
    const auto rd2 = unpack_index(rest_in, Gi % dims_product(rest_in));
    const auto fd2 = unpack_index(from_in, Fi);
    std::vector<int> xs(static_cast<std::size_t>(S));
    std::size_t fi = 0, ti = 0, ri = 0;
    for (int s = 0; s < S; ++s) {
      char c = cls[static_cast<std::size_t>(s)];
      xs[static_cast<std::size_t>(s)] = c == 'f' ? fd2[fi++] : c == 't' ? td2[ti++] : rd2[ri++];
    }
    return xs;
  };

  ViolationReport rep;
  for (std::size_t Gi = 0; Gi < G; ++Gi)
    for (std::size_t f1 = 0; f1 < F; ++f1)
      for (std::size_t f2 = f1 + 1; f2 < F; ++f2)
        for (std::size_t o = 0; o < TO; ++o) {
          ++rep.checked;
          const Rat& a = acc[(Gi * F + f1) * TO + o];
          const Rat& b = acc[(Gi * F + f2) * TO + o];
          if (a != b) {
            Violation v;
            v.kind = "ns";
            v.inputs_a = full_inputs(Gi, f1);
            v.inputs_b = full_inputs(Gi, f2);
            v.outputs = unpack_index(to_out, o);
            v.lhs = a;
            v.rhs = b;
            rep.violations.push_back(std::move(v));
          }
        }
  return rep;
}

ViolationReport check_tons(const Box& box, const CausalOrder& order, TonsMode mode) {
  if (box.parties.size() != 3) throw std::invalid_argument("check_tons: expected 3 parties");
  const int n = box.parties[0].rounds;
  if (box.parties[1].rounds != n)
    throw std::invalid_argument("check_tons: first two parties must have equal rounds");
  if (box.parties[2].rounds != 1 || box.parties[2].inputs != 1)
    throw std::invalid_argument("check_tons: third party must be one input-free round");
  if (order.per_party_rounds != std::vector<int>{n, n, 1})
    throw std::invalid_argument("check_tons: causal order does not match the box shape");
  std::string why;
  if (!box.valid(&why)) throw std::invalid_argument("check_tons: invalid box: " + why);

  const bool all_pairs = mode == TonsMode::AllPairs || (mode == TonsMode::Auto && n <= 2);
  const auto in_dims = box.in_dims(), out_dims = box.out_dims();
  const int S = box.systems();  // 2n + 1

  ViolationReport rep;
  for (int i = 0; i <= n; ++i)
    for (int j = 0; j <= n; ++j)
      for (int k = 0; k <= 1; ++k) {
        // kept systems: A rounds < i, B rounds < j, Eve iff k = 1
        std::vector<char> kept(static_cast<std::size_t>(S), 0);
        for (int s = 0; s < i; ++s) kept[static_cast<std::size_t>(s)] = 1;
        for (int s = 0; s < j; ++s) kept[static_cast<std::size_t>(n + s)] = 1;
        if (k == 1) kept[static_cast<std::size_t>(2 * n)] = 1;

        std::vector<int> past_in, future_in, kept_out;
        for (int s = 0; s < S; ++s) {
          const bool past_input = (s < n && s < i) || (s >= n && s < 2 * n && s - n < j) ||
                                  (s == 2 * n && k == 1);
          if (past_input) past_in.push_back(in_dims[s]);
          else future_in.push_back(in_dims[s]);
          if (kept[static_cast<std::size_t>(s)]) kept_out.push_back(out_dims[s]);
        }
        const std::size_t G = dims_product(past_in), F = dims_product(future_in);
        const std::size_t KO = dims_product(kept_out);

        std::vector<Rat> acc(G * F * KO, Rat(0));
        std::vector<int> pd(past_in.size()), fd(future_in.size()), kd(kept_out.size());
        for (std::size_t I = 0; I < box.in_dim(); ++I) {
          const auto xs = unpack_index(in_dims, I);
          std::size_t pi = 0, fi = 0;
          for (int s = 0; s < S; ++s) {
            const bool past_input = (s < n && s < i) || (s >= n && s < 2 * n && s - n < j) ||
                                    (s == 2 * n && k == 1);
            if (past_input) pd[pi++] = xs[static_cast<std::size_t>(s)];
            else fd[fi++] = xs[static_cast<std::size_t>(s)];
          }
          const std::size_t Gi = pack_index(past_in, pd);
          const std::size_t Fi = pack_index(future_in, fd);
          for (std::size_t O = 0; O < box.out_dim(); ++O) {
            const auto as = unpack_index(out_dims, O);
            std::size_t ki = 0;
            for (int s = 0; s < S; ++s)
              if (kept[static_cast<std::size_t>(s)]) kd[ki++] = as[static_cast<std::size_t>(s)];
            acc[(Gi * F + Fi) * KO + pack_index(kept_out, kd)] += box.at(I, O);
          }
        }

        auto full_inputs = [&](std::size_t Gi, std::size_t Fi) {
          const auto pd2 = unpack_index(past_in, Gi);
          const auto fd2 = unpack_index(future_in, Fi);
          std::vector<int> xs(static_cast<std::size_t>(S));
          std::size_t pi = 0, fi = 0;
          for (int s = 0; s < S; ++s) {
            const bool past_input = (s < n && s < i) || (s >= n && s < 2 * n && s - n < j) ||
                                    (s == 2 * n && k == 1);
            xs[static_cast<std::size_t>(s)] = past_input ? pd2[pi++] : fd2[fi++];
          }
          return xs;
        };

        auto compare = [&](std::size_t Gi, std::size_t f1, std::size_t f2) {
          for (std::size_t o = 0; o < KO; ++o) {
            ++rep.checked;
            const Rat& a = acc[(Gi * F + f1) * KO + o];
            const Rat& b = acc[(Gi * F + f2) * KO + o];
            if (a != b) {
              Violation v;
              v.kind = "tons";
              v.i = i;
              v.j = j;
              v.k = k;
              v.inputs_a = full_inputs(Gi, f1);
              v.inputs_b = full_inputs(Gi, f2);
              v.outputs = unpack_index(kept_out, o);
              v.lhs = a;
              v.rhs = b;
              rep.violations.push_back(std::move(v));
            }
          }
        };

        for (std::size_t Gi = 0; Gi < G; ++Gi) {
          if (all_pairs) {
            for (std::size_t f1 = 0; f1 < F; ++f1)
              for (std::size_t f2 = f1 + 1; f2 < F; ++f2) compare(Gi, f1, f2);
          } else {
            for (std::size_t f2 = 1; f2 < F; ++f2) compare(Gi, 0, f2);
          }
        }
      }
  return rep;
}

ExtensionCheck check_extension(const Box& extension, const Box& base,
                               const std::vector<int>& kept) {
  std::vector<int> keep = kept;
  std::sort(keep.begin(), keep.end());
  keep.erase(std::unique(keep.begin(), keep.end()), keep.end());
  std::vector<int> rest;
  for (int s = 0; s < extension.systems(); ++s)
    if (!std::binary_search(keep.begin(), keep.end(), s)) rest.push_back(s);

  ExtensionCheck out;
  if (!rest.empty()) {
    ViolationReport r1 = check_no_signalling(extension, rest, keep);
    ViolationReport r2 = check_no_signalling(extension, keep, rest);
    out.report.checked = r1.checked + r2.checked;
    out.report.violations = std::move(r1.violations);
    out.report.violations.insert(out.report.violations.end(),
                                 r2.violations.begin(), r2.violations.end());
  }
  if (!out.report.ok()) {
    out.ok = false;
    return out;
  }

  const std::vector<int> rest_dims = [&] {
    std::vector<int> d;
    const auto in_dims = extension.in_dims();
    for (int s : rest) d.push_back(in_dims[static_cast<std::size_t>(s)]);
    return d;
  }();
  Box marg = marginal_fixing(extension, keep, std::vector<int>(rest_dims.size(), 0));
  if (marg.parties != base.parties)
    throw std::invalid_argument("check_extension: kept systems do not match the base shape");
  const std::size_t od = marg.out_dim();
  for (std::size_t I = 0; I < marg.in_dim(); ++I)
    for (std::size_t O = 0; O < od; ++O) {
      ++out.report.checked;
      if (marg.at(I, O) != base.at(I, O)) {
        Violation v;
        v.kind = "marginal";
        v.inputs_a = unpack_index(marg.in_dims(), I);
        v.outputs = unpack_index(marg.out_dims(), O);
        v.lhs = marg.at(I, O);
        v.rhs = base.at(I, O);
        out.report.violations.push_back(std::move(v));
      }
    }
  out.ok = out.report.ok();
  return out;
}

}  // namespace nsbox
