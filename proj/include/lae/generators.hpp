#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

#include "lae/semantics.hpp"
#include "lae/spaces.hpp"
#include "lae/syntax.hpp"

namespace lae::gen {

using Rng = std::mt19937_64;

inline std::size_t uniform(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

/// Random valid similarity matrix (grade indices, row-major) over n worlds.
inline std::vector<Grade> random_similarity(const GradeScale& s, std::size_t n, Rng& rng) {
  const auto top = s.top().index;
  std::vector<std::uint8_t> sim(n * n, 0);
  for (std::size_t i = 0; i < n; ++i) sim[i * n + i] = top;
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
  std::vector<bool> set(n * n, false);
  for (std::size_t i = 0; i < n; ++i) set[i * n + i] = true;
  auto comb = [&](std::size_t a, std::size_t b, std::size_t c, std::size_t d) {
    return s.combine(Grade{sim[a * n + b]}, Grade{sim[c * n + d]}).index;
  };
  auto ok_at = [&](std::size_t i, std::size_t j) {
    for (std::size_t k = 0; k < n; ++k) {
      if (k == i || k == j || !set[i * n + k] || !set[j * n + k]) continue;
      if (sim[i * n + j] < comb(i, k, k, j) || sim[i * n + k] < comb(i, j, j, k) || sim[j * n + k] < comb(j, i, i, k))
        return false;
    }
    return true;
  };
  // Backtracking with shuffled candidates; all-zero off the diagonal is always valid, so it terminates.
  auto rec = [&](auto&& self, std::size_t idx) -> bool {
    if (idx == pairs.size()) return true;
    const auto [i, j] = pairs[idx];
    std::vector<std::uint8_t> values(top);
    std::iota(values.begin(), values.end(), std::uint8_t{0});
    std::shuffle(values.begin(), values.end(), rng);
    for (auto v : values) {
      sim[i * n + j] = sim[j * n + i] = v;
      set[i * n + j] = set[j * n + i] = true;
      if (ok_at(i, j) && self(self, idx + 1)) return true;
      set[i * n + j] = set[j * n + i] = false;
    }
    return false;
  };
  rec(rec, 0);
  std::vector<Grade> out;
  for (auto v : sim) out.push_back(Grade{v});
  return out;
}

/// Random similarity compatible with the chain whose worlds are listed bottom to top.
inline std::vector<Grade> random_chain_similarity(const GradeScale& s, std::size_t n, Rng& rng) {
  const auto top = s.top().index;
  std::vector<std::uint8_t> sim(n * n, 0);
  for (std::size_t i = 0; i < n; ++i) sim[i * n + i] = top;
  for (std::size_t span = 1; span < n; ++span)
    for (std::size_t a = 0; a + span < n; ++a) {
      const std::size_t c = a + span;
      std::uint8_t lo = 0;
      std::uint8_t hi = static_cast<std::uint8_t>(top - 1);
      if (span > 1) {
        hi = std::min(sim[a * n + c - 1], sim[(a + 1) * n + c]);
        for (std::size_t b = a + 1; b < c; ++b)
          lo = std::max(lo, s.combine(Grade{sim[a * n + b]}, Grade{sim[b * n + c]}).index);
      }
      sim[a * n + c] = sim[c * n + a] = static_cast<std::uint8_t>(uniform(rng, lo, hi));
    }
  std::vector<Grade> out;
  for (auto v : sim) out.push_back(Grade{v});
  return out;
}

/// `k` distinct codes out of 2^bits, in random order.
inline std::vector<std::size_t> distinct_codes(std::size_t bits, std::size_t k, Rng& rng) {
  std::vector<std::size_t> all(std::size_t{1} << bits);
  std::iota(all.begin(), all.end(), std::size_t{0});
  std::shuffle(all.begin(), all.end(), rng);
  all.resize(k);
  return all;
}

/// A random chain of n worlds stored in shuffled world order.
inline ChainSpace random_chain(const ScalePtr& scale, std::size_t n, Rng& rng, const std::string& prefix = "w") {
  const auto pos = random_chain_similarity(*scale, n, rng);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<std::size_t> rank(n);
  for (std::size_t r = 0; r < n; ++r) rank[order[r]] = r;
  std::vector<Grade> sim(n * n);
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = 0; v < n; ++v) sim[u * n + v] = pos[rank[u] * n + rank[v]];
  return ChainSpace(SimilaritySpace(scale, SimilaritySpace::default_names(n, prefix), sim), order);
}

/// Random validated model. Worlds realize distinct m.e.c.s; `max_worlds` bounds plain spaces and each chain.
inline Model random_model(Logic logic, const Signature& sig, const ScalePtr& scale, Rng& rng, std::size_t max_worlds) {
  auto cap = [&](std::size_t bits) { return std::min(max_worlds, std::size_t{1} << std::min<std::size_t>(bits, 20)); };
  if (logic != Logic::laepc) {
    const auto vars = mec_variables(sig, logic);
    const std::size_t n = uniform(rng, 1, cap(vars.size()));
    const auto codes = distinct_codes(vars.size(), n, rng);
    Evaluation ev(sig.size(), WorldSet(n));
    for (std::size_t w = 0; w < n; ++w)
      for (std::size_t j = 0; j < vars.size(); ++j)
        if (mec_literal_positive(codes[w], vars.size(), j)) ev[vars[j]].set(w);
    if (logic == Logic::lae)
      return Model(logic, sig, SimilaritySpace(scale, SimilaritySpace::default_names(n), random_similarity(*scale, n, rng)),
                   std::move(ev));
    return Model(logic, sig, random_chain(scale, n, rng), std::move(ev));
  }
  std::vector<ChainSpace> chains;
  std::vector<std::vector<std::size_t>> codes;
  for (const auto& sort : sig.sorts()) {
    const std::size_t n = uniform(rng, 1, cap(sort.vars.size()));
    codes.push_back(distinct_codes(sort.vars.size(), n, rng));
    chains.push_back(random_chain(scale, n, rng, sort.name.empty() ? "x" : sort.name));
  }
  ProductSpace product(chains);
  const std::size_t n = product.size();
  Evaluation ev(sig.size(), WorldSet(n));
  for (std::size_t i = 0; i < sig.sorts().size(); ++i) {
    const auto& vars = sig.sorts()[i].vars;
    for (std::size_t w = 0; w < n; ++w)
      for (std::size_t j = 0; j < vars.size(); ++j)
        if (mec_literal_positive(codes[i][product.coord(w, i)], vars.size(), j)) ev[vars[j]].set(w);
  }
  for (VarId a : sig.unsorted())
    for (std::size_t w = 0; w < n; ++w)
      if (rng() & 1U) ev[a].set(w);
  return Model(logic, sig, std::move(product), std::move(ev));
}

/// Random basic expression; `ordered` allows diamonds.
inline BasicExpr random_basic(Rng& rng, const std::vector<VarId>& vars, bool ordered, int depth) {
  const std::size_t kinds = depth <= 0 ? 2 : (ordered ? 7 : 5);
  switch (uniform(rng, 0, kinds)) {
    case 0:
    case 1: return ex::var(vars[uniform(rng, 0, vars.size() - 1)]);
    case 2: return (rng() & 1U) ? ex::top() : ex::bottom();
    case 3: return ex::neg(random_basic(rng, vars, ordered, depth - 1));
    case 4: {
      auto a = random_basic(rng, vars, ordered, depth - 1);
      return ex::conj(a, random_basic(rng, vars, ordered, depth - 1));
    }
    case 5: {
      auto a = random_basic(rng, vars, ordered, depth - 1);
      return ex::disj(a, random_basic(rng, vars, ordered, depth - 1));
    }
    case 6: return ex::dle(random_basic(rng, vars, ordered, depth - 1));
    default: return ex::dge(random_basic(rng, vars, ordered, depth - 1));
  }
}

inline Grade random_grade(const GradeScale& s, Rng& rng) {
  return Grade{static_cast<std::uint8_t>(uniform(rng, 0, s.size() - 1))};
}

}  // namespace lae::gen
