#pragma once

#include <algorithm>
#include <cstddef>
#include <string>
#include <vector>

#include "lae/errors.hpp"
#include "lae/semantics.hpp"
#include "lae/spaces.hpp"
#include "lae/syntax.hpp"

namespace lae {

struct CanonicalResult {
  Model model;
  std::vector<std::size_t> witness;  // input world -> canonical world
  bool isomorphic = false;
};

namespace detail {

/// Largest grade c with m |= d =>{c} e.
inline Grade max_grade(const Model& m, const BasicExpr& d, const BasicExpr& e) {
  Grade best = m.scale().bottom();
  for (Grade c : m.scale().grades())
    if (sat_gimp(m, GradedImplication{d, c, e})) best = std::max(best, c);
  return best;
}

/// Non-contradictory m.e.c.s over `vars`, in enumeration order.
inline std::vector<BasicExpr> realized_mecs(const Model& m, const std::vector<VarId>& vars) {
  std::vector<BasicExpr> out;
  for (auto& d : enumerate_mecs_over(vars))
    if (!sat_gimp(m, GradedImplication{d, m.scale().top(), ex::bottom()})) out.push_back(std::move(d));
  return out;
}

/// Chain over the given m.e.c.s: similarity by maximal grade, order by d =>{1} dle e.
inline ChainSpace canonical_chain(const Model& m, const std::vector<BasicExpr>& mecs, const std::string& prefix) {
  const std::size_t n = mecs.size();
  std::vector<Grade> sim(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) sim[i * n + j] = max_grade(m, mecs[i], mecs[j]);
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  auto below = [&](std::size_t i, std::size_t j) {
    return i != j && sat_gimp(m, GradedImplication{mecs[i], m.scale().top(), ex::dle(mecs[j])});
  };
  std::stable_sort(order.begin(), order.end(), below);
  return ChainSpace(SimilaritySpace(m.base().scale_ptr(), SimilaritySpace::default_names(n, prefix), sim), order);
}

/// Index of the unique m.e.c. whose extension contains w; DegenerateModel if it is not exactly {w}.
inline std::size_t mec_of_world(const Model& m, const std::vector<BasicExpr>& mecs, std::size_t w, bool singleton) {
  for (std::size_t i = 0; i < mecs.size(); ++i) {
    const auto e = eval_basic(m, mecs[i]);
    if (!e.test(w)) continue;
    if (singleton && e.count() != 1) throw DegenerateModel("world " + m.base().name(w) + " shares its m.e.c.");
    return i;
  }
  throw DegenerateModel("world " + m.base().name(w) + " realizes no m.e.c.");
}

inline bool same_model_under(const Model& a, const Model& b, const std::vector<std::size_t>& f) {
  const std::size_t n = a.size();
  if (b.size() != n || f.size() != n) return false;
  std::vector<bool> hit(n, false);
  for (auto x : f) {
    if (x >= n || hit[x]) return false;
    hit[x] = true;
  }
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = 0; v < n; ++v)
      if (a.base().sim(u, v) != b.base().sim(f[u], f[v])) return false;
  for (VarId p = 0; p < a.evaluation().size(); ++p)
    for (std::size_t u = 0; u < n; ++u)
      if (a.evaluation()[p].test(u) != b.evaluation()[p].test(f[u])) return false;
  const auto* ca = std::get_if<ChainSpace>(&a.space());
  const auto* cb = std::get_if<ChainSpace>(&b.space());
  const auto* pa = std::get_if<ProductSpace>(&a.space());
  const auto* pb = std::get_if<ProductSpace>(&b.space());
  if ((ca == nullptr) != (cb == nullptr) || (pa == nullptr) != (pb == nullptr)) return false;
  if (pa && pa->dimension() != pb->dimension()) return false;
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = 0; v < n; ++v) {
      if (ca && ca->leq(u, v) != cb->leq(f[u], f[v])) return false;
      if (pa)
        for (std::size_t i = 0; i < pa->dimension(); ++i)
          if (pa->leq(i, u, v) != pb->leq(i, f[u], f[v])) return false;
    }
  return true;
}

}  // namespace detail

/// Rebuilds a model from its own satisfaction relation: worlds are the realized m.e.c.s,
/// similarity the largest grade with d =>{c} e, and the order comes from d =>{1} dle e.
inline CanonicalResult canonical_space(const Model& m, Logic logic) {
  if (m.logic() != logic) throw VariantError("model was validated for a different logic");
  const auto& sig = m.signature();
  const auto scale = m.base().scale_ptr();
  std::vector<std::size_t> witness(m.size());

  if (logic != Logic::laepc) {
    const auto mecs = detail::realized_mecs(m, mec_variables(sig, logic));
    const std::size_t n = mecs.size();
    for (std::size_t w = 0; w < m.size(); ++w) witness[w] = detail::mec_of_world(m, mecs, w, true);
    Evaluation ev(sig.size(), WorldSet(n));
    for (std::size_t i = 0; i < n; ++i)
      for (VarId p = 0; p < sig.size(); ++p)
        if (sat_gimp(m, GradedImplication{mecs[i], scale->top(), ex::var(p)})) ev[p].set(i);
    Space space;
    if (logic == Logic::lae) {
      std::vector<Grade> sim(n * n);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) sim[i * n + j] = detail::max_grade(m, mecs[i], mecs[j]);
      space = SimilaritySpace(scale, SimilaritySpace::default_names(n), sim);
    } else {
      space = detail::canonical_chain(m, mecs, "w");
    }
    Model out(logic, sig, std::move(space), std::move(ev));
    const bool iso = detail::same_model_under(m, out, witness);
    return {std::move(out), std::move(witness), iso};
  }

  const std::size_t dims = sig.sorts().size();
  std::vector<std::vector<BasicExpr>> mecs(dims);
  std::vector<ChainSpace> chains;
  for (std::size_t i = 0; i < dims; ++i) {
    mecs[i] = detail::realized_mecs(m, sig.sorts()[i].vars);
    std::string prefix = sig.sorts()[i].name;
    if (prefix.empty()) prefix = "s" + std::to_string(i + 1) + "_";
    chains.push_back(detail::canonical_chain(m, mecs[i], prefix));
  }
  ProductSpace product(chains);
  const std::size_t n = product.size();
  Evaluation ev(sig.size(), WorldSet(n));
  for (std::size_t w = 0; w < n; ++w) {
    BasicExpr cell = mecs[0][product.coord(w, 0)];
    for (std::size_t i = 1; i < dims; ++i) cell = ex::conj(cell, mecs[i][product.coord(w, i)]);
    for (VarId p = 0; p < sig.size(); ++p)
      if (sat_gimp(m, GradedImplication{cell, scale->top(), ex::var(p)})) ev[p].set(w);
  }
  for (std::size_t w = 0; w < m.size(); ++w) {
    std::vector<std::size_t> tuple(dims);
    for (std::size_t i = 0; i < dims; ++i) tuple[i] = detail::mec_of_world(m, mecs[i], w, false);
    witness[w] = product.world_of(tuple);
  }
  Model out(logic, sig, std::move(product), std::move(ev));
  const bool iso = detail::same_model_under(m, out, witness);
  return {std::move(out), std::move(witness), iso};
}

}  // namespace lae
