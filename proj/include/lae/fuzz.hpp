#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "lae/errors.hpp"
#include "lae/generators.hpp"
#include "lae/proofs.hpp"
#include "lae/semantics.hpp"
#include "lae/spaces.hpp"
#include "lae/syntax.hpp"

namespace lae::fuzz {

using gen::Rng;

/// Outcome of one property suite.
struct Report {
  std::string suite;
  std::size_t checks = 0;
  std::size_t violations = 0;
  std::vector<std::string> examples;  // first few violations

  template <class Describe>
  void record(bool ok, Describe&& describe) {
    ++checks;
    if (ok) return;
    ++violations;
    if (examples.size() < 3) examples.push_back(describe());
  }
  bool passed() const { return violations == 0; }
};

/// Spaces with the evaluations to try on each. All models of a family share one signature and scale.
struct Family {
  std::string name;
  Logic logic = Logic::lae;
  Signature sig;
  ScalePtr scale;
  std::vector<std::pair<Space, std::vector<Evaluation>>> cases;

  std::size_t model_count() const {
    std::size_t n = 0;
    for (const auto& c : cases) n += c.second.size();
    return n;
  }
  template <class F>
  void for_each_model(F&& f) const {
    for (const auto& [space, evs] : cases)
      for (const auto& ev : evs) f(space, ev);
  }
};

inline Signature two_variables() { return Signature::single({"p", "q"}); }

/// Sort A {p, q}, sort B {r}, unsorted u.
inline Signature product_signature() {
  Signature sig;
  sig.add_sort("A", {"p", "q"});
  sig.add_sort("B", {"r"});
  sig.add_unsorted({"u"});
  return sig;
}

namespace detail {

/// Every matrix over n worlds with top on the diagonal that passes `keep`.
inline std::vector<std::vector<Grade>> matrices(const GradeScale& s, std::size_t n,
                                                const std::function<bool(const std::vector<Grade>&)>& keep) {
  std::vector<std::vector<Grade>> out;
  const std::size_t pairs = n * (n - 1) / 2;
  std::vector<std::uint8_t> digits(pairs, 0);
  while (true) {
    std::vector<Grade> sim(n * n, s.top());
    std::size_t k = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j, ++k) sim[i * n + j] = sim[j * n + i] = Grade{digits[k]};
    if (keep(sim)) out.push_back(std::move(sim));
    std::size_t i = 0;
    while (i < pairs && ++digits[i] == s.size()) digits[i++] = 0;
    if (i == pairs) break;
  }
  return out;
}

inline std::vector<SimilaritySpace> all_spaces(const ScalePtr& scale, std::size_t n, const std::string& prefix = "w") {
  std::vector<SimilaritySpace> out;
  const auto names = SimilaritySpace::default_names(n, prefix);
  for (auto& m : matrices(*scale, n, [&](const auto& sim) { return SimilaritySpace(scale, names, sim).is_valid(); }))
    out.emplace_back(scale, names, std::move(m));
  return out;
}

/// Chains in identity order (world index = position) with every compatible similarity.
inline std::vector<ChainSpace> all_chains(const ScalePtr& scale, std::size_t n, const std::string& prefix = "w") {
  std::vector<ChainSpace> out;
  for (const auto& s : all_spaces(scale, n, prefix)) {
    auto c = ChainSpace::identity_order(s);
    if (c.is_valid()) out.push_back(std::move(c));
  }
  return out;
}

/// Ordered selections of k distinct codes out of 2^bits; `ordered` false keeps increasing ones only.
inline std::vector<std::vector<std::size_t>> code_selections(std::size_t bits, std::size_t k, bool ordered) {
  std::vector<std::vector<std::size_t>> out;
  const std::size_t total = std::size_t{1} << bits;
  std::vector<std::size_t> pick;
  auto rec = [&](auto&& self) -> void {
    if (pick.size() == k) {
      out.push_back(pick);
      return;
    }
    for (std::size_t c = 0; c < total; ++c) {
      if (std::find(pick.begin(), pick.end(), c) != pick.end()) continue;
      if (!ordered && !pick.empty() && c < pick.back()) continue;
      pick.push_back(c);
      self(self);
      pick.pop_back();
    }
  };
  rec(rec);
  return out;
}

/// Evaluation of `vars` where world w realizes m.e.c. code codes[w].
inline void assign_codes(Evaluation& ev, const std::vector<VarId>& vars, const std::vector<std::size_t>& codes,
                         const std::function<std::size_t(std::size_t)>& coord, std::size_t worlds) {
  for (std::size_t w = 0; w < worlds; ++w)
    for (std::size_t j = 0; j < vars.size(); ++j)
      if (mec_literal_positive(codes[coord(w)], vars.size(), j)) ev[vars[j]].set(w);
}

inline std::vector<WorldSet> subsets(std::size_t n) {
  std::vector<WorldSet> out;
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << n); ++m) out.push_back(WorldSet::from_mask(n, m));
  return out;
}

inline WorldSet meet(WorldSet a, const WorldSet& b) { return a &= b; }
inline WorldSet join(WorldSet a, const WorldSet& b) { return a |= b; }
inline WorldSet minus(WorldSet a, const WorldSet& b) { return a -= b; }

inline const char* arrow(Direction d) { return d == Direction::le ? "dle" : "dge"; }
inline Direction flip(Direction d) { return d == Direction::le ? Direction::ge : Direction::le; }

/// Intervals of a chain as world sets: positions lo..hi.
inline std::vector<WorldSet> intervals(const ChainSpace& c) {
  std::vector<WorldSet> out;
  for (std::size_t lo = 0; lo < c.size(); ++lo)
    for (std::size_t hi = lo; hi < c.size(); ++hi) out.push_back(meet(c.up_from_rank(lo), c.down_to_rank(hi)));
  return out;
}

/// Non-empty orthotopes of a product: one non-empty interval per component.
inline std::vector<WorldSet> orthotopes(const ProductSpace& p) {
  std::vector<WorldSet> out{WorldSet::full(p.size())};
  for (std::size_t i = 0; i < p.dimension(); ++i) {
    std::vector<WorldSet> next;
    for (const auto& box : out)
      for (const auto& iv : intervals(p.component(i))) next.push_back(meet(box, p.cylinder(i, iv)));
    out = std::move(next);
  }
  return out;
}

}  // namespace detail

// --- Fixture families ------------------------------------------------------

/// All plain similarity spaces with at most `max_worlds` worlds over {p, q}, each world a distinct m.e.c.
inline Family plain_family(const ScalePtr& scale, std::size_t max_worlds = 4) {
  Family f{"plain<=" + std::to_string(max_worlds), Logic::lae, two_variables(), scale, {}};
  const auto vars = mec_variables(f.sig, f.logic);
  for (std::size_t n = 1; n <= std::min<std::size_t>(max_worlds, 4); ++n) {
    const auto selections = detail::code_selections(vars.size(), n, false);
    for (auto& s : detail::all_spaces(scale, n)) {
      std::vector<Evaluation> evs;
      for (const auto& codes : selections) {
        Evaluation ev(f.sig.size(), WorldSet(n));
        detail::assign_codes(ev, vars, codes, [](std::size_t w) { return w; }, n);
        evs.push_back(std::move(ev));
      }
      f.cases.emplace_back(std::move(s), std::move(evs));
    }
  }
  return f;
}

/// All chains with at most `max_worlds` worlds over {p, q}; codes are placed along the chain in every order.
inline Family chain_family(const ScalePtr& scale, std::size_t max_worlds = 4) {
  Family f{"chains<=" + std::to_string(max_worlds), Logic::laec, two_variables(), scale, {}};
  const auto vars = mec_variables(f.sig, f.logic);
  for (std::size_t n = 1; n <= std::min<std::size_t>(max_worlds, 4); ++n) {
    const auto selections = detail::code_selections(vars.size(), n, true);
    for (auto& c : detail::all_chains(scale, n)) {
      std::vector<Evaluation> evs;
      for (const auto& codes : selections) {
        Evaluation ev(f.sig.size(), WorldSet(n));
        detail::assign_codes(ev, vars, codes, [](std::size_t w) { return w; }, n);
        evs.push_back(std::move(ev));
      }
      f.cases.emplace_back(std::move(c), std::move(evs));
    }
  }
  return f;
}

/// All products of an `a`-chain (sort A) and a `b`-chain (sort B) over product_signature(),
/// with every placement of m.e.c.s and every extension of the unsorted variable.
inline Family product_family(const ScalePtr& scale, std::size_t a, std::size_t b) {
  if (a < 1 || a > 4 || b < 1 || b > 2) throw ResourceLimit("product fixtures take at most 4 x 2 worlds");
  Family f{"products " + std::to_string(a) + "x" + std::to_string(b), Logic::laepc, product_signature(), scale, {}};
  const auto& sa = f.sig.sorts()[0].vars;
  const auto& sb = f.sig.sorts()[1].vars;
  const VarId u = f.sig.unsorted()[0];
  const auto codes_a = detail::code_selections(sa.size(), a, true);
  const auto codes_b = detail::code_selections(sb.size(), b, true);
  const std::size_t n = a * b;
  for (const auto& ca : detail::all_chains(scale, a, "A"))
    for (const auto& cb : detail::all_chains(scale, b, "B")) {
      ProductSpace p({ca, cb});
      std::vector<Evaluation> evs;
      for (const auto& xa : codes_a)
        for (const auto& xb : codes_b) {
          Evaluation ev(f.sig.size(), WorldSet(n));
          detail::assign_codes(ev, sa, xa, [&](std::size_t w) { return p.coord(w, 0); }, n);
          detail::assign_codes(ev, sb, xb, [&](std::size_t w) { return p.coord(w, 1); }, n);
          for (std::uint64_t m = 0; m < (std::uint64_t{1} << n); ++m) {
            ev[u] = WorldSet::from_mask(n, m);
            evs.push_back(ev);
          }
        }
      f.cases.emplace_back(std::move(p), std::move(evs));
    }
  return f;
}

/// `count` random validated models, one per case.
inline Family random_family(Logic logic, const Signature& sig, const ScalePtr& scale, Rng& rng, std::size_t count,
                            std::size_t max_worlds) {
  Family f{"random " + std::string(to_string(logic)), logic, sig, scale, {}};
  for (std::size_t i = 0; i < count; ++i) {
    auto m = gen::random_model(logic, sig, scale, rng, max_worlds);
    f.cases.push_back({m.space(), {m.evaluation()}});
  }
  return f;
}

// --- Axiom instances -------------------------------------------------------

namespace detail {

struct InstanceGen {
  const Signature& sig;
  const GradeScale& scale;
  Logic logic;
  Rng& rng;

  bool ordered() const { return has_order(logic); }
  std::vector<VarId> all_vars() const {
    std::vector<VarId> v(sig.size());
    std::iota(v.begin(), v.end(), VarId{0});
    return v;
  }
  BasicExpr any(int depth = 2) { return gen::random_basic(rng, all_vars(), ordered(), depth); }
  BasicExpr over(const std::vector<VarId>& vars, int depth = 2) {
    return gen::random_basic(rng, vars, ordered(), depth);
  }
  std::size_t random_sort() { return gen::uniform(rng, 0, sig.sorts().size() - 1); }
  const std::vector<VarId>& sort_vars(std::size_t i) const { return sig.sorts()[i].vars; }
  Grade grade() { return gen::random_grade(scale, rng); }
  Grade top() const { return scale.top(); }
  BasicExpr pick(const std::vector<BasicExpr>& xs) { return xs[gen::uniform(rng, 0, xs.size() - 1)]; }
  BasicExpr mec() { return pick(enumerate_mecs_over(mec_variables(sig, logic))); }
  BasicExpr one_sorted_mec() { return pick(enumerate_mecs_over(sort_vars(random_sort()))); }
  BasicExpr diamond(const BasicExpr& e) { return (rng() & 1U) ? ex::dle(e) : ex::dge(e); }
  BasicExpr diamond_conjunction() {
    auto d = diamond(any(1));
    return (rng() & 1U) ? ex::conj(d, diamond(any(1))) : d;
  }
  OuterFormula gimp(BasicExpr a, Grade c, BasicExpr b) { return fx::gimp(std::move(a), c, std::move(b)); }
  OuterFormula refutes(BasicExpr a) { return gimp(std::move(a), top(), ex::bottom()); }
  OuterFormula any_gimp() { return gimp(any(1), grade(), any(1)); }

  /// Two distinct sorts, when the signature has them.
  std::optional<std::pair<std::size_t, std::size_t>> two_sorts() {
    if (sig.sorts().size() < 2) return std::nullopt;
    const std::size_t i = random_sort();
    std::size_t j = random_sort();
    while (j == i) j = random_sort();
    return std::make_pair(i, j);
  }

  std::optional<OuterFormula> candidate(int id) {
    switch (id) {
      case 1: {
        // phi -> phi | psi, phi & psi -> phi, or phi -> phi
        auto a = any(), b = any();
        switch (gen::uniform(rng, 0, 2)) {
          case 0: return gimp(a, top(), ex::disj(a, b));
          case 1: return gimp(ex::conj(a, b), top(), a);
          default: return gimp(a, top(), a);
        }
      }
      case 2: {
        auto a = any(), b = any();
        return fx::imp(gimp(a, top(), b), refutes(ex::conj(a, ex::neg(b))));
      }
      case 3: {
        auto a = any(), b = any();
        Grade c = grade(), d = grade();
        if (d > c) std::swap(c, d);
        return fx::imp(gimp(a, c, b), gimp(a, d, b));
      }
      case 4: {
        auto a = any(), b = any();
        return fx::imp(fx::neg(refutes(b)), gimp(a, scale.bottom(), b));
      }
      case 5: {
        auto a = any();
        return fx::imp(gimp(a, grade(), ex::bottom()), refutes(a));
      }
      case 6: {
        auto d = mec(), e = mec();
        const Grade c = grade();
        return fx::imp(fx::conj(fx::neg(refutes(d)), gimp(d, c, e)), gimp(e, c, d));
      }
      case 7: {
        auto a = any(), b = any(), x = any();
        const Grade c = grade();
        return fx::imp(fx::conj(gimp(a, c, x), gimp(b, c, x)), gimp(ex::disj(a, b), c, x));
      }
      case 8: {
        auto e = mec(), a = any(), b = any();
        const Grade c = grade();
        return fx::imp(gimp(e, c, ex::disj(a, b)), fx::disj(gimp(e, c, a), gimp(e, c, b)));
      }
      case 9: {
        auto a = any(), b = any(), x = any();
        const Grade c = grade(), d = grade();
        return fx::imp(fx::conj(gimp(a, c, b), gimp(b, d, x)), gimp(a, scale.combine(c, d), x));
      }
      case 10: return fx::neg(refutes(ex::top()));
      case 11: {
        auto x = any_gimp(), y = any_gimp();
        switch (gen::uniform(rng, 0, 3)) {
          case 0: return fx::disj(x, fx::neg(x));
          case 1: return fx::neg(fx::conj(x, fx::neg(x)));
          case 2: return fx::imp(x, fx::imp(y, x));
          default: return fx::disj(fx::imp(x, y), fx::imp(y, x));
        }
      }
      case 12: {
        auto a = any();
        return gimp(a, top(), diamond(a));
      }
      case 13: {
        auto a = any();
        return (rng() & 1U) ? gimp(ex::dle(ex::dle(a)), top(), ex::dle(a)) : gimp(ex::dge(ex::dge(a)), top(), ex::dge(a));
      }
      case 14: return refutes(diamond(ex::bottom()));
      case 15: {
        BasicExpr a, b;
        if (logic == Logic::laepc) {
          const auto s = random_sort();
          a = over(sort_vars(s));
          b = over(sort_vars(s));
        } else {
          a = any();
          b = any();
        }
        const bool le = rng() & 1U;
        auto da = le ? ex::dle(a) : ex::dge(a);
        auto db = le ? ex::dle(b) : ex::dge(b);
        return fx::disj(gimp(da, top(), db), gimp(db, top(), da));
      }
      case 16: {
        auto e = logic == Logic::laepc ? one_sorted_mec() : mec();
        return gimp(ex::conj(ex::dle(e), ex::dge(e)), top(), e);
      }
      case 17: {
        auto a = any(), b = any();
        const Grade c = grade();
        return (rng() & 1U) ? fx::imp(gimp(a, c, b), gimp(ex::dle(a), c, ex::dle(b)))
                            : fx::imp(gimp(a, c, b), gimp(ex::dge(a), c, ex::dge(b)));
      }
      case 18: {
        auto a = logic == Logic::laepc ? over(sort_vars(random_sort())) : any();
        auto b = any();
        const bool le = rng() & 1U;
        auto db = le ? ex::dle(b) : ex::dge(b);
        auto da = le ? ex::dge(a) : ex::dle(a);
        return fx::imp(refutes(ex::conj(a, db)), refutes(ex::conj(da, db)));
      }
      case 19: {
        auto r = diamond_conjunction(), s = diamond_conjunction(), a = any();
        const Grade c = grade();
        auto pre = fx::conj(fx::conj(fx::neg(refutes(ex::conj(r, s))), gimp(a, c, r)), gimp(a, c, s));
        return fx::imp(pre, gimp(a, c, ex::conj(r, s)));
      }
      case 20: {
        auto sorts = two_sorts();
        if (!sorts) return std::nullopt;
        auto a = over(sort_vars(sorts->first)), b = over(sort_vars(sorts->first));
        auto a2 = over(sort_vars(sorts->second)), b2 = over(sort_vars(sorts->second));
        const Grade c = grade();
        return fx::imp(fx::neg(refutes(ex::conj(a, a2))),
                       fx::iff(fx::conj(gimp(a, c, b), gimp(a2, c, b2)), gimp(ex::conj(a, a2), c, ex::conj(b, b2))));
      }
      case 21: {
        auto sorts = two_sorts();
        if (!sorts) return std::nullopt;
        auto d = diamond(any(1));
        auto x = over(sort_vars(sorts->first)), y = over(sort_vars(sorts->second));
        return fx::imp(refutes(ex::conj(ex::conj(d, x), y)),
                       fx::disj(refutes(ex::conj(d, x)), refutes(ex::conj(d, y))));
      }
      case 22: {
        auto e = mec(), a = any();
        return fx::disj(gimp(e, top(), a), gimp(e, top(), ex::neg(a)));
      }
      default: return std::nullopt;
    }
  }
};

}  // namespace detail

/// A random instance of axiom `id` that recognize_axiom classifies as `id`,
/// or nothing when the signature cannot host one (A20/A21 need two sorts).
inline std::optional<OuterFormula> axiom_instance(int id, const Signature& sig, const GradeScale& scale, Logic logic,
                                                  Rng& rng) {
  if (id < 1 || id > axiom_limit(logic)) return std::nullopt;
  detail::InstanceGen g{sig, scale, logic, rng};
  for (int attempt = 0; attempt < 256; ++attempt) {
    auto f = g.candidate(id);
    if (!f) return std::nullopt;
    if (recognize_axiom(*f, sig, scale, logic) == id) return f;
  }
  return std::nullopt;
}

/// Checks every formula on every model of the family.
inline Report check_formulas(const Family& fam, std::string suite, const std::vector<OuterFormula>& formulas) {
  Report r{std::move(suite), 0, 0, {}};
  fam.for_each_model([&](const Space& space, const Evaluation& ev) {
    for (const auto& f : formulas)
      r.record(sat_formula(space, ev, f), [&] {
        return to_string(f, fam.sig, *fam.scale) + " fails on a " + std::to_string(base_of(space).size()) +
               "-world model";
      });
  });
  return r;
}

/// One report per axiom of the family's logic, each over `per_axiom` random instances.
inline std::vector<Report> axiom_soundness(const Family& fam, Rng& rng, std::size_t per_axiom,
                                           std::vector<int> ids = {}) {
  if (ids.empty())
    for (int id = 1; id <= axiom_limit(fam.logic); ++id) ids.push_back(id);
  std::vector<Report> out;
  for (int id : ids) {
    std::vector<OuterFormula> pool;
    for (std::size_t k = 0; k < per_axiom; ++k)
      if (auto f = axiom_instance(id, fam.sig, *fam.scale, fam.logic, rng)) pool.push_back(std::move(*f));
    if (pool.empty()) continue;
    out.push_back(check_formulas(fam, axiom_name(id) + " on " + fam.name, pool));
  }
  return out;
}

// --- Lemma suites ----------------------------------------------------------

/// Diamond laws on chains, both directions, over all subsets A, B and grades c.
inline std::vector<Report> chain_lemma(const Family& fam) {
  std::vector<Report> r;
  for (const char* item : {"(i)", "(ii)", "(iii)", "(iv)", "(v)", "(vi)", "(vii)"})
    r.push_back({"chain lemma " + std::string(item) + " on " + fam.name, 0, 0, {}});
  for (const auto& [space, evs] : fam.cases) {
    const auto* c = std::get_if<ChainSpace>(&space);
    if (!c) continue;
    const auto sets = detail::subsets(c->size());
    const auto& base = c->base();
    for (Direction d : {Direction::le, Direction::ge}) {
      auto dia = [&](const WorldSet& a) { return c->diamond(d, a); };
      r[2].record(dia(base.empty_set()).empty(), [&] { return std::string(detail::arrow(d)) + " of empty set"; });
      for (std::size_t w = 0; w < c->size(); ++w) {
        const auto one = WorldSet::of(c->size(), {w});
        r[5].record(detail::meet(c->diamond(Direction::le, one), c->diamond(Direction::ge, one)) == one,
                    [&] { return "point " + base.name(w); });
      }
      for (const auto& a : sets) {
        const auto da = dia(a);
        r[0].record(a.is_subset_of(da), [&] { return std::string(detail::arrow(d)) + " " + a.str(); });
        r[1].record(dia(da) == da, [&] { return std::string(detail::arrow(d)) + " " + a.str(); });
        for (const auto& b : sets) {
          const auto db = dia(b);
          r[3].record(da.is_subset_of(db) || db.is_subset_of(da), [&] { return a.str() + " vs " + b.str(); });
          for (Grade g : base.scale().grades())
            if (a.is_subset_of(base.neighborhood(g, b)))
              r[4].record(da.is_subset_of(base.neighborhood(g, db)), [&] { return a.str() + " near " + b.str(); });
          if (!a.intersects(db))
            r[6].record(!c->diamond(detail::flip(d), a).intersects(db), [&] { return a.str() + " / " + b.str(); });
        }
      }
    }
  }
  return r;
}

/// U_c(A & B) = U_c(A) & U_c(B) for intersecting intervals of each chain.
inline Report interval_lemma(const Family& fam) {
  Report r{"interval lemma on " + fam.name, 0, 0, {}};
  for (const auto& [space, evs] : fam.cases) {
    const auto* c = std::get_if<ChainSpace>(&space);
    if (!c) continue;
    const auto ivs = detail::intervals(*c);
    const auto& base = c->base();
    for (const auto& a : ivs)
      for (const auto& b : ivs) {
        if (!a.intersects(b)) continue;
        for (Grade g : base.scale().grades())
          r.record(base.neighborhood(g, detail::meet(a, b)) ==
                       detail::meet(base.neighborhood(g, a), base.neighborhood(g, b)),
                   [&] { return a.str() + " & " + b.str(); });
      }
  }
  return r;
}

/// Diamond laws on two-component products, both directions.
inline std::vector<Report> product_lemma(const Family& fam) {
  std::vector<Report> r;
  for (const char* item : {"(i)", "(ii)", "(iii)", "(iv)", "(v)", "(vi)", "(vii)"})
    r.push_back({"product lemma " + std::string(item) + " on " + fam.name, 0, 0, {}});
  for (const auto& [space, evs] : fam.cases) {
    const auto* p = std::get_if<ProductSpace>(&space);
    if (!p || p->dimension() != 2) continue;
    const auto& base = p->base();
    const auto sets = detail::subsets(p->size());
    const auto grades = base.scale().grades();
    std::vector<std::vector<WorldSet>> parts(2);
    for (std::size_t i = 0; i < 2; ++i) parts[i] = detail::subsets(p->component(i).size());
    for (Direction d : {Direction::le, Direction::ge}) {
      auto dia = [&](const WorldSet& a) { return p->diamond(d, a); };
      r[2].record(dia(base.empty_set()).empty(), [&] { return std::string(detail::arrow(d)) + " of empty set"; });
      for (const auto& a : sets) {
        const auto da = dia(a);
        r[0].record(a.is_subset_of(da), [&] { return a.str(); });
        r[1].record(dia(da) == da, [&] { return a.str(); });
        for (const auto& b : sets) {
          const auto db = dia(b);
          for (Grade g : grades)
            if (a.is_subset_of(base.neighborhood(g, b)))
              r[3].record(da.is_subset_of(base.neighborhood(g, db)), [&] { return a.str() + " near " + b.str(); });
        }
        // (vi): B over component 0, C over component 1
        for (const auto& b : parts[0])
          for (const auto& c : parts[1]) {
            const auto pb = p->cylinder(0, b), pc = p->cylinder(1, c);
            const bool lhs = !detail::meet(detail::meet(da, pb), pc).any();
            const bool rhs = !da.intersects(pb) || !da.intersects(pc);
            r[5].record(lhs == rhs, [&] { return a.str() + " with " + b.str() + ", " + c.str(); });
          }
      }
      // (vii): A over one component, B arbitrary
      for (std::size_t i = 0; i < 2; ++i)
        for (const auto& a : parts[i]) {
          const auto pa = p->cylinder(i, a);
          for (const auto& b : sets) {
            const auto db = dia(b);
            if (!pa.intersects(db))
              r[6].record(!p->diamond(detail::flip(d), pa).intersects(db), [&] { return a.str() + " / " + b.str(); });
          }
        }
    }
    // (v): A, C over component 0 and B, D over component 1, all non-empty
    for (Grade g : grades)
      for (const auto& a : parts[0])
        for (const auto& c : parts[0]) {
          if (a.empty() || c.empty()) continue;
          const bool left_ac = p->cylinder(0, a).is_subset_of(base.neighborhood(g, p->cylinder(0, c)));
          for (const auto& b : parts[1])
            for (const auto& dd : parts[1]) {
              if (b.empty() || dd.empty()) continue;
              const bool lhs = left_ac && p->cylinder(1, b).is_subset_of(base.neighborhood(g, p->cylinder(1, dd)));
              const auto ab = detail::meet(p->cylinder(0, a), p->cylinder(1, b));
              const auto cd = detail::meet(p->cylinder(0, c), p->cylinder(1, dd));
              r[4].record(lhs == ab.is_subset_of(base.neighborhood(g, cd)),
                          [&] { return a.str() + "x" + b.str() + " near " + c.str() + "x" + dd.str(); });
            }
        }
  }
  return r;
}

/// U_c(A & B) = U_c(A) & U_c(B) for intersecting orthotopes, plus: dle A & dge A is the least orthotope over A.
inline std::vector<Report> orthotope_lemma(const Family& fam) {
  Report inter{"orthotope lemma on " + fam.name, 0, 0, {}};
  Report hull{"orthotope hull on " + fam.name, 0, 0, {}};
  for (const auto& [space, evs] : fam.cases) {
    const auto* p = std::get_if<ProductSpace>(&space);
    if (!p) continue;
    const auto& base = p->base();
    const auto boxes = detail::orthotopes(*p);
    for (const auto& a : boxes)
      for (const auto& b : boxes) {
        if (!a.intersects(b)) continue;
        for (Grade g : base.scale().grades())
          inter.record(base.neighborhood(g, detail::meet(a, b)) ==
                           detail::meet(base.neighborhood(g, a), base.neighborhood(g, b)),
                       [&] { return a.str() + " & " + b.str(); });
      }
    for (const auto& a : detail::subsets(p->size())) {
      if (a.empty()) continue;
      const auto h = detail::meet(p->diamond(Direction::le, a), p->diamond(Direction::ge, a));
      bool least = std::find(boxes.begin(), boxes.end(), h) != boxes.end();
      for (const auto& box : boxes)
        if (a.is_subset_of(box) && !h.is_subset_of(box)) least = false;
      hull.record(least, [&] { return a.str(); });
    }
  }
  return {inter, hull};
}

/// K, T, 4, H and the distribution law as set identities on every chain, both directions.
inline std::vector<Report> s43_sets(const Family& fam) {
  std::vector<Report> r;
  for (const char* item : {"K", "T", "4", "H"}) r.push_back({std::string(item) + " on " + fam.name, 0, 0, {}});
  for (const auto& [space, evs] : fam.cases) {
    const auto* c = std::get_if<ChainSpace>(&space);
    if (!c) continue;
    const auto sets = detail::subsets(c->size());
    for (Direction d : {Direction::le, Direction::ge}) {
      auto dia = [&](const WorldSet& a) { return c->diamond(d, a); };
      for (const auto& a : sets) {
        r[1].record(a.is_subset_of(dia(a)), [&] { return a.str(); });
        r[2].record(dia(dia(a)).is_subset_of(dia(a)), [&] { return a.str(); });
        for (const auto& b : sets) {
          r[0].record(dia(detail::join(a, b)) == detail::join(dia(a), dia(b)),
                      [&] { return a.str() + " | " + b.str(); });
          const auto x = dia(detail::minus(a, dia(b)));
          const auto y = dia(detail::minus(b, dia(a)));
          r[3].record(!x.intersects(y), [&] { return a.str() + ", " + b.str(); });
        }
      }
    }
  }
  return r;
}

/// The same shapes as graded implications with random phi, psi, checked on every model.
inline std::vector<Report> s43_formulas(const Family& fam, Rng& rng, std::size_t per_shape) {
  const Grade one = fam.scale->top();
  std::vector<VarId> vars(fam.sig.size());
  std::iota(vars.begin(), vars.end(), VarId{0});
  std::vector<OuterFormula> k, t, four, h;
  for (std::size_t i = 0; i < per_shape; ++i) {
    const auto a = gen::random_basic(rng, vars, true, 2);
    const auto b = gen::random_basic(rng, vars, true, 2);
    for (auto dia : {ex::dle, ex::dge}) {
      k.push_back(fx::gimp(dia(ex::disj(a, b)), one, ex::disj(dia(a), dia(b))));
      k.push_back(fx::gimp(ex::disj(dia(a), dia(b)), one, dia(ex::disj(a, b))));
      t.push_back(fx::gimp(a, one, dia(a)));
      four.push_back(fx::gimp(dia(dia(a)), one, dia(a)));
      h.push_back(fx::gimp(ex::top(), one,
                           ex::disj(ex::neg(dia(ex::conj(a, ex::neg(dia(b))))),
                                    ex::neg(dia(ex::conj(b, ex::neg(dia(a))))))));
    }
  }
  return {check_formulas(fam, "K formulas on " + fam.name, k), check_formulas(fam, "T formulas on " + fam.name, t),
          check_formulas(fam, "4 formulas on " + fam.name, four), check_formulas(fam, "H formulas on " + fam.name, h)};
}

// --- Standard run ----------------------------------------------------------

struct Options {
  std::size_t per_axiom = 12;      // random instances per axiom and family
  std::size_t per_shape = 8;       // random phi, psi pairs per S4.3 shape
  std::size_t random_models = 40;  // larger random models per variant and scale
  bool products_3x2 = true;
};

/// Gödel and Lukasiewicz over {0, 1/2, 1}.
inline std::vector<ScalePtr> fixture_scales() {
  const std::vector<Rational> v{Rational(0), Rational(1, 2), Rational(1)};
  return {share(GradeScale::godel(v)), share(GradeScale::lukasiewicz(v))};
}

inline std::string scale_label(const GradeScale& s) { return s.is_godel() ? "godel" : "lukasiewicz"; }

/// Every suite over the fixture families, then axiom soundness on larger random models.
inline std::vector<Report> standard_run(Rng& rng, const Options& o = {},
                                        const std::function<void(const Report&)>& progress = {}) {
  std::vector<Report> out;
  auto add = [&](std::vector<Report> rs, const std::string& tag) {
    for (auto& r : rs) {
      r.suite += " [" + tag + "]";
      if (progress) progress(r);
      out.push_back(std::move(r));
    }
  };
  for (const auto& scale : fixture_scales()) {
    const auto tag = scale_label(*scale);
    const auto plain = plain_family(scale);
    add(axiom_soundness(plain, rng, o.per_axiom), tag);

    const auto chains = chain_family(scale);
    add(axiom_soundness(chains, rng, o.per_axiom), tag);
    add(chain_lemma(chains), tag);
    add(std::vector<Report>(1, interval_lemma(chains)), tag);
    add(s43_sets(chains), tag);
    add(s43_formulas(chains, rng, o.per_shape), tag);

    for (std::size_t a : {std::size_t{2}, std::size_t{3}}) {
      if (a == 3 && !o.products_3x2) continue;
      const auto fam = product_family(scale, a, 2);
      add(axiom_soundness(fam, rng, o.per_axiom), tag);
      add(product_lemma(fam), tag);
      add(orthotope_lemma(fam), tag);
    }
  }
  if (o.random_models > 0) {
    const auto wide = share(GradeScale::lukasiewicz_steps(4));
    Signature three = Signature::single({"p", "q", "r"});
    Signature sorted;
    sorted.add_sort("A", {"p", "q"});
    sorted.add_sort("B", {"r", "s"});
    sorted.add_unsorted({"u"});
    for (Logic l : {Logic::lae, Logic::laec, Logic::laepc}) {
      const auto fam = random_family(l, l == Logic::laepc ? sorted : three, wide, rng, o.random_models, 6);
      add(axiom_soundness(fam, rng, o.per_axiom), "lukasiewicz 5 levels");
    }
  }
  return out;
}

}  // namespace lae::fuzz
