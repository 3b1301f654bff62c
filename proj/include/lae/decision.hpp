#pragma once

#include <algorithm>
#include <atomic>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <limits>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "lae/errors.hpp"
#include "lae/propositional.hpp"
#include "lae/semantics.hpp"
#include "lae/spaces.hpp"
#include "lae/syntax.hpp"

namespace lae {

inline constexpr std::size_t kUnbounded = std::numeric_limits<std::size_t>::max();

/// Limits of the canonical-model search. `exhaustive` lifts every cap to the full canonical count.
struct SearchBounds {
  bool exhaustive = false;
  std::size_t max_worlds = 8;  // plain LAE spaces
  std::size_t max_chain = 4;   // each chain in LAEC and LAEPC
  std::size_t max_world_subsets = std::size_t{1} << 16;
  std::size_t max_sim_assignments = std::size_t{1} << 20;  // candidate models per subset
  std::size_t workers = 1;

  static SearchBounds full() {
    SearchBounds b;
    b.exhaustive = true;
    b.max_worlds = b.max_chain = b.max_world_subsets = b.max_sim_assignments = kUnbounded;
    return b;
  }
  static SearchBounds worlds(std::size_t n) {
    SearchBounds b;
    b.max_worlds = b.max_chain = n;
    return b;
  }
};

enum class Verdict { entailed, countermodel, unknown };

inline std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::entailed: return "ENTAILED";
    case Verdict::countermodel: return "COUNTERMODEL";
    case Verdict::unknown: return "UNKNOWN";
  }
  return "?";
}

struct SearchStats {
  std::size_t subsets = 0;     // world subsets searched
  std::size_t candidates = 0;  // complete candidate models checked
};

struct EntailmentVerdict {
  Verdict verdict = Verdict::unknown;
  std::optional<Model> countermodel;
  std::string reason;
  SearchStats stats;
};

namespace detail {

using Mask = std::uint64_t;
inline constexpr std::size_t kMaxSearchWorlds = 64;

inline Mask low_bits(std::size_t n) { return n >= 64 ? ~Mask{0} : (Mask{1} << n) - 1; }

template <class F>
void for_each_bit(Mask m, F&& f) {
  for (; m; m &= m - 1) f(static_cast<std::size_t>(std::countr_zero(m)));
}

/// Theory and query compiled to one outer skeleton over shared graded-implication atoms.
struct Problem {
  std::vector<GradedImplication> atoms;
  PropFormula prop;
  std::vector<PropFormula::Ref> theory;
  PropFormula::Ref query = 0;

  bool countermodel(std::uint64_t truth) const {
    for (auto r : theory)
      if (!prop.eval(r, truth)) return false;
    return !prop.eval(query, truth);
  }
};

inline void check_basic(const BasicExpr& e, const Signature& sig, Logic logic) {
  if (e.op() == BasicOp::var && e.var() >= sig.size()) throw SortError("variable outside the signature");
  if (e.is_diamond() && !has_order(logic)) throw VariantError("diamond in a formula of plain LAE");
  if (e.is_unary()) check_basic(e.child(), sig, logic);
  if (e.is_binary()) {
    check_basic(e.left(), sig, logic);
    check_basic(e.right(), sig, logic);
  }
}

inline Problem compile(const Signature& sig, const GradeScale& scale, Logic logic, const Theory& t,
                       const OuterFormula& query) {
  OuterSkeleton sk;
  Problem p;
  for (const auto& f : t) p.theory.push_back(sk.add(f));
  p.query = sk.add(query);
  p.atoms = sk.atoms();
  p.prop = sk.formula();
  if (p.atoms.size() > 64)
    throw ResourceLimit("more than 64 distinct graded implications in theory and query");
  for (const auto& g : p.atoms) {
    if (!scale.contains(g.grade)) throw UnknownGrade("graded implication uses a grade outside the scale");
    check_basic(g.lhs, sig, logic);
    check_basic(g.rhs, sig, logic);
  }
  return p;
}

/// Variables that determine the worlds of one factor: all variables in LAE/LAEC, one sort in LAEPC.
struct Group {
  std::vector<VarId> vars;
  std::size_t mecs() const { return std::size_t{1} << vars.size(); }
};

/// One candidate world set: for each group the m.e.c. codes realized, in ascending code order.
using Branch = std::vector<std::vector<std::uint32_t>>;

inline std::size_t saturating_mul(std::size_t a, std::size_t b) {
  if (a != 0 && b > kUnbounded / a) return kUnbounded;
  return a * b;
}

inline bool next_combination(std::vector<std::uint32_t>& c, std::size_t n) {
  const std::size_t k = c.size();
  for (std::size_t i = k; i-- > 0;) {
    if (c[i] < n - k + i) {
      ++c[i];
      for (std::size_t j = i + 1; j < k; ++j) c[j] = c[j - 1] + 1;
      return true;
    }
  }
  return false;
}

/// Subsets ordered by product size, then group sizes, then lexicographically per group.
/// Sets `complete` to false when the cap or the 64-world limit cuts the canonical space.
inline std::vector<Branch> enumerate_branches(const std::vector<Group>& groups, std::size_t max_size,
                                              std::size_t cap, bool& complete) {
  const std::size_t m = groups.size();
  std::vector<std::size_t> top(m);
  for (std::size_t g = 0; g < m; ++g) {
    top[g] = std::min(max_size, groups[g].mecs());
    if (top[g] < groups[g].mecs()) complete = false;
  }
  std::vector<std::vector<std::size_t>> shapes;
  std::vector<std::size_t> shape(m, 1);
  while (true) {
    shapes.push_back(shape);
    std::size_t g = m;
    while (g-- > 0) {
      if (shape[g] < top[g]) {
        ++shape[g];
        break;
      }
      shape[g] = 1;
    }
    if (g == static_cast<std::size_t>(-1)) break;
  }
  auto product = [](const std::vector<std::size_t>& s) {
    std::size_t p = 1;
    for (auto k : s) p = saturating_mul(p, k);
    return p;
  };
  std::stable_sort(shapes.begin(), shapes.end(),
                   [&](const auto& a, const auto& b) { return product(a) < product(b); });

  std::vector<Branch> out;
  for (const auto& s : shapes) {
    if (product(s) > kMaxSearchWorlds) {
      complete = false;
      continue;
    }
    Branch b(m);
    for (std::size_t g = 0; g < m; ++g) {
      b[g].resize(s[g]);
      for (std::size_t i = 0; i < s[g]; ++i) b[g][i] = static_cast<std::uint32_t>(i);
    }
    while (true) {
      if (out.size() >= cap) {
        complete = false;
        return out;
      }
      out.push_back(b);
      std::size_t g = m;
      while (g-- > 0) {
        if (next_combination(b[g], groups[g].mecs())) break;
        for (std::size_t i = 0; i < b[g].size(); ++i) b[g][i] = static_cast<std::uint32_t>(i);
      }
      if (g == static_cast<std::size_t>(-1)) break;
    }
  }
  return out;
}

/// Calls `visit` on every similarity matrix over n worlds satisfying reflexivity, strictness,
/// symmetry and transitivity, in lexicographic order of the upper triangle. Stops when `visit`
/// returns false; the return value says whether enumeration ran to the end.
template <class F>
bool for_each_similarity(const GradeScale& s, std::size_t n, F&& visit) {
  const auto top = s.top().index;
  std::vector<std::uint8_t> sim(n * n, 0);
  for (std::size_t i = 0; i < n; ++i) sim[i * n + i] = top;
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
  auto comb = [&](std::uint8_t a, std::uint8_t b) { return s.combine(Grade{a}, Grade{b}).index; };
  auto at = [&](std::size_t a, std::size_t b) { return sim[a * n + b]; };
  auto assigned = [&](std::size_t a, std::size_t b, std::size_t upto) {
    if (a > b) std::swap(a, b);
    const auto& [i, j] = pairs[upto];
    return a < i || (a == i && b <= j);
  };
  auto rec = [&](auto&& self, std::size_t idx) -> bool {
    if (idx == pairs.size()) return visit(sim);
    const auto [i, j] = pairs[idx];
    for (std::uint8_t v = 0; v < top; ++v) {
      sim[i * n + j] = sim[j * n + i] = v;
      bool ok = true;
      for (std::size_t k = 0; k < n && ok; ++k) {
        if (k == i || k == j || !assigned(i, k, idx) || !assigned(j, k, idx)) continue;
        ok = at(i, j) >= comb(at(i, k), at(k, j)) && at(i, k) >= comb(at(i, j), at(j, k)) &&
             at(j, k) >= comb(at(j, i), at(i, k));
      }
      if (ok && !self(self, idx + 1)) return false;
    }
    return true;
  };
  return rec(rec, 0);
}

/// Similarity matrices on a chain whose worlds are listed bottom to top: valid and compatible
/// with the order. Entries are fixed by increasing span between the lower bound forced by
/// transitivity and the upper bound forced by compatibility, so no candidate is rejected late.
template <class F>
bool for_each_chain_similarity(const GradeScale& s, std::size_t n, F&& visit) {
  const auto top = s.top().index;
  std::vector<std::uint8_t> sim(n * n, 0);
  for (std::size_t i = 0; i < n; ++i) sim[i * n + i] = top;
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t span = 1; span < n; ++span)
    for (std::size_t a = 0; a + span < n; ++a) pairs.emplace_back(a, a + span);
  auto rec = [&](auto&& self, std::size_t idx) -> bool {
    if (idx == pairs.size()) return visit(sim);
    const auto [a, c] = pairs[idx];
    std::uint8_t lo = 0;
    std::uint8_t hi = static_cast<std::uint8_t>(top - 1);
    if (c - a > 1) {
      hi = std::min(sim[a * n + c - 1], sim[(a + 1) * n + c]);
      for (std::size_t b = a + 1; b < c; ++b)
        lo = std::max(lo, s.combine(Grade{sim[a * n + b]}, Grade{sim[b * n + c]}).index);
    }
    for (unsigned v = lo; v <= hi; ++v) {
      sim[a * n + c] = sim[c * n + a] = static_cast<std::uint8_t>(v);
      if (!self(self, idx + 1)) return false;
    }
    return true;
  };
  return rec(rec, 0);
}

/// Everything needed to rebuild a candidate model.
struct Witness {
  std::size_t branch = 0;
  std::vector<std::vector<std::uint32_t>> codes;  // per group, m.e.c. code of each group world
  std::vector<std::vector<std::uint8_t>> sims;    // per group, n_g * n_g grade indices
  std::vector<Mask> unsorted;                     // per unsorted variable
};

class Search {
 public:
  Search(Logic logic, const Signature& sig, const GradeScale& scale, const Problem& problem)
      : logic_(logic), sig_(sig), scale_(scale), problem_(problem) {
    if (logic == Logic::laepc) {
      if (sig.sorts().empty()) throw VariantError("LAEPC needs at least one sort");
      for (const auto& s : sig.sorts()) groups_.push_back(Group{s.vars});
      unsorted_ = sig.unsorted();
    } else {
      groups_.push_back(Group{mec_variables(sig, logic)});
    }
    for (const auto& g : groups_)
      if (g.vars.size() > kDefaultMecCap) throw ResourceLimit("too many variables in one sort");
  }

  const std::vector<Group>& groups() const { return groups_; }

  /// Searches one branch. Returns the first countermodel in enumeration order, if any.
  /// `truncated` is set when a cap stopped the branch early.
  std::optional<Witness> run(std::size_t index, const Branch& branch, std::size_t cap,
                             const std::atomic<std::size_t>& best, std::size_t& candidates, bool& truncated) const {
    const std::size_t m = groups_.size();
    std::vector<std::size_t> sizes(m);
    std::size_t n = 1;
    for (std::size_t g = 0; g < m; ++g) n *= sizes[g] = branch[g].size();
    std::vector<std::size_t> stride(m, 1);
    for (std::size_t g = m; g-- > 1;) stride[g - 1] = stride[g] * sizes[g];

    // Cylinder of each group world, and down/up cylinders by position.
    std::vector<std::vector<Mask>> cyl(m), down(m), up(m);
    std::vector<std::vector<std::uint8_t>> coord(m, std::vector<std::uint8_t>(n));
    for (std::size_t g = 0; g < m; ++g) {
      cyl[g].assign(sizes[g], 0);
      for (std::size_t w = 0; w < n; ++w) {
        coord[g][w] = static_cast<std::uint8_t>((w / stride[g]) % sizes[g]);
        cyl[g][coord[g][w]] |= Mask{1} << w;
      }
      down[g].assign(sizes[g], 0);
      up[g].assign(sizes[g], 0);
      Mask acc = 0;
      for (std::size_t r = 0; r < sizes[g]; ++r) down[g][r] = acc |= cyl[g][r];
      acc = 0;
      for (std::size_t r = sizes[g]; r-- > 0;) up[g][r] = acc |= cyl[g][r];
    }
    const bool ordered = has_order(logic_);
    const std::size_t levels = scale_.size();
    const Mask all = low_bits(n);

    Witness wit;
    wit.branch = index;
    wit.codes = branch;
    wit.sims.resize(m);
    wit.unsorted.assign(unsorted_.size(), 0);
    std::vector<Mask> var(sig_.size(), 0);
    std::vector<Mask> L(problem_.atoms.size()), R(problem_.atoms.size());
    std::vector<std::vector<Mask>> lifted(m);
    std::vector<Mask> ball(levels * n);
    bool found = false;

    auto eval = [&](auto&& self, const BasicExpr& e) -> Mask {
      switch (e.op()) {
        case BasicOp::var: return var[e.var()];
        case BasicOp::bottom: return 0;
        case BasicOp::top: return all;
        case BasicOp::neg: return all & ~self(self, e.child());
        case BasicOp::conj: return self(self, e.left()) & self(self, e.right());
        case BasicOp::disj: return self(self, e.left()) | self(self, e.right());
        case BasicOp::dia_le:
        case BasicOp::dia_ge: {
          const Mask a = self(self, e.child());
          if (!a) return 0;
          Mask out = all;
          for (std::size_t g = 0; g < m; ++g) {
            std::uint8_t lo = 255, hi = 0;
            for_each_bit(a, [&](std::size_t w) {
              lo = std::min(lo, coord[g][w]);
              hi = std::max(hi, coord[g][w]);
            });
            out &= e.op() == BasicOp::dia_le ? down[g][hi] : up[g][lo];
          }
          return out;
        }
      }
      return 0;
    };

    // Innermost: the similarity of every group fixed in wit.sims.
    auto check = [&]() -> bool {
      if (++candidates > cap) {
        truncated = true;
        return false;
      }
      if ((candidates & 0xFF) == 0 && best.load(std::memory_order_relaxed) < index) return false;
      for (std::size_t g = 0; g < m; ++g) {
        const std::size_t k = sizes[g];
        lifted[g].assign(levels * k, 0);
        for (std::size_t x = 0; x < k; ++x)
          for (std::size_t y = 0; y < k; ++y)
            for (std::size_t c = 0; c <= wit.sims[g][x * k + y]; ++c) lifted[g][c * k + x] |= cyl[g][y];
      }
      for (std::size_t c = 0; c < levels; ++c)
        for (std::size_t w = 0; w < n; ++w) {
          Mask b = all;
          for (std::size_t g = 0; g < m; ++g) b &= lifted[g][c * sizes[g] + coord[g][w]];
          ball[c * n + w] = b;
        }
      std::uint64_t truth = 0;
      for (std::size_t a = 0; a < problem_.atoms.size(); ++a) {
        const std::size_t c = problem_.atoms[a].grade.index;
        Mask nb = 0;
        for_each_bit(R[a], [&](std::size_t w) { nb |= ball[c * n + w]; });
        if ((L[a] & ~nb) == 0) truth |= std::uint64_t{1} << a;
      }
      if (problem_.countermodel(truth)) {
        found = true;
        return false;
      }
      return true;
    };

    auto sims = [&](auto&& self, std::size_t g) -> bool {
      if (g == m) return check();
      auto visit = [&](const std::vector<std::uint8_t>& s) {
        wit.sims[g] = s;
        return self(self, g + 1);
      };
      return ordered ? for_each_chain_similarity(scale_, sizes[g], visit)
                     : for_each_similarity(scale_, sizes[g], visit);
    };

    auto extensions = [&]() -> bool {
      for (std::size_t i = 0; i < unsorted_.size(); ++i) var[unsorted_[i]] = wit.unsorted[i];
      for (std::size_t a = 0; a < problem_.atoms.size(); ++a) {
        L[a] = eval(eval, problem_.atoms[a].lhs);
        R[a] = eval(eval, problem_.atoms[a].rhs);
      }
      return sims(sims, 0);
    };

    // Unsorted variables range over all subsets: with sorted separation every cell is one world.
    auto unsorted = [&]() -> bool {
      while (true) {
        if (!extensions()) return false;
        std::size_t i = unsorted_.size();
        while (i-- > 0) {
          if (wit.unsorted[i] != all) {
            ++wit.unsorted[i];
            break;
          }
          wit.unsorted[i] = 0;
        }
        if (i == static_cast<std::size_t>(-1)) return true;
      }
    };

    auto assign_vars = [&]() {
      for (std::size_t g = 0; g < m; ++g) {
        const auto& vars = groups_[g].vars;
        for (std::size_t j = 0; j < vars.size(); ++j) {
          Mask e = 0;
          for (std::size_t x = 0; x < sizes[g]; ++x)
            if (mec_literal_positive(wit.codes[g][x], vars.size(), j)) e |= cyl[g][x];
          var[vars[j]] = e;
        }
      }
    };

    // Orders: each group's worlds permuted, first group slowest, permutations in lexicographic order.
    auto orders = [&](auto&& self, std::size_t g) -> bool {
      if (g == m) {
        assign_vars();
        return unsorted();
      }
      if (!ordered) return self(self, g + 1);
      std::vector<std::uint32_t> perm = branch[g];
      do {
        wit.codes[g] = perm;
        if (!self(self, g + 1)) return false;
      } while (std::next_permutation(perm.begin(), perm.end()));
      return true;
    };

    orders(orders, 0);
    if (found) return wit;
    return std::nullopt;
  }

  /// Rebuilds a witness as a validated model. Chain worlds are listed bottom to top.
  Model build(const Witness& w, const ScalePtr& scale) const {
    const std::size_t m = groups_.size();
    auto grades = [](const std::vector<std::uint8_t>& s) {
      std::vector<Grade> out;
      for (auto v : s) out.push_back(Grade{v});
      return out;
    };
    Space space;
    std::size_t n = 1;
    for (const auto& c : w.codes) n *= c.size();
    if (logic_ == Logic::lae) {
      space = SimilaritySpace(scale, SimilaritySpace::default_names(n), grades(w.sims[0]));
    } else if (logic_ == Logic::laec) {
      space = ChainSpace::identity_order(SimilaritySpace(scale, SimilaritySpace::default_names(n), grades(w.sims[0])));
    } else {
      std::vector<ChainSpace> comps;
      for (std::size_t g = 0; g < m; ++g) {
        std::string prefix = sig_.sorts()[g].name;
        if (prefix.empty()) prefix = "s" + std::to_string(g + 1) + "_";
        comps.push_back(ChainSpace::identity_order(
            SimilaritySpace(scale, SimilaritySpace::default_names(w.codes[g].size(), prefix), grades(w.sims[g]))));
      }
      space = ProductSpace(std::move(comps));
    }
    std::vector<std::size_t> stride(m, 1);
    for (std::size_t g = m; g-- > 1;) stride[g - 1] = stride[g] * w.codes[g].size();
    Evaluation ev(sig_.size(), WorldSet(n));
    for (std::size_t g = 0; g < m; ++g) {
      const auto& vars = groups_[g].vars;
      for (std::size_t world = 0; world < n; ++world) {
        const std::size_t x = (world / stride[g]) % w.codes[g].size();
        for (std::size_t j = 0; j < vars.size(); ++j)
          if (mec_literal_positive(w.codes[g][x], vars.size(), j)) ev[vars[j]].set(world);
      }
    }
    for (std::size_t i = 0; i < unsorted_.size(); ++i) ev[unsorted_[i]] = WorldSet::from_mask(n, w.unsorted[i]);
    return Model(logic_, sig_, std::move(space), std::move(ev));
  }

 private:
  Logic logic_;
  const Signature& sig_;
  const GradeScale& scale_;
  const Problem& problem_;
  std::vector<Group> groups_;
  std::vector<VarId> unsorted_;
};

}  // namespace detail

/// Semantic entailment t |= query, decided by enumerating models of canonical shape.
inline EntailmentVerdict decide_entailment(Logic logic, const Signature& sig, const GradeScale& scale,
                                           const Theory& t, const OuterFormula& query,
                                           const SearchBounds& bounds = {}) {
  EntailmentVerdict out;
  const auto problem = detail::compile(sig, scale, logic, t, query);
  std::optional<detail::Search> search;
  try {
    search.emplace(logic, sig, scale, problem);
  } catch (const ResourceLimit& e) {
    out.reason = e.what();
    return out;
  }
  if (bounds.exhaustive) {
    if (search->groups().size() > 2) {
      out.reason = "exhaustive search refused: more than 2 sorts";
      return out;
    }
    for (const auto& g : search->groups())
      if (g.vars.size() > 3) {
        out.reason = "exhaustive search refused: more than 3 variables in one sort";
        return out;
      }
  }

  const std::size_t max_size = bounds.exhaustive ? kUnbounded : (has_order(logic) ? bounds.max_chain : bounds.max_worlds);
  const std::size_t subset_cap = bounds.exhaustive ? kUnbounded : bounds.max_world_subsets;
  const std::size_t sim_cap = bounds.exhaustive ? kUnbounded : bounds.max_sim_assignments;
  bool complete = true;
  const auto branches = detail::enumerate_branches(search->groups(), max_size, subset_cap, complete);

  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> best{kUnbounded};
  std::vector<std::optional<detail::Witness>> found(branches.size());
  std::vector<char> truncated(branches.size(), 0);
  std::vector<std::size_t> tried(branches.size(), 0);
  std::exception_ptr error;
  std::mutex error_mutex;

  auto worker = [&]() {
    try {
      while (true) {
        const std::size_t i = next.fetch_add(1);
        if (i >= branches.size() || i > best.load()) return;
        std::size_t local = 0;
        bool cut = false;
        found[i] = search->run(i, branches[i], sim_cap, best, local, cut);
        truncated[i] = cut;
        tried[i] = local;
        if (found[i]) {
          std::size_t cur = best.load();
          while (i < cur && !best.compare_exchange_weak(cur, i)) {
          }
        }
      }
    } catch (...) {
      std::lock_guard lock(error_mutex);
      if (!error) error = std::current_exception();
      best = 0;
    }
  };
  const std::size_t nworkers = std::max<std::size_t>(1, std::min(bounds.workers, branches.size()));
  if (nworkers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t k = 0; k < nworkers; ++k) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (error) std::rethrow_exception(error);
  // stats cover the branches up to the first countermodel, whatever else other workers reached
  const std::size_t b = best.load();
  const std::size_t last = b == kUnbounded ? branches.size() : b + 1;
  out.stats.subsets = last;
  for (std::size_t i = 0; i < last; ++i) out.stats.candidates += tried[i];
  if (b != kUnbounded) {
    auto model = search->build(*found[b], share(scale));
    if (!sat_theory(model, t) || sat_formula(model, query))
      throw std::logic_error("decision search produced a model that does not refute the query");
    out.verdict = Verdict::countermodel;
    out.countermodel = std::move(model);
    return out;
  }
  for (char c : truncated) complete = complete && !c;
  if (complete) {
    out.verdict = Verdict::entailed;
  } else {
    out.reason = "search bounds reached without a countermodel";
  }
  return out;
}

}  // namespace lae
