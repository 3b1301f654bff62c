#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "lae/errors.hpp"
#include "lae/spaces.hpp"
#include "lae/syntax.hpp"
#include "lae/world_set.hpp"

namespace lae {

/// Extension of every variable, indexed by VarId.
using Evaluation = std::vector<WorldSet>;

enum class EvalIssue { shape, variant, separation, not_cylinder, not_saturated };

inline std::string_view to_string(EvalIssue i) {
  switch (i) {
    case EvalIssue::shape: return "shape";
    case EvalIssue::variant: return "variant";
    case EvalIssue::separation: return "separation";
    case EvalIssue::not_cylinder: return "not-cylinder";
    case EvalIssue::not_saturated: return "not-saturated";
  }
  return "?";
}

struct EvalDiagnostic {
  EvalIssue issue;
  std::vector<std::size_t> worlds;
  std::string message;
};

inline bool space_matches(const Space& space, Logic logic) {
  switch (logic) {
    case Logic::lae: return std::holds_alternative<SimilaritySpace>(space);
    case Logic::laec: return std::holds_alternative<ChainSpace>(space);
    case Logic::laepc: return std::holds_alternative<ProductSpace>(space);
  }
  return false;
}

inline std::vector<EvalDiagnostic> validate_evaluation(const Evaluation& ev, const Space& space, const Signature& sig,
                                                       Logic logic) {
  std::vector<EvalDiagnostic> out;
  const SimilaritySpace& base = base_of(space);
  const std::size_t n = base.size();
  if (!space_matches(space, logic)) {
    out.push_back({EvalIssue::variant, {}, "space kind does not match logic " + std::string(to_string(logic))});
    return out;
  }
  if (ev.size() != sig.size()) {
    out.push_back({EvalIssue::shape, {}, "evaluation assigns " + std::to_string(ev.size()) + " variables, signature has " +
                                             std::to_string(sig.size())});
    return out;
  }
  for (VarId v = 0; v < ev.size(); ++v)
    if (ev[v].universe() != n) {
      out.push_back({EvalIssue::shape, {}, "extension of '" + sig.var(v).name + "' is over the wrong world count"});
      return out;
    }
  const ProductSpace* product = std::get_if<ProductSpace>(&space);
  if (product && product->dimension() != sig.sorts().size()) {
    out.push_back({EvalIssue::variant, {}, "product has " + std::to_string(product->dimension()) +
                                               " components but the signature declares " +
                                               std::to_string(sig.sorts().size()) + " sorts"});
    return out;
  }

  auto profile = [&](std::size_t w, bool sorted_only) {
    std::vector<bool> bits(ev.size());
    for (VarId v = 0; v < ev.size(); ++v)
      if (!sorted_only || sig.is_sorted(v)) bits[v] = ev[v].test(w);
    return bits;
  };

  std::map<std::vector<bool>, std::size_t> seen;
  for (std::size_t w = 0; w < n; ++w) {
    auto [it, fresh] = seen.emplace(profile(w, false), w);
    if (!fresh)
      out.push_back({EvalIssue::separation, {it->second, w},
                     "no variable separates " + base.name(it->second) + " and " + base.name(w)});
  }

  if (product) {
    for (VarId v : sig.sorted_vars()) {
      const auto i = static_cast<std::size_t>(sig.sort_of(v));
      WorldSet coords(product->component(i).size());
      ev[v].for_each([&](std::size_t w) { coords.set(product->coord(w, i)); });
      if (product->cylinder(i, coords) != ev[v]) {
        std::size_t witness = (product->cylinder(i, coords) - ev[v]).first();
        out.push_back({EvalIssue::not_cylinder, {witness},
                       "extension of '" + sig.var(v).name + "' is not a cylinder over sort '" + sig.sorts()[i].name +
                           "' (misses " + base.name(witness) + ")"});
      }
    }
    std::map<std::vector<bool>, std::size_t> cell;
    for (std::size_t w = 0; w < n; ++w) {
      auto [it, fresh] = cell.emplace(profile(w, true), w);
      if (fresh) continue;
      for (VarId a : sig.unsorted())
        if (ev[a].test(w) != ev[a].test(it->second))
          out.push_back({EvalIssue::not_saturated, {it->second, w},
                         "extension of '" + sig.var(a).name + "' splits the cell of " + base.name(it->second) +
                             " and " + base.name(w)});
    }
  }
  return out;
}

/// A space together with a validated evaluation for a logic and signature.
class Model {
 public:
  Model(Logic logic, Signature sig, Space space, Evaluation eval)
      : logic_(logic), sig_(std::move(sig)), space_(std::move(space)), eval_(std::move(eval)) {
    std::string problems;
    for (const auto& v : lae::validate(space_))
      problems += "\n  " + std::string(to_string(v.law)) + ": " + v.message;
    for (const auto& d : validate_evaluation(eval_, space_, sig_, logic_))
      problems += "\n  " + std::string(to_string(d.issue)) + ": " + d.message;
    if (!problems.empty()) throw ModelError("invalid model:" + problems);
  }

  Logic logic() const { return logic_; }
  const Signature& signature() const { return sig_; }
  const Space& space() const { return space_; }
  const SimilaritySpace& base() const { return base_of(space_); }
  const GradeScale& scale() const { return base().scale(); }
  const Evaluation& evaluation() const { return eval_; }
  std::size_t size() const { return base().size(); }

 private:
  Logic logic_;
  Signature sig_;
  Space space_;
  Evaluation eval_;
};

inline WorldSet eval_basic(const Space& space, const Evaluation& ev, const BasicExpr& e) {
  const SimilaritySpace& base = base_of(space);
  switch (e.op()) {
    case BasicOp::var:
      if (e.var() >= ev.size()) throw ModelError("variable without an extension");
      return ev[e.var()];
    case BasicOp::bottom: return base.empty_set();
    case BasicOp::top: return base.all();
    case BasicOp::neg: return eval_basic(space, ev, e.child()).complement();
    case BasicOp::conj: return eval_basic(space, ev, e.left()) & eval_basic(space, ev, e.right());
    case BasicOp::disj: return eval_basic(space, ev, e.left()) | eval_basic(space, ev, e.right());
    case BasicOp::dia_le: return diamond(space, Direction::le, eval_basic(space, ev, e.child()));
    case BasicOp::dia_ge: return diamond(space, Direction::ge, eval_basic(space, ev, e.child()));
  }
  return base.empty_set();
}

inline WorldSet eval_basic(const Model& m, const BasicExpr& e) { return eval_basic(m.space(), m.evaluation(), e); }

inline bool sat_gimp(const Space& space, const Evaluation& ev, const GradedImplication& g) {
  return eval_basic(space, ev, g.lhs).is_subset_of(neighborhood(space, g.grade, eval_basic(space, ev, g.rhs)));
}

inline bool sat_gimp(const Model& m, const GradedImplication& g) { return sat_gimp(m.space(), m.evaluation(), g); }

inline bool sat_formula(const Space& space, const Evaluation& ev, const OuterFormula& f) {
  switch (f.op()) {
    case OuterOp::atom: return sat_gimp(space, ev, f.atom());
    case OuterOp::neg: return !sat_formula(space, ev, f.child());
    case OuterOp::conj: return sat_formula(space, ev, f.left()) && sat_formula(space, ev, f.right());
    case OuterOp::disj: return sat_formula(space, ev, f.left()) || sat_formula(space, ev, f.right());
    case OuterOp::imp: return !sat_formula(space, ev, f.left()) || sat_formula(space, ev, f.right());
    case OuterOp::iff: return sat_formula(space, ev, f.left()) == sat_formula(space, ev, f.right());
  }
  return false;
}

inline bool sat_formula(const Model& m, const OuterFormula& f) { return sat_formula(m.space(), m.evaluation(), f); }

inline bool sat_theory(const Space& space, const Evaluation& ev, const Theory& t) {
  for (const auto& f : t)
    if (!sat_formula(space, ev, f)) return false;
  return true;
}

inline bool sat_theory(const Model& m, const Theory& t) { return sat_theory(m.space(), m.evaluation(), t); }

}  // namespace lae
