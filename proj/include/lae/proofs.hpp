#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "lae/errors.hpp"
#include "lae/grades.hpp"
#include "lae/propositional.hpp"
#include "lae/syntax.hpp"

namespace lae {

inline constexpr int kAxiomCount = 22;

/// Highest axiom number available in a logic: A1-A11, A1-A19, A1-A22.
inline int axiom_limit(Logic l) {
  switch (l) {
    case Logic::lae: return 11;
    case Logic::laec: return 19;
    case Logic::laepc: return 22;
  }
  return 0;
}

inline std::string axiom_name(int id) { return "A" + std::to_string(id); }

namespace detail {

struct Ctx {
  const Signature& sig;
  const GradeScale& scale;
  Logic logic;
};

inline bool is_atom(const OuterFormula& f) { return f.op() == OuterOp::atom; }
inline bool is_op(const OuterFormula& f, OuterOp op) { return f.op() == op; }
inline bool is_op(const BasicExpr& e, BasicOp op) { return e.op() == op; }

inline const GradedImplication* gimp_of(const OuterFormula& f) { return is_atom(f) ? &f.atom() : nullptr; }
inline const GradedImplication* neg_gimp_of(const OuterFormula& f) {
  return is_op(f, OuterOp::neg) ? gimp_of(f.child()) : nullptr;
}

inline bool is_bottom(const BasicExpr& e) { return e.op() == BasicOp::bottom; }

/// g is "x =>{1} _|_".
inline bool is_refutation(const GradedImplication* g, const Ctx& c) {
  return g && g->grade == c.scale.top() && is_bottom(g->rhs);
}

/// A conjunction of exactly three outer formulas, either association.
inline std::optional<std::vector<OuterFormula>> conj3(const OuterFormula& f) {
  if (!is_op(f, OuterOp::conj)) return std::nullopt;
  if (is_op(f.left(), OuterOp::conj)) return std::vector<OuterFormula>{f.left().left(), f.left().right(), f.right()};
  if (is_op(f.right(), OuterOp::conj)) return std::vector<OuterFormula>{f.left(), f.right().left(), f.right().right()};
  return std::nullopt;
}

inline bool diamond_conjunction(const BasicExpr& e) {
  if (e.is_diamond()) return true;
  return e.op() == BasicOp::conj && diamond_conjunction(e.left()) && diamond_conjunction(e.right());
}

inline bool mec_for(const BasicExpr& e, const Ctx& c) { return is_mec(e, c.sig, c.logic).has_value(); }

// --- LAE axioms ------------------------------------------------------------

inline bool a1(const OuterFormula& f, const Ctx& c) {
  auto g = gimp_of(f);
  return g && g->grade == c.scale.top() && basic_implies(g->lhs, g->rhs);
}

inline bool a2(const OuterFormula& f, const Ctx& c) {
  if (!is_op(f, OuterOp::imp)) return false;
  auto p = gimp_of(f.left());
  auto q = gimp_of(f.right());
  return p && p->grade == c.scale.top() && is_refutation(q, c) && q->lhs == ex::conj(p->lhs, ex::neg(p->rhs));
}

inline bool a3(const OuterFormula& f, const Ctx&) {
  if (!is_op(f, OuterOp::imp)) return false;
  auto p = gimp_of(f.left());
  auto q = gimp_of(f.right());
  return p && q && p->lhs == q->lhs && p->rhs == q->rhs && q->grade <= p->grade;
}

inline bool a4(const OuterFormula& f, const Ctx& c) {
  if (!is_op(f, OuterOp::imp)) return false;
  auto p = neg_gimp_of(f.left());
  auto q = gimp_of(f.right());
  return is_refutation(p, c) && q && q->grade == c.scale.bottom() && q->rhs == p->lhs;
}

inline bool a5(const OuterFormula& f, const Ctx& c) {
  if (!is_op(f, OuterOp::imp)) return false;
  auto p = gimp_of(f.left());
  auto q = gimp_of(f.right());
  return p && is_bottom(p->rhs) && is_refutation(q, c) && q->lhs == p->lhs;
}

inline bool a6(const OuterFormula& f, const Ctx& c) {
  if (!is_op(f, OuterOp::imp) || !is_op(f.left(), OuterOp::conj)) return false;
  auto nd = neg_gimp_of(f.left().left());
  auto de = gimp_of(f.left().right());
  auto ed = gimp_of(f.right());
  return is_refutation(nd, c) && de && ed && de->lhs == nd->lhs && ed->lhs == de->rhs && ed->rhs == de->lhs &&
         ed->grade == de->grade && mec_for(de->lhs, c) && mec_for(de->rhs, c);
}

inline bool a7(const OuterFormula& f, const Ctx&) {
  if (!is_op(f, OuterOp::imp) || !is_op(f.left(), OuterOp::conj)) return false;
  auto p = gimp_of(f.left().left());
  auto q = gimp_of(f.left().right());
  auto r = gimp_of(f.right());
  return p && q && r && p->grade == q->grade && r->grade == p->grade && p->rhs == q->rhs && r->rhs == p->rhs &&
         r->lhs == ex::disj(p->lhs, q->lhs);
}

inline bool a8(const OuterFormula& f, const Ctx& c) {
  if (!is_op(f, OuterOp::imp) || !is_op(f.right(), OuterOp::disj)) return false;
  auto p = gimp_of(f.left());
  auto q = gimp_of(f.right().left());
  auto r = gimp_of(f.right().right());
  return p && q && r && p->rhs.op() == BasicOp::disj && q->lhs == p->lhs && r->lhs == p->lhs &&
         q->grade == p->grade && r->grade == p->grade && q->rhs == p->rhs.left() && r->rhs == p->rhs.right() &&
         mec_for(p->lhs, c);
}

inline bool a9(const OuterFormula& f, const Ctx& c) {
  if (!is_op(f, OuterOp::imp) || !is_op(f.left(), OuterOp::conj)) return false;
  auto p = gimp_of(f.left().left());
  auto q = gimp_of(f.left().right());
  auto r = gimp_of(f.right());
  return p && q && r && p->rhs == q->lhs && r->lhs == p->lhs && r->rhs == q->rhs &&
         r->grade == c.scale.combine(p->grade, q->grade);
}

inline bool a10(const OuterFormula& f, const Ctx& c) {
  auto g = neg_gimp_of(f);
  return is_refutation(g, c) && g->lhs.op() == BasicOp::top;
}

inline bool a11(const OuterFormula& f, const Ctx&) { return outer_tautology(f); }

// --- LAEC axioms -----------------------------------------------------------

inline bool same_dir(BasicOp a, BasicOp b) { return a == b && (a == BasicOp::dia_le || a == BasicOp::dia_ge); }

inline bool a12(const OuterFormula& f, const Ctx& c) {
  auto g = gimp_of(f);
  return g && g->grade == c.scale.top() && g->rhs.is_diamond() && g->rhs.child() == g->lhs;
}

inline bool a13(const OuterFormula& f, const Ctx& c) {
  auto g = gimp_of(f);
  return g && g->grade == c.scale.top() && g->rhs.is_diamond() && same_dir(g->lhs.op(), g->rhs.op()) &&
         same_dir(g->lhs.child().op(), g->rhs.op()) && g->lhs.child() == g->rhs;
}

inline bool a14(const OuterFormula& f, const Ctx& c) {
  auto g = gimp_of(f);
  return is_refutation(g, c) && g->lhs.is_diamond() && is_bottom(g->lhs.child());
}

inline bool a15(const OuterFormula& f, const Ctx& c) {
  if (!is_op(f, OuterOp::disj)) return false;
  auto p = gimp_of(f.left());
  auto q = gimp_of(f.right());
  if (!p || !q || p->grade != c.scale.top() || q->grade != c.scale.top()) return false;
  if (!p->lhs.is_diamond() || !same_dir(p->lhs.op(), p->rhs.op())) return false;
  if (!(q->lhs == p->rhs && q->rhs == p->lhs)) return false;
  return c.logic != Logic::laepc || same_sort(p->lhs.child(), p->rhs.child(), c.sig);
}

inline bool a16(const OuterFormula& f, const Ctx& c) {
  auto g = gimp_of(f);
  if (!g || g->grade != c.scale.top() || g->lhs.op() != BasicOp::conj) return false;
  const auto& l = g->lhs.left();
  const auto& r = g->lhs.right();
  if (l.op() != BasicOp::dia_le || r.op() != BasicOp::dia_ge || l.child() != g->rhs || r.child() != g->rhs)
    return false;
  return c.logic == Logic::laepc ? is_one_sorted_mec(g->rhs, c.sig).has_value() : mec_for(g->rhs, c);
}

inline bool a17(const OuterFormula& f, const Ctx&) {
  if (!is_op(f, OuterOp::imp)) return false;
  auto p = gimp_of(f.left());
  auto q = gimp_of(f.right());
  return p && q && q->grade == p->grade && q->lhs.is_diamond() && same_dir(q->lhs.op(), q->rhs.op()) &&
         q->lhs.child() == p->lhs && q->rhs.child() == p->rhs;
}

inline bool a18(const OuterFormula& f, const Ctx& c) {
  if (!is_op(f, OuterOp::imp)) return false;
  auto p = gimp_of(f.left());
  auto q = gimp_of(f.right());
  if (!is_refutation(p, c) || !is_refutation(q, c)) return false;
  if (p->lhs.op() != BasicOp::conj || q->lhs.op() != BasicOp::conj) return false;
  const auto& phi = p->lhs.left();
  const auto& dpsi = p->lhs.right();
  const auto& dphi = q->lhs.left();
  if (!dpsi.is_diamond() || !dphi.is_diamond() || dphi.op() == dpsi.op()) return false;
  if (dphi.child() != phi || q->lhs.right() != dpsi) return false;
  return c.logic != Logic::laepc || one_sorted(phi, c.sig);
}

inline bool a19(const OuterFormula& f, const Ctx& c) {
  if (!is_op(f, OuterOp::imp)) return false;
  auto parts = conj3(f.left());
  if (!parts) return false;
  auto ne = neg_gimp_of((*parts)[0]);
  auto p = gimp_of((*parts)[1]);
  auto q = gimp_of((*parts)[2]);
  auto r = gimp_of(f.right());
  if (!is_refutation(ne, c) || !p || !q || !r) return false;
  if (ne->lhs.op() != BasicOp::conj) return false;
  const auto& rho = ne->lhs.left();
  const auto& sigma = ne->lhs.right();
  return diamond_conjunction(rho) && diamond_conjunction(sigma) && p->lhs == q->lhs && r->lhs == p->lhs &&
         p->grade == q->grade && r->grade == p->grade && p->rhs == rho && q->rhs == sigma && r->rhs == ne->lhs;
}

// --- LAEPC axioms ----------------------------------------------------------

inline bool a20(const OuterFormula& f, const Ctx& c) {
  if (!is_op(f, OuterOp::imp) || !is_op(f.right(), OuterOp::iff) || !is_op(f.right().left(), OuterOp::conj))
    return false;
  auto ne = neg_gimp_of(f.left());
  auto p = gimp_of(f.right().left().left());
  auto q = gimp_of(f.right().left().right());
  auto r = gimp_of(f.right().right());
  if (!is_refutation(ne, c) || !p || !q || !r) return false;
  return ne->lhs == ex::conj(p->lhs, q->lhs) && p->grade == q->grade && r->grade == p->grade &&
         r->lhs == ne->lhs && r->rhs == ex::conj(p->rhs, q->rhs) &&
         disjoint_sorted(ex::conj(p->lhs, p->rhs), ex::conj(q->lhs, q->rhs), c.sig);
}

inline bool a21(const OuterFormula& f, const Ctx& c) {
  if (!is_op(f, OuterOp::imp) || !is_op(f.right(), OuterOp::disj)) return false;
  auto p = gimp_of(f.left());
  auto q = gimp_of(f.right().left());
  auto r = gimp_of(f.right().right());
  if (!is_refutation(p, c) || !is_refutation(q, c) || !is_refutation(r, c)) return false;
  if (q->lhs.op() != BasicOp::conj || r->lhs.op() != BasicOp::conj) return false;
  const auto& d = q->lhs.left();
  if (!d.is_diamond() || r->lhs.left() != d) return false;
  const auto& chi = q->lhs.right();
  const auto& psi = r->lhs.right();
  const bool shape = p->lhs == ex::conj(ex::conj(d, chi), psi) || p->lhs == ex::conj(d, ex::conj(chi, psi));
  return shape && disjoint_sorted(chi, psi, c.sig);
}

inline bool a22(const OuterFormula& f, const Ctx& c) {
  if (!is_op(f, OuterOp::disj)) return false;
  auto p = gimp_of(f.left());
  auto q = gimp_of(f.right());
  return p && q && p->grade == c.scale.top() && q->grade == c.scale.top() && q->lhs == p->lhs &&
         q->rhs == ex::neg(p->rhs) && mec_for(p->lhs, c);
}

using Matcher = bool (*)(const OuterFormula&, const Ctx&);
inline constexpr Matcher kMatchers[kAxiomCount] = {a1,  a2,  a3,  a4,  a5,  a6,  a7,  a8,  a9,  a10, a11,
                                                   a12, a13, a14, a15, a16, a17, a18, a19, a20, a21, a22};

inline bool well_formed(const BasicExpr& e, const Signature& sig, Logic logic) {
  if (e.op() == BasicOp::var) return e.var() < sig.size();
  if (e.is_diamond() && !has_order(logic)) return false;
  if (e.is_unary()) return well_formed(e.child(), sig, logic);
  if (e.is_binary()) return well_formed(e.left(), sig, logic) && well_formed(e.right(), sig, logic);
  return true;
}

}  // namespace detail

/// Whether every expression of `f` uses declared variables, grades of the scale and only the
/// connectives of `logic`.
inline bool well_formed(const OuterFormula& f, const Signature& sig, const GradeScale& scale, Logic logic) {
  bool ok = true;
  for_each_atom(f, [&](const GradedImplication& g) {
    ok = ok && scale.contains(g.grade) && detail::well_formed(g.lhs, sig, logic) &&
         detail::well_formed(g.rhs, sig, logic);
  });
  return ok;
}

/// Whether `f` is an instance of axiom `id` in `logic` (ids beyond the logic's list never match).
inline bool matches_axiom(const OuterFormula& f, int id, const Signature& sig, const GradeScale& scale, Logic logic) {
  if (id < 1 || id > axiom_limit(logic)) return false;
  return detail::kMatchers[id - 1](f, detail::Ctx{sig, scale, logic});
}

/// First axiom of `logic`, in the order A1..A22, of which `f` is an instance.
inline std::optional<int> recognize_axiom(const OuterFormula& f, const Signature& sig, const GradeScale& scale,
                                          Logic logic) {
  for (int id = 1; id <= axiom_limit(logic); ++id)
    if (matches_axiom(f, id, sig, scale, logic)) return id;
  return std::nullopt;
}

// --- Proof scripts ---------------------------------------------------------

struct Justification {
  enum class Kind { axiom, hypothesis, mp };
  Kind kind = Kind::axiom;
  int axiom = 0;        // 0: any axiom
  std::size_t a = 0;    // hypothesis index (1-based) or first mp premise line
  std::size_t b = 0;    // second mp premise line

  static Justification by_axiom(int id = 0) { return {Kind::axiom, id, 0, 0}; }
  static Justification hyp(std::size_t i) { return {Kind::hypothesis, 0, i, 0}; }
  static Justification mp(std::size_t i, std::size_t j) { return {Kind::mp, 0, i, j}; }
};

struct ProofLine {
  OuterFormula formula;
  Justification why;
  std::size_t source_line = 0;  // position in the input file, 0 when built in code
};

using ProofScript = std::vector<ProofLine>;

struct ProofVerdict {
  bool accepted = false;
  std::optional<OuterFormula> conclusion;
  std::size_t line = 0;  // 1-based script line of the first rejection
  std::string reason;
};

/// Checks each line: an instance of its axiom, a member of `t`, or modus ponens from two earlier
/// lines (one of them the implication from the other to this line).
inline ProofVerdict check_proof(const Theory& t, const ProofScript& script, const Signature& sig,
                                const GradeScale& scale, Logic logic) {
  ProofVerdict out;
  if (script.empty()) {
    out.reason = "empty proof";
    return out;
  }
  auto reject = [&](std::size_t line, std::string reason) {
    out.line = line;
    out.reason = std::move(reason);
    return out;
  };
  for (std::size_t i = 0; i < script.size(); ++i) {
    const std::size_t n = i + 1;
    const auto& line = script[i];
    if (!line.formula.valid()) return reject(n, "missing formula");
    if (!well_formed(line.formula, sig, scale, logic))
      return reject(n, "formula is not well-formed in " + std::string(to_string(logic)));
    switch (line.why.kind) {
      case Justification::Kind::axiom: {
        if (line.why.axiom != 0) {
          if (line.why.axiom > axiom_limit(logic))
            return reject(n, axiom_name(line.why.axiom) + " is not an axiom of " + std::string(to_string(logic)));
          bool ok = false;
          try {
            ok = matches_axiom(line.formula, line.why.axiom, sig, scale, logic);
          } catch (const ResourceLimit& e) {
            return reject(n, e.what());
          }
          if (!ok) return reject(n, "not an " + axiom_name(line.why.axiom) + " instance");
        } else {
          std::optional<int> id;
          try {
            id = recognize_axiom(line.formula, sig, scale, logic);
          } catch (const ResourceLimit& e) {
            return reject(n, e.what());
          }
          if (!id) return reject(n, "not an axiom instance");
        }
        break;
      }
      case Justification::Kind::hypothesis:
        if (line.why.a == 0 || line.why.a > t.size())
          return reject(n, "hypothesis " + std::to_string(line.why.a) + " does not exist");
        if (!(t[line.why.a - 1] == line.formula))
          return reject(n, "formula differs from hypothesis " + std::to_string(line.why.a));
        break;
      case Justification::Kind::mp: {
        const std::size_t a = line.why.a, b = line.why.b;
        if (a == 0 || b == 0 || a >= n || b >= n) return reject(n, "modus ponens must cite two earlier lines");
        const auto& fa = script[a - 1].formula;
        const auto& fb = script[b - 1].formula;
        auto concludes = [&](const OuterFormula& minor, const OuterFormula& major) {
          return major.op() == OuterOp::imp && major.left() == minor && major.right() == line.formula;
        };
        if (!concludes(fa, fb) && !concludes(fb, fa))
          return reject(n, "lines " + std::to_string(a) + " and " + std::to_string(b) +
                               " do not yield this formula by modus ponens");
        break;
      }
    }
  }
  out.accepted = true;
  out.conclusion = script.back().formula;
  return out;
}

}  // namespace lae
