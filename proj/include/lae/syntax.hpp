#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "lae/errors.hpp"
#include "lae/grades.hpp"

namespace lae {

enum class Logic { lae, laec, laepc };

inline std::string_view to_string(Logic l) {
  switch (l) {
    case Logic::lae: return "lae";
    case Logic::laec: return "laec";
    case Logic::laepc: return "laepc";
  }
  return "?";
}

inline Logic parse_logic(std::string_view s) {
  if (s == "lae") return Logic::lae;
  if (s == "laec") return Logic::laec;
  if (s == "laepc") return Logic::laepc;
  throw VariantError("unknown logic '" + std::string(s) + "' (expected lae, laec or laepc)");
}

inline bool has_order(Logic l) { return l != Logic::lae; }

using VarId = std::uint32_t;
inline constexpr int kUnsorted = -1;

struct Variable {
  std::string name;
  int sort = kUnsorted;
};

struct Sort {
  std::string name;
  std::vector<VarId> vars;
};

/// Variables of a theory, partitioned into sorts plus a list of unsorted variables.
/// Plain LAE and LAEC use one anonymous sort holding every variable.
class Signature {
 public:
  Signature() = default;

  /// A single anonymous sort holding `names` in order.
  static Signature single(const std::vector<std::string>& names) {
    Signature s;
    s.add_sort("", names);
    return s;
  }

  /// Adds a sort, or extends it when a sort of that name already exists.
  int add_sort(const std::string& name, const std::vector<std::string>& names) {
    int idx = -1;
    for (std::size_t i = 0; i < sorts_.size(); ++i)
      if (sorts_[i].name == name) idx = static_cast<int>(i);
    if (idx < 0) {
      sorts_.push_back(Sort{name, {}});
      idx = static_cast<int>(sorts_.size() - 1);
    }
    for (const auto& n : names) sorts_[idx].vars.push_back(add_var(n, idx));
    if (sorts_[idx].vars.empty()) throw SortError("sort '" + name + "' declares no variables");
    return idx;
  }

  void add_unsorted(const std::vector<std::string>& names) {
    for (const auto& n : names) unsorted_.push_back(add_var(n, kUnsorted));
  }

  std::optional<VarId> find(std::string_view name) const {
    for (std::size_t i = 0; i < vars_.size(); ++i)
      if (vars_[i].name == name) return static_cast<VarId>(i);
    return std::nullopt;
  }

  VarId require(std::string_view name) const {
    if (auto v = find(name)) return *v;
    throw SortError("undeclared variable '" + std::string(name) + "'");
  }

  std::size_t size() const { return vars_.size(); }
  const Variable& var(VarId id) const { return vars_.at(id); }
  const std::vector<Variable>& vars() const { return vars_; }
  const std::vector<Sort>& sorts() const { return sorts_; }
  const std::vector<VarId>& unsorted() const { return unsorted_; }
  int sort_of(VarId id) const { return vars_.at(id).sort; }
  bool is_sorted(VarId id) const { return sort_of(id) != kUnsorted; }

  /// Every sorted variable, in declaration order.
  std::vector<VarId> sorted_vars() const {
    std::vector<VarId> out;
    for (VarId i = 0; i < vars_.size(); ++i)
      if (vars_[i].sort != kUnsorted) out.push_back(i);
    return out;
  }

  friend bool operator==(const Signature& a, const Signature& b) {
    if (a.vars_.size() != b.vars_.size() || a.sorts_.size() != b.sorts_.size()) return false;
    for (std::size_t i = 0; i < a.vars_.size(); ++i)
      if (a.vars_[i].name != b.vars_[i].name || a.vars_[i].sort != b.vars_[i].sort) return false;
    for (std::size_t i = 0; i < a.sorts_.size(); ++i)
      if (a.sorts_[i].name != b.sorts_[i].name) return false;
    return true;
  }

 private:
  VarId add_var(const std::string& name, int sort) {
    if (name.empty()) throw SortError("empty variable name");
    if (name == "T" || name == "dle" || name == "dge")
      throw SortError("'" + name + "' is reserved and cannot name a variable");
    const auto ident_char = [](char ch) {
      return std::isalnum(static_cast<unsigned char>(ch)) || ch == '_' || ch == '\'';
    };
    if (!(std::isalpha(static_cast<unsigned char>(name[0])) || name[0] == '_') ||
        !std::all_of(name.begin(), name.end(), ident_char))
      throw SortError("'" + name + "' is not a valid variable name");
    if (find(name)) throw SortError("variable '" + name + "' declared twice");
    vars_.push_back(Variable{name, sort});
    return static_cast<VarId>(vars_.size() - 1);
  }

  std::vector<Variable> vars_;
  std::vector<Sort> sorts_;
  std::vector<VarId> unsorted_;
};

// ---------------------------------------------------------------------------
// Basic expressions

enum class BasicOp : std::uint8_t { var, bottom, top, neg, conj, disj, dia_le, dia_ge };

struct BasicNode;

/// Immutable shared tree over variables, constants, Boolean connectives and the two diamonds.
class BasicExpr {
 public:
  BasicExpr() = default;

  BasicOp op() const;
  VarId var() const;
  /// Operand of a unary node; left operand of a binary node.
  const BasicExpr& left() const;
  const BasicExpr& right() const;
  const BasicExpr& child() const { return left(); }

  bool is_unary() const { return op() == BasicOp::neg || is_diamond(); }
  bool is_binary() const { return op() == BasicOp::conj || op() == BasicOp::disj; }
  bool is_diamond() const { return op() == BasicOp::dia_le || op() == BasicOp::dia_ge; }
  bool valid() const { return node_ != nullptr; }
  const void* identity() const { return node_.get(); }

  friend bool operator==(const BasicExpr& a, const BasicExpr& b);

 private:
  friend BasicExpr make_basic(BasicOp, VarId, BasicExpr, BasicExpr);
  std::shared_ptr<const BasicNode> node_;
};

struct BasicNode {
  BasicOp op;
  VarId var;
  BasicExpr lhs;
  BasicExpr rhs;
};

inline BasicExpr make_basic(BasicOp op, VarId v, BasicExpr l, BasicExpr r) {
  BasicExpr e;
  e.node_ = std::make_shared<const BasicNode>(BasicNode{op, v, std::move(l), std::move(r)});
  return e;
}

inline BasicOp BasicExpr::op() const { return node_->op; }
inline VarId BasicExpr::var() const { return node_->var; }
inline const BasicExpr& BasicExpr::left() const { return node_->lhs; }
inline const BasicExpr& BasicExpr::right() const { return node_->rhs; }

inline bool operator==(const BasicExpr& a, const BasicExpr& b) {
  if (a.node_ == b.node_) return true;
  if (!a.node_ || !b.node_) return false;
  if (a.op() != b.op()) return false;
  switch (a.op()) {
    case BasicOp::var: return a.var() == b.var();
    case BasicOp::bottom:
    case BasicOp::top: return true;
    case BasicOp::neg:
    case BasicOp::dia_le:
    case BasicOp::dia_ge: return a.left() == b.left();
    case BasicOp::conj:
    case BasicOp::disj: return a.left() == b.left() && a.right() == b.right();
  }
  return false;
}

namespace ex {
inline BasicExpr var(VarId v) { return make_basic(BasicOp::var, v, {}, {}); }
inline BasicExpr bottom() { return make_basic(BasicOp::bottom, 0, {}, {}); }
inline BasicExpr top() { return make_basic(BasicOp::top, 0, {}, {}); }
inline BasicExpr neg(BasicExpr e) { return make_basic(BasicOp::neg, 0, std::move(e), {}); }
inline BasicExpr conj(BasicExpr a, BasicExpr b) {
  return make_basic(BasicOp::conj, 0, std::move(a), std::move(b));
}
inline BasicExpr disj(BasicExpr a, BasicExpr b) {
  return make_basic(BasicOp::disj, 0, std::move(a), std::move(b));
}
inline BasicExpr dle(BasicExpr e) { return make_basic(BasicOp::dia_le, 0, std::move(e), {}); }
inline BasicExpr dge(BasicExpr e) { return make_basic(BasicOp::dia_ge, 0, std::move(e), {}); }
/// a -> b written with the basic connectives: !a | b.
inline BasicExpr implies(BasicExpr a, BasicExpr b) { return disj(neg(std::move(a)), std::move(b)); }
}  // namespace ex

inline bool contains_diamond(const BasicExpr& e) {
  switch (e.op()) {
    case BasicOp::var:
    case BasicOp::bottom:
    case BasicOp::top: return false;
    case BasicOp::dia_le:
    case BasicOp::dia_ge: return true;
    case BasicOp::neg: return contains_diamond(e.child());
    case BasicOp::conj:
    case BasicOp::disj: return contains_diamond(e.left()) || contains_diamond(e.right());
  }
  return false;
}

inline void collect_vars(const BasicExpr& e, std::set<VarId>& out) {
  switch (e.op()) {
    case BasicOp::var: out.insert(e.var()); break;
    case BasicOp::bottom:
    case BasicOp::top: break;
    case BasicOp::neg:
    case BasicOp::dia_le:
    case BasicOp::dia_ge: collect_vars(e.child(), out); break;
    case BasicOp::conj:
    case BasicOp::disj:
      collect_vars(e.left(), out);
      collect_vars(e.right(), out);
      break;
  }
}

inline std::set<VarId> vars_of(const BasicExpr& e) {
  std::set<VarId> s;
  collect_vars(e, s);
  return s;
}

// ---------------------------------------------------------------------------
// Graded implications and outer formulas

struct GradedImplication {
  BasicExpr lhs;
  Grade grade;
  BasicExpr rhs;

  friend bool operator==(const GradedImplication&, const GradedImplication&) = default;
};

enum class OuterOp : std::uint8_t { atom, neg, conj, disj, imp, iff };

struct OuterNode;

/// Immutable shared tree of classical connectives over graded-implication atoms.
class OuterFormula {
 public:
  OuterFormula() = default;

  OuterOp op() const;
  const GradedImplication& atom() const;
  const OuterFormula& left() const;
  const OuterFormula& right() const;
  const OuterFormula& child() const { return left(); }

  bool is_binary() const { return op() != OuterOp::atom && op() != OuterOp::neg; }
  bool valid() const { return node_ != nullptr; }
  const void* identity() const { return node_.get(); }

  friend bool operator==(const OuterFormula& a, const OuterFormula& b);

 private:
  friend OuterFormula make_outer(OuterOp, GradedImplication, OuterFormula, OuterFormula);
  std::shared_ptr<const OuterNode> node_;
};

struct OuterNode {
  OuterOp op;
  GradedImplication atom;
  OuterFormula lhs;
  OuterFormula rhs;
};

inline OuterFormula make_outer(OuterOp op, GradedImplication g, OuterFormula l, OuterFormula r) {
  OuterFormula f;
  f.node_ = std::make_shared<const OuterNode>(OuterNode{op, std::move(g), std::move(l), std::move(r)});
  return f;
}

inline OuterOp OuterFormula::op() const { return node_->op; }
inline const GradedImplication& OuterFormula::atom() const { return node_->atom; }
inline const OuterFormula& OuterFormula::left() const { return node_->lhs; }
inline const OuterFormula& OuterFormula::right() const { return node_->rhs; }

inline bool operator==(const OuterFormula& a, const OuterFormula& b) {
  if (a.node_ == b.node_) return true;
  if (!a.node_ || !b.node_) return false;
  if (a.op() != b.op()) return false;
  switch (a.op()) {
    case OuterOp::atom: return a.atom() == b.atom();
    case OuterOp::neg: return a.child() == b.child();
    default: return a.left() == b.left() && a.right() == b.right();
  }
}

namespace fx {
inline OuterFormula gimp(BasicExpr lhs, Grade c, BasicExpr rhs) {
  return make_outer(OuterOp::atom, GradedImplication{std::move(lhs), c, std::move(rhs)}, {}, {});
}
inline OuterFormula atom(GradedImplication g) { return make_outer(OuterOp::atom, std::move(g), {}, {}); }
inline OuterFormula neg(OuterFormula f) { return make_outer(OuterOp::neg, {}, std::move(f), {}); }
inline OuterFormula conj(OuterFormula a, OuterFormula b) {
  return make_outer(OuterOp::conj, {}, std::move(a), std::move(b));
}
inline OuterFormula disj(OuterFormula a, OuterFormula b) {
  return make_outer(OuterOp::disj, {}, std::move(a), std::move(b));
}
inline OuterFormula imp(OuterFormula a, OuterFormula b) {
  return make_outer(OuterOp::imp, {}, std::move(a), std::move(b));
}
inline OuterFormula iff(OuterFormula a, OuterFormula b) {
  return make_outer(OuterOp::iff, {}, std::move(a), std::move(b));
}
}  // namespace fx

using Theory = std::vector<OuterFormula>;

template <class F>
void for_each_atom(const OuterFormula& f, F&& fn) {
  if (f.op() == OuterOp::atom) {
    fn(f.atom());
  } else if (f.op() == OuterOp::neg) {
    for_each_atom(f.child(), fn);
  } else {
    for_each_atom(f.left(), fn);
    for_each_atom(f.right(), fn);
  }
}

// ---------------------------------------------------------------------------
// Printing. Operands that are themselves binary are always parenthesised, so the
// printed form never depends on precedence subtleties and re-parses to the same tree.

inline std::string to_string(const BasicExpr& e, const Signature& sig) {
  auto operand = [&](const BasicExpr& x) {
    return x.is_binary() ? "(" + to_string(x, sig) + ")" : to_string(x, sig);
  };
  switch (e.op()) {
    case BasicOp::var: return sig.var(e.var()).name;
    case BasicOp::bottom: return "_|_";
    case BasicOp::top: return "T";
    case BasicOp::neg: return "!" + operand(e.child());
    case BasicOp::dia_le: return "dle " + operand(e.child());
    case BasicOp::dia_ge: return "dge " + operand(e.child());
    case BasicOp::conj: return operand(e.left()) + " & " + operand(e.right());
    case BasicOp::disj: return operand(e.left()) + " | " + operand(e.right());
  }
  return "?";
}

inline std::string to_string(const GradedImplication& g, const Signature& sig, const GradeScale& scale) {
  auto operand = [&](const BasicExpr& x) {
    return x.is_binary() ? "(" + to_string(x, sig) + ")" : to_string(x, sig);
  };
  return operand(g.lhs) + " =>{" + scale.value(g.grade).str() + "} " + operand(g.rhs);
}

inline std::string to_string(const OuterFormula& f, const Signature& sig, const GradeScale& scale) {
  auto operand = [&](const OuterFormula& x) {
    return x.op() == OuterOp::neg ? to_string(x, sig, scale) : "(" + to_string(x, sig, scale) + ")";
  };
  switch (f.op()) {
    case OuterOp::atom: return to_string(f.atom(), sig, scale);
    case OuterOp::neg: return "!" + operand(f.child());
    case OuterOp::conj: return operand(f.left()) + " & " + operand(f.right());
    case OuterOp::disj: return operand(f.left()) + " | " + operand(f.right());
    case OuterOp::imp: return operand(f.left()) + " -> " + operand(f.right());
    case OuterOp::iff: return operand(f.left()) + " <-> " + operand(f.right());
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Maximally elementary conjunctions

struct Literal {
  VarId var;
  bool positive;
  friend bool operator==(const Literal&, const Literal&) = default;
};

namespace detail {
inline bool flatten_literals(const BasicExpr& e, std::vector<Literal>& out) {
  switch (e.op()) {
    case BasicOp::var: out.push_back({e.var(), true}); return true;
    case BasicOp::neg:
      if (e.child().op() != BasicOp::var) return false;
      out.push_back({e.child().var(), false});
      return true;
    case BasicOp::conj: return flatten_literals(e.left(), out) && flatten_literals(e.right(), out);
    default: return false;
  }
}

inline std::optional<std::vector<Literal>> literals_over(const BasicExpr& e,
                                                         const std::vector<VarId>& required) {
  std::vector<Literal> lits;
  if (!flatten_literals(e, lits)) return std::nullopt;
  if (lits.size() != required.size()) return std::nullopt;
  std::vector<Literal> canon;
  for (VarId v : required) {
    auto it = std::find_if(lits.begin(), lits.end(), [&](const Literal& l) { return l.var == v; });
    if (it == lits.end()) return std::nullopt;
    canon.push_back(*it);
  }
  return canon;
}

inline BasicExpr conj_of_literals(const std::vector<Literal>& lits) {
  if (lits.empty()) return ex::top();
  auto lit = [](const Literal& l) { return l.positive ? ex::var(l.var) : ex::neg(ex::var(l.var)); };
  BasicExpr e = lit(lits.front());
  for (std::size_t i = 1; i < lits.size(); ++i) e = ex::conj(e, lit(lits[i]));
  return e;
}
}  // namespace detail

/// Variables every m.e.c. must mention: all of them, except that LAEPC leaves out unsorted ones.
inline std::vector<VarId> mec_variables(const Signature& sig, Logic logic) {
  if (logic == Logic::laepc) return sig.sorted_vars();
  std::vector<VarId> all(sig.size());
  for (VarId i = 0; i < all.size(); ++i) all[i] = i;
  return all;
}

/// Canonical literal sequence (declaration order) when `e` is an m.e.c., nullopt otherwise.
inline std::optional<std::vector<Literal>> is_mec(const BasicExpr& e, const Signature& sig, Logic logic) {
  return detail::literals_over(e, mec_variables(sig, logic));
}

/// One-sorted m.e.c.: every variable of some single sort exactly once, nothing else.
inline std::optional<std::vector<Literal>> is_one_sorted_mec(const BasicExpr& e, const Signature& sig) {
  std::vector<Literal> lits;
  if (!detail::flatten_literals(e, lits) || lits.empty()) return std::nullopt;
  const int sort = sig.sort_of(lits.front().var);
  if (sort == kUnsorted) return std::nullopt;
  return detail::literals_over(e, sig.sorts()[sort].vars);
}

inline constexpr std::size_t kDefaultMecCap = 16;

/// All 2^k m.e.c.s over `vars`: the first variable is most significant and positive
/// literals come first, so {p,q} yields p&q, p&!q, !p&q, !p&!q.
inline std::vector<BasicExpr> enumerate_mecs_over(const std::vector<VarId>& vars,
                                                  std::size_t cap = kDefaultMecCap) {
  const std::size_t k = vars.size();
  if (k > cap)
    throw ResourceLimit("m.e.c. enumeration over " + std::to_string(k) + " variables exceeds cap " +
                        std::to_string(cap));
  std::vector<BasicExpr> out;
  out.reserve(std::size_t{1} << k);
  for (std::size_t code = 0; code < (std::size_t{1} << k); ++code) {
    std::vector<Literal> lits;
    for (std::size_t j = 0; j < k; ++j) lits.push_back({vars[j], ((code >> (k - 1 - j)) & 1U) == 0});
    out.push_back(detail::conj_of_literals(lits));
  }
  return out;
}

/// Positivity of variable `j` (position within the enumerated variable list) in m.e.c. number `code`.
inline bool mec_literal_positive(std::size_t code, std::size_t k, std::size_t j) {
  return ((code >> (k - 1 - j)) & 1U) == 0;
}

inline std::vector<BasicExpr> enumerate_mecs(const Signature& sig, Logic logic,
                                             std::optional<int> sort = std::nullopt,
                                             std::size_t cap = kDefaultMecCap) {
  if (sort) {
    if (!has_order(logic)) throw VariantError("one-sorted m.e.c.s need an ordered logic");
    if (*sort < 0 || static_cast<std::size_t>(*sort) >= sig.sorts().size())
      throw SortError("no sort with index " + std::to_string(*sort));
    return enumerate_mecs_over(sig.sorts()[*sort].vars, cap);
  }
  return enumerate_mecs_over(mec_variables(sig, logic), cap);
}

// ---------------------------------------------------------------------------
// Sort predicates. Constants carry no variables and so belong to every sort.

inline bool one_sorted(const BasicExpr& e, const Signature& sig) {
  std::optional<int> sort;
  for (VarId v : vars_of(e)) {
    const int s = sig.sort_of(v);
    if (s == kUnsorted) return false;
    if (sort && *sort != s) return false;
    sort = s;
  }
  return true;
}

inline bool same_sort(const BasicExpr& a, const BasicExpr& b, const Signature& sig) {
  return one_sorted(ex::conj(a, b), sig);
}

inline bool disjoint_sorted(const BasicExpr& a, const BasicExpr& b, const Signature& sig) {
  std::set<int> sa;
  std::set<int> sb;
  for (VarId v : vars_of(a)) {
    if (!sig.is_sorted(v)) return false;
    sa.insert(sig.sort_of(v));
  }
  for (VarId v : vars_of(b)) {
    if (!sig.is_sorted(v)) return false;
    if (sa.count(sig.sort_of(v))) return false;
    sb.insert(sig.sort_of(v));
  }
  return true;
}

struct SortPredicates {
  bool one_sorted_a;
  bool same_sort;
  bool disjoint_sorted;
};

inline SortPredicates sort_predicates(const BasicExpr& a, const BasicExpr& b, const Signature& sig) {
  return {one_sorted(a, sig), same_sort(a, b, sig), disjoint_sorted(a, b, sig)};
}

}  // namespace lae
