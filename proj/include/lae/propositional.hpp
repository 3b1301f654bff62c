#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "lae/errors.hpp"
#include "lae/syntax.hpp"

namespace lae {

/// Classical propositional formula over numbered atoms, stored as a node arena.
class PropFormula {
 public:
  enum class Op : std::uint8_t { atom, truth, falsity, neg, conj, disj, imp, iff };
  using Ref = std::uint32_t;

  struct Node {
    Op op;
    std::uint32_t atom;
    Ref lhs;
    Ref rhs;
  };

  Ref atom(std::uint32_t a) {
    if (a + 1 > atoms_) atoms_ = a + 1;
    return add({Op::atom, a, 0, 0});
  }
  Ref truth() { return add({Op::truth, 0, 0, 0}); }
  Ref falsity() { return add({Op::falsity, 0, 0, 0}); }
  Ref neg(Ref a) { return add({Op::neg, 0, a, 0}); }
  Ref conj(Ref a, Ref b) { return add({Op::conj, 0, a, b}); }
  Ref disj(Ref a, Ref b) { return add({Op::disj, 0, a, b}); }
  Ref imp(Ref a, Ref b) { return add({Op::imp, 0, a, b}); }
  Ref iff(Ref a, Ref b) { return add({Op::iff, 0, a, b}); }

  void set_root(Ref r) { root_ = r; }
  Ref root() const { return root_; }
  const Node& node(Ref r) const { return nodes_.at(r); }
  std::size_t atom_count() const { return atoms_; }
  bool empty() const { return nodes_.empty(); }

  /// Truth value under a single assignment (bit i of `assignment` gives atom i).
  bool eval(std::uint64_t assignment) const { return eval_at(root_, assignment); }
  bool eval(Ref r, std::uint64_t assignment) const { return eval_at(r, assignment); }

 private:
  Ref add(Node n) {
    nodes_.push_back(n);
    root_ = static_cast<Ref>(nodes_.size() - 1);
    return root_;
  }

  bool eval_at(Ref r, std::uint64_t a) const {
    const Node& n = nodes_[r];
    switch (n.op) {
      case Op::atom: return (a >> n.atom) & 1U;
      case Op::truth: return true;
      case Op::falsity: return false;
      case Op::neg: return !eval_at(n.lhs, a);
      case Op::conj: return eval_at(n.lhs, a) && eval_at(n.rhs, a);
      case Op::disj: return eval_at(n.lhs, a) || eval_at(n.rhs, a);
      case Op::imp: return !eval_at(n.lhs, a) || eval_at(n.rhs, a);
      case Op::iff: return eval_at(n.lhs, a) == eval_at(n.rhs, a);
    }
    return false;
  }

  std::vector<Node> nodes_;
  Ref root_ = 0;
  std::uint32_t atoms_ = 0;
};

inline constexpr std::size_t kDefaultAtomCap = 20;

namespace detail {
// Truth columns of the six lowest atoms across the 64 assignments packed into one word.
inline constexpr std::uint64_t kAtomPattern[6] = {
    0xAAAAAAAAAAAAAAAAULL, 0xCCCCCCCCCCCCCCCCULL, 0xF0F0F0F0F0F0F0F0ULL,
    0xFF00FF00FF00FF00ULL, 0xFFFF0000FFFF0000ULL, 0xFFFFFFFF00000000ULL,
};

inline std::uint64_t eval_block(const PropFormula& f, PropFormula::Ref r, std::uint64_t high) {
  using Op = PropFormula::Op;
  const auto& n = f.node(r);
  switch (n.op) {
    case Op::atom:
      if (n.atom < 6) return kAtomPattern[n.atom];
      return ((high >> (n.atom - 6)) & 1U) ? ~0ULL : 0ULL;
    case Op::truth: return ~0ULL;
    case Op::falsity: return 0;
    case Op::neg: return ~eval_block(f, n.lhs, high);
    case Op::conj: return eval_block(f, n.lhs, high) & eval_block(f, n.rhs, high);
    case Op::disj: return eval_block(f, n.lhs, high) | eval_block(f, n.rhs, high);
    case Op::imp: return ~eval_block(f, n.lhs, high) | eval_block(f, n.rhs, high);
    case Op::iff: return ~(eval_block(f, n.lhs, high) ^ eval_block(f, n.rhs, high));
  }
  return 0;
}
}  // namespace detail

/// Truth-table check, 64 assignments per machine word.
inline bool cpl_tautology(const PropFormula& f, std::size_t cap = kDefaultAtomCap) {
  if (f.empty()) return false;
  const std::size_t n = f.atom_count();
  if (n > cap)
    throw ResourceLimit("tautology check over " + std::to_string(n) + " atoms exceeds cap " +
                        std::to_string(cap));
  const std::uint64_t low_mask = n >= 6 ? ~0ULL : (1ULL << (1U << n)) - 1;
  const std::uint64_t blocks = n > 6 ? 1ULL << (n - 6) : 1;
  for (std::uint64_t high = 0; high < blocks; ++high)
    if ((detail::eval_block(f, f.root(), high) & low_mask) != low_mask) return false;
  return true;
}

/// Propositional skeleton of a basic expression: variables and maximal diamond subterms
/// become atoms, structurally identical subterms sharing one atom.
class BasicSkeleton {
 public:
  PropFormula::Ref add(const BasicExpr& e) {
    switch (e.op()) {
      case BasicOp::bottom: return f_.falsity();
      case BasicOp::top: return f_.truth();
      case BasicOp::neg: return f_.neg(add(e.child()));
      case BasicOp::conj: {
        auto a = add(e.left());
        return f_.conj(a, add(e.right()));
      }
      case BasicOp::disj: {
        auto a = add(e.left());
        return f_.disj(a, add(e.right()));
      }
      case BasicOp::var:
      case BasicOp::dia_le:
      case BasicOp::dia_ge: return f_.atom(atom_of(e));
    }
    return f_.falsity();
  }

  PropFormula& formula() { return f_; }
  const std::vector<BasicExpr>& atoms() const { return atoms_; }

 private:
  std::uint32_t atom_of(const BasicExpr& e) {
    for (std::size_t i = 0; i < atoms_.size(); ++i)
      if (atoms_[i] == e) return static_cast<std::uint32_t>(i);
    atoms_.push_back(e);
    return static_cast<std::uint32_t>(atoms_.size() - 1);
  }

  PropFormula f_;
  std::vector<BasicExpr> atoms_;
};

/// Outer skeleton: every graded implication is an atom.
class OuterSkeleton {
 public:
  PropFormula::Ref add(const OuterFormula& f) {
    switch (f.op()) {
      case OuterOp::atom: return f_.atom(atom_of(f.atom()));
      case OuterOp::neg: return f_.neg(add(f.child()));
      default: {
        auto a = add(f.left());
        auto b = add(f.right());
        switch (f.op()) {
          case OuterOp::conj: return f_.conj(a, b);
          case OuterOp::disj: return f_.disj(a, b);
          case OuterOp::imp: return f_.imp(a, b);
          default: return f_.iff(a, b);
        }
      }
    }
  }

  PropFormula& formula() { return f_; }
  const std::vector<GradedImplication>& atoms() const { return atoms_; }

 private:
  std::uint32_t atom_of(const GradedImplication& g) {
    for (std::size_t i = 0; i < atoms_.size(); ++i)
      if (atoms_[i] == g) return static_cast<std::uint32_t>(i);
    atoms_.push_back(g);
    return static_cast<std::uint32_t>(atoms_.size() - 1);
  }

  PropFormula f_;
  std::vector<GradedImplication> atoms_;
};

inline bool basic_tautology(const BasicExpr& e, std::size_t cap = kDefaultAtomCap) {
  BasicSkeleton sk;
  sk.formula().set_root(sk.add(e));
  return cpl_tautology(sk.formula(), cap);
}

/// Whether `a -> b` is a classical tautology, diamond subterms read as opaque atoms.
inline bool basic_implies(const BasicExpr& a, const BasicExpr& b, std::size_t cap = kDefaultAtomCap) {
  BasicSkeleton sk;
  auto l = sk.add(a);
  auto r = sk.add(b);
  sk.formula().set_root(sk.formula().imp(l, r));
  return cpl_tautology(sk.formula(), cap);
}

inline bool outer_tautology(const OuterFormula& f, std::size_t cap = kDefaultAtomCap) {
  OuterSkeleton sk;
  sk.formula().set_root(sk.add(f));
  return cpl_tautology(sk.formula(), cap);
}

}  // namespace lae
