#include <gtest/gtest.h>

#include <functional>

#include "lae/syntax.hpp"

using namespace lae;

namespace {

Signature pq() { return Signature::single({"p", "q"}); }

Signature sorted_pa() {
  Signature s;
  s.add_sort("s1", {"p"});
  s.add_unsorted({"a"});
  return s;
}

// Every expression of depth <= d over the given leaves.
std::vector<BasicExpr> expressions(const std::vector<BasicExpr>& leaves, int depth) {
  std::vector<BasicExpr> level = leaves;
  for (int d = 0; d < depth; ++d) {
    std::vector<BasicExpr> next = level;
    for (const auto& a : level) {
      next.push_back(ex::neg(a));
      if (next.size() > 4000) break;
    }
    for (const auto& a : level)
      for (const auto& b : level) {
        if (next.size() > 4000) break;
        next.push_back(ex::conj(a, b));
      }
    level = std::move(next);
  }
  return level;
}

}  // namespace

TEST(Signature, Declarations) {
  Signature s;
  s.add_sort("price", {"b1", "b2"});
  s.add_sort("cons", {"g"});
  s.add_unsorted({"a"});
  EXPECT_EQ(s.size(), 4u);
  EXPECT_EQ(s.sort_of(s.require("g")), 1);
  EXPECT_EQ(s.sort_of(s.require("a")), kUnsorted);
  EXPECT_EQ(s.sorted_vars().size(), 3u);
  EXPECT_THROW(s.add_unsorted({"b1"}), SortError);
  EXPECT_THROW(s.require("zz"), SortError);
  EXPECT_THROW(s.add_unsorted({"T"}), SortError);
  EXPECT_THROW(s.add_unsorted({"dle"}), SortError);
  EXPECT_THROW(s.add_unsorted({"1x"}), SortError);
  EXPECT_THROW(s.add_sort("empty", {}), SortError);
}

TEST(Mec, Examples) {
  auto sig = pq();
  const auto p = ex::var(0), q = ex::var(1);
  auto canon = is_mec(ex::conj(p, ex::neg(q)), sig, Logic::lae);
  ASSERT_TRUE(canon);
  EXPECT_EQ((*canon)[0], (Literal{0, true}));
  EXPECT_EQ((*canon)[1], (Literal{1, false}));
  EXPECT_FALSE(is_mec(p, sig, Logic::lae));
  // Canonical order is declaration order regardless of written order.
  auto swapped = is_mec(ex::conj(ex::neg(q), p), sig, Logic::lae);
  ASSERT_TRUE(swapped);
  EXPECT_EQ(*swapped, *canon);
  EXPECT_FALSE(is_mec(ex::conj(ex::conj(p, q), p), sig, Logic::lae));
  EXPECT_FALSE(is_mec(ex::conj(p, ex::neg(ex::neg(q))), sig, Logic::lae));

  auto s2 = sorted_pa();
  EXPECT_FALSE(is_mec(ex::conj(ex::var(0), ex::var(1)), s2, Logic::laepc));
  EXPECT_TRUE(is_mec(ex::var(0), s2, Logic::laepc));
  EXPECT_TRUE(is_one_sorted_mec(ex::neg(ex::var(0)), s2));
  EXPECT_FALSE(is_one_sorted_mec(ex::var(1), s2));
}

// is_mec against a direct count of literal occurrences.
TEST(Mec, AgreesWithBruteForce) {
  auto sig = pq();
  const auto all = expressions({ex::var(0), ex::var(1), ex::top()}, 3);
  std::size_t yes = 0;
  for (const auto& e : all) {
    std::vector<int> pos(2), neg(2);
    bool literal_shape = true;
    std::function<void(const BasicExpr&)> walk = [&](const BasicExpr& x) {
      if (x.op() == BasicOp::conj) {
        walk(x.left());
        walk(x.right());
      } else if (x.op() == BasicOp::var) {
        ++pos[x.var()];
      } else if (x.op() == BasicOp::neg && x.child().op() == BasicOp::var) {
        ++neg[x.child().var()];
      } else {
        literal_shape = false;
      }
    };
    walk(e);
    const bool oracle = literal_shape && pos[0] + neg[0] == 1 && pos[1] + neg[1] == 1;
    EXPECT_EQ(static_cast<bool>(is_mec(e, sig, Logic::lae)), oracle) << to_string(e, sig);
    yes += oracle;
  }
  EXPECT_GT(yes, 0u);
}

TEST(Mec, Enumeration) {
  auto sig = pq();
  auto mecs = enumerate_mecs(sig, Logic::lae);
  ASSERT_EQ(mecs.size(), 4u);
  EXPECT_EQ(to_string(mecs[0], sig), "p & q");
  EXPECT_EQ(to_string(mecs[1], sig), "p & !q");
  EXPECT_EQ(to_string(mecs[2], sig), "!p & q");
  EXPECT_EQ(to_string(mecs[3], sig), "!p & !q");
  for (const auto& m : mecs) EXPECT_TRUE(is_mec(m, sig, Logic::lae));

  auto s2 = sorted_pa();
  EXPECT_EQ(enumerate_mecs(s2, Logic::laepc, 0).size(), 2u);
  EXPECT_EQ(enumerate_mecs(s2, Logic::laepc).size(), 2u);

  std::vector<std::string> names;
  for (int i = 0; i < 20; ++i) names.push_back("v" + std::to_string(i));
  EXPECT_THROW(enumerate_mecs(Signature::single(names), Logic::lae), ResourceLimit);
}

TEST(SortPredicates, Examples) {
  Signature s;
  s.add_sort("s1", {"p"});
  s.add_sort("s2", {"q"});
  s.add_unsorted({"a"});
  const auto p = ex::var(0), q = ex::var(1), a = ex::var(2);
  auto r = sort_predicates(p, q, s);
  EXPECT_TRUE(r.one_sorted_a);
  EXPECT_FALSE(r.same_sort);
  EXPECT_TRUE(r.disjoint_sorted);
  r = sort_predicates(ex::top(), p, s);
  EXPECT_TRUE(r.one_sorted_a);
  EXPECT_TRUE(r.same_sort);
  EXPECT_TRUE(r.disjoint_sorted);
  r = sort_predicates(ex::conj(p, a), q, s);
  EXPECT_FALSE(r.one_sorted_a);
  EXPECT_FALSE(r.disjoint_sorted);
  EXPECT_FALSE(disjoint_sorted(p, ex::dle(ex::neg(p)), s));
  EXPECT_TRUE(one_sorted(ex::dge(ex::conj(p, ex::neg(p))), s));
}

TEST(Printing, ParenthesisesBinaryOperands) {
  auto sig = Signature::single({"a", "b", "c"});
  auto scale = GradeScale::godel({Rational(0), Rational(1, 2), Rational(1)});
  auto g = fx::gimp(ex::var(0), Grade{1}, ex::conj(ex::var(1), ex::var(2)));
  EXPECT_EQ(to_string(g, sig, scale), "a =>{1/2} (b & c)");
  auto n = fx::neg(fx::gimp(ex::var(1), Grade{2}, ex::bottom()));
  EXPECT_EQ(to_string(n, sig, scale), "!(b =>{1} _|_)");
  EXPECT_EQ(to_string(fx::imp(n, g), sig, scale), "!(b =>{1} _|_) -> (a =>{1/2} (b & c))");
}
