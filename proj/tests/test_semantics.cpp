#include <gtest/gtest.h>

#include <numeric>

#include "lae/generators.hpp"
#include "lae/parser.hpp"
#include "lae/semantics.hpp"
#include "oracles.hpp"

using namespace lae;

namespace {

ScalePtr godel3() { return share(GradeScale::godel({Rational(0), Rational(1, 2), Rational(1)})); }

constexpr Grade g0{0}, gh{1}, g1{2};

ChainSpace chain3() {
  return ChainSpace::identity_order(
      SimilaritySpace(godel3(), {"w1", "w2", "w3"}, {g1, gh, gh, gh, g1, gh, gh, gh, g1}));
}

bool has_issue(const std::vector<EvalDiagnostic>& ds, EvalIssue i) {
  for (const auto& d : ds)
    if (d.issue == i) return true;
  return false;
}

}  // namespace

TEST(ValidateEvaluation, Separation) {
  auto sig = Signature::single({"p"});
  Space two = SimilaritySpace::discrete(godel3(), 2);
  EXPECT_TRUE(validate_evaluation({WorldSet::of(2, {0})}, two, sig, Logic::lae).empty());
  auto ds = validate_evaluation({WorldSet::of(2, {0, 1})}, two, sig, Logic::lae);
  ASSERT_TRUE(has_issue(ds, EvalIssue::separation));
  EXPECT_EQ(ds[0].worlds, (std::vector<std::size_t>{0, 1}));
}

TEST(ValidateEvaluation, ShapeAndVariant) {
  auto sig = Signature::single({"p"});
  Space two = SimilaritySpace::discrete(godel3(), 2);
  EXPECT_TRUE(has_issue(validate_evaluation({}, two, sig, Logic::lae), EvalIssue::shape));
  EXPECT_TRUE(has_issue(validate_evaluation({WorldSet(3)}, two, sig, Logic::lae), EvalIssue::shape));
  EXPECT_TRUE(has_issue(validate_evaluation({WorldSet::of(2, {0})}, two, sig, Logic::laec), EvalIssue::variant));
}

TEST(ValidateEvaluation, ProductCylinderAndSaturation) {
  auto s = godel3();
  auto c2 = [&](const char* a, const char* b) {
    return ChainSpace::identity_order(SimilaritySpace(s, {a, b}, {g1, gh, gh, g1}));
  };
  ProductSpace p({c2("a1", "a2"), c2("b1", "b2")});
  Signature sig;
  sig.add_sort("A", {"p"});
  sig.add_sort("B", {"q"});
  sig.add_unsorted({"u"});
  const auto P = p.cylinder(0, WorldSet::of(2, {1}));
  const auto Q = p.cylinder(1, WorldSet::of(2, {1}));
  Space sp = p;
  // u = a single tuple: the cells are singletons here, so this is saturated.
  EXPECT_TRUE(validate_evaluation({P, Q, WorldSet::of(4, {0})}, sp, sig, Logic::laepc).empty());
  EXPECT_TRUE(has_issue(validate_evaluation({WorldSet::of(4, {0}), Q, P}, sp, sig, Logic::laepc),
                        EvalIssue::not_cylinder));

  // Only sort A has a variable that varies; sort B's variable is constant, so cells are
  // {(a1,b1),(a1,b2)} and {(a2,b1),(a2,b2)} and a single tuple splits a cell.
  Signature sig2;
  sig2.add_sort("A", {"p"});
  sig2.add_sort("B", {"q"});
  sig2.add_unsorted({"u"});
  auto ds = validate_evaluation({P, p.base().all(), WorldSet::of(4, {0})}, sp, sig2, Logic::laepc);
  EXPECT_TRUE(has_issue(ds, EvalIssue::not_saturated));
  EXPECT_TRUE(has_issue(ds, EvalIssue::separation));
}

TEST(Model, RejectsInvalidInput) {
  auto sig = Signature::single({"p"});
  EXPECT_THROW(Model(Logic::lae, sig, SimilaritySpace::discrete(godel3(), 2), {WorldSet::full(2)}), ModelError);
  Space bad = SimilaritySpace(godel3(), {"a", "b"}, {g1, g1, g1, g1});
  EXPECT_THROW(Model(Logic::lae, sig, bad, {WorldSet::of(2, {0})}), ModelError);
  EXPECT_NO_THROW(Model(Logic::lae, sig, SimilaritySpace::discrete(godel3(), 2), {WorldSet::of(2, {0})}));
}

TEST(EvalBasic, Examples) {
  Signature sig;
  sig.add_sort("s", {"p", "q"});
  Model m(Logic::laec, sig, chain3(), {WorldSet::of(3, {1}), WorldSet::of(3, {0, 1})});
  auto e = [&](const char* s) { return eval_basic(m, parse_basic(s, sig, m.scale(), Logic::laec)); };
  EXPECT_EQ(e("!_|_"), WorldSet::full(3));
  EXPECT_EQ(e("dle p"), WorldSet::of(3, {0, 1}));
  EXPECT_EQ(e("dge p"), WorldSet::of(3, {1, 2}));
  EXPECT_TRUE(e("p & !p").empty());
  EXPECT_EQ(e("q | p"), WorldSet::of(3, {0, 1}));

  auto plain_sig = Signature::single({"p", "q"});
  Model plain(Logic::lae, plain_sig, chain3().base(), {WorldSet::of(3, {1}), WorldSet::of(3, {0, 1})});
  EXPECT_THROW(eval_basic(plain, ex::dle(ex::var(0))), VariantError);
}

TEST(SatGimp, Examples) {
  Signature sig;
  sig.add_sort("s", {"p", "q"});
  // e(p) = {w1}, e(q) = {w2}; the worlds are separated by p and q.
  Model m(Logic::laec, sig, chain3(), {WorldSet::of(3, {0}), WorldSet::of(3, {1})});
  auto f = [&](const char* s) { return sat_formula(m, parse_formula(s, sig, m.scale(), Logic::laec)); };
  EXPECT_TRUE(f("p =>{1/2} q"));
  EXPECT_FALSE(f("p =>{1} q"));
  EXPECT_TRUE(f("_|_ =>{1} q"));
  EXPECT_TRUE(f("_|_ =>{0} _|_"));
  EXPECT_TRUE(f("p & dge q =>{1} q"));
  EXPECT_TRUE(f("!(T =>{1} _|_)"));
  EXPECT_TRUE(f("(p =>{1} q) | !(p =>{1} q)"));
  EXPECT_TRUE(f("dle q =>{1} dle q"));
  EXPECT_TRUE(sat_theory(m, {}));
  EXPECT_FALSE(sat_theory(m, {parse_formula("p =>{1} q", sig, m.scale(), Logic::laec)}));
}

TEST(SatGimp, ReflexiveImplicationAlwaysHolds) {
  Signature sig;
  sig.add_sort("s", {"p", "q"});
  for (std::uint64_t a = 0; a < 8; ++a)
    for (std::uint64_t b = 0; b < 8; ++b) {
      Evaluation ev = {WorldSet::from_mask(3, a), WorldSet::from_mask(3, b)};
      Space sp = chain3();
      if (!validate_evaluation(ev, sp, sig, Logic::laec).empty()) continue;
      for (const char* s : {"p", "q", "p | !q", "dle p & q"}) {
        auto phi = parse_basic(s, sig, base_of(sp).scale(), Logic::laec);
        EXPECT_TRUE(sat_gimp(sp, ev, GradedImplication{phi, g1, phi}));
      }
    }
}

TEST(Semantics, AgreesWithNaiveChecker) {
  gen::Rng rng(77);
  std::mt19937 mt(77);
  Signature plain = Signature::single({"p", "q", "r"});
  Signature sorted;
  sorted.add_sort("A", {"p", "q"});
  sorted.add_sort("B", {"r"});
  sorted.add_unsorted({"u"});
  for (const auto& scale : {share(GradeScale::godel({Rational(0), Rational(1, 2), Rational(1)})),
                            share(GradeScale::lukasiewicz_steps(4))})
    for (Logic l : {Logic::lae, Logic::laec, Logic::laepc})
      for (int i = 0; i < 60; ++i) {
        const auto& sig = l == Logic::laepc ? sorted : plain;
        const auto m = gen::random_model(l, sig, scale, rng, 6);
        const oracle::Naive naive(m.space(), m.evaluation());
        std::vector<VarId> vars(sig.size());
        std::iota(vars.begin(), vars.end(), VarId{0});
        for (int k = 0; k < 20; ++k) {
          const auto e = oracle::random_basic(mt, vars, l != Logic::lae, 3);
          const auto set = eval_basic(m, e);
          const auto bits = naive.eval(e);
          for (std::size_t w = 0; w < m.size(); ++w) ASSERT_EQ(set.test(w), bits[w]) << to_string(e, sig);
          const auto g = oracle::random_gimp(mt, vars, m.scale(), l != Logic::lae);
          EXPECT_EQ(sat_gimp(m, g.atom()), naive.sat(g));
        }
      }
}
