#include <gtest/gtest.h>

#include <random>

#include "lae/decision.hpp"
#include "lae/parser.hpp"
#include "oracles.hpp"

using namespace lae;

namespace {

ScalePtr godel3() { return share(GradeScale::godel({Rational(0), Rational(1, 2), Rational(1)})); }
ScalePtr luk3() { return share(GradeScale::lukasiewicz_steps(2)); }

Theory parse_all(const std::vector<std::string>& src, const Signature& sig, const GradeScale& s, Logic l) {
  Theory t;
  for (const auto& f : src) t.push_back(parse_formula(f, sig, s, l));
  return t;
}

Signature car_signature() {
  Signature sig;
  sig.add_sort("price", {"b"});
  sig.add_sort("consumption", {"g"});
  sig.add_unsorted({"a"});
  return sig;
}

// Random instance: up to three theory members, query either random or a weakening of a member.
std::pair<Theory, OuterFormula> random_instance(std::mt19937& rng, const std::vector<VarId>& vars,
                                                const GradeScale& s, bool ordered) {
  Theory t;
  const std::size_t k = rng() % 4;
  for (std::size_t i = 0; i < k; ++i) {
    auto g = oracle::random_gimp(rng, vars, s, ordered, 1);
    t.push_back(rng() % 4 == 0 ? fx::neg(g) : g);
  }
  OuterFormula q = oracle::random_gimp(rng, vars, s, ordered, 1);
  if (!t.empty() && rng() % 3 == 0 && t[0].op() == OuterOp::atom) {
    auto g = t[0].atom();
    q = fx::gimp(g.lhs, Grade{static_cast<std::uint8_t>(rng() % (g.grade.index + 1))}, g.rhs);
  }
  return {t, q};
}

void expect_agreement(Logic logic, const Signature& sig, const ScalePtr& scale, std::size_t raw_worlds, int rounds,
                      unsigned seed) {
  const auto models = oracle::raw_models(logic, sig, scale, raw_worlds);
  ASSERT_FALSE(models.empty());
  std::vector<VarId> vars(sig.size());
  for (VarId i = 0; i < vars.size(); ++i) vars[i] = i;
  std::mt19937 rng(seed);
  int entailed = 0;
  for (int r = 0; r < rounds; ++r) {
    auto [t, q] = random_instance(rng, vars, *scale, has_order(logic));
    auto v = decide_entailment(logic, sig, *scale, t, q, SearchBounds::full());
    ASSERT_NE(v.verdict, Verdict::unknown) << v.reason;
    const bool raw = oracle::has_countermodel(models, t, q);
    EXPECT_EQ(v.verdict == Verdict::countermodel, raw) << to_string(q, sig, *scale);
    if (v.verdict == Verdict::entailed) ++entailed;
    if (v.countermodel) {
      EXPECT_TRUE(sat_theory(*v.countermodel, t));
      EXPECT_FALSE(sat_formula(*v.countermodel, q));
      // Canonical enumeration surfaces the smallest countermodel first.
      EXPECT_EQ(v.countermodel->size(), oracle::smallest_countermodel(models, t, q));
    }
  }
  EXPECT_GT(entailed, rounds / 10);
}

}  // namespace

TEST(Decision, TwoConclusionsHaveCountermodel) {
  auto scale = godel3();
  auto sig = Signature::single({"a", "b", "g"});
  auto t = parse_all({"a =>{1/2} b", "a =>{1/2} g", "!(b & g =>{1} _|_)"}, sig, *scale, Logic::lae);
  auto q = parse_formula("a =>{1/2} b & g", sig, *scale, Logic::lae);
  auto v = decide_entailment(Logic::lae, sig, *scale, t, q);
  ASSERT_EQ(v.verdict, Verdict::countermodel);
  EXPECT_TRUE(sat_theory(*v.countermodel, t));
  EXPECT_FALSE(sat_formula(*v.countermodel, q));
}

TEST(Decision, SimpleEntailments) {
  auto scale = godel3();
  auto sig = Signature::single({"p", "q", "r"});
  auto d = [&](std::vector<std::string> t, const std::string& q) {
    return decide_entailment(Logic::lae, sig, *scale, parse_all(t, sig, *scale, Logic::lae),
                             parse_formula(q, sig, *scale, Logic::lae), SearchBounds::full())
        .verdict;
  };
  EXPECT_EQ(d({"p =>{1/2} q", "q =>{1} r"}, "p =>{1/2} r"), Verdict::entailed);
  EXPECT_EQ(d({"p =>{1/2} q", "q =>{1/2} r"}, "p =>{1/2} r"), Verdict::entailed);
  EXPECT_EQ(d({"p =>{1/2} q"}, "p =>{1} q"), Verdict::countermodel);
  EXPECT_EQ(d({}, "p & q =>{1} p"), Verdict::entailed);
  EXPECT_EQ(d({}, "!(T =>{1} _|_)"), Verdict::entailed);
}

TEST(Decision, GradeCompositionDependsOnTheNorm) {
  auto sig = Signature::single({"p", "q"});
  for (auto scale : {godel3(), luk3()}) {
    auto t = parse_all({"p =>{1/2} q", "q =>{1/2} !p"}, sig, *scale, Logic::lae);
    const auto raw = oracle::raw_models(Logic::lae, sig, scale, 4);
    for (const char* q : {"p =>{1/2} !p", "p =>{0} !p", "p =>{1} !p"}) {
      auto query = parse_formula(q, sig, *scale, Logic::lae);
      auto v = decide_entailment(Logic::lae, sig, *scale, t, query, SearchBounds::full());
      EXPECT_EQ(v.verdict == Verdict::countermodel, oracle::has_countermodel(raw, t, query)) << q;
    }
    // Godel min keeps grade 1/2 through the chain; Lukasiewicz drops it to 0.
    auto half = decide_entailment(Logic::lae, sig, *scale, t, parse_formula("p =>{1/2} !p", sig, *scale, Logic::lae),
                                  SearchBounds::full());
    EXPECT_EQ(half.verdict, scale->is_godel() ? Verdict::entailed : Verdict::countermodel);
  }
}

TEST(Decision, AgreesWithRawEnumeratorLae) {
  auto sig = Signature::single({"p", "q"});
  expect_agreement(Logic::lae, sig, godel3(), 4, 150, 11);
  expect_agreement(Logic::lae, sig, luk3(), 4, 150, 12);
}

TEST(Decision, AgreesWithRawEnumeratorLaec) {
  expect_agreement(Logic::laec, Signature::single({"p"}), godel3(), 2, 150, 13);
  expect_agreement(Logic::laec, Signature::single({"p", "q"}), luk3(), 4, 60, 14);
}

TEST(Decision, AgreesWithRawEnumeratorLaepc) {
  expect_agreement(Logic::laepc, car_signature(), godel3(), 2, 80, 15);
}

TEST(Decision, CarExample) {
  auto scale = godel3();
  auto sig = car_signature();
  for (Grade c : scale->grades())
    for (Grade d : scale->grades()) {
      Theory t = {fx::gimp(ex::var(2), c, ex::dge(ex::var(0))), fx::gimp(ex::var(2), d, ex::dge(ex::var(1))),
                  fx::neg(fx::gimp(ex::dge(ex::var(0)), scale->top(), ex::bottom())),
                  fx::neg(fx::gimp(ex::dge(ex::var(1)), scale->top(), ex::bottom()))};
      const Grade lo = std::min(c, d);
      auto beta_gamma = ex::conj(ex::dge(ex::var(0)), ex::dge(ex::var(1)));
      auto v = decide_entailment(Logic::laepc, sig, *scale, t, fx::gimp(ex::var(2), lo, beta_gamma),
                                 SearchBounds::full());
      EXPECT_EQ(v.verdict, Verdict::entailed);
      if (lo != scale->top()) {
        const Grade up{static_cast<std::uint8_t>(lo.index + 1)};
        auto w = decide_entailment(Logic::laepc, sig, *scale, t, fx::gimp(ex::var(2), up, beta_gamma),
                                   SearchBounds::full());
        EXPECT_EQ(w.verdict, Verdict::countermodel);
      }
    }
}

TEST(Decision, DeterministicAcrossWorkers) {
  auto scale = godel3();
  auto sig = Signature::single({"p", "q", "r"});
  std::mt19937 rng(5);
  std::vector<VarId> vars = {0, 1, 2};
  for (int i = 0; i < 25; ++i) {
    auto [t, q] = random_instance(rng, vars, *scale, false);
    SearchBounds one, four;
    four.workers = 4;
    auto a = decide_entailment(Logic::lae, sig, *scale, t, q, one);
    auto b = decide_entailment(Logic::lae, sig, *scale, t, q, four);
    ASSERT_EQ(a.verdict, b.verdict);
    EXPECT_EQ(a.stats.subsets, b.stats.subsets);
    EXPECT_EQ(a.stats.candidates, b.stats.candidates);
    if (a.countermodel) {
      EXPECT_EQ(a.countermodel->space(), b.countermodel->space());
      EXPECT_EQ(a.countermodel->evaluation(), b.countermodel->evaluation());
    }
  }
}

TEST(Decision, TruncatedSearchIsUnknown) {
  auto scale = godel3();
  auto sig = Signature::single({"p", "q"});
  auto t = parse_all({"p =>{1/2} q"}, sig, *scale, Logic::lae);
  auto q = parse_formula("p =>{1/2} q", sig, *scale, Logic::lae);
  SearchBounds b;
  b.max_sim_assignments = 1;
  EXPECT_EQ(decide_entailment(Logic::lae, sig, *scale, t, q, b).verdict, Verdict::unknown);
  b = SearchBounds::worlds(2);
  EXPECT_EQ(decide_entailment(Logic::lae, sig, *scale, t, q, b).verdict, Verdict::unknown);
  b = SearchBounds{};
  b.max_world_subsets = 3;
  EXPECT_EQ(decide_entailment(Logic::lae, sig, *scale, t, q, b).verdict, Verdict::unknown);
  // Default bounds cover the whole canonical space of two variables.
  EXPECT_EQ(decide_entailment(Logic::lae, sig, *scale, t, q).verdict, Verdict::entailed);
  // A countermodel found under small bounds is still definitive.
  auto strong = parse_formula("p =>{1} q", sig, *scale, Logic::lae);
  EXPECT_EQ(decide_entailment(Logic::lae, sig, *scale, t, strong, SearchBounds::worlds(2)).verdict,
            Verdict::countermodel);
}

TEST(Decision, ExhaustiveRefusesLargeSignatures) {
  auto scale = godel3();
  auto sig = Signature::single({"p", "q", "r", "s"});
  auto q = parse_formula("p =>{1} p", sig, *scale, Logic::lae);
  auto v = decide_entailment(Logic::lae, sig, *scale, {}, q, SearchBounds::full());
  EXPECT_EQ(v.verdict, Verdict::unknown);
  EXPECT_NE(v.reason.find("refused"), std::string::npos);
}

TEST(Decision, Errors) {
  auto scale = godel3();
  auto sig = Signature::single({"p"});
  auto q = fx::gimp(ex::dle(ex::var(0)), scale->top(), ex::var(0));
  EXPECT_THROW(decide_entailment(Logic::lae, sig, *scale, {}, q), VariantError);
  EXPECT_THROW(decide_entailment(Logic::lae, sig, *scale, {}, fx::gimp(ex::var(0), Grade{7}, ex::var(0))),
               UnknownGrade);
  Signature only_unsorted;
  only_unsorted.add_unsorted({"u"});
  EXPECT_THROW(decide_entailment(Logic::laepc, only_unsorted, *scale, {}, fx::gimp(ex::var(0), scale->top(), ex::var(0))),
               VariantError);
}

TEST(Decision, MonotoneOnSampledInstances) {
  auto scale = godel3();
  auto sig = Signature::single({"p", "q"});
  std::vector<VarId> vars = {0, 1};
  std::mt19937 rng(21);
  int checked = 0;
  for (int i = 0; i < 300 && checked < 40; ++i) {
    auto [t, q] = random_instance(rng, vars, *scale, false);
    if (decide_entailment(Logic::lae, sig, *scale, t, q).verdict != Verdict::entailed) continue;
    auto f = oracle::random_gimp(rng, vars, *scale, false, 1);
    // f consistent with t: t does not entail its negation.
    if (decide_entailment(Logic::lae, sig, *scale, t, fx::neg(f)).verdict != Verdict::countermodel) continue;
    Theory bigger = t;
    bigger.push_back(f);
    EXPECT_NE(decide_entailment(Logic::lae, sig, *scale, bigger, q).verdict, Verdict::countermodel);
    ++checked;
  }
  EXPECT_GE(checked, 10);
}

TEST(SimilarityEnumeration, CountsMatchRawFilter) {
  for (auto scale : {godel3(), luk3()})
    for (std::size_t n = 1; n <= 4; ++n) {
      std::size_t plain = 0, chain = 0;
      detail::for_each_similarity(*scale, n, [&](const auto&) { return ++plain, true; });
      detail::for_each_chain_similarity(*scale, n, [&](const auto&) { return ++chain, true; });
      const auto raw = oracle::raw_spaces(scale, n);
      EXPECT_EQ(plain, raw.size());
      std::size_t raw_chain = 0;
      std::vector<std::size_t> id(n);
      std::iota(id.begin(), id.end(), std::size_t{0});
      for (const auto& s : raw) raw_chain += ChainSpace(s, id).is_valid();
      EXPECT_EQ(chain, raw_chain);
    }
}
