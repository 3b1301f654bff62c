#include <gtest/gtest.h>

#include "lae/fuzz.hpp"
#include "lae/parser.hpp"
#include "lae/proofs.hpp"

using namespace lae;

namespace {

ScalePtr godel3() { return share(GradeScale::godel({Rational(0), Rational(1, 2), Rational(1)})); }
ScalePtr luk3() { return share(GradeScale::lukasiewicz_steps(2)); }

Signature pqr() { return Signature::single({"p", "q", "r"}); }

OuterFormula F(const std::string& s, const Signature& sig, const GradeScale& scale, Logic l = Logic::lae) {
  return parse_formula(s, sig, scale, l);
}

std::optional<int> rec(const std::string& s, const Signature& sig, const GradeScale& scale, Logic l = Logic::lae) {
  return recognize_axiom(F(s, sig, scale, l), sig, scale, l);
}

// The transitivity script: two hypotheses, A9, a conjunction-introduction tautology and two MP steps.
ProofScript a9_script(const Signature& sig, const GradeScale& s, const std::string& a9_grade) {
  const std::string h1 = "p =>{1/2} q", h2 = "q =>{1} r", goal = "p =>{1/2} r";
  return {
      {F(h1, sig, s), Justification::hyp(1), 0},
      {F(h2, sig, s), Justification::hyp(2), 0},
      {F("(" + h1 + ") & (" + h2 + ") -> (p =>{" + a9_grade + "} r)", sig, s), Justification::by_axiom(9), 0},
      {F("(" + h1 + ") -> ((" + h2 + ") -> ((" + h1 + ") & (" + h2 + ")))", sig, s), Justification::by_axiom(11), 0},
      {F("(" + h2 + ") -> ((" + h1 + ") & (" + h2 + "))", sig, s), Justification::mp(1, 4), 0},
      {F("(" + h1 + ") & (" + h2 + ")", sig, s), Justification::mp(2, 5), 0},
      {F(goal, sig, s), Justification::mp(6, 3), 0},
  };
}

}  // namespace

TEST(Recognize, Examples) {
  const auto sig = pqr();
  const auto g = godel3();
  EXPECT_EQ(rec("!(T =>{1} _|_)", sig, *g), 10);
  EXPECT_EQ(rec("(p =>{1/2} q) -> (p =>{0} q)", sig, *g), 3);
  EXPECT_EQ(rec("(p =>{1/2} q) & (q =>{1/2} r) -> (p =>{1/2} r)", sig, *g), 9);
  // Lukasiewicz: 1/2 * 1/2 = 0
  const auto l = luk3();
  EXPECT_FALSE(rec("(p =>{1/2} q) & (q =>{1/2} r) -> (p =>{1/2} r)", sig, *l).has_value());
  EXPECT_EQ(rec("(p =>{1/2} q) & (q =>{1/2} r) -> (p =>{0} r)", sig, *l), 9);
}

TEST(Recognize, SideConditions) {
  const auto sig = pqr();
  const auto g = godel3();
  // A3 needs d <= c
  EXPECT_FALSE(rec("(p =>{0} q) -> (p =>{1/2} q)", sig, *g).has_value());
  // A6 needs m.e.c.s
  EXPECT_EQ(rec("!(p & q & r =>{1} _|_) & (p & q & r =>{1/2} !p & q & r) -> (!p & q & r =>{1/2} p & q & r)", sig, *g),
            6);
  EXPECT_FALSE(rec("!(p =>{1} _|_) & (p =>{1/2} q) -> (q =>{1/2} p)", sig, *g).has_value());
  // A8 needs a m.e.c. on the left
  EXPECT_EQ(rec("(p & !q & r =>{1/2} p | q) -> (p & !q & r =>{1/2} p) | (p & !q & r =>{1/2} q)", sig, *g), 8);
  EXPECT_FALSE(rec("(p =>{1/2} p | q) -> (p =>{1/2} p) | (p =>{1/2} q)", sig, *g).has_value());
  // A1 is a CPL consequence
  EXPECT_EQ(rec("p & q =>{1} p", sig, *g), 1);
  EXPECT_FALSE(rec("p =>{1} p & q", sig, *g).has_value());
  EXPECT_FALSE(rec("p & q =>{1/2} p", sig, *g).has_value());
}

TEST(Recognize, OrderedAxioms) {
  const auto sig = pqr();
  const auto g = godel3();
  const auto c = Logic::laec;
  EXPECT_EQ(rec("p =>{1} dle p", sig, *g, c), 12);
  EXPECT_EQ(rec("dge dge (p | q) =>{1} dge (p | q)", sig, *g, c), 13);
  EXPECT_EQ(rec("dle _|_ =>{1} _|_", sig, *g, c), 14);
  EXPECT_EQ(rec("(dle p =>{1} dle q) | (dle q =>{1} dle p)", sig, *g, c), 15);
  EXPECT_FALSE(rec("(dle p =>{1} dge q) | (dge q =>{1} dle p)", sig, *g, c).has_value());
  EXPECT_EQ(rec("dle (p & q & r) & dge (p & q & r) =>{1} p & q & r", sig, *g, c), 16);
  EXPECT_EQ(rec("(p =>{1/2} q) -> (dge p =>{1/2} dge q)", sig, *g, c), 17);
  EXPECT_EQ(rec("(p & dle q =>{1} _|_) -> (dge p & dle q =>{1} _|_)", sig, *g, c), 18);
  EXPECT_EQ(rec("!(dle p & dge q =>{1} _|_) & (r =>{1/2} dle p) & (r =>{1/2} dge q) -> (r =>{1/2} dle p & dge q)", sig,
                *g, c),
            19);
  // A19 needs conjunctions of diamonds
  EXPECT_FALSE(
      rec("!(p & q =>{1} _|_) & (r =>{1/2} p) & (r =>{1/2} q) -> (r =>{1/2} p & q)", sig, *g, c).has_value());
  // LAEC axioms are not LAE axioms; diamonds are not even LAE syntax
  EXPECT_FALSE(well_formed(F("p =>{1} dle p", sig, *g, c), sig, *g, Logic::lae));
}

TEST(Recognize, ProductRestrictions) {
  Signature sig;
  sig.add_sort("A", {"p", "q"});
  sig.add_sort("B", {"r"});
  sig.add_unsorted({"u"});
  const auto g = godel3();
  const auto P = Logic::laepc;
  EXPECT_EQ(rec("(dle p =>{1} dle q) | (dle q =>{1} dle p)", sig, *g, P), 15);
  EXPECT_FALSE(rec("(dle p =>{1} dle r) | (dle r =>{1} dle p)", sig, *g, P).has_value());
  EXPECT_EQ(rec("dle (p & !q) & dge (p & !q) =>{1} p & !q", sig, *g, P), 16);
  EXPECT_FALSE(rec("dle (p & !q & r) & dge (p & !q & r) =>{1} p & !q & r", sig, *g, P).has_value());
  EXPECT_EQ(rec("(p & dle r =>{1} _|_) -> (dge p & dle r =>{1} _|_)", sig, *g, P), 18);
  EXPECT_FALSE(rec("(p & r & dle q =>{1} _|_) -> (dge (p & r) & dle q =>{1} _|_)", sig, *g, P).has_value());
  EXPECT_EQ(rec("!(p & r =>{1} _|_) -> ((p =>{1/2} q) & (r =>{1/2} !r) <-> (p & r =>{1/2} q & !r))", sig, *g, P), 20);
  EXPECT_FALSE(rec("!(p & q =>{1} _|_) -> ((p =>{1/2} q) & (q =>{1/2} p) <-> (p & q =>{1/2} q & p))", sig, *g, P)
                   .has_value());
  EXPECT_EQ(rec("(dge u & p & r =>{1} _|_) -> (dge u & p =>{1} _|_) | (dge u & r =>{1} _|_)", sig, *g, P), 21);
  EXPECT_FALSE(rec("(dge u & p & q =>{1} _|_) -> (dge u & p =>{1} _|_) | (dge u & q =>{1} _|_)", sig, *g, P)
                   .has_value());
  EXPECT_EQ(rec("(p & !q & r =>{1} u) | (p & !q & r =>{1} !u)", sig, *g, P), 22);
  EXPECT_FALSE(rec("(p & !q =>{1} u) | (p & !q =>{1} !u)", sig, *g, P).has_value());
}

TEST(Recognize, GeneratedInstancesAreIntended) {
  gen::Rng rng(7);
  const auto g = godel3();
  const auto l = luk3();
  Signature sorted;
  sorted.add_sort("A", {"p", "q"});
  sorted.add_sort("B", {"r"});
  sorted.add_unsorted({"u"});
  for (Logic logic : {Logic::lae, Logic::laec, Logic::laepc})
    for (const auto& scale : {g, l}) {
      const auto sig = logic == Logic::laepc ? sorted : pqr();
      for (int id = 1; id <= axiom_limit(logic); ++id)
        for (int k = 0; k < 10; ++k) {
          auto f = fuzz::axiom_instance(id, sig, *scale, logic, rng);
          ASSERT_TRUE(f.has_value()) << "A" << id << " in " << to_string(logic);
          EXPECT_TRUE(matches_axiom(*f, id, sig, *scale, logic));
          EXPECT_EQ(recognize_axiom(*f, sig, *scale, logic), id);
          EXPECT_TRUE(well_formed(*f, sig, *scale, logic));
        }
    }
}

TEST(Recognize, LimitsPerLogic) {
  EXPECT_EQ(axiom_limit(Logic::lae), 11);
  EXPECT_EQ(axiom_limit(Logic::laec), 19);
  EXPECT_EQ(axiom_limit(Logic::laepc), 22);
  const auto sig = pqr();
  const auto g = godel3();
  const auto f = F("(p =>{1} q) | !(p =>{1} q)", sig, *g);
  EXPECT_FALSE(matches_axiom(f, 12, sig, *g, Logic::lae));
  EXPECT_TRUE(matches_axiom(f, 11, sig, *g, Logic::lae));
}

TEST(CheckProof, SingleAxiomLine) {
  const auto sig = pqr();
  const auto g = godel3();
  const ProofScript s{{F("!(T =>{1} _|_)", sig, *g), Justification::by_axiom(), 0}};
  const auto v = check_proof({}, s, sig, *g, Logic::lae);
  ASSERT_TRUE(v.accepted) << v.reason;
  EXPECT_EQ(*v.conclusion, s[0].formula);
}

TEST(CheckProof, TransitivityScriptAndMutant) {
  const auto sig = pqr();
  for (const auto& scale : {godel3(), luk3()}) {
    const Theory t{F("p =>{1/2} q", sig, *scale), F("q =>{1} r", sig, *scale)};
    const auto v = check_proof(t, a9_script(sig, *scale, "1/2"), sig, *scale, Logic::lae);
    ASSERT_TRUE(v.accepted) << v.line << ": " << v.reason;
    EXPECT_EQ(*v.conclusion, F("p =>{1/2} r", sig, *scale));

    auto mutant = a9_script(sig, *scale, "1");
    const auto m = check_proof(t, mutant, sig, *scale, Logic::lae);
    EXPECT_FALSE(m.accepted);
    EXPECT_EQ(m.line, 3U);
    EXPECT_EQ(m.reason, "not an A9 instance");
  }
}

TEST(CheckProof, Rejections) {
  const auto sig = pqr();
  const auto g = godel3();
  const Theory t{F("p =>{1/2} q", sig, *g)};
  auto reason = [&](const ProofScript& s) {
    const auto v = check_proof(t, s, sig, *g, Logic::lae);
    EXPECT_FALSE(v.accepted);
    return std::make_pair(v.line, v.reason);
  };
  EXPECT_EQ(reason({}).second, "empty proof");
  EXPECT_EQ(reason({{F("p =>{1} q", sig, *g), Justification::hyp(1), 0}}),
            std::make_pair(std::size_t{1}, std::string("formula differs from hypothesis 1")));
  EXPECT_EQ(reason({{F("p =>{1} q", sig, *g), Justification::hyp(2), 0}}).second, "hypothesis 2 does not exist");
  EXPECT_EQ(reason({{F("p =>{1/2} q", sig, *g), Justification::mp(1, 1), 0}}).second,
            "modus ponens must cite two earlier lines");
  EXPECT_EQ(reason({{F("p =>{1/2} q", sig, *g), Justification::by_axiom(12), 0}}).second,
            "A12 is not an axiom of lae");
  EXPECT_EQ(reason({{F("p =>{1/2} q", sig, *g), Justification::by_axiom(), 0}}).second, "not an axiom instance");
  const ProofScript bad_mp{{F("p =>{1/2} q", sig, *g), Justification::hyp(1), 0},
                           {F("(p =>{1/2} q) -> (p =>{0} q)", sig, *g), Justification::by_axiom(3), 0},
                           {F("p =>{1/2} r", sig, *g), Justification::mp(1, 2), 0}};
  EXPECT_EQ(reason(bad_mp).first, 3U);
  const ProofScript good_mp{bad_mp[0], bad_mp[1], {F("p =>{0} q", sig, *g), Justification::mp(2, 1), 0}};
  EXPECT_TRUE(check_proof(t, good_mp, sig, *g, Logic::lae).accepted);
}

TEST(CheckProof, IllFormedLine) {
  const auto sig = pqr();
  const auto g = godel3();
  const ProofScript s{{F("p =>{1} dle p", sig, *g, Logic::laec), Justification::by_axiom(12), 0}};
  const auto v = check_proof({}, s, sig, *g, Logic::lae);
  EXPECT_FALSE(v.accepted);
  EXPECT_EQ(v.line, 1U);
  EXPECT_TRUE(check_proof({}, s, sig, *g, Logic::laec).accepted);
}

// Accepted scripts built from generated axiom instances and MP never yield a falsified conclusion.
TEST(CheckProof, AcceptedConclusionsSurviveModels) {
  gen::Rng rng(11);
  for (const auto& scale : {godel3(), luk3()}) {
    const auto fam = fuzz::chain_family(scale, 3);
    const auto& sig = fam.sig;
    std::size_t accepted = 0;
    for (int round = 0; round < 30; ++round) {
      const int id = static_cast<int>(gen::uniform(rng, 1, 19));
      auto ax = fuzz::axiom_instance(id, sig, *scale, Logic::laec, rng);
      ASSERT_TRUE(ax.has_value());
      ProofScript s{{*ax, Justification::by_axiom(id), 0}};
      // Discharge the antecedent from hypotheses when the axiom is an implication.
      Theory t;
      if (ax->op() == OuterOp::imp) {
        t.push_back(ax->left());
        s.push_back({ax->left(), Justification::hyp(1), 0});
        s.push_back({ax->right(), Justification::mp(2, 1), 0});
      }
      const auto v = check_proof(t, s, sig, *scale, Logic::laec);
      ASSERT_TRUE(v.accepted) << v.reason;
      ++accepted;
      fam.for_each_model([&](const Space& space, const Evaluation& ev) {
        if (sat_theory(space, ev, t)) {
          EXPECT_TRUE(sat_formula(space, ev, *v.conclusion));
        }
      });
    }
    EXPECT_EQ(accepted, 30U);
  }
}
