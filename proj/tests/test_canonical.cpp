#include <gtest/gtest.h>

#include "lae/canonical.hpp"
#include "lae/generators.hpp"

using namespace lae;

namespace {

ScalePtr godel3() { return share(GradeScale::godel({Rational(0), Rational(1, 2), Rational(1)})); }
ScalePtr luk3() { return share(GradeScale::lukasiewicz_steps(2)); }

constexpr Grade g0{0}, gh{1}, g1{2};

// Test-side isomorphism check, written against the public accessors only.
void expect_isomorphic(const Model& in, const CanonicalResult& r) {
  const auto& out = r.model;
  ASSERT_EQ(out.size(), in.size());
  std::vector<int> hit(in.size(), 0);
  for (auto x : r.witness) ++hit.at(x);
  for (int h : hit) EXPECT_EQ(h, 1);
  for (std::size_t u = 0; u < in.size(); ++u) {
    for (std::size_t v = 0; v < in.size(); ++v)
      EXPECT_EQ(in.base().sim(u, v), out.base().sim(r.witness[u], r.witness[v]));
    for (VarId p = 0; p < in.signature().size(); ++p)
      EXPECT_EQ(in.evaluation()[p].test(u), out.evaluation()[p].test(r.witness[u]));
  }
  if (auto* c = std::get_if<ChainSpace>(&in.space())) {
    const auto& d = std::get<ChainSpace>(out.space());
    for (std::size_t u = 0; u < in.size(); ++u)
      for (std::size_t v = 0; v < in.size(); ++v) EXPECT_EQ(c->leq(u, v), d.leq(r.witness[u], r.witness[v]));
  }
  if (auto* p = std::get_if<ProductSpace>(&in.space())) {
    const auto& q = std::get<ProductSpace>(out.space());
    ASSERT_EQ(p->dimension(), q.dimension());
    for (std::size_t i = 0; i < p->dimension(); ++i)
      for (std::size_t u = 0; u < in.size(); ++u)
        for (std::size_t v = 0; v < in.size(); ++v)
          EXPECT_EQ(p->leq(i, u, v), q.leq(i, r.witness[u], r.witness[v]));
  }
}

}  // namespace

TEST(Canonical, ChainFixture) {
  Signature sig;
  sig.add_sort("s", {"p", "q"});
  // Stored order w3 < w1 < w2.
  ChainSpace chain(SimilaritySpace(godel3(), {"w1", "w2", "w3"}, {g1, gh, g0, gh, g1, g0, g0, g0, g1}), {2, 0, 1});
  ASSERT_TRUE(chain.is_valid());
  Model m(Logic::laec, sig, chain, {WorldSet::of(3, {0, 1}), WorldSet::of(3, {1})});
  auto r = canonical_space(m, Logic::laec);
  EXPECT_TRUE(r.isomorphic);
  expect_isomorphic(m, r);
}

TEST(Canonical, SingleWorld) {
  auto sig = Signature::single({"p"});
  Model m(Logic::lae, sig, SimilaritySpace::discrete(godel3(), 1), {WorldSet::full(1)});
  auto r = canonical_space(m, Logic::lae);
  ASSERT_EQ(r.model.size(), 1u);
  EXPECT_EQ(r.model.base().sim(0, 0), g1);
  EXPECT_TRUE(r.isomorphic);
}

TEST(Canonical, ProductTwoByTwo) {
  auto s = godel3();
  auto c2 = [&](const char* a, const char* b) {
    return ChainSpace::identity_order(SimilaritySpace(s, {a, b}, {g1, gh, gh, g1}));
  };
  ProductSpace p({c2("a1", "a2"), c2("b1", "b2")});
  Signature sig;
  sig.add_sort("A", {"p"});
  sig.add_sort("B", {"q"});
  Model m(Logic::laepc, sig, p, {p.cylinder(0, WorldSet::of(2, {1})), p.cylinder(1, WorldSet::of(2, {0}))});
  auto r = canonical_space(m, Logic::laepc);
  const auto& q = std::get<ProductSpace>(r.model.space());
  ASSERT_EQ(q.dimension(), 2u);
  EXPECT_EQ(q.component(0).size(), 2u);
  EXPECT_EQ(q.component(1).size(), 2u);
  for (std::size_t u = 0; u < 4; ++u)
    for (std::size_t v = 0; v < 4; ++v)
      EXPECT_EQ(q.base().sim(u, v), std::min(q.component(0).base().sim(q.coord(u, 0), q.coord(v, 0)),
                                             q.component(1).base().sim(q.coord(u, 1), q.coord(v, 1))));
  EXPECT_TRUE(r.isomorphic);
  expect_isomorphic(m, r);
}

TEST(Canonical, RandomRoundTrips) {
  gen::Rng rng(77);
  Signature plain = Signature::single({"p", "q", "r"});
  Signature sorted;
  sorted.add_sort("A", {"p", "q"});
  sorted.add_sort("B", {"r"});
  sorted.add_unsorted({"u"});
  for (auto scale : {godel3(), luk3()})
    for (Logic l : {Logic::lae, Logic::laec, Logic::laepc}) {
      const auto& sig = l == Logic::laepc ? sorted : plain;
      for (int i = 0; i < 40; ++i) {
        auto m = gen::random_model(l, sig, scale, rng, 4);
        auto r = canonical_space(m, l);
        EXPECT_TRUE(r.isomorphic);
        expect_isomorphic(m, r);
      }
    }
}

TEST(Canonical, VariantMismatch) {
  auto sig = Signature::single({"p"});
  Model m(Logic::lae, sig, SimilaritySpace::discrete(godel3(), 1), {WorldSet::full(1)});
  EXPECT_THROW(canonical_space(m, Logic::laec), VariantError);
}
