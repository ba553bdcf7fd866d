#include <gtest/gtest.h>

#include <random>

#include "corr/catalog.hpp"
#include "corr/modules.hpp"
#include "corr/prof.hpp"

using namespace corr;

namespace {

FinFunctor at(const Cat& C, int x) { return {point(), C, {x}, {C->identity[x]}}; }

std::vector<Cat> small_cats() {
  return {cats::terminal(), cats::chain(1), cats::chain(2), cats::walking_iso(), cats::cyclic_group(2),
          cats::idempotent_monoid(), cats::parallel_pair()};
}

}  // namespace

TEST(Prof, IdentityProfunctors) {
  EXPECT_EQ(identity_prof(point())->size(), 1);
  EXPECT_EQ(identity_prof(cats::chain(1))->size(), 3);
  for (auto& c : small_cats()) EXPECT_TRUE(validate_prof(*identity_prof(c)).empty());
}

TEST(Prof, WalkingArrowComposite) {
  auto one = cats::chain(1);
  auto I = identity_prof(one);
  auto II = compose_prof(I, I);
  EXPECT_EQ(II->size(), 3);
  EXPECT_TRUE(validate_prof(*II).empty());
  // before quotienting there are 4 matching pairs: (id0,id0), (id0,01), (01,id1), (id1,id1)
  EXPECT_EQ(II->coend->rep.size(), 3u);
}

TEST(Prof, CompanionAndConjointSizes) {
  auto one = cats::chain(1);
  auto f = at(one, 0);
  EXPECT_EQ(companion(f)->size(), 2);
  EXPECT_EQ(conjoint(f)->size(), 1);
  for (auto& c : small_cats()) {
    auto id = identity_functor(c);
    EXPECT_TRUE(find_prof_iso(companion(id), identity_prof(c)).has_value());
    EXPECT_TRUE(find_prof_iso(conjoint(id), identity_prof(c)).has_value());
  }
}

TEST(Prof, UnitLawsWithConstructedIsos) {
  for (auto& c : small_cats())
    for (auto& d : small_cats()) {
      for (auto& M : enumerate_profs(c, d, 1, 3)) {
        auto IM = compose_prof(identity_prof(c), M);
        auto l = left_unitor(IM, M);
        EXPECT_TRUE(validate_prof_morphism(l).empty());
        EXPECT_TRUE(is_bijective(l));
        EXPECT_EQ(compose_morphisms(l, left_unitor_inv(M, IM)).map, identity_morphism(M).map);
        auto MI = compose_prof(M, identity_prof(d));
        auto r = right_unitor(MI, M);
        EXPECT_TRUE(validate_prof_morphism(r).empty());
        EXPECT_TRUE(is_bijective(r));
      }
    }
}

TEST(Prof, Associator) {
  auto one = cats::chain(1);
  auto c2 = cats::cyclic_group(2);
  auto Ms = enumerate_profs(one, c2, 2, 3);
  auto Ns = enumerate_profs(c2, one, 2, 3);
  ASSERT_FALSE(Ms.empty());
  int checked = 0;
  for (size_t i = 0; i < Ms.size(); i += 2)
    for (size_t j = 0; j < Ns.size(); j += 2) {
      auto& M = Ms[i];
      auto& N = Ns[j];
      auto P = identity_prof(one);
      auto MN_P = compose_prof(compose_prof(M, N), P);
      auto M_NP = compose_prof(M, compose_prof(N, P));
      auto a = associator(MN_P, M_NP);
      EXPECT_TRUE(validate_prof_morphism(a).empty());
      EXPECT_TRUE(is_bijective(a));
      EXPECT_EQ(compose_morphisms(associator_inv(M_NP, MN_P), a).map, identity_morphism(MN_P).map);
      ++checked;
    }
  EXPECT_GT(checked, 10);
}

TEST(Prof, ConjointsComposeContravariantly) {
  auto one = cats::chain(1), two = cats::chain(2);
  for (auto& f : all_functors(one, two))
    for (auto& g : all_functors(two, one)) {
      auto gf = compose_functors(g, f);
      EXPECT_TRUE(prof_isomorphic(compose_prof(conjoint(g), conjoint(f)), conjoint(gf)));
      EXPECT_TRUE(prof_isomorphic(compose_prof(companion(f), companion(g)), companion(gf)));
    }
}

TEST(Prof, AdjunctionTriangles) {
  auto one = cats::chain(1), two = cats::chain(2);
  for (auto& f : all_functors(one, two)) EXPECT_TRUE(check_adjunction(f).ok());
  FinFunctor bang{two, point(), {0, 0, 0}, std::vector<int>(two->nmor(), 0)};
  auto p = check_adjunction(bang);
  EXPECT_TRUE(p.ok()) << p.witness;
  EXPECT_TRUE(check_adjunction(identity_functor(cats::walking_retraction())).ok());
}

TEST(Prof, CompanionConjointComposite) {
  // compose(f_!, f^*) has elements (c, g: fc -> fc', c')
  auto one = cats::chain(1);
  auto two = cats::chain(2);
  for (auto& f : all_functors(one, two)) {
    auto cc = compose_prof(companion(f), conjoint(f));
    size_t expect = 0;
    for (int c = 0; c < one->nobj(); ++c)
      for (int c2 = 0; c2 < one->nobj(); ++c2) expect += two->hom(f.ob[c], f.ob[c2]).size();
    EXPECT_EQ(static_cast<size_t>(cc->size()), expect);
  }
}

TEST(Prof, Collage) {
  auto K = collage(identity_prof(point()));
  EXPECT_TRUE(find_isomorphism(K.cat, cats::chain(1)).has_value());
  auto c = cats::chain(1), d = cats::cyclic_group(2);
  auto empty = make_prof(c, d, {}, {}, {}, nullptr, nullptr);
  auto K2 = collage(empty);
  EXPECT_TRUE(find_isomorphism(K2.cat, coproduct(*c, *d)).has_value());
  for (auto& M : enumerate_profs(c, d, 2, 4)) {
    auto k = collage(M);
    EXPECT_TRUE(validate_category(*k.cat).empty());
    EXPECT_TRUE(validate_functor(k.proj).empty());
    auto fac = collage_factor(M);
    EXPECT_TRUE(fac.ok) << fac.witness;
  }
}

TEST(Prof, CylinderRoundtrip) {
  auto c = cats::chain(1), d = cats::terminal();
  auto Ms = enumerate_profs(c, d, 2, 4);
  int checked = 0;
  for (auto& M : Ms)
    for (auto& N : Ms)
      for (auto& a : prof_nats(M, N)) {
        auto P = cylinder_encode(a);
        EXPECT_TRUE(validate_prof(*P).empty());
        auto b = cylinder_decode(P, c);
        EXPECT_EQ(b.map, a.map);
        EXPECT_EQ(b.src->name, M->name);
        EXPECT_EQ(b.tgt->name, N->name);
        ++checked;
      }
  EXPECT_GT(checked, 20);
}

TEST(Prof, NatsContainIdentity) {
  for (auto& M : enumerate_profs(cats::chain(1), cats::cyclic_group(2), 2, 3)) {
    bool found = false;
    for (auto& a : prof_nats(M, M)) found |= a.map == identity_morphism(M).map;
    EXPECT_TRUE(found);
  }
}

TEST(Prof, RepresentableFromCompanion) {
  for (auto& C : small_cats())
    for (int x = 0; x < C->nobj(); ++x) {
      auto F = module_apply(companion(at(C, x)), identity_prof(point()));
      EXPECT_TRUE(prof_isomorphic(F, representable(C, x)));
    }
}

TEST(Prof, Spans) {
  Span id{2, 2, {0, 1}, {0, 1}};
  auto P = prof_from_span(id);
  EXPECT_TRUE(prof_isomorphic(P, identity_prof(P->src)));
  Span empty{2, 3, {}, {}};
  EXPECT_EQ(prof_from_span(empty)->size(), 0);
  auto back = span_from_prof(*prof_from_span(Span{2, 1, {0, 1, 1}, {0, 0, 0}}));
  EXPECT_EQ(back.l, (std::vector<int>{0, 1, 1}));
  EXPECT_THROW(span_from_prof(*identity_prof(cats::chain(1))), StructuralError);
}

TEST(Prof, MateRoundtrip) {
  auto one = cats::chain(1);
  auto pt = point();
  FinFunctor f = identity_functor(one);
  FinFunctor g{one, pt, {0, 0}, {0, 0, 0}};
  std::mt19937 rng(7);
  auto Ms = enumerate_profs(one, one, 1, 3);
  auto Ns = enumerate_profs(one, pt, 2, 3);
  int checked = 0;
  for (auto& M : Ms)
    for (auto& N : Ns) {
      MateContext ctx(f, g, M, N);
      for (auto& a : prof_nats(ctx.Mg, ctx.fN)) {
        auto b = ctx.mate(a);
        EXPECT_TRUE(validate_prof_morphism(b).empty());
        EXPECT_EQ(ctx.unmate(b).map, a.map);
        ++checked;
      }
      for (auto& b : prof_nats(M, ctx.fN_g)) EXPECT_EQ(ctx.mate(ctx.unmate(b)).map, b.map);
    }
  EXPECT_GT(checked, 5);
}
