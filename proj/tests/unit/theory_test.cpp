#include <gtest/gtest.h>

#include <algorithm>
#include <optional>

#include "corpus.hpp"
#include "corr/theory.hpp"

using namespace corr;

namespace {

SetFunctor arrow_functor(int a, int b, std::vector<int> map) {
  // on [1]: F(0) = a, F(1) = b, F(0 -> 1) = map
  std::vector<int> ida(a), idb(b);
  for (int i = 0; i < a; ++i) ida[i] = i;
  for (int i = 0; i < b; ++i) idb[i] = i;
  auto c = cats::chain(1);
  SetFunctor F{{a, b}, std::vector<std::vector<int>>(c->nmor())};
  F.fn[c->identity[0]] = ida;
  F.fn[c->identity[1]] = idb;
  F.fn[c->morphism_index("0_1")] = std::move(map);
  return F;
}

Monad find_monad(const Cat& C, const std::vector<int>& ob) {
  for (auto& m : all_monads(C))
    if (m.T.ob == ob) return m;
  throw std::runtime_error("no such monad");
}

}  // namespace

TEST(Nerve, AllObjectsIsFullyFaithful) {
  for (auto& [n, c] : corpus::small_categories()) {
    std::vector<int> all(c->nobj());
    for (int x = 0; x < c->nobj(); ++x) all[x] = x;
    EXPECT_TRUE(nerve_ff(c, all).ok) << n;
  }
}

TEST(Nerve, TopOfChainIsNotDense) {
  auto r = nerve_ff(cats::chain(2), {2});
  EXPECT_FALSE(r.ok);
  EXPECT_NE(r.witness.find("not full"), std::string::npos);
}

TEST(Nerve, ValuesAreHomSets) {
  auto c = cats::chain(2);
  auto nu = nerve(c, {0, 1});
  EXPECT_EQ(nu[0]->size(), 1);
  EXPECT_EQ(nu[1]->size(), 2);
  EXPECT_EQ(nu[2]->size(), 2);
}

TEST(Arities, DenseMembershipOnArrow) {
  auto c = cats::chain(1);
  auto ar = dense_arities(c, {1});
  EXPECT_TRUE(ar.member(module_from_set_functor(c, arrow_functor(2, 2, {1, 0}))));
  EXPECT_FALSE(ar.member(module_from_set_functor(c, arrow_functor(1, 2, {0}))));
  EXPECT_FALSE(ar.member(module_from_set_functor(c, arrow_functor(2, 1, {0, 0}))));
  // the limit over no arrows is a point
  auto top = dense_arities(c, {0});
  EXPECT_TRUE(top.member(module_from_set_functor(c, arrow_functor(3, 1, {0, 0, 0}))));
  EXPECT_FALSE(top.member(module_from_set_functor(c, arrow_functor(3, 2, {0, 0, 0}))));
}

TEST(Arities, AllAritiesContainEverything) {
  for (auto& [n, c] : corpus::small_categories())
    for (auto& F : enumerate_modules(c, 2)) EXPECT_TRUE(all_arities(c).member(F)) << n;
}

TEST(Arities, PullbackMembership) {
  auto z2 = cats::cyclic_group(2);
  auto u = corpus::to_terminal(z2);
  auto inner = explicit_arities(z2, {corpus::trivial_module(z2, 2)});
  auto ar = pullback_arities(u, inner);
  EXPECT_TRUE(ar.member(corpus::trivial_module(cats::terminal(), 2)));
  EXPECT_FALSE(ar.member(corpus::trivial_module(cats::terminal(), 1)));
}

TEST(Theory, KleisliTheoryRoundtrip) {
  for (auto& [n, c] : corpus::small_categories())
    for (auto& m : all_monads(c)) {
      Theory th = theory_from_monad(m, all_arities(c), 2);
      EXPECT_TRUE(validate_theory(th, 2).empty()) << n;
      Promonad p = monad_from_theory(th);
      EXPECT_TRUE(prof_isomorphic(p.carrier, kleisli_promonad(m).carrier)) << n;
    }
}

TEST(Theory, ArityConditionIsEnforced) {
  auto c = cats::chain(2);
  Monad m = find_monad(c, {0, 2, 2});
  EXPECT_THROW(theory_from_monad(m, dense_arities(c, {1, 2}), 2), StructuralError);
  EXPECT_NO_THROW(theory_from_monad(m, dense_arities(c, {0, 1}), 2));
}

TEST(Theory, ModelsAreAlgebras) {
  auto c = cats::chain(1);
  for (auto& m : all_monads(c)) {
    auto r = model_algebra_equivalence(m, all_arities(c), 3);
    EXPECT_TRUE(r.ok) << r.witness;
  }
  auto z2 = cats::cyclic_group(2);
  for (auto& m : all_monads(z2)) EXPECT_TRUE(model_algebra_equivalence(m, all_arities(z2), 3).ok);
}

TEST(Theory, IdentityTheoryModelsAreAllModules) {
  auto c = cats::span_shape();
  Theory th = make_theory(identity_functor(c), all_arities(c));
  EXPECT_EQ(models(th, 2).size(), enumerate_modules(c, 2).size());
  EXPECT_TRUE(theory_complete(th));
}

TEST(Lbo, DiscreteFiberJoinsToAPoint) {
  auto d = cats::discrete(2);
  auto r = l_bo(corpus::to_terminal(d));
  EXPECT_EQ(r.cat->nobj(), 1);
  EXPECT_EQ(r.cat->nmor(), 1);
  EXPECT_TRUE(functors_equal(compose_functors(r.over, r.unit), corpus::to_terminal(d)));
}

TEST(Lbo, BijectiveOnObjectsIsFixed) {
  for (auto& [n, c] : corpus::small_categories()) {
    auto r = l_bo(identity_functor(c));
    EXPECT_TRUE(is_isomorphism(r.unit)) << n;
    EXPECT_TRUE(validate_functor(r.over).empty()) << n;
  }
}

TEST(Lbo, ArrowIntoPointIsUnsaturated) {
  // jumping back along 0 -> 1 generates a free loop
  EXPECT_THROW(l_bo(corpus::to_terminal(cats::chain(1)), 8), Unsaturated);
}

TEST(Lbo, FactorsOverTheBase) {
  auto z2 = cats::cyclic_group(2);
  auto d = coproduct(*z2, *cats::terminal());
  std::optional<FinFunctor> f;
  for (auto& F : all_functors(d, z2))
    if (std::count(F.mo.begin(), F.mo.end(), z2->morphism_index("g1"))) f = F;
  ASSERT_TRUE(f.has_value());
  auto r = l_bo(*f);
  EXPECT_TRUE(validate_functor(r.unit).empty());
  EXPECT_TRUE(validate_functor(r.over).empty());
  EXPECT_TRUE(functors_equal(compose_functors(r.over, r.unit), *f));
  EXPECT_TRUE(find_isomorphism(r.cat, z2).has_value());
}

TEST(Lbo, TwoLoopsJoinFreely) {
  // two copies of Z2 over one object generate the infinite dihedral group
  auto z2 = cats::cyclic_group(2);
  auto d = product(*cats::discrete(2), *z2);
  EXPECT_THROW(l_bo(corpus::proj2(cats::discrete(2), z2, d), 8), Unsaturated);
}

TEST(Goodness, CorpusTheoriesAreGoodAndIncomplete) {
  for (auto& [n, th] : corpus::good_theories()) {
    EXPECT_TRUE(validate_theory(th, 2).empty()) << n;
    EXPECT_FALSE(theory_complete(th)) << n;
    auto g = is_good(th, 8, 2);
    EXPECT_TRUE(g.good()) << n << ": " << g.unit_counit.witness << g.pullback.witness << g.monad.witness;
  }
}

TEST(Goodness, NewIsomorphismsBreakTheCounit) {
  auto g = is_good(corpus::bad_theory());
  EXPECT_FALSE(g.unit_counit.ok);
  EXPECT_FALSE(g.good());
  EXPECT_THROW(complete_theory(corpus::bad_theory()), StructuralError);
}

TEST(Completion, BZ2ToPoint) {
  auto th = corpus::good_theories().front().theory;
  auto c = complete_theory(th, 8, 2);
  EXPECT_TRUE(theory_complete(c.theory));
  EXPECT_EQ(c.theory.T0()->nmor(), 1);
  EXPECT_TRUE(validate_theory(c.theory, 2).empty());
  EXPECT_TRUE(completion_idempotent(th, 8, 2).ok);
  EXPECT_TRUE(models_invariance(th, 2).ok);
}
