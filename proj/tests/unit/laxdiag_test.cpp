#include <gtest/gtest.h>

#include "corr/catalog.hpp"
#include "corr/laxdiag.hpp"
#include "corr/monad.hpp"

using namespace corr;

namespace {

/// A finite set as a profunctor between points.
Prof set_prof(int k, const std::string& tag) {
  std::vector<std::string> names;
  for (int e = 0; e < k; ++e) names.push_back(tag + std::to_string(e));
  return make_prof(point(), point(), names, std::vector<int>(k, 0), std::vector<int>(k, 0),
                   [](int e, int) { return e; }, [](int e, int) { return e; });
}

FinFunctor to_point(const Cat& C) {
  return {C, cats::chain(0), std::vector<int>(C->nobj(), 0), std::vector<int>(C->nmor(), 0)};
}

/// * -> * -> * with edges of sizes 1, 2, 2 and gamma(a, b_i) = c_i.
LaxDiagram three_points() {
  auto id = identity_functor(point());
  LaxDiagram d = lax_diagram({id, id, id});
  d.edge[{0, 1}] = set_prof(1, "a");
  d.edge[{1, 2}] = set_prof(2, "b");
  d.edge[{0, 2}] = set_prof(2, "c");
  d.set_cell(0, 1, 2, [](int, int y) { return y; });
  return d;
}

}  // namespace

TEST(LaxDiag, SingleEdgeEncodesToATwoObjectCategory) {
  auto id = identity_functor(point());
  LaxDiagram d = lax_diagram({id, id});
  d.edge[{0, 1}] = set_prof(3, "m");
  ASSERT_TRUE(validate_lax(d).empty());
  auto enc = encode_lax(d);
  EXPECT_TRUE(validate_wrr(enc.w).empty());
  EXPECT_EQ(enc.E()->nobj(), 2);
  EXPECT_EQ(enc.E()->hom(0, 1).size(), 3u);
  EXPECT_EQ(enc.E()->hom(1, 0).size(), 0u);
  auto back = decode_lax(enc.w);
  EXPECT_TRUE(decode_encode_iso(d, back).ok);
  EXPECT_TRUE(encode_decode_iso(enc.w, encode_lax(back).w).ok);
}

TEST(LaxDiag, MissingCellIsRejected) {
  auto d = three_points();
  d.cell.clear();
  EXPECT_FALSE(validate_lax(d).empty());
  EXPECT_THROW(encode_lax(d), StructuralError);
}

TEST(LaxDiag, LengthTwoRoundtrip) {
  auto d = three_points();
  ASSERT_TRUE(validate_lax(d).empty());
  auto enc = encode_lax(d);
  EXPECT_EQ(enc.E()->nmor(), 3 + 1 + 2 + 2);
  EXPECT_TRUE(decode_encode_iso(d, decode_lax(enc.w)).ok);
}

TEST(LaxDiag, DifferentCellsAreNotIsomorphic) {
  auto d1 = three_points();
  auto d2 = three_points();
  d2.set_cell(0, 1, 2, [](int, int) { return 0; });
  ASSERT_TRUE(validate_lax(d2).empty());
  EXPECT_TRUE(decode_encode_iso(d1, decode_lax(encode_lax(d1).w)).ok);
  EXPECT_FALSE(decode_encode_iso(d1, decode_lax(encode_lax(d2).w)).ok);
}

TEST(LaxDiag, WrrRejectsNonChainBase) {
  auto C = cats::walking_iso();
  WrrObject w{identity_functor(C), identity_functor(C)};
  EXPECT_FALSE(validate_wrr(w).empty());
}

TEST(LaxDiag, WrrRejectsNonBijectiveVertex) {
  auto E = cats::chain(0);
  auto D = cats::discrete(2);
  FinFunctor h{D, E, {0, 0}, {0, 0}};
  EXPECT_FALSE(validate_wrr({h, identity_functor(E)}).empty());
}

TEST(LaxDiag, CollageReadsBackAsItsProfunctor) {
  auto c1 = cats::chain(1);
  auto z2 = cats::cyclic_group(2);
  for (auto& M : {identity_prof(c1), identity_prof(z2), representable(z2, 0)}) {
    Prof P = M;
    auto col = collage(P);
    auto r = unital_roundtrip(col.proj);
    EXPECT_TRUE(r.iso.ok) << r.iso.witness;
    EXPECT_EQ(r.diagram.n, 1);
    EXPECT_EQ(r.diagram.M(0, 1)->size(), P->size());
  }
}

TEST(LaxDiag, ColimitOfSmallDiagrams) {
  auto id = identity_functor(point());
  LaxDiagram d = lax_diagram({id, id});
  d.edge[{0, 1}] = set_prof(2, "m");
  auto r = colimit_check(d, 2);
  EXPECT_TRUE(r.ok) << r.witness;
  EXPECT_GT(r.left_objects, 0u);
  auto r2 = colimit_check(three_points(), 2);
  EXPECT_TRUE(r2.ok) << r2.witness;
}

TEST(LaxDiag, SingleKleisliVertexCocones) {
  for (auto& c : {cats::chain(1), cats::cyclic_group(2)})
    for (auto& m : all_monads(c)) {
      auto K = kleisli(m);
      LaxDiagram d = lax_diagram({K.j});
      EXPECT_EQ(lax_cocones(d, 2).size(), enumerate_modules(K.cat, 2).size());
      EXPECT_TRUE(colimit_check(d, 2).ok);
    }
}

TEST(LaxDiag, CollapseGroupoidFibers) {
  auto iso = cats::walking_iso();
  auto col = collapse_fibers({identity_functor(iso), to_point(iso)}, 8);
  EXPECT_EQ(col.cat->nobj(), 1);
  EXPECT_EQ(col.cat->nmor(), 1);
  auto z3 = cats::cyclic_group(3);
  EXPECT_EQ(collapse_fibers({identity_functor(z3), to_point(z3)}, 8).cat->nmor(), 1);
  EXPECT_THROW(collapse_fibers({identity_functor(z3), to_point(z3)}, 0), Unsaturated);
}

TEST(LaxDiag, CollapseKeepsUncontractedMorphisms) {
  auto z2 = cats::cyclic_group(2);
  auto D = discrete_on(*z2);
  FinFunctor h{D, z2, {0}, {z2->identity[0]}};
  auto col = collapse_fibers({h, to_point(z2)}, 8);
  EXPECT_TRUE(find_isomorphism(col.cat, z2).has_value());
  EXPECT_TRUE(validate_functor(col.quotient).empty());
  EXPECT_TRUE(validate_functor(col.over).empty());
}

TEST(LaxDiag, CollapseRejectsNonInvertibleFiberMorphisms) {
  auto c1 = cats::chain(1);
  EXPECT_THROW(collapse_fibers({identity_functor(c1), to_point(c1)}, 8), StructuralError);
}
