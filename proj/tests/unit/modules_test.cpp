#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "corr/catalog.hpp"
#include "corr/modules.hpp"

using namespace corr;

namespace {

// canonical form: lexicographically least relabelling over all per-object permutations
std::vector<std::vector<int>> canonical(const FinCategory& K, const SetFunctor& F) {
  const int n = K.nobj();
  std::vector<std::vector<int>> perm(n);
  for (int x = 0; x < n; ++x) {
    perm[x].resize(F.size[x]);
    for (int i = 0; i < F.size[x]; ++i) perm[x][i] = i;
  }
  std::vector<std::vector<int>> best;
  bool first = true;
  std::function<void(int)> rec = [&](int x) {
    if (x == n) {
      std::vector<std::vector<int>> t(K.nmor());
      for (int f = 0; f < K.nmor(); ++f) {
        t[f].assign(F.size[K.src(f)], 0);
        for (int a = 0; a < F.size[K.src(f)]; ++a) t[f][perm[K.src(f)][a]] = perm[K.tgt(f)][F.fn[f][a]];
      }
      if (first || t < best) best = t;
      first = false;
      return;
    }
    std::sort(perm[x].begin(), perm[x].end());
    do rec(x + 1);
    while (std::next_permutation(perm[x].begin(), perm[x].end()));
  };
  rec(0);
  best.push_back(F.size);
  return best;
}

}  // namespace

TEST(Modules, IsoClassCountsMatchCanonicalForms) {
  for (const Cat& K : {cats::terminal(), cats::chain(1), cats::chain(2), cats::cyclic_group(2), cats::cyclic_group(3),
                       cats::idempotent_monoid(), cats::walking_iso(), cats::parallel_pair(), cats::walking_retraction()}) {
    for (int cap = 0; cap <= 3; ++cap) {
      auto raw = enumerate_set_functors(K, cap, -1, false);
      std::set<std::vector<std::vector<int>>> classes;
      for (auto& F : raw) {
        EXPECT_TRUE(validate_set_functor(*K, F).empty());
        classes.insert(canonical(*K, F));
      }
      auto skel = enumerate_set_functors(K, cap);
      EXPECT_EQ(skel.size(), classes.size()) << "cap " << cap;
    }
  }
}

TEST(Modules, RawCountsMatchDirectFormula) {
  // functors [1] -> FinSet with fibers <= 2: sum over sizes of b^a
  size_t expect = 0;
  for (int a = 0; a <= 2; ++a)
    for (int b = 0; b <= 2; ++b) {
      size_t p = 1;
      for (int i = 0; i < a; ++i) p *= b;
      expect += p;
    }
  EXPECT_EQ(enumerate_set_functors(cats::chain(1), 2, -1, false).size(), expect);
  // Z2-sets of size n are involutions
  EXPECT_EQ(enumerate_set_functors(cats::cyclic_group(2), 3, -1, false).size(), 1u + 1u + 2u + 4u);
}

TEST(Modules, ModuleRoundtrip) {
  auto K = cats::walking_retraction();
  for (auto& F : enumerate_set_functors(K, 2)) {
    auto M = module_from_set_functor(K, F);
    EXPECT_TRUE(validate_prof(*M).empty());
    EXPECT_EQ(set_functor_from_module(*M), F);
  }
}

TEST(Modules, RestrictionAndExtension) {
  auto one = cats::chain(1);
  FinFunctor at0{point(), one, {0}, {one->identity[0]}};
  for (auto& M : enumerate_modules(one, 2)) {
    auto R = restrict_module(M, at0);
    EXPECT_TRUE(validate_prof(*R).empty());
    EXPECT_EQ(R->size(), static_cast<int>(fiber_index(*M).els[0].size()));
  }
  // extension of the point module along the inclusion at 0 is Hom(0, -)
  auto P = enumerate_modules(point(), 1).back();
  EXPECT_TRUE(prof_isomorphic(extend_module(P, at0), representable(one, 0)));
}

TEST(Modules, ProfunctorsAsModulesOverProduct) {
  auto c = cats::chain(1), d = cats::cyclic_group(2);
  for (auto& P : enumerate_profs(c, d, 2, 4)) EXPECT_TRUE(validate_prof(*P).empty());
}

TEST(Modules, SetFunctorMaps) {
  auto K = cats::chain(1);
  auto Fs = enumerate_set_functors(K, 2);
  for (auto& F : Fs)
    for (auto& G : Fs) {
      // brute force over all per-object functions
      size_t brute = 0;
      std::vector<int> total;
      int dom0 = F.size[0], dom1 = F.size[1];
      size_t n0 = 1, n1 = 1;
      for (int i = 0; i < dom0; ++i) n0 *= G.size[0];
      for (int i = 0; i < dom1; ++i) n1 *= G.size[1];
      for (size_t a = 0; a < n0; ++a)
        for (size_t b = 0; b < n1; ++b) {
          std::vector<int> m0, m1;
          size_t t = a;
          for (int i = 0; i < dom0; ++i, t /= G.size[0]) m0.push_back(static_cast<int>(t % G.size[0]));
          t = b;
          for (int i = 0; i < dom1; ++i, t /= G.size[1]) m1.push_back(static_cast<int>(t % G.size[1]));
          bool ok = true;
          int f = K->morphism_index("0_1");
          for (int i = 0; i < dom0; ++i) ok &= m1[F.fn[f][i]] == G.fn[f][m0[i]];
          brute += ok;
        }
      EXPECT_EQ(set_functor_maps(*K, F, G, false).size(), brute);
    }
}
