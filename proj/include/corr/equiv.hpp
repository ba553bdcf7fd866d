// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <set>
#include <string>
#include <vector>

namespace corr {

/// A finite list of objects with computable hom-sets.
template <class O, class M>
struct ConcreteCategory {
  std::vector<O> objects;
  std::function<std::vector<M>(const O&, const O&)> hom;
  std::function<M(const M&, const M&)> compose;  // g after f
  std::function<bool(const M&, const M&)> equal;
  std::function<bool(const M&)> invertible;
  std::function<std::vector<int>(const M&)> key;  // optional; equal keys iff equal morphisms
};

struct EquivalenceReport {
  bool ok = true;
  size_t left_objects = 0, right_objects = 0;
  size_t left_morphisms = 0, right_morphisms = 0;
  std::string witness;

  void fail(const std::string& w) {
    if (ok) witness = w;
    ok = false;
  }
};

/// Functor data between concrete categories.
template <class O1, class M1, class O2, class M2>
struct ConcreteFunctor {
  std::function<O2(const O1&)> ob;
  std::function<M2(const M1&, const O1&, const O1&)> mor;  // h: a -> a'
};

/// Checks that phi and psi are mutually inverse equivalences: eta: a -> psi phi a
/// and eps: phi psi b -> b invertible and natural, phi fully faithful on the
/// listed objects, and psi essentially surjective by way of eta.
template <class O1, class M1, class O2, class M2>
EquivalenceReport check_equivalence(const ConcreteCategory<O1, M1>& A, const ConcreteCategory<O2, M2>& B,
                                    const ConcreteFunctor<O1, M1, O2, M2>& phi,
                                    const ConcreteFunctor<O2, M2, O1, M1>& psi,
                                    const std::function<M1(const O1&, const O1&)>& eta,
                                    const std::function<M2(const O2&, const O2&)>& eps) {
  EquivalenceReport r;
  r.left_objects = A.objects.size();
  r.right_objects = B.objects.size();
  // both lists are one object per iso class
  if (A.objects.size() != B.objects.size()) {
    r.fail("iso class counts differ: " + std::to_string(A.objects.size()) + " vs " + std::to_string(B.objects.size()));
    return r;
  }
  std::vector<O2> phis;
  std::vector<O1> psis;
  std::vector<O1> psiphis;
  std::vector<O2> phipsis;
  std::vector<M1> etas;
  std::vector<M2> epss;
  for (auto& a : A.objects) {
    phis.push_back(phi.ob(a));
    psiphis.push_back(psi.ob(phis.back()));
    etas.push_back(eta(a, psiphis.back()));
    if (!A.invertible(etas.back())) r.fail("unit component is not invertible");
  }
  for (auto& b : B.objects) {
    psis.push_back(psi.ob(b));
    phipsis.push_back(phi.ob(psis.back()));
    epss.push_back(eps(phipsis.back(), b));
    if (!B.invertible(epss.back())) r.fail("counit component is not invertible");
  }
  if (!r.ok) return r;
  for (size_t i = 0; i < A.objects.size(); ++i)
    for (size_t j = 0; j < A.objects.size(); ++j) {
      auto hs = A.hom(A.objects[i], A.objects[j]);
      auto ks = B.hom(phis[i], phis[j]);
      r.left_morphisms += hs.size();
      if (hs.size() != ks.size()) {
        r.fail("hom-set sizes differ at left pair (" + std::to_string(i) + "," + std::to_string(j) + ")");
        return r;
      }
      std::vector<M2> imgs;
      std::set<std::vector<int>> keys;
      for (auto& h : hs) {
        M2 ph = phi.mor(h, A.objects[i], A.objects[j]);
        bool repeat = false;
        if (B.key) {
          repeat = !keys.insert(B.key(ph)).second;
        } else {
          for (auto& q : imgs) repeat = repeat || B.equal(q, ph);
          imgs.push_back(ph);
        }
        if (repeat) {
          r.fail("functor is not faithful at left pair (" + std::to_string(i) + "," + std::to_string(j) + ")");
          return r;
        }
        M1 back = psi.mor(ph, phis[i], phis[j]);
        if (!A.equal(A.compose(back, etas[i]), A.compose(etas[j], h))) {
          r.fail("unit is not natural at left pair (" + std::to_string(i) + "," + std::to_string(j) + ")");
          return r;
        }
      }
    }
  for (size_t i = 0; i < B.objects.size(); ++i)
    for (size_t j = 0; j < B.objects.size(); ++j) {
      auto ks = B.hom(B.objects[i], B.objects[j]);
      r.right_morphisms += ks.size();
      for (auto& k : ks) {
        M1 pk = psi.mor(k, B.objects[i], B.objects[j]);
        M2 back = phi.mor(pk, psis[i], psis[j]);
        if (!B.equal(B.compose(epss[j], back), B.compose(k, epss[i]))) {
          r.fail("counit is not natural at right pair (" + std::to_string(i) + "," + std::to_string(j) + ")");
          return r;
        }
      }
    }
  return r;
}

}  // namespace corr
