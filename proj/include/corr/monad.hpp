// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "fincat.hpp"
#include "modules.hpp"
#include "prof.hpp"

namespace corr {

struct Monad {
  Cat base;
  FinFunctor T;
  std::vector<int> unit;  // eta_x: x -> Tx
  std::vector<int> mult;  // mu_x: TTx -> Tx
};

inline std::vector<std::string> validate_monad(const Monad& m) {
  std::vector<std::string> out;
  const auto& C = *m.base;
  for (auto& s : validate_functor(m.T)) out.push_back("endofunctor: " + s);
  if (!out.empty()) return out;
  if (!same_category(m.T.src, m.base) || !same_category(m.T.tgt, m.base)) {
    out.push_back("endofunctor does not live on the base");
    return out;
  }
  const auto& T = m.T;
  if (static_cast<int>(m.unit.size()) != C.nobj() || static_cast<int>(m.mult.size()) != C.nobj()) {
    out.push_back("unit or multiplication has the wrong number of components");
    return out;
  }
  for (int x = 0; x < C.nobj(); ++x) {
    int e = m.unit[x], u = m.mult[x];
    if (e < 0 || e >= C.nmor() || C.src(e) != x || C.tgt(e) != T.ob[x])
      out.push_back("unit component at " + C.obj_name(x) + " is mistyped");
    if (u < 0 || u >= C.nmor() || C.src(u) != T.ob[T.ob[x]] || C.tgt(u) != T.ob[x])
      out.push_back("multiplication component at " + C.obj_name(x) + " is mistyped");
  }
  if (!out.empty()) return out;
  for (int f = 0; f < C.nmor(); ++f) {
    int x = C.src(f), y = C.tgt(f);
    if (C.compose(T.mo[f], m.unit[x]) != C.compose(m.unit[y], f))
      out.push_back("unit is not natural at " + C.mor_name(f));
    if (C.compose(T.mo[f], m.mult[x]) != C.compose(m.mult[y], T.mo[T.mo[f]]))
      out.push_back("multiplication is not natural at " + C.mor_name(f));
  }
  for (int x = 0; x < C.nobj(); ++x) {
    int Tx = T.ob[x];
    int id = C.identity[Tx];
    if (C.compose(m.mult[x], m.unit[Tx]) != id) out.push_back("left unit law fails at " + C.obj_name(x));
    if (C.compose(m.mult[x], T.mo[m.unit[x]]) != id) out.push_back("right unit law fails at " + C.obj_name(x));
    if (C.compose(m.mult[x], T.mo[m.mult[x]]) != C.compose(m.mult[x], m.mult[Tx]))
      out.push_back("associativity fails at " + C.obj_name(x));
  }
  return out;
}

inline Monad identity_monad(const Cat& C) {
  Monad m{C, identity_functor(C), {}, {}};
  for (int x = 0; x < C->nobj(); ++x) {
    m.unit.push_back(C->identity[x]);
    m.mult.push_back(C->identity[x]);
  }
  return m;
}

/// Every monad structure on C, found by exhaustive search.
inline std::vector<Monad> all_monads(const Cat& C) {
  std::vector<Monad> out;
  const int n = C->nobj();
  for (auto& T : all_functors(C, C)) {
    Monad m{C, T, std::vector<int>(n, -1), std::vector<int>(n, -1)};
    std::function<void(int)> rec = [&](int k) {
      if (k == 2 * n) {
        if (validate_monad(m).empty()) out.push_back(m);
        return;
      }
      int x = k % n;
      auto cands = k < n ? C->hom(x, T.ob[x]) : C->hom(T.ob[T.ob[x]], T.ob[x]);
      for (int f : cands) {
        (k < n ? m.unit : m.mult)[x] = f;
        rec(k + 1);
      }
    };
    rec(0);
  }
  return out;
}

struct Kleisli {
  Cat cat;
  FinFunctor j;
  std::vector<int> under;  // K-morphism -> underlying C-morphism x -> Ty
};

/// K(x, y) = C(x, Ty), composition mu o Tg o f.
inline Kleisli kleisli(const Monad& m) {
  const auto& C = *m.base;
  const auto& T = m.T;
  std::vector<Morphism> mors;
  std::vector<int> under;
  std::vector<std::vector<int>> ix(C.nmor(), std::vector<int>(C.nobj(), -1));
  for (int x = 0; x < C.nobj(); ++x)
    for (int y = 0; y < C.nobj(); ++y)
      for (int f : C.hom(x, T.ob[y])) {
        ix[f][y] = static_cast<int>(mors.size());
        mors.push_back({C.mor_name(f) + ">" + C.obj_name(y), x, y});
        under.push_back(f);
      }
  std::vector<int> ids;
  for (int x = 0; x < C.nobj(); ++x) ids.push_back(ix[m.unit[x]][x]);
  Kleisli k;
  k.cat = make_category(C.objects, mors, ids, [&](int g, int f) {
    int z = mors[g].tgt;
    return ix[C.compose(m.mult[z], C.compose(T.mo[under[g]], under[f]))][z];
  });
  k.under = under;
  k.j = {m.base, k.cat, {}, {}};
  for (int x = 0; x < C.nobj(); ++x) k.j.ob.push_back(x);
  for (int f = 0; f < C.nmor(); ++f) k.j.mo.push_back(ix[C.compose(m.unit[C.tgt(f)], f)][C.tgt(f)]);
  return k;
}

struct EMCategory {
  Cat cat;
  std::vector<int> carrier;    // algebra -> object of the base
  std::vector<int> structure;  // algebra -> a: T x -> x
  FinFunctor forget;
};

inline EMCategory em_category(const Monad& m) {
  const auto& C = *m.base;
  const auto& T = m.T;
  EMCategory r;
  std::vector<std::string> objs;
  for (int x = 0; x < C.nobj(); ++x)
    for (int a : C.hom(T.ob[x], x))
      if (C.compose(a, m.unit[x]) == C.identity[x] && C.compose(a, T.mo[a]) == C.compose(a, m.mult[x])) {
        objs.push_back("(" + C.obj_name(x) + "," + C.mor_name(a) + ")");
        r.carrier.push_back(x);
        r.structure.push_back(a);
      }
  const int n = static_cast<int>(objs.size());
  std::vector<Morphism> mors;
  std::vector<int> under, ids(n, -1);
  std::map<std::tuple<int, int, int>, int> ix;
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q)
      for (int f : C.hom(r.carrier[p], r.carrier[q]))
        if (C.compose(f, r.structure[p]) == C.compose(r.structure[q], T.mo[f])) {
          ix[{p, q, f}] = static_cast<int>(mors.size());
          if (p == q && C.is_identity(f)) ids[p] = static_cast<int>(mors.size());
          mors.push_back({C.mor_name(f) + "@" + std::to_string(p) + ">" + std::to_string(q), p, q});
          under.push_back(f);
        }
  r.cat = make_category(objs, mors, ids, [&](int g, int f) {
    return ix.at({mors[f].src, mors[g].tgt, C.compose(under[g], under[f])});
  });
  r.forget = {r.cat, m.base, r.carrier, under};
  return r;
}

// ---------------------------------------------------------------------------
// Promonads

struct Promonad {
  Cat base;
  Prof carrier;
  Prof square;  // compose(carrier, carrier)
  ProfMorphism unit;  // identity_prof -> carrier
  ProfMorphism mult;  // square -> carrier
};

inline std::vector<std::string> validate_promonad(const Promonad& p) {
  std::vector<std::string> out;
  for (auto& s : validate_prof(*p.carrier)) out.push_back("carrier: " + s);
  for (auto& s : validate_prof_morphism(p.unit)) out.push_back("unit: " + s);
  for (auto& s : validate_prof_morphism(p.mult)) out.push_back("multiplication: " + s);
  if (!out.empty()) return out;
  const Prof& P = p.carrier;
  Prof I = p.unit.src;
  Prof PP_P = compose_prof(p.square, P);
  Prof P_PP = compose_prof(P, p.square);
  // mult o (mult . P) = mult o (P . mult) o assoc
  auto lhs = compose_morphisms(p.mult, whisker_right(p.mult, PP_P, p.square));
  auto rhs = compose_morphisms(p.mult, compose_morphisms(whisker_left(p.mult, P_PP, p.square), associator(PP_P, P_PP)));
  if (lhs.map != rhs.map) out.push_back("associativity fails");
  Prof IP = compose_prof(I, P), PI = compose_prof(P, I);
  auto lu = compose_morphisms(p.mult, whisker_right(p.unit, IP, p.square));
  if (lu.map != left_unitor(IP, P).map) out.push_back("left unit law fails");
  auto ru = compose_morphisms(p.mult, whisker_left(p.unit, PI, p.square));
  if (ru.map != right_unitor(PI, P).map) out.push_back("right unit law fails");
  return out;
}

/// Carrier Theta(j x, j y) with actions through j.
inline Promonad promonad_from_iof(const FinFunctor& j) {
  if (!is_bijective_on_objects(j)) throw StructuralError("promonad_from_iof: functor is not bijective on objects");
  const auto& C = *j.src;
  const auto& Th = *j.tgt;
  std::vector<int> inv(Th.nobj());
  for (int x = 0; x < C.nobj(); ++x) inv[j.ob[x]] = x;
  std::vector<std::string> names;
  std::vector<int> u, o;
  for (int t = 0; t < Th.nmor(); ++t) {
    names.push_back(Th.mor_name(t));
    u.push_back(inv[Th.src(t)]);
    o.push_back(inv[Th.tgt(t)]);
  }
  Promonad p;
  p.base = j.src;
  p.carrier = make_prof(
      j.src, j.src, names, u, o, [&](int e, int h) { return Th.compose(e, j.mo[h]); },
      [&](int e, int k) { return Th.compose(j.mo[k], e); });
  p.square = compose_prof(p.carrier, p.carrier);
  p.unit = {identity_prof(j.src), p.carrier, j.mo};
  p.mult = {p.square, p.carrier, {}};
  for (auto [a, b] : p.square->coend->rep) p.mult.map.push_back(Th.compose(b, a));
  return p;
}

/// Theta with hom-sets the carrier, composition the multiplication.
inline FinFunctor iof_from_promonad(const Promonad& p) {
  const auto& C = *p.base;
  const Prof& P = p.carrier;
  std::vector<Morphism> mors;
  for (int e = 0; e < P->size(); ++e) mors.push_back({P->name[e], P->under[e], P->over[e]});
  std::vector<int> ids;
  for (int x = 0; x < C.nobj(); ++x) ids.push_back(p.unit.map[C.identity[x]]);
  Cat Th = make_category(C.objects, mors, ids, [&](int g, int f) { return p.mult.map[p.square->cls(f, g)]; });
  FinFunctor j{p.base, Th, {}, p.unit.map};
  for (int x = 0; x < C.nobj(); ++x) j.ob.push_back(x);
  return j;
}

inline Promonad identity_promonad(const Cat& C) { return promonad_from_iof(identity_functor(C)); }

/// The Kleisli promonad, carrier(x, y) = C(x, Ty).
inline Promonad kleisli_promonad(const Monad& m) { return promonad_from_iof(kleisli(m).j); }

struct PromonadAlgebra {
  Prof F;
  Prof FP;  // compose(F, carrier)
  ProfMorphism action;  // FP -> F
};

inline bool is_promonad_action(const Promonad& p, const Prof& F, const Prof& FP, const ProfMorphism& a) {
  const Prof& P = p.carrier;
  const auto& C = *p.base;
  for (int x = 0; x < F->size(); ++x)
    if (a.map[FP->cls(x, p.unit.map[C.identity[F->over[x]]])] != x) return false;
  for (int u = 0; u < FP->size(); ++u)
    for (int q = 0; q < P->size(); ++q) {
      if (FP->over[u] != P->under[q]) continue;
      auto [x, r] = FP->coend->rep[u];
      int lhs = a.map[FP->cls(a.map[u], q)];
      int rhs = a.map[FP->cls(x, p.mult.map[p.square->cls(r, q)])];
      if (lhs != rhs) return false;
    }
  return true;
}

inline std::vector<ProfMorphism> promonad_algebra_homs(const Promonad&, const PromonadAlgebra& A,
                                                       const PromonadAlgebra& B) {
  std::vector<ProfMorphism> out;
  for (auto& phi : prof_nats(A.F, B.F)) {
    bool ok = true;
    for (int c = 0; c < A.FP->size() && ok; ++c) {
      auto [x, q] = A.FP->coend->rep[c];
      if (phi.map[A.action.map[c]] != B.action.map[B.FP->cls(phi.map[x], q)]) ok = false;
    }
    if (ok) out.push_back(phi);
  }
  return out;
}

/// Algebras (F, action) with F a module of fibers <= cap, one per iso class.
inline std::vector<PromonadAlgebra> promonad_module_algebras(const Promonad& p, int cap) {
  std::vector<PromonadAlgebra> out;
  for (auto& F : enumerate_modules(p.base, cap)) {
    Prof FP = compose_prof(F, p.carrier);
    std::vector<PromonadAlgebra> here;
    std::vector<ProfMorphism> autos;
    bool autos_ready = false;
    for (auto& a : prof_nats(FP, F)) {
      if (!is_promonad_action(p, F, FP, a)) continue;
      PromonadAlgebra cand{F, FP, a};
      if (!autos_ready) {
        for (auto& phi : prof_nats(F, F))
          if (is_bijective(phi)) autos.push_back(phi);
        autos_ready = true;
      }
      bool dup = false;
      for (auto& prev : here) {
        for (auto& phi : autos) {
          bool ok = true;
          for (int c = 0; c < FP->size() && ok; ++c) {
            auto [x, q] = FP->coend->rep[c];
            if (phi.map[prev.action.map[c]] != a.map[FP->cls(phi.map[x], q)]) ok = false;
          }
          if (ok) {
            dup = true;
            break;
          }
        }
        if (dup) break;
      }
      if (!dup) here.push_back(cand);
    }
    out.insert(out.end(), here.begin(), here.end());
  }
  return out;
}

// ---------------------------------------------------------------------------
// Algebras for precomposition with T, computed without coends

struct ModuleAlgebra {
  SetFunctor F;
  std::vector<std::vector<int>> alpha;  // alpha[y]: F(T y) -> F(y)
};

namespace detail {

inline bool module_algebra_ok(const Monad& m, const SetFunctor& F, const std::vector<std::vector<int>>& a) {
  const auto& C = *m.base;
  const auto& T = m.T;
  for (int f = 0; f < C.nmor(); ++f) {
    int y = C.src(f), z = C.tgt(f);
    for (int i = 0; i < F.size[T.ob[y]]; ++i)
      if (a[z][F.fn[T.mo[f]][i]] != F.fn[f][a[y][i]]) return false;
  }
  for (int y = 0; y < C.nobj(); ++y) {
    for (int i = 0; i < F.size[y]; ++i)
      if (a[y][F.fn[m.unit[y]][i]] != i) return false;
    for (int i = 0; i < F.size[T.ob[T.ob[y]]]; ++i)
      if (a[y][F.fn[m.mult[y]][i]] != a[y][a[T.ob[y]][i]]) return false;
  }
  return true;
}

}  // namespace detail

/// Natural maps alpha: F o T -> F with alpha o F eta = id and alpha o F mu = alpha o alpha T.
inline std::vector<std::vector<std::vector<int>>> module_algebra_structures(const Monad& m, const SetFunctor& F) {
  const auto& C = *m.base;
  const auto& T = m.T;
  const int n = C.nobj();
  std::vector<std::vector<std::vector<int>>> out;
  std::vector<std::vector<int>> a(n);
  for (int y = 0; y < n; ++y) a[y].assign(F.size[T.ob[y]], 0);
  std::function<void(int)> rec = [&](int y) {
    if (y == n) {
      if (detail::module_algebra_ok(m, F, a)) out.push_back(a);
      return;
    }
    const int dom = F.size[T.ob[y]], cod = F.size[y];
    if (dom > 0 && cod == 0) return;
    auto& f = a[y];
    f.assign(dom, 0);
    while (true) {
      bool ok = true;
      for (int i = 0; i < F.size[y] && ok; ++i)
        if (f[F.fn[m.unit[y]][i]] != i) ok = false;
      if (ok) rec(y + 1);
      int p = 0;
      while (p < dom && ++f[p] == cod) f[p++] = 0;
      if (p == dom) break;
    }
  };
  rec(0);
  return out;
}

inline bool module_algebra_hom_ok(const Monad& m, const ModuleAlgebra& A, const ModuleAlgebra& B,
                                  const std::vector<std::vector<int>>& phi) {
  const auto& C = *m.base;
  for (int y = 0; y < C.nobj(); ++y)
    for (int i = 0; i < A.F.size[m.T.ob[y]]; ++i)
      if (phi[y][A.alpha[y][i]] != B.alpha[y][phi[m.T.ob[y]][i]]) return false;
  return true;
}

inline std::vector<std::vector<std::vector<int>>> module_algebra_homs(const Monad& m, const ModuleAlgebra& A,
                                                                       const ModuleAlgebra& B) {
  std::vector<std::vector<std::vector<int>>> out;
  for (auto& phi : set_functor_maps(*m.base, A.F, B.F, false))
    if (module_algebra_hom_ok(m, A, B, phi)) out.push_back(phi);
  return out;
}

/// Every (F, alpha) with fibers <= cap, one per iso class.
inline std::vector<ModuleAlgebra> module_algebras(const Monad& m, int cap) {
  std::vector<ModuleAlgebra> out;
  for (auto& F : enumerate_set_functors(m.base, cap)) {
    auto autos = set_functor_maps(*m.base, F, F, true);
    std::vector<ModuleAlgebra> here;
    for (auto& a : module_algebra_structures(m, F)) {
      ModuleAlgebra cand{F, a};
      bool dup = false;
      for (auto& prev : here) {
        for (auto& phi : autos)
          if (module_algebra_hom_ok(m, prev, cand, phi)) {
            dup = true;
            break;
          }
        if (dup) break;
      }
      if (!dup) here.push_back(cand);
    }
    out.insert(out.end(), here.begin(), here.end());
  }
  return out;
}

}  // namespace corr
