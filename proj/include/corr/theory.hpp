// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <functional>
#include <memory>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "equiv.hpp"
#include "fincat.hpp"
#include "modules.hpp"
#include "monad.hpp"
#include "present.hpp"
#include "prof.hpp"

namespace corr {

// ---------------------------------------------------------------------------
// Arities

enum class ArityMode { Dense, Explicit, Pullback };

/// A class of modules over `base`.
///  Dense: modules right Kan extended from the full subcategory on `dense`.
///  Explicit: modules isomorphic to one of `members`.
///  Pullback: modules whose restriction along `along` lies in `inner`.
struct AritySpec {
  Cat base;
  ArityMode mode = ArityMode::Dense;
  std::vector<int> dense;
  std::vector<Prof> members;
  std::shared_ptr<const AritySpec> inner;
  FinFunctor along;

  bool member(const Prof& F) const;
};

inline AritySpec all_arities(const Cat& C) {
  AritySpec a{C, ArityMode::Dense, {}, {}, nullptr, {}};
  for (int x = 0; x < C->nobj(); ++x) a.dense.push_back(x);
  return a;
}

inline AritySpec dense_arities(const Cat& C, std::vector<int> objs) {
  return {C, ArityMode::Dense, std::move(objs), {}, nullptr, {}};
}

inline AritySpec explicit_arities(const Cat& C, std::vector<Prof> list) {
  return {C, ArityMode::Explicit, {}, std::move(list), nullptr, {}};
}

inline AritySpec pullback_arities(const FinFunctor& u, const AritySpec& inner) {
  return {u.tgt, ArityMode::Pullback, {}, {}, std::make_shared<AritySpec>(inner), u};
}

/// Whether F(c) -> lim_{f: c -> a, a in A} F(a) is a bijection for every c.
inline bool is_right_extended(const Prof& F, const std::vector<int>& A, std::string* why = nullptr) {
  const auto& C = *F->tgt;
  std::vector<char> inA(C.nobj(), 0);
  for (int a : A) inA[a] = 1;
  auto fi = fiber_index(*F);
  for (int c = 0; c < C.nobj(); ++c) {
    std::vector<int> arrows;
    std::vector<int> slot(C.nmor(), -1);
    for (int f : C.out(c))
      if (inA[C.tgt(f)]) {
        slot[f] = static_cast<int>(arrows.size());
        arrows.push_back(f);
      }
    // constraints x_{g o f} = F(g)(x_f) for g between objects of A
    std::vector<std::vector<std::pair<int, int>>> back(arrows.size());  // (earlier arrow k, g)
    for (size_t k = 0; k < arrows.size(); ++k)
      for (int g : C.out(C.tgt(arrows[k])))
        if (inA[C.tgt(g)]) {
          size_t l = static_cast<size_t>(slot[C.compose(g, arrows[k])]);
          if (l > k) back[l].push_back({static_cast<int>(k), g});
          else if (l < k) back[k].push_back({-1 - static_cast<int>(l), g});  // x_l = F(g)(x_k)
          else back[k].push_back({-1 - static_cast<int>(k), g});
        }
    size_t count = 0;
    const size_t size_c = fi.els[c].size();
    std::vector<int> x(arrows.size(), -1);
    std::function<void(size_t)> rec = [&](size_t k) {
      if (count > size_c) return;
      if (k == arrows.size()) {
        ++count;
        return;
      }
      for (int e : fi.els[C.tgt(arrows[k])]) {
        x[k] = e;
        bool ok = true;
        for (auto [j, g] : back[k]) {
          if (j >= 0) {
            if (F->ract(x[j], g) != e) ok = false;
          } else {
            size_t l = static_cast<size_t>(-1 - j);
            if (F->ract(e, g) != x[l]) ok = false;
          }
          if (!ok) break;
        }
        if (ok) rec(k + 1);
      }
      x[k] = -1;
    };
    rec(0);
    if (count != size_c) {
      if (why) *why = "limit at " + C.obj_name(c) + " has " + std::to_string(count) + " elements, fiber has " + std::to_string(size_c);
      return false;
    }
    // the canonical map must separate elements
    std::vector<std::vector<int>> seen;
    for (int e : fi.els[c]) {
      std::vector<int> fam;
      for (int f : arrows) fam.push_back(F->ract(e, f));
      for (auto& s : seen)
        if (s == fam) {
          if (why) *why = "canonical map at " + C.obj_name(c) + " is not injective";
          return false;
        }
      seen.push_back(fam);
    }
  }
  return true;
}

inline bool AritySpec::member(const Prof& F) const {
  switch (mode) {
    case ArityMode::Dense:
      if (static_cast<int>(dense.size()) == base->nobj()) return true;
      return is_right_extended(F, dense);
    case ArityMode::Explicit:
      for (auto& M : members)
        if (prof_isomorphic(M, F)) return true;
      return false;
    case ArityMode::Pullback:
      return inner->member(restrict_module(F, along));
  }
  return false;
}

/// Members with fibers <= cap; an Explicit list is returned as given.
inline std::vector<Prof> arity_members(const AritySpec& a, int cap) {
  if (a.mode == ArityMode::Explicit) return a.members;
  std::vector<Prof> out;
  for (auto& F : enumerate_modules(a.base, cap))
    if (a.member(F)) out.push_back(F);
  return out;
}

// ---------------------------------------------------------------------------
// Nerves

/// nu(X) = Hom_C(a_-, X) as a presheaf on the full subcategory on A.
inline std::vector<Prof> nerve(const Cat& C, const std::vector<int>& A) {
  Cat sub = full_subcategory(*C, A);
  std::vector<int> back;  // sub morphism -> C morphism
  std::vector<int> pos(C->nobj(), -1);
  for (size_t k = 0; k < A.size(); ++k) pos[A[k]] = static_cast<int>(k);
  for (int f = 0; f < C->nmor(); ++f)
    if (pos[C->src(f)] >= 0 && pos[C->tgt(f)] >= 0) back.push_back(f);
  std::vector<Prof> out;
  for (int X = 0; X < C->nobj(); ++X) {
    std::vector<std::string> names;
    std::vector<int> u, o, els;
    std::vector<int> ix(C->nmor(), -1);
    for (int a : A)
      for (int f : C->hom(a, X)) {
        ix[f] = static_cast<int>(names.size());
        names.push_back(C->mor_name(f));
        u.push_back(pos[a]);
        o.push_back(0);
        els.push_back(f);
      }
    out.push_back(make_prof(
        sub, point(), names, u, o, [&](int e, int h) { return ix[C->compose(els[e], back[h])]; },
        [](int e, int) { return e; }));
  }
  return out;
}

struct NerveReport {
  bool ok = true;
  std::string witness;
};

/// Compares Hom_C(X, Y) with the natural maps nu(X) -> nu(Y) through post-composition.
inline NerveReport nerve_ff(const Cat& C, const std::vector<int>& A) {
  auto nu = nerve(C, A);
  NerveReport r;
  for (int X = 0; X < C->nobj(); ++X)
    for (int Y = 0; Y < C->nobj(); ++Y) {
      auto nats = prof_nats(nu[X], nu[Y]);
      const auto& hom = C->hom(X, Y);
      std::vector<std::vector<int>> images;
      for (int g : hom) {
        std::vector<int> m;
        for (int e = 0; e < nu[X]->size(); ++e) {
          int f = C->morphism_index(nu[X]->name[e]);
          m.push_back(nu[Y]->element_index(C->mor_name(C->compose(g, f))));
        }
        images.push_back(m);
      }
      for (size_t i = 0; i < images.size() && r.ok; ++i)
        for (size_t j = 0; j < i; ++j)
          if (images[i] == images[j]) {
            r.ok = false;
            r.witness = "not faithful: " + C->mor_name(hom[i]) + " and " + C->mor_name(hom[j]) + " agree on the nerve";
            break;
          }
      if (r.ok && nats.size() != hom.size()) {
        r.ok = false;
        r.witness = "not full: " + std::to_string(nats.size()) + " natural maps nu(" + C->obj_name(X) + ") -> nu(" +
                    C->obj_name(Y) + ") but " + std::to_string(hom.size()) + " morphisms";
      }
      if (!r.ok) return r;
    }
  return r;
}

struct ArityReport {
  bool ok = true;
  Prof counterexample;
};

/// Whether module_apply(k, F) lies in eD for every member F of eC with fibers <= cap.
inline ArityReport respects_arities(const Prof& k, const AritySpec& eC, const AritySpec& eD, int cap = 3) {
  ArityReport r;
  for (auto& F : arity_members(eC, cap))
    if (!eD.member(module_apply(k, F))) {
      r.ok = false;
      r.counterexample = F;
      return r;
    }
  return r;
}

// ---------------------------------------------------------------------------
// Theories

struct Theory {
  FinFunctor t;  // T0 -> T1, bijective on objects
  AritySpec arities;
  FlaggedCategory flag0, flag1;

  const Cat& T0() const { return t.src; }
  const Cat& T1() const { return t.tgt; }
};

/// Flags core(T0) on T0 and its image under t on T1.
inline std::pair<FlaggedCategory, FlaggedCategory> theory_flags(const FinFunctor& t) {
  FinFunctor inc = core_inclusion(t.src);
  return {{t.src, inc.src, inc}, {t.tgt, inc.src, compose_functors(t, inc)}};
}

inline Theory make_theory(const FinFunctor& t, const AritySpec& ar) {
  auto [f0, f1] = theory_flags(t);
  return {t, ar, f0, f1};
}

/// t^* after t_!: the promonad's carrier as a composite profunctor.
inline Prof theory_monad_carrier(const FinFunctor& t) { return compose_prof(companion(t), conjoint(t)); }

inline std::vector<std::string> validate_theory(const Theory& th, int cap = 3) {
  std::vector<std::string> out;
  for (auto& s : validate_functor(th.t)) out.push_back("t: " + s);
  if (!out.empty()) return out;
  if (!is_bijective_on_objects(th.t)) out.push_back("t is not bijective on objects");
  if (!same_category(th.arities.base, th.T0())) out.push_back("arities live on the wrong category");
  for (auto& s : validate_flagged(th.flag0)) out.push_back("flag of T0: " + s);
  for (auto& s : validate_flagged(th.flag1)) out.push_back("flag of T1: " + s);
  if (!out.empty()) return out;
  std::string why;
  if (!is_complete(th.flag0, &why)) out.push_back("T0 is not complete: " + why);
  auto r = respects_arities(theory_monad_carrier(th.t), th.arities, th.arities, cap);
  if (!r.ok) out.push_back("the monad of the theory does not respect arities");
  return out;
}

inline bool theory_complete(const Theory& th, std::string* why = nullptr) {
  return is_complete(th.flag0, why) && is_complete(th.flag1, why);
}

/// Kleisli theory of a monad with arities; throws with a witness when F o T leaves ar.
inline Theory theory_from_monad(const Monad& m, const AritySpec& ar, int cap = 3) {
  auto v = validate_monad(m);
  if (!v.empty()) throw StructuralError("theory_from_monad: " + v.front());
  for (auto& F : arity_members(ar, cap))
    if (!ar.member(restrict_module(F, m.T))) {
      std::string w;
      for (int e = 0; e < F->size(); ++e) w += (e ? "," : "") + F->name[e];
      throw StructuralError("theory_from_monad: arity condition fails at the module {" + w + "}");
    }
  return make_theory(kleisli(m).j, ar);
}

/// The promonad t^* t_!, with structure transported from composition in T1.
inline Promonad monad_from_theory(const Theory& th) {
  Promonad ref = promonad_from_iof(th.t);
  Prof K = theory_monad_carrier(th.t);
  const auto& T1 = *th.T1();
  const auto& comp = *K->coend->first;
  const auto& conj = *K->coend->second;
  // [(t a -> d), (d -> t b)] |-> their composite in T1
  auto under_mor = [&](const Profunctor& P, int e) {
    const std::string& n = P.name[e];
    return &P == &comp ? T1.morphism_index(n.substr(n.find('|') + 1)) : T1.morphism_index(n.substr(0, n.rfind('|')));
  };
  ProfMorphism phi{K, ref.carrier, {}};
  for (auto [x, y] : K->coend->rep) phi.map.push_back(T1.compose(under_mor(conj, y), under_mor(comp, x)));
  if (!validate_prof_morphism(phi).empty() || !is_bijective(phi))
    throw StructuralError("monad_from_theory: comparison with hom-sets of T1 failed");
  ProfMorphism inv = inverse(phi);
  Promonad p;
  p.base = th.T0();
  p.carrier = K;
  p.square = compose_prof(K, K);
  p.unit = compose_morphisms(inv, ref.unit);
  p.unit.src = ref.unit.src;
  p.mult = {p.square, K, {}};
  for (auto [a, b] : p.square->coend->rep)
    p.mult.map.push_back(inv.map[ref.mult.map[ref.square->cls(phi.map[a], phi.map[b])]]);
  auto lv = validate_promonad(p);
  if (!lv.empty()) throw StructuralError("monad_from_theory: " + lv.front());
  return p;
}

/// Modules over T1 with fibers <= cap whose restriction along t lies in the arities.
inline std::vector<Prof> models(const Theory& th, int cap) {
  std::vector<Prof> out;
  for (auto& G : enumerate_modules(th.T1(), cap))
    if (th.arities.member(restrict_module(G, th.t))) out.push_back(G);
  return out;
}

// ---------------------------------------------------------------------------
// Models of a Kleisli theory against algebras

/// Equivalence between models of the Kleisli theory and algebras (F in ar, F T -> F).
inline EquivalenceReport model_algebra_equivalence(const Monad& m, const AritySpec& ar, int cap) {
  Theory th = theory_from_monad(m, ar, cap);
  Kleisli K = kleisli(m);
  const Cat& C = m.base;
  const int n = C->nobj();
  std::vector<int> eps(n);  // Kleisli arrow T y -> y over id_{T y}
  for (int k = 0; k < K.cat->nmor(); ++k)
    if (K.under[k] == C->identity[C->src(K.under[k])] && K.cat->src(k) == m.T.ob[K.cat->tgt(k)])
      eps[K.cat->tgt(k)] = k;
  ConcreteCategory<Prof, ProfMorphism> A;
  A.objects = models(th, cap);
  A.hom = [](const Prof& a, const Prof& b) { return prof_nats(a, b); };
  A.compose = [](const ProfMorphism& g, const ProfMorphism& f) { return compose_morphisms(g, f); };
  A.equal = [](const ProfMorphism& a, const ProfMorphism& b) { return a.map == b.map; };
  A.invertible = [](const ProfMorphism& a) { return is_bijective(a); };
  using Tables = std::vector<std::vector<int>>;
  ConcreteCategory<ModuleAlgebra, Tables> B;
  for (auto& alg : module_algebras(m, cap))
    if (ar.member(module_from_set_functor(C, alg.F))) B.objects.push_back(alg);
  B.hom = [&](const ModuleAlgebra& a, const ModuleAlgebra& b) { return module_algebra_homs(m, a, b); };
  B.compose = [](const Tables& g, const Tables& f) {
    Tables h(f.size());
    for (size_t y = 0; y < f.size(); ++y)
      for (int v : f[y]) h[y].push_back(g[y][v]);
    return h;
  };
  B.equal = [](const Tables& a, const Tables& b) { return a == b; };
  B.invertible = [](const Tables& a) {
    for (auto& t : a) {
      std::vector<int> s = t;
      std::sort(s.begin(), s.end());
      for (size_t i = 0; i < s.size(); ++i)
        if (s[i] != static_cast<int>(i)) return false;
    }
    return true;
  };
  ConcreteFunctor<Prof, ProfMorphism, ModuleAlgebra, Tables> phi;
  phi.ob = [&](const Prof& G) {
    ModuleAlgebra alg{set_functor_from_module(*restrict_module(G, K.j)), {}};
    auto gi = fiber_index(*G);
    for (int y = 0; y < n; ++y) {
      std::vector<int> a;
      for (int e : gi.els[m.T.ob[y]]) a.push_back(gi.pos[G->ract(e, eps[y])]);
      alg.alpha.push_back(a);
    }
    return alg;
  };
  phi.mor = [](const ProfMorphism& h, const Prof&, const Prof&) { return module_map_table(h); };
  ConcreteFunctor<ModuleAlgebra, Tables, Prof, ProfMorphism> psi;
  psi.ob = [&](const ModuleAlgebra& alg) {
    return make_module(K.cat, alg.F.size, [&](int k, int a) {
      int y = K.cat->tgt(k);
      return alg.alpha[y][alg.F.fn[K.under[k]][a]];
    });
  };
  psi.mor = [&](const Tables& t, const ModuleAlgebra& a, const ModuleAlgebra& b) {
    return module_morphism(psi.ob(a), psi.ob(b), t);
  };
  std::function<ProfMorphism(const Prof&, const Prof&)> unit = [](const Prof& a, const Prof& b) {
    return positional_map(a, b);
  };
  std::function<Tables(const ModuleAlgebra&, const ModuleAlgebra&)> counit = [](const ModuleAlgebra& a,
                                                                                  const ModuleAlgebra&) {
    Tables t;
    for (int s : a.F.size) {
      t.emplace_back(s);
      std::iota(t.back().begin(), t.back().end(), 0);
    }
    return t;
  };
  auto r = check_equivalence(A, B, phi, psi, unit, counit);
  if (r.ok)
    for (auto& G : A.objects)
      if (!validate_prof_morphism(unit(G, psi.ob(phi.ob(G)))).empty()) {
        r.fail("unit component is not equivariant");
        break;
      }
  if (r.ok)
    for (auto& alg : B.objects) {
      auto back = phi.ob(psi.ob(alg));
      if (!(back.F == alg.F) || back.alpha != alg.alpha) {
        r.fail("counit component is not an algebra morphism");
        break;
      }
    }
  return r;
}

// ---------------------------------------------------------------------------
// L^bo and completion

struct LboResult {
  Cat cat;           // objects named by C
  FinFunctor over;   // to C
  FinFunctor unit;   // D -> cat
  Quotient q;
};

/// Left adjoint to the inclusion of bijective-on-objects categories over C,
/// applied to f: D -> C surjective on objects. Fibers of f are joined by
/// invertible jumps; the result is the full subcategory on fiber representatives.
inline LboResult l_bo(const FinFunctor& f, int bound = 8) {
  if (!is_surjective_on_objects(f)) throw StructuralError("l_bo: functor is not surjective on objects");
  const auto& D = *f.src;
  const auto& C = *f.tgt;
  Presentation p;
  for (auto& x : D.objects) p.add_object(x);
  std::vector<int> ids(D.nobj());
  std::iota(ids.begin(), ids.end(), 0);
  auto word = p.add_category(D, ids);
  const int nd = D.nobj();
  std::vector<std::vector<int>> jump(nd, std::vector<int>(nd, -1));
  for (int a = 0; a < nd; ++a)
    for (int b = 0; b < nd; ++b)
      if (a != b && f.ob[a] == f.ob[b]) jump[a][b] = p.add_gen("j(" + D.obj_name(a) + "," + D.obj_name(b) + ")", a, b);
  for (int a = 0; a < nd; ++a)
    for (int b = 0; b < nd; ++b) {
      if (jump[a][b] < 0) continue;
      p.relate(a, {jump[a][b], jump[b][a]}, {});
      for (int c = 0; c < nd; ++c)
        if (jump[b][c] >= 0 && c != a) p.relate(a, {jump[a][b], jump[b][c]}, {jump[a][c]});
    }
  std::vector<int> rep(C.nobj(), -1);
  for (int a = 0; a < nd; ++a)
    if (rep[f.ob[a]] < 0) rep[f.ob[a]] = a;
  LboResult r;
  Quotient q = enumerate_category(p, bound);
  std::vector<int> reps(rep.begin(), rep.end());
  Cat sub = full_subcategory(*q.cat, reps);
  // rename objects after C
  std::vector<std::string> names = C.objects;
  std::vector<Morphism> mors = sub->morphisms;
  r.cat = make_category(names, mors, sub->identity, [&](int g, int h) { return sub->compose(g, h); });
  r.q = q;
  std::vector<int> subpos(q.cat->nmor(), -1);
  {
    int k = 0;
    std::vector<char> isrep(nd, 0);
    for (int a : reps) isrep[a] = 1;
    for (int m = 0; m < q.cat->nmor(); ++m)
      if (isrep[q.cat->src(m)] && isrep[q.cat->tgt(m)]) subpos[m] = k++;
  }
  std::vector<int> objpos(nd, -1);
  for (int c = 0; c < C.nobj(); ++c) objpos[rep[c]] = c;
  // over C: generators of D map by f, jumps to identities
  auto gens = generate(D).gens;
  auto gen_over = [&](int s) {
    return s < static_cast<int>(gens.size()) ? f.mo[gens[s]] : C.identity[f.ob[p.gens[s].src]];
  };
  r.over = {r.cat, f.tgt, {}, {}};
  for (int c = 0; c < C.nobj(); ++c) r.over.ob.push_back(c);
  for (int m = 0; m < q.cat->nmor(); ++m) {
    if (subpos[m] < 0) continue;
    int cur = C.identity[f.ob[q.cat->src(m)]];
    for (int s : q.word[m]) cur = C.compose(gen_over(s), cur);
    r.over.mo.push_back(cur);
  }
  // unit: a |-> rep, g: a -> b |-> jump(rep, a) g jump(b, rep)
  r.unit = {f.src, r.cat, {}, {}};
  for (int a = 0; a < nd; ++a) r.unit.ob.push_back(f.ob[a]);
  for (int g = 0; g < D.nmor(); ++g) {
    int a = D.src(g), b = D.tgt(g);
    std::vector<int> w;
    if (rep[f.ob[a]] != a) w.push_back(jump[rep[f.ob[a]]][a]);
    w.insert(w.end(), word[g].begin(), word[g].end());
    if (rep[f.ob[b]] != b) w.push_back(jump[b][rep[f.ob[b]]]);
    r.unit.mo.push_back(subpos[q.eval(rep[f.ob[a]], w)]);
  }
  return r;
}

/// Completion data: the amalgam L = T0 +_{core T0} core(T1) with u: T0 -> L and t~: L -> T1.
struct Amalgam {
  Cat L;
  FinFunctor u, tt, flag_map;  // flag_map: core(T1) -> L
  Quotient q;
};

inline Amalgam amalgamate(const Theory& th, int bound) {
  const auto& T0 = *th.T0();
  const auto& T1 = *th.T1();
  Cat K1 = core(T1);
  std::vector<int> k1back;  // core morphism -> T1 morphism
  for (auto& m : K1->morphisms) k1back.push_back(T1.morphism_index(m.name));
  Presentation p;
  for (auto& x : T1.objects) p.add_object(x);
  auto w0 = p.add_category(T0, th.t.ob, "0.");
  const int g0 = static_cast<int>(p.gens.size());
  std::vector<int> ids(T1.nobj());
  std::iota(ids.begin(), ids.end(), 0);
  auto w1 = p.add_category(*K1, ids, "1.");
  std::vector<int> k1pos(T1.nmor(), -1);
  for (size_t k = 0; k < k1back.size(); ++k) k1pos[k1back[k]] = static_cast<int>(k);
  for (int g = 0; g < T0.nmor(); ++g)
    if (is_iso(T0, g) && w0[g] != w1[k1pos[th.t.mo[g]]]) p.relate(th.t.ob[T0.src(g)], w0[g], w1[k1pos[th.t.mo[g]]]);
  Amalgam a;
  a.q = enumerate_category(p, bound);
  a.L = a.q.cat;
  auto gens0 = generate(T0).gens;
  auto gens1 = generate(*K1).gens;
  a.tt = {a.L, th.T1(), {}, {}};
  for (int x = 0; x < T1.nobj(); ++x) a.tt.ob.push_back(x);
  for (int m = 0; m < a.L->nmor(); ++m) {
    int cur = T1.identity[a.L->src(m)];
    for (int s : a.q.word[m]) cur = T1.compose(s < g0 ? th.t.mo[gens0[s]] : k1back[gens1[s - g0]], cur);
    a.tt.mo.push_back(cur);
  }
  a.u = {th.T0(), a.L, th.t.ob, {}};
  for (int g = 0; g < T0.nmor(); ++g) a.u.mo.push_back(a.q.eval(th.t.ob[T0.src(g)], w0[g]));
  a.flag_map = {K1, a.L, ids, {}};
  for (int g = 0; g < K1->nmor(); ++g) a.flag_map.mo.push_back(a.q.eval(K1->src(g), w1[g]));
  return a;
}

struct Verdict {
  bool ok = true;
  std::string witness;
};

struct GoodnessReport {
  Verdict unit_counit;   // u_! u^* = id
  Verdict edges;         // transport along non-unital arrows of the base
  Verdict pullback;      // u^* maps L^comp E into E, square is a pullback
  Verdict monad;         // t~^* t~_! respects L^comp E
  int saturation_bound = 0;
  int max_depth = 0;
  bool good() const { return unit_counit.ok && edges.ok && pullback.ok && monad.ok; }
};

inline GoodnessReport is_good(const Theory& th, int bound = 8, int cap = 3) {
  GoodnessReport g;
  Amalgam a = amalgamate(th, bound);
  g.saturation_bound = a.q.bound;
  g.max_depth = a.q.max_depth;
  const Cat& L = a.L;
  // bullet 1: counit conj(u) . comp(u) -> id_L, [(l' -> u x), (u x -> l)] |-> composite
  Prof cj = conjoint(a.u), cp = companion(a.u);
  Prof uu = compose_prof(cj, cp);
  std::vector<int> hit(L->nmor(), 0);
  for (auto [x, y] : uu->coend->rep) {
    const std::string& nx = cj->name[x];
    const std::string& ny = cp->name[y];
    int f1 = L->morphism_index(nx.substr(0, nx.rfind('|')));
    int f2 = L->morphism_index(ny.substr(ny.find('|') + 1));
    hit[L->compose(f2, f1)]++;
  }
  for (int m = 0; m < L->nmor() && g.unit_counit.ok; ++m)
    if (hit[m] != 1) {
      g.unit_counit.ok = false;
      g.unit_counit.witness = "counit hits " + L->mor_name(m) + " " + std::to_string(hit[m]) + " times";
    }
  g.edges.witness = "no non-unital arrows in the base";
  // bullet 3
  const AritySpec& E = th.arities;
  for (auto& F : arity_members(E, cap)) {
    Prof G = extend_module(F, a.u);
    if (!E.member(restrict_module(G, a.u))) {
      g.pullback.ok = false;
      g.pullback.witness = "u^* does not return the extension of a member to the arities";
      break;
    }
  }
  AritySpec LE = pullback_arities(a.u, E);
  std::vector<Prof> lmem;
  for (auto& G : enumerate_modules(L, cap))
    if (LE.member(G)) lmem.push_back(G);
  if (g.pullback.ok)
    for (auto& G : lmem)
      if (!prof_isomorphic(extend_module(restrict_module(G, a.u), a.u), G)) {
        g.pullback.ok = false;
        g.pullback.witness = "a module with restriction in the arities is not an extension of one";
        break;
      }
  // bullet 4
  Prof mon = theory_monad_carrier(a.tt);
  for (auto& G : lmem)
    if (!LE.member(module_apply(mon, G))) {
      g.monad.ok = false;
      g.monad.witness = "the completed monad leaves the transported arities";
      break;
    }
  return g;
}

struct Completion {
  Theory theory;
  FinFunctor u;  // T0 -> completed T0
  Amalgam amalgam;
  GoodnessReport goodness;
};

inline Completion complete_theory(const Theory& th, int bound = 8, int cap = 3) {
  GoodnessReport g = is_good(th, bound, cap);
  if (!g.good()) throw StructuralError("complete_theory: theory is not good");
  Amalgam a = amalgamate(th, bound);
  Completion c;
  c.amalgam = a;
  c.u = a.u;
  c.goodness = g;
  c.theory.t = a.tt;
  c.theory.arities = pullback_arities(a.u, th.arities);
  c.theory.flag0 = {a.L, a.flag_map.src, a.flag_map};
  c.theory.flag1 = complete_flagged({th.T1(), nullptr, {}});
  return c;
}

/// Models of a good theory against models of its completion through the identity of T1.
inline EquivalenceReport models_invariance(const Theory& th, int cap, int bound = 8) {
  Completion c = complete_theory(th, bound, cap);
  ConcreteCategory<Prof, ProfMorphism> A, B;
  A.objects = models(th, cap);
  B.objects = models(c.theory, cap);
  for (auto* X : {&A, &B}) {
    X->hom = [](const Prof& a, const Prof& b) { return prof_nats(a, b); };
    X->compose = [](const ProfMorphism& g, const ProfMorphism& f) { return compose_morphisms(g, f); };
    X->equal = [](const ProfMorphism& a, const ProfMorphism& b) { return a.map == b.map; };
    X->invertible = [](const ProfMorphism& a) { return is_bijective(a); };
  }
  // a model of the completion restricts along t~ o u = t
  ConcreteFunctor<Prof, ProfMorphism, Prof, ProfMorphism> same;
  same.ob = [](const Prof& G) { return G; };
  same.mor = [](const ProfMorphism& h, const Prof&, const Prof&) { return h; };
  std::function<ProfMorphism(const Prof&, const Prof&)> id = [](const Prof& a, const Prof& b) {
    return positional_map(a, b);
  };
  auto r = check_equivalence(A, B, same, same, id, id);
  if (r.ok)
    for (auto& G : B.objects)
      if (!th.arities.member(restrict_module(G, th.t))) {
        r.fail("a model of the completion is not a model of the theory");
        break;
      }
  if (r.ok)
    for (auto& G : A.objects)
      if (!c.theory.arities.member(restrict_module(G, c.theory.t))) {
        r.fail("a model of the theory is not a model of the completion");
        break;
      }
  return r;
}

/// Idempotence: completing a completion changes nothing up to an isomorphism over T1.
inline Verdict completion_idempotent(const Theory& th, int bound = 8, int cap = 3) {
  Verdict v;
  Completion c1 = complete_theory(th, bound, cap);
  Completion c2 = complete_theory(c1.theory, bound, cap);
  if (!is_isomorphism(c2.u)) {
    v.ok = false;
    v.witness = "second completion unit is not an isomorphism";
  } else if (!functors_equal(compose_functors(c2.theory.t, c2.u), c1.theory.t)) {
    v.ok = false;
    v.witness = "second completion does not lie over T1";
  }
  return v;
}

}  // namespace corr
