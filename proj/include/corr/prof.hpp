// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <memory>
#include <numeric>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "catalog.hpp"
#include "fincat.hpp"

namespace corr {

inline bool same_category(const Cat& a, const Cat& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->objects != b->objects || a->nmor() != b->nmor() || a->identity != b->identity || a->table != b->table)
    return false;
  for (int f = 0; f < a->nmor(); ++f)
    if (a->morphisms[f].name != b->morphisms[f].name || a->src(f) != b->src(f) || a->tgt(f) != b->tgt(f))
      return false;
  return true;
}

/// Shared terminal category, the source of every module.
inline const Cat& point() {
  static const Cat p = cats::terminal();
  return p;
}

struct Profunctor;
using Prof = std::shared_ptr<const Profunctor>;

/// Bookkeeping attached to a coend composite: which class each pair lands in.
struct CoendData {
  Prof first, second;
  std::vector<int> cls;  // |first| x |second|, -1 for unmatched pairs
  std::vector<std::pair<int, int>> rep;
};

/// A correspondence C -/-> D. Element e lies under an object of C and over an
/// object of D; f . e for f: c' -> under(e), e . g for g: over(e) -> d'.
struct Profunctor {
  Cat src, tgt;
  std::vector<std::string> name;
  std::vector<int> under, over;
  std::vector<int> left;   // size() x src->nmor()
  std::vector<int> right;  // size() x tgt->nmor()
  std::shared_ptr<const CoendData> coend;

  int size() const { return static_cast<int>(name.size()); }
  int lact(int e, int f) const { return left[static_cast<size_t>(e) * src->nmor() + f]; }
  int ract(int e, int g) const { return right[static_cast<size_t>(e) * tgt->nmor() + g]; }
  /// class of the pair (x, y) when this is a composite
  int cls(int x, int y) const { return coend->cls[static_cast<size_t>(x) * coend->second->size() + y]; }
  int element_index(const std::string& n) const {
    for (int e = 0; e < size(); ++e)
      if (name[e] == n) return e;
    return -1;
  }
};

inline Prof make_prof(const Cat& C, const Cat& D, std::vector<std::string> names, std::vector<int> under,
                      std::vector<int> over, const std::function<int(int, int)>& lact,
                      const std::function<int(int, int)>& ract) {
  auto p = std::make_shared<Profunctor>();
  p->src = C;
  p->tgt = D;
  p->name = std::move(names);
  p->under = std::move(under);
  p->over = std::move(over);
  const int n = p->size(), mc = C->nmor(), md = D->nmor();
  p->left.assign(static_cast<size_t>(n) * mc, -1);
  p->right.assign(static_cast<size_t>(n) * md, -1);
  for (int e = 0; e < n; ++e) {
    for (int f : C->in(p->under[e])) p->left[static_cast<size_t>(e) * mc + f] = lact(e, f);
    for (int g : D->out(p->over[e])) p->right[static_cast<size_t>(e) * md + g] = ract(e, g);
  }
  return p;
}

inline std::vector<std::string> validate_prof(const Profunctor& p) {
  std::vector<std::string> out;
  const auto& C = *p.src;
  const auto& D = *p.tgt;
  const int n = p.size();
  for (int e = 0; e < n; ++e)
    if (p.under[e] < 0 || p.under[e] >= C.nobj() || p.over[e] < 0 || p.over[e] >= D.nobj()) {
      out.push_back("element " + p.name[e] + " has an endpoint out of range");
      return out;
    }
  for (int e = 0; e < n; ++e) {
    for (int f = 0; f < C.nmor(); ++f) {
      int r = p.lact(e, f);
      if (C.tgt(f) != p.under[e]) {
        if (r != -1) out.push_back("left action of " + C.mor_name(f) + " on " + p.name[e] + " is mistyped");
        continue;
      }
      if (r < 0 || r >= n) {
        out.push_back("left action of " + C.mor_name(f) + " on " + p.name[e] + " undefined");
        continue;
      }
      if (p.under[r] != C.src(f) || p.over[r] != p.over[e])
        out.push_back("left action of " + C.mor_name(f) + " on " + p.name[e] + " lands in the wrong fiber");
    }
    for (int g = 0; g < D.nmor(); ++g) {
      int r = p.ract(e, g);
      if (D.src(g) != p.over[e]) {
        if (r != -1) out.push_back("right action of " + D.mor_name(g) + " on " + p.name[e] + " is mistyped");
        continue;
      }
      if (r < 0 || r >= n) {
        out.push_back("right action of " + D.mor_name(g) + " on " + p.name[e] + " undefined");
        continue;
      }
      if (p.over[r] != D.tgt(g) || p.under[r] != p.under[e])
        out.push_back("right action of " + D.mor_name(g) + " on " + p.name[e] + " lands in the wrong fiber");
    }
  }
  if (!out.empty()) return out;
  for (int e = 0; e < n; ++e) {
    if (p.lact(e, C.identity[p.under[e]]) != e) out.push_back("left unit fails at " + p.name[e]);
    if (p.ract(e, D.identity[p.over[e]]) != e) out.push_back("right unit fails at " + p.name[e]);
    for (int f : C.in(p.under[e]))
      for (int f2 : C.in(C.src(f)))
        if (p.lact(e, C.compose(f, f2)) != p.lact(p.lact(e, f), f2))
          out.push_back("left associativity fails at " + p.name[e]);
    for (int g : D.out(p.over[e]))
      for (int g2 : D.out(D.tgt(g)))
        if (p.ract(e, D.compose(g2, g)) != p.ract(p.ract(e, g), g2))
          out.push_back("right associativity fails at " + p.name[e]);
    for (int f : C.in(p.under[e]))
      for (int g : D.out(p.over[e]))
        if (p.ract(p.lact(e, f), g) != p.lact(p.ract(e, g), f))
          out.push_back("actions do not commute at " + p.name[e]);
  }
  return out;
}

/// Elements are the morphisms of C; actions are composition.
inline Prof identity_prof(const Cat& C) {
  std::vector<std::string> names;
  std::vector<int> u, o;
  for (auto& f : C->morphisms) {
    names.push_back(f.name);
    u.push_back(f.src);
    o.push_back(f.tgt);
  }
  return make_prof(C, C, names, u, o, [&](int e, int f) { return C->compose(e, f); },
                   [&](int e, int g) { return C->compose(g, e); });
}

/// f_!: elements (c, g: f c -> d).
inline Prof companion(const FinFunctor& F) {
  const auto& C = *F.src;
  const auto& D = *F.tgt;
  std::vector<std::string> names;
  std::vector<int> u, o;
  std::vector<std::vector<int>> ix(C.nobj(), std::vector<int>(D.nmor(), -1));
  std::vector<std::pair<int, int>> el;
  for (int c = 0; c < C.nobj(); ++c)
    for (int g : D.out(F.ob[c])) {
      ix[c][g] = static_cast<int>(names.size());
      names.push_back(C.obj_name(c) + "|" + D.mor_name(g));
      u.push_back(c);
      o.push_back(D.tgt(g));
      el.push_back({c, g});
    }
  return make_prof(
      F.src, F.tgt, names, u, o,
      [&](int e, int h) { return ix[C.src(h)][D.compose(el[e].second, F.mo[h])]; },
      [&](int e, int k) { return ix[el[e].first][D.compose(k, el[e].second)]; });
}

/// f^*: elements (g: d -> f c, c).
inline Prof conjoint(const FinFunctor& F) {
  const auto& C = *F.src;
  const auto& D = *F.tgt;
  std::vector<std::string> names;
  std::vector<int> u, o;
  std::vector<std::vector<int>> ix(D.nmor(), std::vector<int>(C.nobj(), -1));
  std::vector<std::pair<int, int>> el;
  for (int c = 0; c < C.nobj(); ++c)
    for (int g : D.in(F.ob[c])) {
      ix[g][c] = static_cast<int>(names.size());
      names.push_back(D.mor_name(g) + "|" + C.obj_name(c));
      u.push_back(D.src(g));
      o.push_back(c);
      el.push_back({g, c});
    }
  return make_prof(
      F.tgt, F.src, names, u, o,
      [&](int e, int k) { return ix[D.compose(el[e].first, k)][el[e].second]; },
      [&](int e, int h) { return ix[D.compose(F.mo[h], el[e].first)][C.tgt(h)]; });
}

/// Coend composite M then N, as classes of matching pairs under the zig-zag relation.
inline Prof compose_prof(const Prof& M, const Prof& N) {
  if (!same_category(M->tgt, N->src)) throw StructuralError("compose_prof: middle categories differ");
  const auto& Dm = *M->tgt;
  const int nm = M->size(), nn = N->size();
  std::vector<int> pid(static_cast<size_t>(nm) * nn, -1);
  std::vector<std::pair<int, int>> pairs;
  for (int x = 0; x < nm; ++x)
    for (int y = 0; y < nn; ++y)
      if (M->over[x] == N->under[y]) {
        pid[static_cast<size_t>(x) * nn + y] = static_cast<int>(pairs.size());
        pairs.push_back({x, y});
      }
  std::vector<int> parent(pairs.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  auto unite = [&](int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (a > b) std::swap(a, b);
    parent[b] = a;  // the lower pair index stays the root
  };
  for (int x = 0; x < nm; ++x)
    for (int g : Dm.out(M->over[x])) {
      int xg = M->ract(x, g);
      for (int y = 0; y < nn; ++y)
        if (N->under[y] == Dm.tgt(g)) unite(pid[static_cast<size_t>(xg) * nn + y], pid[static_cast<size_t>(x) * nn + N->lact(y, g)]);
    }
  auto data = std::make_shared<CoendData>();
  data->first = M;
  data->second = N;
  data->cls.assign(pid.size(), -1);
  std::vector<int> root_cls(pairs.size(), -1);
  for (size_t i = 0; i < pairs.size(); ++i) {
    int r = find(static_cast<int>(i));
    if (root_cls[r] < 0) {
      root_cls[r] = static_cast<int>(data->rep.size());
      data->rep.push_back(pairs[r]);
    }
  }
  for (size_t i = 0; i < pairs.size(); ++i) {
    auto [x, y] = pairs[i];
    data->cls[static_cast<size_t>(x) * nn + y] = root_cls[find(static_cast<int>(i))];
  }
  std::vector<std::string> names;
  std::vector<int> u, o;
  for (auto [x, y] : data->rep) {
    names.push_back("[" + M->name[x] + "," + N->name[y] + "]");
    u.push_back(M->under[x]);
    o.push_back(N->over[y]);
  }
  auto cls = [&](int x, int y) { return data->cls[static_cast<size_t>(x) * nn + y]; };
  auto p = make_prof(
      M->src, N->tgt, names, u, o,
      [&](int e, int f) { return cls(M->lact(data->rep[e].first, f), data->rep[e].second); },
      [&](int e, int h) { return cls(data->rep[e].first, N->ract(data->rep[e].second, h)); });
  std::const_pointer_cast<Profunctor>(p)->coend = data;
  return p;
}

/// Modules over C are profunctors * -/-> C; applying K: C -/-> D gives a module over D.
inline Prof module_apply(const Prof& K, const Prof& F) { return compose_prof(F, K); }

// ---------------------------------------------------------------------------
// Morphisms of profunctors

struct ProfMorphism {
  Prof src, tgt;
  std::vector<int> map;
};

inline std::vector<std::string> validate_prof_morphism(const ProfMorphism& a) {
  std::vector<std::string> out;
  const auto& M = *a.src;
  const auto& N = *a.tgt;
  if (!same_category(M.src, N.src) || !same_category(M.tgt, N.tgt)) {
    out.push_back("source and target are not parallel");
    return out;
  }
  if (static_cast<int>(a.map.size()) != M.size()) {
    out.push_back("map has the wrong size");
    return out;
  }
  for (int e = 0; e < M.size(); ++e) {
    int t = a.map[e];
    if (t < 0 || t >= N.size()) {
      out.push_back("element " + M.name[e] + " maps out of range");
      continue;
    }
    if (N.under[t] != M.under[e] || N.over[t] != M.over[e]) {
      out.push_back("element " + M.name[e] + " maps to the wrong fiber");
      continue;
    }
    for (int f : M.src->in(M.under[e]))
      if (a.map[M.lact(e, f)] != N.lact(t, f)) out.push_back("left equivariance fails at " + M.name[e]);
    for (int g : M.tgt->out(M.over[e]))
      if (a.map[M.ract(e, g)] != N.ract(t, g)) out.push_back("right equivariance fails at " + M.name[e]);
  }
  return out;
}

inline ProfMorphism identity_morphism(const Prof& M) {
  ProfMorphism a{M, M, std::vector<int>(M->size())};
  std::iota(a.map.begin(), a.map.end(), 0);
  return a;
}

/// b after a
inline ProfMorphism compose_morphisms(const ProfMorphism& b, const ProfMorphism& a) {
  ProfMorphism c{a.src, b.tgt, {}};
  for (int t : a.map) c.map.push_back(b.map[t]);
  return c;
}

inline bool is_bijective(const ProfMorphism& a) {
  if (a.src->size() != a.tgt->size()) return false;
  std::vector<char> hit(a.tgt->size(), 0);
  for (int t : a.map) {
    if (hit[t]) return false;
    hit[t] = 1;
  }
  return true;
}

inline ProfMorphism inverse(const ProfMorphism& a) {
  ProfMorphism b{a.tgt, a.src, std::vector<int>(a.tgt->size(), -1)};
  for (int e = 0; e < a.src->size(); ++e) b.map[a.map[e]] = e;
  return b;
}

namespace detail {

/// Extend a partial equivariant assignment from (e -> t) along both actions.
/// Returns false on a clash or fiber mismatch.
inline bool propagate(const Profunctor& M, const Profunctor& N, std::vector<int>& a, int e, int t,
                      std::vector<int>* inv = nullptr) {
  std::vector<std::pair<int, int>> stack{{e, t}};
  while (!stack.empty()) {
    auto [x, y] = stack.back();
    stack.pop_back();
    if (M.under[x] != N.under[y] || M.over[x] != N.over[y]) return false;
    if (a[x] != -1) {
      if (a[x] != y) return false;
      continue;
    }
    if (inv) {
      if ((*inv)[y] != -1 && (*inv)[y] != x) return false;
      (*inv)[y] = x;
    }
    a[x] = y;
    for (int f : M.src->in(M.under[x])) stack.push_back({M.lact(x, f), N.lact(y, f)});
    for (int g : M.tgt->out(M.over[x])) stack.push_back({M.ract(x, g), N.ract(y, g)});
  }
  return true;
}

}  // namespace detail

/// Every equivariant map M -> N.
inline std::vector<ProfMorphism> prof_nats(const Prof& M, const Prof& N, size_t limit = SIZE_MAX) {
  if (!same_category(M->src, N->src) || !same_category(M->tgt, N->tgt))
    throw StructuralError("prof_nats: profunctors are not parallel");
  std::vector<ProfMorphism> out;
  const int n = M->size();
  std::vector<std::vector<int>> cand(n);
  for (int e = 0; e < n; ++e)
    for (int t = 0; t < N->size(); ++t)
      if (N->under[t] == M->under[e] && N->over[t] == M->over[e]) cand[e].push_back(t);
  std::function<void(int, std::vector<int>&)> rec = [&](int e, std::vector<int>& a) {
    if (out.size() >= limit) return;
    while (e < n && a[e] != -1) ++e;
    if (e == n) {
      out.push_back({M, N, a});
      return;
    }
    for (int t : cand[e]) {
      std::vector<int> b = a;
      if (detail::propagate(*M, *N, b, e, t)) rec(e + 1, b);
    }
  };
  std::vector<int> a(n, -1);
  rec(0, a);
  return out;
}

/// An equivariant bijection M -> N, if one exists.
inline std::optional<ProfMorphism> find_prof_iso(const Prof& M, const Prof& N) {
  if (M->size() != N->size()) return std::nullopt;
  if (!same_category(M->src, N->src) || !same_category(M->tgt, N->tgt)) return std::nullopt;
  const int n = M->size();
  // fiber sizes must agree
  std::unordered_map<long long, int> cnt;
  const long long W = M->tgt->nobj() + 1;
  for (int e = 0; e < n; ++e) cnt[M->under[e] * W + M->over[e]]++;
  for (int e = 0; e < n; ++e) cnt[N->under[e] * W + N->over[e]]--;
  for (auto& [k, v] : cnt)
    if (v != 0) return std::nullopt;
  std::vector<std::vector<int>> cand(n);
  for (int e = 0; e < n; ++e)
    for (int t = 0; t < n; ++t)
      if (N->under[t] == M->under[e] && N->over[t] == M->over[e]) cand[e].push_back(t);
  std::optional<ProfMorphism> found;
  std::function<void(int, std::vector<int>&, std::vector<int>&)> rec = [&](int e, std::vector<int>& a,
                                                                           std::vector<int>& inv) {
    if (found) return;
    while (e < n && a[e] != -1) ++e;
    if (e == n) {
      found = ProfMorphism{M, N, a};
      return;
    }
    for (int t : cand[e]) {
      if (inv[t] != -1) continue;
      std::vector<int> b = a, binv = inv;
      if (detail::propagate(*M, *N, b, e, t, &binv)) rec(e + 1, b, binv);
      if (found) return;
    }
  };
  std::vector<int> a(n, -1), inv(n, -1);
  rec(0, a, inv);
  return found;
}

inline bool prof_isomorphic(const Prof& M, const Prof& N) { return find_prof_iso(M, N).has_value(); }

// ---------------------------------------------------------------------------
// Structural 2-cells. Each takes the already computed composites so that
// element identities line up with the caller's objects.

/// compose(id_C, M) -> M
inline ProfMorphism left_unitor(const Prof& IM, const Prof& M) {
  ProfMorphism a{IM, M, {}};
  for (auto [f, x] : IM->coend->rep) a.map.push_back(M->lact(x, f));
  return a;
}

/// compose(M, id_D) -> M
inline ProfMorphism right_unitor(const Prof& MI, const Prof& M) {
  ProfMorphism a{MI, M, {}};
  for (auto [x, g] : MI->coend->rep) a.map.push_back(M->ract(x, g));
  return a;
}

/// M -> compose(id_C, M)
inline ProfMorphism left_unitor_inv(const Prof& M, const Prof& IM) {
  ProfMorphism a{M, IM, {}};
  for (int x = 0; x < M->size(); ++x) a.map.push_back(IM->cls(M->src->identity[M->under[x]], x));
  return a;
}

/// M -> compose(M, id_D)
inline ProfMorphism right_unitor_inv(const Prof& M, const Prof& MI) {
  ProfMorphism a{M, MI, {}};
  for (int x = 0; x < M->size(); ++x) a.map.push_back(MI->cls(x, M->tgt->identity[M->over[x]]));
  return a;
}

/// compose(compose(M, N), P) -> compose(M, compose(N, P))
inline ProfMorphism associator(const Prof& MN_P, const Prof& M_NP) {
  const Prof& MN = MN_P->coend->first;
  const Prof& NP = M_NP->coend->second;
  ProfMorphism a{MN_P, M_NP, {}};
  for (auto [u, z] : MN_P->coend->rep) {
    auto [x, y] = MN->coend->rep[u];
    a.map.push_back(M_NP->cls(x, NP->cls(y, z)));
  }
  return a;
}

/// compose(M, compose(N, P)) -> compose(compose(M, N), P)
inline ProfMorphism associator_inv(const Prof& M_NP, const Prof& MN_P) {
  const Prof& MN = MN_P->coend->first;
  const Prof& NP = M_NP->coend->second;
  ProfMorphism a{M_NP, MN_P, {}};
  for (auto [x, v] : M_NP->coend->rep) {
    auto [y, z] = NP->coend->rep[v];
    a.map.push_back(MN_P->cls(MN->cls(x, y), z));
  }
  return a;
}

/// alpha . N : compose(M, N) -> compose(M', N)
inline ProfMorphism whisker_right(const ProfMorphism& alpha, const Prof& MN, const Prof& M2N) {
  ProfMorphism a{MN, M2N, {}};
  for (auto [x, y] : MN->coend->rep) a.map.push_back(M2N->cls(alpha.map[x], y));
  return a;
}

/// M . beta : compose(M, N) -> compose(M, N')
inline ProfMorphism whisker_left(const ProfMorphism& beta, const Prof& MN, const Prof& MN2) {
  ProfMorphism a{MN, MN2, {}};
  for (auto [x, y] : MN->coend->rep) a.map.push_back(MN2->cls(x, beta.map[y]));
  return a;
}

inline bool same_map(const ProfMorphism& a, const ProfMorphism& b) { return a.map == b.map; }

// ---------------------------------------------------------------------------
// companion -| conjoint

struct AdjunctionProof {
  Prof comp, conj;
  Prof unit_src, unit_tgt;      // id_C, compose(f_!, f^*)
  Prof counit_src, counit_tgt;  // compose(f^*, f_!), id_D
  ProfMorphism unit, counit;
  bool unit_ok = false, counit_ok = false;
  bool triangle_companion = false, triangle_conjoint = false;
  std::string witness;

  bool ok() const { return unit_ok && counit_ok && triangle_companion && triangle_conjoint; }
};

inline AdjunctionProof check_adjunction(const FinFunctor& F) {
  const auto& C = *F.src;
  const auto& D = *F.tgt;
  AdjunctionProof p;
  p.comp = companion(F);
  p.conj = conjoint(F);
  p.unit_src = identity_prof(F.src);
  p.unit_tgt = compose_prof(p.comp, p.conj);
  p.counit_src = compose_prof(p.conj, p.comp);
  p.counit_tgt = identity_prof(F.tgt);
  auto comp_ix = [&](int c, int g) { return p.comp->element_index(C.obj_name(c) + "|" + D.mor_name(g)); };
  auto conj_ix = [&](int g, int c) { return p.conj->element_index(D.mor_name(g) + "|" + C.obj_name(c)); };
  // faster lookups than name search
  std::vector<std::vector<int>> cix(C.nobj(), std::vector<int>(D.nmor(), -1)), jix(D.nmor(), std::vector<int>(C.nobj(), -1));
  for (int c = 0; c < C.nobj(); ++c) {
    for (int g : D.out(F.ob[c])) cix[c][g] = comp_ix(c, g);
    for (int g : D.in(F.ob[c])) jix[g][c] = conj_ix(g, c);
  }
  // unit: h: c -> c' |-> [(c, id_fc), (f h, c')]
  p.unit = {p.unit_src, p.unit_tgt, {}};
  for (int h = 0; h < C.nmor(); ++h)
    p.unit.map.push_back(p.unit_tgt->cls(cix[C.src(h)][D.identity[F.ob[C.src(h)]]], jix[F.mo[h]][C.tgt(h)]));
  // counit: [(g': d -> fc, c), (c, g: fc -> d')] |-> g g'
  p.counit = {p.counit_src, p.counit_tgt, {}};
  std::vector<int> conj_g(p.conj->size()), comp_g(p.comp->size());
  for (int c = 0; c < C.nobj(); ++c) {
    for (int g : D.in(F.ob[c])) conj_g[jix[g][c]] = g;
    for (int g : D.out(F.ob[c])) comp_g[cix[c][g]] = g;
  }
  for (auto [x, y] : p.counit_src->coend->rep) p.counit.map.push_back(D.compose(comp_g[y], conj_g[x]));
  p.unit_ok = validate_prof_morphism(p.unit).empty();
  p.counit_ok = validate_prof_morphism(p.counit).empty();
  if (!p.unit_ok) p.witness = "unit is not equivariant";
  if (!p.counit_ok) p.witness = "counit is not equivariant";

  // f_! -> id f_! -> (f_! f^*) f_! -> f_! (f^* f_!) -> f_! id -> f_!
  {
    Prof I_c = compose_prof(p.unit_src, p.comp);
    Prof cj_c = compose_prof(p.unit_tgt, p.comp);
    Prof jc = p.counit_src;
    Prof c_jc = compose_prof(p.comp, jc);
    Prof c_I = compose_prof(p.comp, p.counit_tgt);
    auto s1 = left_unitor_inv(p.comp, I_c);
    auto s2 = whisker_right(p.unit, I_c, cj_c);
    auto s3 = associator(cj_c, c_jc);
    auto s4 = whisker_left(p.counit, c_jc, c_I);
    auto s5 = right_unitor(c_I, p.comp);
    auto total = compose_morphisms(s5, compose_morphisms(s4, compose_morphisms(s3, compose_morphisms(s2, s1))));
    p.triangle_companion = same_map(total, identity_morphism(p.comp));
    if (!p.triangle_companion && p.witness.empty()) {
      for (int e = 0; e < p.comp->size(); ++e)
        if (total.map[e] != e) {
          p.witness = "companion triangle moves " + p.comp->name[e];
          break;
        }
    }
  }
  // f^* -> f^* id -> f^* (f_! f^*) -> (f^* f_!) f^* -> id f^* -> f^*
  {
    Prof j_I = compose_prof(p.conj, p.unit_src);
    Prof j_cj = compose_prof(p.conj, p.unit_tgt);
    Prof jc_j = compose_prof(p.counit_src, p.conj);
    Prof I_j = compose_prof(p.counit_tgt, p.conj);
    auto s1 = right_unitor_inv(p.conj, j_I);
    auto s2 = whisker_left(p.unit, j_I, j_cj);
    auto s3 = associator_inv(j_cj, jc_j);
    auto s4 = whisker_right(p.counit, jc_j, I_j);
    auto s5 = left_unitor(I_j, p.conj);
    auto total = compose_morphisms(s5, compose_morphisms(s4, compose_morphisms(s3, compose_morphisms(s2, s1))));
    p.triangle_conjoint = same_map(total, identity_morphism(p.conj));
    if (!p.triangle_conjoint && p.witness.empty()) {
      for (int e = 0; e < p.conj->size(); ++e)
        if (total.map[e] != e) {
          p.witness = "conjoint triangle moves " + p.conj->name[e];
          break;
        }
    }
  }
  return p;
}

// ---------------------------------------------------------------------------
// Collages

struct Collage {
  Cat cat;
  FinFunctor proj;     // to [1]
  FinFunctor i0, i1;   // fiber inclusions of C and D
};

inline Collage collage(const Prof& M) {
  const auto& C = *M->src;
  const auto& D = *M->tgt;
  const int nc = C.nobj(), mc = C.nmor(), md = D.nmor();
  std::vector<std::string> objs;
  for (auto& x : C.objects) objs.push_back("0." + x);
  for (auto& x : D.objects) objs.push_back("1." + x);
  std::vector<Morphism> mors;
  for (auto& f : C.morphisms) mors.push_back({"0." + f.name, f.src, f.tgt});
  for (auto& f : D.morphisms) mors.push_back({"1." + f.name, f.src + nc, f.tgt + nc});
  for (int e = 0; e < M->size(); ++e) mors.push_back({"m." + M->name[e], M->under[e], M->over[e] + nc});
  std::vector<int> ids = C.identity;
  for (int i : D.identity) ids.push_back(i + mc);
  const int base = mc + md;
  Cat K = make_category(objs, mors, ids, [&](int g, int f) {
    if (g < mc) return C.compose(g, f);              // both in C
    if (f >= mc && f < base) return D.compose(g - mc, f - mc) + mc;  // both in D
    if (g >= base) return M->lact(g - base, f) + base;               // element after C-morphism
    return M->ract(f - base, g - mc) + base;                          // D-morphism after element
  });
  Cat one = cats::chain(1);
  Collage r{K, {K, one, {}, {}}, {M->src, K, {}, {}}, {M->tgt, K, {}, {}}};
  for (int x = 0; x < K->nobj(); ++x) r.proj.ob.push_back(x < nc ? 0 : 1);
  for (int f = 0; f < K->nmor(); ++f)
    r.proj.mo.push_back(f < mc ? one->identity[0] : f < base ? one->identity[1] : one->morphism_index("0_1"));
  for (int x = 0; x < nc; ++x) r.i0.ob.push_back(x);
  for (int f = 0; f < mc; ++f) r.i0.mo.push_back(f);
  for (int x = 0; x < D.nobj(); ++x) r.i1.ob.push_back(x + nc);
  for (int f = 0; f < md; ++f) r.i1.mo.push_back(f + mc);
  return r;
}

struct CollageFactorization {
  bool ok = false;
  Prof composite;     // compose(i0_!, i1^*)
  ProfMorphism iso;   // M -> composite
  std::string witness;
};

/// M recovered as i_{1}^* after i_{0,!}: e |-> [(c, e), (id, d)].
inline CollageFactorization collage_factor(const Prof& M) {
  Collage K = collage(M);
  const int nc = M->src->nobj(), mc = M->src->nmor(), md = M->tgt->nmor();
  Prof c0 = companion(K.i0);
  Prof c1 = conjoint(K.i1);
  CollageFactorization r;
  r.composite = compose_prof(c0, c1);
  r.iso = {M, r.composite, {}};
  for (int e = 0; e < M->size(); ++e) {
    int d = M->over[e];
    int x = c0->element_index(M->src->obj_name(M->under[e]) + "|m." + M->name[e]);
    int y = c1->element_index(K.cat->mor_name(K.cat->identity[d + nc]) + "|" + M->tgt->obj_name(d));
    r.iso.map.push_back(r.composite->cls(x, y));
  }
  (void)md;
  (void)mc;
  auto v = validate_prof_morphism(r.iso);
  r.ok = v.empty() && is_bijective(r.iso);
  if (!v.empty()) r.witness = v.front();
  else if (!r.ok) r.witness = "comparison map is not bijective";
  return r;
}

// ---------------------------------------------------------------------------
// Cylinders: morphisms M -> N as correspondences C x [1] -/-> D

struct Cylinder {
  Prof prof;  // over C x [1]
};

/// N sits over C x {0}, M over C x {1}; (id, 0->1) carries m to alpha(m).
inline Prof cylinder_encode(const ProfMorphism& alpha) {
  const Prof& M = alpha.src;
  const Prof& N = alpha.tgt;
  const auto& C = *M->src;
  Cat one = cats::chain(1);
  Cat CI = product(C, *one);
  const int nn = N->size();
  std::vector<std::string> names;
  std::vector<int> u, o;
  for (int e = 0; e < nn; ++e) {
    names.push_back("0:" + N->name[e]);
    u.push_back(N->under[e] * 2);
    o.push_back(N->over[e]);
  }
  for (int e = 0; e < M->size(); ++e) {
    names.push_back("1:" + M->name[e]);
    u.push_back(M->under[e] * 2 + 1);
    o.push_back(M->over[e]);
  }
  const int m1 = one->nmor();
  const int up = one->morphism_index("0_1");
  return make_prof(
      CI, M->tgt, names, u, o,
      [&](int e, int hk) {
        int h = hk / m1, k = hk % m1;
        if (e < nn) return N->lact(e, h);
        int m = e - nn;
        if (k != up) return M->lact(m, h) + nn;
        return alpha.map[M->lact(m, h)];
      },
      [&](int e, int g) { return e < nn ? N->ract(e, g) : M->ract(e - nn, g) + nn; });
}

/// Splits a correspondence over C x [1] into its ends and the induced morphism.
inline ProfMorphism cylinder_decode(const Prof& P, const Cat& C) {
  const auto& CI = *P->src;
  Cat one = cats::chain(1);
  const int m1 = one->nmor();
  const int up = one->morphism_index("0_1");
  std::vector<int> at1, at0, pos(P->size(), -1);
  for (int e = 0; e < P->size(); ++e) {
    auto& v = (P->under[e] % 2) ? at1 : at0;
    pos[e] = static_cast<int>(v.size());
    v.push_back(e);
  }
  auto strip = [](const std::string& s) { return s.size() > 2 && s[1] == ':' ? s.substr(2) : s; };
  auto end = [&](const std::vector<int>& els, int bit) {
    std::vector<std::string> names;
    std::vector<int> u, o;
    for (int e : els) {
      names.push_back(strip(P->name[e]));
      u.push_back(P->under[e] / 2);
      o.push_back(P->over[e]);
    }
    return make_prof(
        C, P->tgt, names, u, o,
        [&](int e, int h) { return pos[P->lact(els[e], h * m1 + one->identity[bit])]; },
        [&](int e, int g) { return pos[P->ract(els[e], g)]; });
  };
  Prof M = end(at1, 1);
  Prof N = end(at0, 0);
  ProfMorphism a{M, N, {}};
  (void)CI;
  for (int e : at1) a.map.push_back(pos[P->lact(e, C->identity[P->under[e] / 2] * m1 + up)]);
  return a;
}

// ---------------------------------------------------------------------------
// Mates. A square M: A -/-> B over N: A' -/-> B' with verticals f, g is a
// morphism alpha: compose(M, g_!) -> compose(f_!, N). Its mate is
// M -> compose(compose(f_!, N), g^*).

struct MateContext {
  FinFunctor f, g;
  Prof M, N;
  Prof fc, gc, gj;    // f_!, g_!, g^*
  Prof Mg, fN, fN_g;  // compose(M, g_!), compose(f_!, N), compose(fN, g^*)

  MateContext(const FinFunctor& f_, const FinFunctor& g_, const Prof& M_, const Prof& N_)
      : f(f_), g(g_), M(M_), N(N_) {
    if (!same_category(M->src, f.src) || !same_category(M->tgt, g.src) || !same_category(N->src, f.tgt) ||
        !same_category(N->tgt, g.tgt))
      throw StructuralError("mate: square does not fit the verticals");
    fc = companion(f);
    gc = companion(g);
    gj = conjoint(g);
    Mg = compose_prof(M, gc);
    fN = compose_prof(fc, N);
    fN_g = compose_prof(fN, gj);
  }

  int gc_el(int b, int k) const {
    return gc->element_index(g.src->obj_name(b) + "|" + g.tgt->mor_name(k));
  }
  int gj_el(int l, int b) const {
    return gj->element_index(g.tgt->mor_name(l) + "|" + g.src->obj_name(b));
  }

  ProfMorphism mate(const ProfMorphism& alpha) const {
    ProfMorphism r{M, fN_g, {}};
    for (int m = 0; m < M->size(); ++m) {
      int b = M->over[m];
      int idgb = g.tgt->identity[g.ob[b]];
      r.map.push_back(fN_g->cls(alpha.map[Mg->cls(m, gc_el(b, idgb))], gj_el(idgb, b)));
    }
    return r;
  }

  ProfMorphism unmate(const ProfMorphism& beta) const {
    ProfMorphism r{Mg, fN, {}};
    for (auto [m, ge] : Mg->coend->rep) {
      int k = g.tgt->morphism_index(gc->name[ge].substr(gc->name[ge].find('|') + 1));
      auto [u, je] = fN_g->coend->rep[beta.map[m]];
      int l = g.tgt->morphism_index(gj->name[je].substr(0, gj->name[je].rfind('|')));
      r.map.push_back(fN->ract(u, g.tgt->compose(k, l)));
    }
    return r;
  }
};

// ---------------------------------------------------------------------------
// Spans of finite sets

struct Span {
  int a = 0, b = 0;
  std::vector<int> l, r;  // apex -> a, apex -> b
};

inline bool is_discrete(const FinCategory& c) {
  for (int f = 0; f < c.nmor(); ++f)
    if (!c.is_identity(f)) return false;
  return true;
}

inline Cat discrete_set(int n) { return cats::discrete(n); }

inline Prof prof_from_span(const Span& s, const Cat& A, const Cat& B) {
  std::vector<std::string> names;
  for (size_t i = 0; i < s.l.size(); ++i) names.push_back("s" + std::to_string(i));
  return make_prof(A, B, names, s.l, s.r, [](int e, int) { return e; }, [](int e, int) { return e; });
}

inline Prof prof_from_span(const Span& s) { return prof_from_span(s, discrete_set(s.a), discrete_set(s.b)); }

inline Span span_from_prof(const Profunctor& p) {
  if (!is_discrete(*p.src) || !is_discrete(*p.tgt)) throw StructuralError("span_from_prof: categories are not discrete");
  return {p.src->nobj(), p.tgt->nobj(), p.under, p.over};
}

/// Pullback composite; apex pairs in lexicographic order.
inline Span compose_spans(const Span& s, const Span& t) {
  if (s.b != t.a) throw StructuralError("spans are not composable");
  Span r{s.a, t.b, {}, {}};
  for (size_t i = 0; i < s.l.size(); ++i)
    for (size_t j = 0; j < t.l.size(); ++j)
      if (s.r[i] == t.l[j]) {
        r.l.push_back(s.l[i]);
        r.r.push_back(t.r[j]);
      }
  return r;
}

}  // namespace corr
