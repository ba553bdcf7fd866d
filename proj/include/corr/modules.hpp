// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "fincat.hpp"
#include "prof.hpp"

namespace corr {

/// Functor K -> FinSet: fiber sizes and one function per morphism.
struct SetFunctor {
  std::vector<int> size;
  std::vector<std::vector<int>> fn;  // fn[f][a] = F(f)(a)

  bool operator==(const SetFunctor&) const = default;
};

inline std::vector<std::string> validate_set_functor(const FinCategory& K, const SetFunctor& F) {
  std::vector<std::string> out;
  if (static_cast<int>(F.size.size()) != K.nobj() || static_cast<int>(F.fn.size()) != K.nmor()) {
    out.push_back("set functor has the wrong shape");
    return out;
  }
  for (int f = 0; f < K.nmor(); ++f) {
    if (static_cast<int>(F.fn[f].size()) != F.size[K.src(f)]) out.push_back("function of " + K.mor_name(f) + " has the wrong domain");
    for (int v : F.fn[f])
      if (v < 0 || v >= F.size[K.tgt(f)]) out.push_back("function of " + K.mor_name(f) + " leaves its codomain");
  }
  if (!out.empty()) return out;
  for (int x = 0; x < K.nobj(); ++x)
    for (int a = 0; a < F.size[x]; ++a)
      if (F.fn[K.identity[x]][a] != a) out.push_back("identity of " + K.obj_name(x) + " acts nontrivially");
  for (int g = 0; g < K.nmor(); ++g)
    for (int f : K.in(K.src(g)))
      for (int a = 0; a < F.size[K.src(f)]; ++a)
        if (F.fn[K.compose(g, f)][a] != F.fn[g][F.fn[f][a]]) {
          out.push_back("composite " + K.mor_name(g) + " o " + K.mor_name(f) + " not preserved");
          a = F.size[K.src(f)];
        }
  return out;
}

/// Natural maps F => G as per-object functions; bijective restricts to isomorphisms.
inline std::vector<std::vector<std::vector<int>>> set_functor_maps(const FinCategory& K, const SetFunctor& F,
                                                                   const SetFunctor& G, bool bijective,
                                                                   size_t limit = SIZE_MAX) {
  std::vector<std::vector<std::vector<int>>> out;
  if (bijective && F.size != G.size) return out;
  const int n = K.nobj();
  using Table = std::vector<std::vector<int>>;
  Table a(n), inv(n);
  for (int x = 0; x < n; ++x) {
    a[x].assign(F.size[x], -1);
    inv[x].assign(G.size[x], -1);
  }
  auto propagate = [&](Table& m, Table& mi, int x, int i, int j) {
    std::vector<std::array<int, 3>> st{{x, i, j}};
    while (!st.empty()) {
      auto [y, p, q] = st.back();
      st.pop_back();
      if (m[y][p] != -1) {
        if (m[y][p] != q) return false;
        continue;
      }
      if (bijective) {
        if (mi[y][q] != -1) return false;
        mi[y][q] = p;
      }
      m[y][p] = q;
      for (int f : K.out(y)) st.push_back({K.tgt(f), F.fn[f][p], G.fn[f][q]});
    }
    return true;
  };
  std::function<void(Table&, Table&)> rec = [&](Table& m, Table& mi) {
    if (out.size() >= limit) return;
    for (int x = 0; x < n; ++x)
      for (int i = 0; i < F.size[x]; ++i)
        if (m[x][i] == -1) {
          for (int j = 0; j < G.size[x]; ++j) {
            if (bijective && mi[x][j] != -1) continue;
            Table m2 = m, mi2 = mi;
            if (propagate(m2, mi2, x, i, j)) rec(m2, mi2);
            if (out.size() >= limit) return;
          }
          return;
        }
    out.push_back(m);
  };
  rec(a, inv);
  return out;
}

/// Natural isomorphism F => G as per-object permutations, if any.
inline std::optional<std::vector<std::vector<int>>> set_functor_iso(const FinCategory& K, const SetFunctor& F,
                                                                    const SetFunctor& G) {
  auto r = set_functor_maps(K, F, G, true, 1);
  if (r.empty()) return std::nullopt;
  return r.front();
}

namespace detail {

inline std::vector<int> set_functor_key(const FinCategory& K, const SetFunctor& F) {
  std::vector<int> key = F.size;
  for (int f = 0; f < K.nmor(); ++f) {
    std::vector<int> pre(F.size[K.tgt(f)], 0);
    for (int v : F.fn[f]) pre[v]++;
    std::sort(pre.begin(), pre.end());
    key.push_back(-1);
    key.insert(key.end(), pre.begin(), pre.end());
    if (K.src(f) == K.tgt(f)) {
      int fix = 0;
      for (int a = 0; a < F.size[K.src(f)]; ++a) fix += F.fn[f][a] == a;
      key.push_back(fix);
    }
  }
  return key;
}

}  // namespace detail

/// Every functor K -> FinSet with fibers of size <= cap (and total <= total_cap
/// when that is nonnegative), one per isomorphism class when up_to_iso.
inline std::vector<SetFunctor> enumerate_set_functors(const Cat& Kp, int cap, int total_cap = -1,
                                                      bool up_to_iso = true) {
  const auto& K = *Kp;
  const int n = K.nobj();
  Generation gen = generate(K);
  const int k = static_cast<int>(gen.gens.size());
  std::vector<int> lg(K.nmor(), -1);
  for (int f = 0; f < K.nmor(); ++f)
    for (int s : gen.word[f]) lg[f] = std::max(lg[f], s);
  std::vector<std::vector<std::pair<int, int>>> checks(k + 1);
  for (int g = 0; g < K.nmor(); ++g)
    for (int f : K.in(K.src(g))) {
      int h = K.compose(g, f);
      checks[std::max({lg[g], lg[f], lg[h]}) + 1].push_back({g, f});
    }
  std::vector<SetFunctor> out;
  std::map<std::vector<int>, std::vector<size_t>> buckets;
  std::vector<int> size(n, 0);
  std::vector<std::vector<int>> gfn(k);

  auto eval = [&](int f, int a) {
    for (int s : gen.word[f]) a = gfn[s][a];
    return a;
  };
  auto ok_pairs = [&](int i) {
    for (auto [g, f] : checks[i])
      for (int a = 0; a < size[K.src(f)]; ++a)
        if (eval(K.compose(g, f), a) != eval(g, eval(f, a))) return false;
    return true;
  };
  auto emit = [&]() {
    SetFunctor F{size, std::vector<std::vector<int>>(K.nmor())};
    for (int f = 0; f < K.nmor(); ++f)
      for (int a = 0; a < size[K.src(f)]; ++a) F.fn[f].push_back(eval(f, a));
    if (up_to_iso) {
      auto key = detail::set_functor_key(K, F);
      auto& b = buckets[key];
      for (size_t j : b)
        if (set_functor_iso(K, out[j], F)) return;
      b.push_back(out.size());
    }
    out.push_back(std::move(F));
  };
  std::function<void(int)> rec_gen = [&](int i) {
    if (i == k) {
      if (ok_pairs(k)) emit();
      return;
    }
    int s = gen.gens[i];
    int dom = size[K.src(s)], cod = size[K.tgt(s)];
    if (dom > 0 && cod == 0) return;
    std::vector<int>& f = gfn[i];
    f.assign(dom, 0);
    while (true) {
      if (ok_pairs(i + 1)) rec_gen(i + 1);
      int p = 0;
      while (p < dom && ++f[p] == cod) f[p++] = 0;
      if (p == dom) break;
    }
  };
  std::function<void(int, int)> rec_size = [&](int x, int total) {
    if (x == n) {
      rec_gen(0);
      return;
    }
    for (int s = 0; s <= cap; ++s) {
      if (total_cap >= 0 && total + s > total_cap) break;
      size[x] = s;
      rec_size(x + 1, total + s);
    }
  };
  rec_size(0, 0);
  return out;
}

// ---------------------------------------------------------------------------
// Modules (profunctors * -/-> C)

inline std::string fiber_name(const FinCategory& C, int x, int i) { return C.obj_name(x) + "#" + std::to_string(i); }

inline Prof module_from_set_functor(const Cat& C, const SetFunctor& F) {
  std::vector<std::string> names;
  std::vector<int> u, o;
  std::vector<int> base(C->nobj());
  for (int x = 0; x < C->nobj(); ++x) {
    base[x] = static_cast<int>(names.size());
    for (int i = 0; i < F.size[x]; ++i) {
      names.push_back(fiber_name(*C, x, i));
      u.push_back(0);
      o.push_back(x);
    }
  }
  return make_prof(
      point(), C, names, u, o, [](int e, int) { return e; },
      [&](int e, int g) { return base[C->tgt(g)] + F.fn[g][e - base[C->src(g)]]; });
}

inline SetFunctor set_functor_from_module(const Profunctor& M) {
  const auto& C = *M.tgt;
  SetFunctor F{std::vector<int>(C.nobj(), 0), std::vector<std::vector<int>>(C.nmor())};
  std::vector<int> pos(M.size());
  for (int e = 0; e < M.size(); ++e) pos[e] = F.size[M.over[e]]++;
  std::vector<std::vector<int>> els(C.nobj());
  for (int e = 0; e < M.size(); ++e) els[M.over[e]].push_back(e);
  for (int f = 0; f < C.nmor(); ++f)
    for (int e : els[C.src(f)]) F.fn[f].push_back(pos[M.ract(e, f)]);
  return F;
}

inline std::vector<Prof> enumerate_modules(const Cat& C, int cap, int total_cap = -1) {
  std::vector<Prof> out;
  for (auto& F : enumerate_set_functors(C, cap, total_cap)) out.push_back(module_from_set_functor(C, F));
  return out;
}

/// Module given by fiber sizes and the action of each morphism.
inline Prof make_module(const Cat& C, const std::vector<int>& sizes,
                        const std::function<int(int, int)>& act /* (morphism, index) -> index */) {
  SetFunctor F{sizes, std::vector<std::vector<int>>(C->nmor())};
  for (int f = 0; f < C->nmor(); ++f)
    for (int a = 0; a < sizes[C->src(f)]; ++a) F.fn[f].push_back(act(f, a));
  auto v = validate_set_functor(*C, F);
  if (!v.empty()) throw StructuralError("make_module: " + v.front());
  return module_from_set_functor(C, F);
}

/// Representable Hom_C(x, -).
inline Prof representable(const Cat& C, int x) {
  std::vector<std::string> names;
  std::vector<int> u, o;
  std::vector<int> ix(C->nmor(), -1);
  for (int f : C->out(x)) {
    ix[f] = static_cast<int>(names.size());
    names.push_back(C->mor_name(f));
    u.push_back(0);
    o.push_back(C->tgt(f));
  }
  std::vector<int> back;
  for (int f : C->out(x)) back.push_back(f);
  return make_prof(
      point(), C, names, u, o, [](int e, int) { return e; },
      [&](int e, int g) { return ix[C->compose(g, back[e])]; });
}

/// Restriction of a module along u: A -> C.
inline Prof restrict_module(const Prof& M, const FinFunctor& u) {
  const auto& A = *u.src;
  std::vector<std::string> names;
  std::vector<int> uu, o;
  std::vector<std::vector<int>> els(M->tgt->nobj());
  for (int e = 0; e < M->size(); ++e) els[M->over[e]].push_back(e);
  std::vector<int> base(A.nobj()), src_el;
  std::vector<int> pos(M->size());
  for (int e = 0; e < M->size(); ++e) pos[e] = static_cast<int>(std::find(els[M->over[e]].begin(), els[M->over[e]].end(), e) - els[M->over[e]].begin());
  for (int x = 0; x < A.nobj(); ++x) {
    base[x] = static_cast<int>(names.size());
    for (int e : els[u.ob[x]]) {
      names.push_back(A.obj_name(x) + ":" + M->name[e]);
      uu.push_back(0);
      o.push_back(x);
      src_el.push_back(e);
    }
  }
  return make_prof(
      point(), u.src, names, uu, o, [](int e, int) { return e; },
      [&](int e, int h) { return base[A.tgt(h)] + pos[M->ract(src_el[e], u.mo[h])]; });
}

/// Restriction of a profunctor P: C -/-> D along f: A -> C and g: B -> D.
inline Prof restrict_prof(const Prof& P, const FinFunctor& f, const FinFunctor& g) {
  const auto& A = *f.src;
  const auto& B = *g.src;
  std::vector<std::string> names;
  std::vector<int> u, o;
  std::vector<std::array<int, 3>> el;  // (a, b, e)
  std::map<std::array<int, 3>, int> ix;
  for (int a = 0; a < A.nobj(); ++a)
    for (int b = 0; b < B.nobj(); ++b)
      for (int e = 0; e < P->size(); ++e)
        if (P->under[e] == f.ob[a] && P->over[e] == g.ob[b]) {
          ix[{a, b, e}] = static_cast<int>(names.size());
          names.push_back(A.obj_name(a) + "," + B.obj_name(b) + ":" + P->name[e]);
          u.push_back(a);
          o.push_back(b);
          el.push_back({a, b, e});
        }
  return make_prof(
      f.src, g.src, names, u, o,
      [&](int i, int h) { return ix.at({A.src(h), el[i][1], P->lact(el[i][2], f.mo[h])}); },
      [&](int i, int k) { return ix.at({el[i][0], B.tgt(k), P->ract(el[i][2], g.mo[k])}); });
}

/// Left Kan extension u_! F = F then u_!.
inline Prof extend_module(const Prof& F, const FinFunctor& u) { return compose_prof(F, companion(u)); }

/// Profunctor C -/-> D from a set functor on product(opposite(C), D).
inline Prof prof_from_set_functor(const Cat& C, const Cat& D, const SetFunctor& F) {
  const int nd = D->nobj(), md = D->nmor();
  std::vector<std::string> names;
  std::vector<int> u, o;
  std::vector<int> base(C->nobj() * nd);
  for (int c = 0; c < C->nobj(); ++c)
    for (int d = 0; d < nd; ++d) {
      base[c * nd + d] = static_cast<int>(names.size());
      for (int i = 0; i < F.size[c * nd + d]; ++i) {
        names.push_back(C->obj_name(c) + "," + D->obj_name(d) + "#" + std::to_string(i));
        u.push_back(c);
        o.push_back(d);
      }
    }
  return make_prof(
      C, D, names, u, o,
      [&](int e, int h) {
        int c = u[e], d = o[e];
        int m = h * md + D->identity[d];
        return base[C->src(h) * nd + d] + F.fn[m][e - base[c * nd + d]];
      },
      [&](int e, int k) {
        int c = u[e], d = o[e];
        int m = C->identity[c] * md + k;
        return base[c * nd + D->tgt(k)] + F.fn[m][e - base[c * nd + d]];
      });
}

/// Profunctors C -/-> D with at most max_elements elements, one per iso class.
inline std::vector<Prof> enumerate_profs(const Cat& C, const Cat& D, int fiber_cap, int max_elements) {
  Cat K = product(*opposite(*C), *D);
  std::vector<Prof> out;
  for (auto& F : enumerate_set_functors(K, fiber_cap, max_elements)) out.push_back(prof_from_set_functor(C, D, F));
  return out;
}

/// Elements of a module grouped by the object they lie over.
struct FiberIndex {
  std::vector<std::vector<int>> els;
  std::vector<int> pos;
};

inline FiberIndex fiber_index(const Profunctor& M) {
  FiberIndex r{std::vector<std::vector<int>>(M.tgt->nobj()), std::vector<int>(M.size())};
  for (int e = 0; e < M.size(); ++e) {
    r.pos[e] = static_cast<int>(r.els[M.over[e]].size());
    r.els[M.over[e]].push_back(e);
  }
  return r;
}

/// Module morphism from per-object position tables.
inline ProfMorphism module_morphism(const Prof& M, const Prof& N, const std::vector<std::vector<int>>& m) {
  auto fm = fiber_index(*M);
  auto fn = fiber_index(*N);
  ProfMorphism a{M, N, std::vector<int>(M->size())};
  for (int e = 0; e < M->size(); ++e) a.map[e] = fn.els[M->over[e]][m[M->over[e]][fm.pos[e]]];
  return a;
}

inline std::vector<std::vector<int>> module_map_table(const ProfMorphism& a) {
  auto fm = fiber_index(*a.src);
  auto fn = fiber_index(*a.tgt);
  std::vector<std::vector<int>> m(a.src->tgt->nobj());
  for (int x = 0; x < a.src->tgt->nobj(); ++x)
    for (int e : fm.els[x]) m[x].push_back(fn.pos[a.map[e]]);
  return m;
}

/// The position-preserving map between modules with equal fiber sizes.
inline ProfMorphism positional_map(const Prof& M, const Prof& N) {
  std::vector<std::vector<int>> m(M->tgt->nobj());
  auto fm = fiber_index(*M);
  for (int x = 0; x < M->tgt->nobj(); ++x)
    for (size_t i = 0; i < fm.els[x].size(); ++i) m[x].push_back(static_cast<int>(i));
  return module_morphism(M, N, m);
}

}  // namespace corr
