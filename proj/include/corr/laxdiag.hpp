// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <functional>
#include <map>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "catalog.hpp"
#include "equiv.hpp"
#include "fincat.hpp"
#include "modules.hpp"
#include "present.hpp"
#include "prof.hpp"

namespace corr {

/// Lax functor [n] -> profunctors. Vertex i is an identity-on-objects functor
/// u_i: D_i -> E_i; the E_i actions on the edges are the vertex unit actions.
struct LaxDiagram {
  int n = 0;
  std::vector<FinFunctor> vertex;
  std::map<std::pair<int, int>, Prof> edge;                // M_ij: E_i -/-> E_j
  std::map<std::array<int, 3>, ProfMorphism> cell;         // compose(M_ij, M_jk) -> M_ik

  const Cat& D(int i) const { return vertex[i].src; }
  const Cat& E(int i) const { return vertex[i].tgt; }
  const Prof& M(int i, int j) const { return edge.at({i, j}); }
  const ProfMorphism& gamma(int i, int j, int k) const { return cell.at({i, j, k}); }

  /// Installs gamma_ijk from a rule on composable element pairs.
  void set_cell(int i, int j, int k, const std::function<int(int, int)>& rule) {
    Prof c = compose_prof(M(i, j), M(j, k));
    ProfMorphism g{c, M(i, k), {}};
    for (auto [x, y] : c->coend->rep) g.map.push_back(rule(x, y));
    cell[{i, j, k}] = g;
  }
};

/// Diagram with the given vertices and empty edges and cells.
inline LaxDiagram lax_diagram(const std::vector<FinFunctor>& vertices) {
  LaxDiagram d;
  d.n = static_cast<int>(vertices.size()) - 1;
  d.vertex = vertices;
  return d;
}

/// Profunctor with no elements.
inline Prof empty_prof(const Cat& C, const Cat& D) {
  return make_prof(C, D, {}, {}, {}, [](int, int) { return -1; }, [](int, int) { return -1; });
}

inline std::vector<std::string> validate_lax(const LaxDiagram& d) {
  std::vector<std::string> out;
  if (d.n < 0 || static_cast<int>(d.vertex.size()) != d.n + 1) {
    out.push_back("vertex count does not match the length");
    return out;
  }
  for (int i = 0; i <= d.n; ++i) {
    for (auto& s : validate_functor(d.vertex[i])) out.push_back("vertex " + std::to_string(i) + ": " + s);
    if (!is_bijective_on_objects(d.vertex[i]))
      out.push_back("vertex " + std::to_string(i) + " is not bijective on objects");
  }
  if (!out.empty()) return out;
  for (int i = 0; i <= d.n; ++i)
    for (int j = i + 1; j <= d.n; ++j) {
      auto it = d.edge.find({i, j});
      std::string tag = "edge " + std::to_string(i) + std::to_string(j);
      if (it == d.edge.end()) {
        out.push_back(tag + " missing");
        continue;
      }
      if (!same_category(it->second->src, d.E(i)) || !same_category(it->second->tgt, d.E(j))) {
        out.push_back(tag + " has the wrong endpoints");
        continue;
      }
      for (auto& s : validate_prof(*it->second)) out.push_back(tag + ": " + s);
    }
  if (!out.empty()) return out;
  for (int i = 0; i <= d.n; ++i)
    for (int j = i + 1; j <= d.n; ++j)
      for (int k = j + 1; k <= d.n; ++k) {
        auto it = d.cell.find({i, j, k});
        std::string tag = "cell " + std::to_string(i) + std::to_string(j) + std::to_string(k);
        if (it == d.cell.end()) {
          out.push_back(tag + " missing");
          continue;
        }
        const auto& g = it->second;
        if (!g.src->coend || !same_category(g.src->src, d.E(i)) || !same_category(g.src->tgt, d.E(k)) ||
            g.src->coend->first->size() != d.M(i, j)->size() || g.src->coend->second->size() != d.M(j, k)->size()) {
          out.push_back(tag + " is not defined on the composite of its edges");
          continue;
        }
        if (g.tgt != d.M(i, k) && !same_category(g.tgt->tgt, d.E(k))) {
          out.push_back(tag + " has the wrong target");
          continue;
        }
        for (auto& s : validate_prof_morphism(g)) out.push_back(tag + ": " + s);
      }
  if (!out.empty()) return out;
  for (int i = 0; i <= d.n; ++i)
    for (int j = i + 1; j <= d.n; ++j)
      for (int k = j + 1; k <= d.n; ++k)
        for (int l = k + 1; l <= d.n; ++l) {
          const auto &a = d.M(i, j), &b = d.M(j, k), &c = d.M(k, l);
          const auto &gijk = d.gamma(i, j, k), &gikl = d.gamma(i, k, l);
          const auto &gjkl = d.gamma(j, k, l), &gijl = d.gamma(i, j, l);
          for (int x = 0; x < a->size(); ++x)
            for (int y = 0; y < b->size(); ++y) {
              if (a->over[x] != b->under[y]) continue;
              int xy = gijk.map[gijk.src->cls(x, y)];
              for (int z = 0; z < c->size(); ++z) {
                if (b->over[y] != c->under[z]) continue;
                int yz = gjkl.map[gjkl.src->cls(y, z)];
                if (gikl.map[gikl.src->cls(xy, z)] != gijl.map[gijl.src->cls(x, yz)]) {
                  out.push_back("associativity fails on " + std::to_string(i) + std::to_string(j) + std::to_string(k) +
                                std::to_string(l) + " at (" + a->name[x] + ", " + b->name[y] + ", " + c->name[z] + ")");
                  return out;
                }
              }
            }
        }
  return out;
}

// ---------------------------------------------------------------------------
// Total categories over [n]

struct WrrObject {
  FinFunctor h;  // D -> E
  FinFunctor p;  // E -> [n]
  int length() const { return p.tgt->nobj() - 1; }
};

namespace detail {

inline bool is_chain(const FinCategory& c) {
  for (int i = 0; i < c.nobj(); ++i)
    for (int j = 0; j < c.nobj(); ++j)
      if (static_cast<int>(c.hom(i, j).size()) != (i <= j ? 1 : 0)) return false;
  return true;
}

inline int chain_arrow(const FinCategory& c, int i, int j) { return c.hom(i, j).front(); }

}  // namespace detail

inline std::vector<std::string> validate_wrr(const WrrObject& w) {
  std::vector<std::string> out;
  for (auto& s : validate_category(*w.h.src)) out.push_back("D: " + s);
  for (auto& s : validate_category(*w.h.tgt)) out.push_back("E: " + s);
  if (!out.empty()) return out;
  if (!same_category(w.p.src, w.h.tgt)) {
    out.push_back("projection does not start at E");
    return out;
  }
  if (!detail::is_chain(*w.p.tgt)) {
    out.push_back("base is not a finite linear order");
    return out;
  }
  for (auto& s : validate_functor(w.h)) out.push_back("h: " + s);
  for (auto& s : validate_functor(w.p)) out.push_back("p: " + s);
  if (!out.empty()) return out;
  if (!is_bijective_on_objects(w.h)) out.push_back("h is not bijective on the objects of the fibers");
  const auto& D = *w.h.src;
  const auto& E = *w.h.tgt;
  const auto& B = *w.p.tgt;
  for (int i = 0; i < B.nobj(); ++i)
    for (int j = i + 1; j < B.nobj(); ++j) {
      int a = detail::chain_arrow(B, i, j);
      std::vector<int> hit(E.nmor(), 0);
      int nd = 0, ne = 0;
      for (int f = 0; f < D.nmor(); ++f)
        if (w.p.mo[w.h.mo[f]] == a) {
          ++nd;
          hit[w.h.mo[f]]++;
        }
      bool ok = true;
      for (int g = 0; g < E.nmor(); ++g)
        if (w.p.mo[g] == a) {
          ++ne;
          if (hit[g] != 1) ok = false;
        }
      if (!ok || nd != ne)
        out.push_back("h is not a bijection on morphisms over " + B.obj_name(i) + "->" + B.obj_name(j));
    }
  return out;
}

/// encode_lax output together with the embeddings of the pieces.
struct LaxEncoding {
  WrrObject w;
  std::vector<FinFunctor> incl_E, incl_D;        // E_i -> E, D_i -> D
  std::map<std::pair<int, int>, int> cross_base;  // first E morphism of M_ij
  std::vector<int> obj_base;                      // first E object of E_i

  const Cat& E() const { return w.h.tgt; }
  const Cat& D() const { return w.h.src; }
  int cross(int i, int j, int e) const { return cross_base.at({i, j}) + e; }
};

/// Glues the fibers and edges into D -> E -> [n].
inline LaxEncoding encode_lax(const LaxDiagram& d) {
  auto v = validate_lax(d);
  if (!v.empty()) throw StructuralError("encode_lax: " + v.front());
  const int n = d.n;
  LaxEncoding r;
  // kind of each total morphism: (i, j, local) with i == j for fiber morphisms
  std::vector<std::array<int, 3>> ekind, dkind;
  std::vector<std::string> eobj, dobj;
  std::vector<Morphism> emor, dmor;
  std::vector<int> eid, did, dbase(n + 1), dmbase(n + 1), embase(n + 1);
  std::vector<std::vector<int>> dinv(n + 1);
  for (int i = 0; i <= n; ++i) {
    const auto& Ei = *d.E(i);
    const auto& Di = *d.D(i);
    r.obj_base.push_back(static_cast<int>(eobj.size()));
    dbase[i] = static_cast<int>(dobj.size());
    for (auto& x : Ei.objects) eobj.push_back(std::to_string(i) + ":" + x);
    for (auto& x : Di.objects) dobj.push_back(std::to_string(i) + ":" + x);
    dinv[i].assign(Ei.nobj(), -1);
    for (int a = 0; a < Di.nobj(); ++a) dinv[i][d.vertex[i].ob[a]] = a;
  }
  for (int i = 0; i <= n; ++i) {
    const auto& Ei = *d.E(i);
    const auto& Di = *d.D(i);
    embase[i] = static_cast<int>(emor.size());
    for (int f = 0; f < Ei.nmor(); ++f) {
      emor.push_back({std::to_string(i) + ":" + Ei.mor_name(f), r.obj_base[i] + Ei.src(f), r.obj_base[i] + Ei.tgt(f)});
      ekind.push_back({i, i, f});
    }
    for (int x = 0; x < Ei.nobj(); ++x) eid.push_back(embase[i] + Ei.identity[x]);
    dmbase[i] = static_cast<int>(dmor.size());
    for (int f = 0; f < Di.nmor(); ++f) {
      dmor.push_back({std::to_string(i) + ":" + Di.mor_name(f), dbase[i] + Di.src(f), dbase[i] + Di.tgt(f)});
      dkind.push_back({i, i, f});
    }
    for (int x = 0; x < Di.nobj(); ++x) did.push_back(dmbase[i] + Di.identity[x]);
  }
  std::map<std::pair<int, int>, int> dcross;
  for (int i = 0; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j) {
      const Prof& M = d.M(i, j);
      r.cross_base[{i, j}] = static_cast<int>(emor.size());
      dcross[{i, j}] = static_cast<int>(dmor.size());
      std::string tag = std::to_string(i) + ">" + std::to_string(j) + ":";
      for (int e = 0; e < M->size(); ++e) {
        emor.push_back({tag + M->name[e], r.obj_base[i] + M->under[e], r.obj_base[j] + M->over[e]});
        ekind.push_back({i, j, e});
        dmor.push_back({tag + M->name[e], dbase[i] + dinv[i][M->under[e]], dbase[j] + dinv[j][M->over[e]]});
        dkind.push_back({i, j, e});
      }
    }
  // composition shared by E and D; fiber actions go through u_i on the D side
  auto glue = [&](const std::vector<std::array<int, 3>>& kind, const std::vector<int>& fbase,
                  const std::map<std::pair<int, int>, int>& cbase, bool onD) {
    return [&d, kind, fbase, cbase, onD](int g, int f) {
      auto [fi, fj, fl] = kind[f];
      auto [gi, gj, gl] = kind[g];
      if (fi == fj && gi == gj) {
        const auto& C = onD ? *d.D(fi) : *d.E(fi);
        return fbase[fi] + C.compose(gl, fl);
      }
      if (fi == fj) {
        int a = onD ? d.vertex[fi].mo[fl] : fl;
        return cbase.at({gi, gj}) + d.M(gi, gj)->lact(gl, a);
      }
      if (gi == gj) {
        int b = onD ? d.vertex[gi].mo[gl] : gl;
        return cbase.at({fi, fj}) + d.M(fi, fj)->ract(fl, b);
      }
      const auto& gam = d.gamma(fi, fj, gj);
      return cbase.at({fi, gj}) + gam.map[gam.src->cls(fl, gl)];
    };
  };
  Cat E = make_category(eobj, emor, eid, glue(ekind, embase, r.cross_base, false));
  Cat D = make_category(dobj, dmor, did, glue(dkind, dmbase, dcross, true));
  Cat B = cats::chain(n);
  r.w.h = {D, E, {}, {}};
  for (int i = 0; i <= n; ++i)
    for (int a = 0; a < d.D(i)->nobj(); ++a) r.w.h.ob.push_back(r.obj_base[i] + d.vertex[i].ob[a]);
  for (int f = 0; f < D->nmor(); ++f) {
    auto [i, j, l] = dkind[f];
    r.w.h.mo.push_back(i == j ? embase[i] + d.vertex[i].mo[l] : r.cross_base.at({i, j}) + l);
  }
  r.w.p = {E, B, {}, {}};
  for (int i = 0; i <= n; ++i)
    for (int x = 0; x < d.E(i)->nobj(); ++x) r.w.p.ob.push_back(i);
  for (int f = 0; f < E->nmor(); ++f) r.w.p.mo.push_back(detail::chain_arrow(*B, ekind[f][0], ekind[f][1]));
  for (int i = 0; i <= n; ++i) {
    FinFunctor ie{d.E(i), E, {}, {}}, id{d.D(i), D, {}, {}};
    for (int x = 0; x < d.E(i)->nobj(); ++x) ie.ob.push_back(r.obj_base[i] + x);
    for (int f = 0; f < d.E(i)->nmor(); ++f) ie.mo.push_back(embase[i] + f);
    for (int x = 0; x < d.D(i)->nobj(); ++x) id.ob.push_back(dbase[i] + x);
    for (int f = 0; f < d.D(i)->nmor(); ++f) id.mo.push_back(dmbase[i] + f);
    r.incl_E.push_back(ie);
    r.incl_D.push_back(id);
  }
  return r;
}

/// Reads fibers, edges and cells back off a total category over [n].
inline LaxDiagram decode_lax(const WrrObject& w) {
  auto v = validate_wrr(w);
  if (!v.empty()) throw StructuralError("decode_lax: " + v.front());
  const auto& D = *w.h.src;
  const auto& E = *w.h.tgt;
  const auto& B = *w.p.tgt;
  const int n = B.nobj() - 1;
  std::vector<std::vector<int>> eobjs(n + 1), dobjs(n + 1);
  std::vector<int> epos(E.nobj()), dpos(D.nobj());
  for (int x = 0; x < E.nobj(); ++x) {
    epos[x] = static_cast<int>(eobjs[w.p.ob[x]].size());
    eobjs[w.p.ob[x]].push_back(x);
  }
  // D-fiber objects listed in the order of their images
  std::vector<int> hinv(E.nobj());
  for (int a = 0; a < D.nobj(); ++a) hinv[w.h.ob[a]] = a;
  for (int i = 0; i <= n; ++i)
    for (int x : eobjs[i]) {
      dpos[hinv[x]] = static_cast<int>(dobjs[i].size());
      dobjs[i].push_back(hinv[x]);
    }
  LaxDiagram d;
  d.n = n;
  std::vector<std::vector<int>> emloc(n + 1, std::vector<int>(E.nmor(), -1));
  for (int i = 0; i <= n; ++i) {
    Cat Ei = full_subcategory(E, eobjs[i]);
    Cat Di = full_subcategory(D, dobjs[i]);
    int k = 0;
    for (int f = 0; f < E.nmor(); ++f)
      if (w.p.ob[E.src(f)] == i && w.p.ob[E.tgt(f)] == i) emloc[i][f] = k++;
    FinFunctor u{Di, Ei, {}, {}};
    for (int a = 0; a < Di->nobj(); ++a) u.ob.push_back(epos[w.h.ob[dobjs[i][a]]]);
    for (int f = 0; f < D.nmor(); ++f)
      if (w.p.ob[w.h.ob[D.src(f)]] == i && w.p.ob[w.h.ob[D.tgt(f)]] == i) u.mo.push_back(emloc[i][w.h.mo[f]]);
    d.vertex.push_back(u);
  }
  std::map<std::pair<int, int>, std::vector<int>> els;  // E morphisms over i -> j
  std::vector<int> elpos(E.nmor(), -1);
  for (int f = 0; f < E.nmor(); ++f) {
    int i = w.p.ob[E.src(f)], j = w.p.ob[E.tgt(f)];
    if (i == j) continue;
    auto& v2 = els[{i, j}];
    elpos[f] = static_cast<int>(v2.size());
    v2.push_back(f);
  }
  for (int i = 0; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j) {
      const auto& list = els[{i, j}];
      std::vector<std::string> names;
      std::vector<int> u, o;
      for (int f : list) {
        names.push_back(E.mor_name(f));
        u.push_back(epos[E.src(f)]);
        o.push_back(epos[E.tgt(f)]);
      }
      // local fiber morphism -> E morphism
      std::vector<int> gi, gj;
      for (int f = 0; f < E.nmor(); ++f) {
        if (emloc[i][f] >= 0) gi.push_back(f);
        if (emloc[j][f] >= 0) gj.push_back(f);
      }
      d.edge[{i, j}] = make_prof(
          d.E(i), d.E(j), names, u, o, [&](int e, int a) { return elpos[E.compose(list[e], gi[a])]; },
          [&](int e, int b) { return elpos[E.compose(gj[b], list[e])]; });
    }
  for (int i = 0; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j)
      for (int k = j + 1; k <= n; ++k) {
        const auto& a = els[{i, j}];
        const auto& b = els[{j, k}];
        d.set_cell(i, j, k, [&](int x, int y) { return elpos[E.compose(b[y], a[x])]; });
      }
  return d;
}

// ---------------------------------------------------------------------------
// Isomorphism witnesses built from name correspondences

struct IsoReport {
  bool ok = true;
  std::string witness;
  void fail(const std::string& s) {
    if (ok) witness = s;
    ok = false;
  }
};

namespace detail {

inline std::optional<FinFunctor> functor_by_name_maps(const Cat& a, const Cat& b,
                                                      const std::function<std::string(int)>& obj,
                                                      const std::function<std::string(int)>& mor, IsoReport& r,
                                                      const std::string& tag) {
  FinFunctor F{a, b, {}, {}};
  for (int x = 0; x < a->nobj(); ++x) {
    int y = b->object_index(obj(x));
    if (y < 0) {
      r.fail(tag + ": object " + a->obj_name(x) + " has no counterpart");
      return std::nullopt;
    }
    F.ob.push_back(y);
  }
  for (int f = 0; f < a->nmor(); ++f) {
    int g = b->morphism_index(mor(f));
    if (g < 0) {
      r.fail(tag + ": morphism " + a->mor_name(f) + " has no counterpart");
      return std::nullopt;
    }
    F.mo.push_back(g);
  }
  if (!validate_functor(F).empty() || !is_isomorphism(F)) {
    r.fail(tag + ": name correspondence is not an isomorphism");
    return std::nullopt;
  }
  return F;
}

inline std::string strip_tag(const std::string& s) {
  auto p = s.find(':');
  return p == std::string::npos ? s : s.substr(p + 1);
}

}  // namespace detail

/// Checks that d2 is d1 with every name prefixed by its vertex or edge tag, as
/// decode_lax(encode_lax(d1)) produces; the induced maps are verified to be
/// isomorphisms compatible with vertices, actions and cells.
inline IsoReport decode_encode_iso(const LaxDiagram& d1, const LaxDiagram& d2) {
  IsoReport r;
  if (d1.n != d2.n) {
    r.fail("lengths differ");
    return r;
  }
  std::vector<FinFunctor> fe, fd;
  for (int i = 0; i <= d1.n; ++i) {
    std::string pre = std::to_string(i) + ":";
    auto e = detail::functor_by_name_maps(
        d1.E(i), d2.E(i), [&](int x) { return pre + d1.E(i)->obj_name(x); },
        [&](int f) { return pre + d1.E(i)->mor_name(f); }, r, "E" + std::to_string(i));
    auto dd = detail::functor_by_name_maps(
        d1.D(i), d2.D(i), [&](int x) { return pre + d1.D(i)->obj_name(x); },
        [&](int f) { return pre + d1.D(i)->mor_name(f); }, r, "D" + std::to_string(i));
    if (!e || !dd) return r;
    // u2 o fd = fe o u1
    if (!functors_equal(compose_functors(d2.vertex[i], *dd), compose_functors(*e, d1.vertex[i])))
      r.fail("vertex " + std::to_string(i) + " does not commute with the isomorphisms");
    fe.push_back(*e);
    fd.push_back(*dd);
  }
  std::map<std::pair<int, int>, std::vector<int>> emap;
  for (auto& [ij, M1] : d1.edge) {
    const Prof& M2 = d2.M(ij.first, ij.second);
    std::string pre = std::to_string(ij.first) + ">" + std::to_string(ij.second) + ":";
    std::vector<int> m;
    for (int e = 0; e < M1->size(); ++e) {
      int t = M2->element_index(pre + M1->name[e]);
      if (t < 0) {
        r.fail("edge element " + M1->name[e] + " has no counterpart");
        return r;
      }
      m.push_back(t);
    }
    if (M1->size() != M2->size()) r.fail("edge sizes differ");
    const auto& Fi = fe[ij.first];
    const auto& Fj = fe[ij.second];
    for (int e = 0; e < M1->size(); ++e) {
      if (M2->under[m[e]] != Fi.ob[M1->under[e]] || M2->over[m[e]] != Fj.ob[M1->over[e]])
        r.fail("edge element " + M1->name[e] + " changes endpoints");
      for (int f : M1->src->in(M1->under[e]))
        if (m[M1->lact(e, f)] != M2->lact(m[e], Fi.mo[f])) r.fail("left action not preserved at " + M1->name[e]);
      for (int g : M1->tgt->out(M1->over[e]))
        if (m[M1->ract(e, g)] != M2->ract(m[e], Fj.mo[g])) r.fail("right action not preserved at " + M1->name[e]);
    }
    emap[ij] = m;
  }
  for (auto& [ijk, g1] : d1.cell) {
    auto [i, j, k] = ijk;
    const auto& g2 = d2.gamma(i, j, k);
    for (auto [x, y] : g1.src->coend->rep) {
      int lhs = emap[{i, k}][g1.map[g1.src->cls(x, y)]];
      int rhs = g2.map[g2.src->cls(emap[{i, j}][x], emap[{j, k}][y])];
      if (lhs != rhs) r.fail("cell " + std::to_string(i) + std::to_string(j) + std::to_string(k) + " not preserved");
    }
  }
  return r;
}

/// Checks that w2 is encode_lax(decode_lax(w1)): objects and fiber morphisms
/// match after prefixing, cross morphisms of E match by name and those of D
/// through h. The maps are verified to be isomorphisms over [n] commuting with h.
inline IsoReport encode_decode_iso(const WrrObject& w1, const WrrObject& w2) {
  IsoReport r;
  const auto& E1 = *w1.h.tgt;
  const auto& D1 = *w1.h.src;
  auto tag = [&](int i, int j) { return i == j ? std::to_string(i) + ":" : std::to_string(i) + ">" + std::to_string(j) + ":"; };
  auto e = detail::functor_by_name_maps(
      w1.h.tgt, w2.h.tgt, [&](int x) { return tag(w1.p.ob[x], w1.p.ob[x]) + E1.obj_name(x); },
      [&](int f) { return tag(w1.p.ob[E1.src(f)], w1.p.ob[E1.tgt(f)]) + E1.mor_name(f); }, r, "E");
  if (!e) return r;
  auto d = detail::functor_by_name_maps(
      w1.h.src, w2.h.src,
      [&](int x) {
        int i = w1.p.ob[w1.h.ob[x]];
        return tag(i, i) + D1.obj_name(x);
      },
      [&](int f) {
        int i = w1.p.ob[w1.h.ob[D1.src(f)]], j = w1.p.ob[w1.h.ob[D1.tgt(f)]];
        return tag(i, j) + (i == j ? D1.mor_name(f) : E1.mor_name(w1.h.mo[f]));
      },
      r, "D");
  if (!d) return r;
  if (!functors_equal(compose_functors(w2.h, *d), compose_functors(*e, w1.h))) r.fail("isomorphisms do not commute with h");
  for (int f = 0; f < E1.nmor(); ++f)
    if (w2.p.mo[e->mo[f]] != w1.p.mo[f]) {
      r.fail("isomorphism of E does not lie over [n]");
      break;
    }
  return r;
}

/// Unital diagram of a category over [n] (D = E, h = id) and its re-encoding.
struct UnitalRoundtrip {
  LaxDiagram diagram;
  LaxEncoding encoding;
  IsoReport iso;
};

inline UnitalRoundtrip unital_roundtrip(const FinFunctor& p) {
  WrrObject w{identity_functor(p.src), p};
  UnitalRoundtrip r{decode_lax(w), {}, {}};
  r.encoding = encode_lax(r.diagram);
  r.iso = encode_decode_iso(w, r.encoding.w);
  return r;
}

// ---------------------------------------------------------------------------
// Lax cocones

/// Modules F_i over E_i with actions alpha_ij: compose(F_i, M_ij) -> F_j.
struct LaxCocone {
  std::vector<Prof> F;
  std::map<std::pair<int, int>, ProfMorphism> alpha;
};

struct CoconeMorphism {
  std::vector<ProfMorphism> comp;
};

inline bool cocone_coherent(const LaxDiagram& d, const LaxCocone& c) {
  for (int i = 0; i <= d.n; ++i)
    for (int j = i + 1; j <= d.n; ++j)
      for (int k = j + 1; k <= d.n; ++k) {
        const auto& aij = c.alpha.at({i, j});
        const auto& ajk = c.alpha.at({j, k});
        const auto& aik = c.alpha.at({i, k});
        const auto& g = d.gamma(i, j, k);
        const Prof &Mij = d.M(i, j), &Mjk = d.M(j, k);
        for (int x = 0; x < c.F[i]->size(); ++x)
          for (int m1 = 0; m1 < Mij->size(); ++m1) {
            if (Mij->under[m1] != c.F[i]->over[x]) continue;
            int xm = aij.map[aij.src->cls(x, m1)];
            for (int m2 = 0; m2 < Mjk->size(); ++m2) {
              if (Mjk->under[m2] != Mij->over[m1]) continue;
              int lhs = aik.map[aik.src->cls(x, g.map[g.src->cls(m1, m2)])];
              int rhs = ajk.map[ajk.src->cls(xm, m2)];
              if (lhs != rhs) return false;
            }
          }
      }
  return true;
}

inline bool cocone_edge_commutes(const LaxDiagram& d, const LaxCocone& a, const LaxCocone& b, int i, int j,
                                 const ProfMorphism& phi_i, const ProfMorphism& phi_j) {
  (void)d;
  const auto& aa = a.alpha.at({i, j});
  const auto& bb = b.alpha.at({i, j});
  for (int c = 0; c < aa.src->size(); ++c) {
    auto [x, m] = aa.src->coend->rep[c];
    if (phi_j.map[aa.map[c]] != bb.map[bb.src->cls(phi_i.map[x], m)]) return false;
  }
  return true;
}

inline bool is_cocone_morphism(const LaxDiagram& d, const LaxCocone& a, const LaxCocone& b,
                               const std::vector<ProfMorphism>& phi) {
  for (int i = 0; i <= d.n; ++i)
    for (int j = i + 1; j <= d.n; ++j)
      if (!cocone_edge_commutes(d, a, b, i, j, phi[i], phi[j])) return false;
  return true;
}

inline std::vector<CoconeMorphism> cocone_homs(const LaxDiagram& d, const LaxCocone& a, const LaxCocone& b) {
  std::vector<std::vector<ProfMorphism>> per;
  for (int i = 0; i <= d.n; ++i) per.push_back(prof_nats(a.F[i], b.F[i]));
  std::vector<CoconeMorphism> out;
  std::vector<const ProfMorphism*> cur(d.n + 1);
  // each edge is checked as soon as both of its ends are chosen
  std::function<void(int)> rec = [&](int j) {
    if (j > d.n) {
      CoconeMorphism h;
      for (auto* p : cur) h.comp.push_back(*p);
      out.push_back(std::move(h));
      return;
    }
    for (auto& p : per[j]) {
      bool ok = true;
      for (int i = 0; i < j && ok; ++i) ok = cocone_edge_commutes(d, a, b, i, j, *cur[i], p);
      if (!ok) continue;
      cur[j] = &p;
      rec(j + 1);
    }
  };
  rec(0);
  return out;
}

/// Every lax cocone with module fibers <= cap, one per isomorphism class.
inline std::vector<LaxCocone> lax_cocones(const LaxDiagram& d, int cap) {
  std::vector<std::vector<Prof>> mods;
  for (int i = 0; i <= d.n; ++i) mods.push_back(enumerate_modules(d.E(i), cap));
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i <= d.n; ++i)
    for (int j = i + 1; j <= d.n; ++j) edges.push_back({i, j});
  std::vector<LaxCocone> out;
  std::vector<Prof> F(d.n + 1);
  std::function<void(int)> pick = [&](int i) {
    if (i <= d.n) {
      for (auto& m : mods[i]) {
        F[i] = m;
        pick(i + 1);
      }
      return;
    }
    std::vector<std::vector<ProfMorphism>> choices;
    for (auto [a, b] : edges) choices.push_back(prof_nats(compose_prof(F[a], d.M(a, b)), F[b]));
    std::vector<std::vector<ProfMorphism>> autos;
    bool autos_ready = false;
    std::vector<LaxCocone> here;
    LaxCocone c{F, {}};
    std::function<void(size_t)> rec = [&](size_t e) {
      if (e < edges.size()) {
        for (auto& a : choices[e]) {
          c.alpha[edges[e]] = a;
          rec(e + 1);
        }
        return;
      }
      if (!cocone_coherent(d, c)) return;
      if (!autos_ready) {
        for (auto& f : F) {
          autos.emplace_back();
          for (auto& phi : prof_nats(f, f))
            if (is_bijective(phi)) autos.back().push_back(phi);
        }
        autos_ready = true;
      }
      std::vector<ProfMorphism> cur;
      bool dup = false;
      std::function<void(const LaxCocone&, int)> any_iso = [&](const LaxCocone& prev, int i2) {
        if (dup) return;
        if (i2 > d.n) {
          if (is_cocone_morphism(d, prev, c, cur)) dup = true;
          return;
        }
        for (auto& phi : autos[i2]) {
          cur.push_back(phi);
          any_iso(prev, i2 + 1);
          cur.pop_back();
          if (dup) return;
        }
      };
      for (auto& prev : here) {
        any_iso(prev, 0);
        if (dup) return;
      }
      here.push_back(c);
    };
    rec(0);
    out.insert(out.end(), here.begin(), here.end());
  };
  pick(0);
  return out;
}

/// Modules over the total category of the encoding, one per iso class.
inline std::vector<Prof> modules_over_total(const LaxEncoding& enc, int cap) { return enumerate_modules(enc.E(), cap); }

/// The module over the total category glued from a cocone.
inline Prof cocone_to_module(const LaxDiagram& d, const LaxEncoding& enc, const LaxCocone& c) {
  const Cat& E = enc.E();
  std::vector<int> sizes(E->nobj(), 0), owner(E->nobj());
  std::vector<FiberIndex> fi;
  for (int i = 0; i <= d.n; ++i) {
    fi.push_back(fiber_index(*c.F[i]));
    for (int x = 0; x < d.E(i)->nobj(); ++x) {
      sizes[enc.obj_base[i] + x] = static_cast<int>(fi[i].els[x].size());
      owner[enc.obj_base[i] + x] = i;
    }
  }
  // total morphism -> (i, j, local)
  std::vector<std::array<int, 3>> kind(E->nmor());
  for (int i = 0; i <= d.n; ++i)
    for (int f = 0; f < d.E(i)->nmor(); ++f) kind[enc.incl_E[i].mo[f]] = {i, i, f};
  for (auto& [ij, base] : enc.cross_base)
    for (int e = 0; e < d.M(ij.first, ij.second)->size(); ++e) kind[base + e] = {ij.first, ij.second, e};
  return make_module(E, sizes, [&](int f, int a) {
    auto [i, j, l] = kind[f];
    int x = E->src(f) - enc.obj_base[i];
    int el = fi[i].els[x][a];
    if (i == j) return fi[i].pos[c.F[i]->ract(el, l)];
    const auto& al = c.alpha.at({i, j});
    return fi[j].pos[al.map[al.src->cls(el, l)]];
  });
}

/// Restricts a module over the total category to a cocone.
inline LaxCocone module_to_cocone(const LaxDiagram& d, const LaxEncoding& enc, const Prof& G) {
  LaxCocone c;
  auto gi = fiber_index(*G);
  for (int i = 0; i <= d.n; ++i) c.F.push_back(restrict_module(G, enc.incl_E[i]));
  for (int i = 0; i <= d.n; ++i)
    for (int j = i + 1; j <= d.n; ++j) {
      Prof FM = compose_prof(c.F[i], d.M(i, j));
      auto fj = fiber_index(*c.F[j]);
      auto fi = fiber_index(*c.F[i]);
      ProfMorphism a{FM, c.F[j], {}};
      for (auto [x, m] : FM->coend->rep) {
        int obj = enc.obj_base[i] + c.F[i]->over[x];
        int g = gi.els[obj][fi.pos[x]];
        int t = G->ract(g, enc.cross(i, j, m));
        a.map.push_back(fj.els[d.M(i, j)->over[m]][gi.pos[t]]);
      }
      c.alpha[{i, j}] = a;
    }
  return c;
}

/// Equivalence between lax cocones and modules over the total category.
inline EquivalenceReport colimit_check(const LaxDiagram& d, int cap) {
  LaxEncoding enc = encode_lax(d);
  ConcreteCategory<LaxCocone, CoconeMorphism> A;
  A.objects = lax_cocones(d, cap);
  A.hom = [&](const LaxCocone& a, const LaxCocone& b) { return cocone_homs(d, a, b); };
  A.compose = [](const CoconeMorphism& g, const CoconeMorphism& f) {
    CoconeMorphism h;
    for (size_t i = 0; i < f.comp.size(); ++i) h.comp.push_back(compose_morphisms(g.comp[i], f.comp[i]));
    return h;
  };
  A.equal = [](const CoconeMorphism& a, const CoconeMorphism& b) {
    for (size_t i = 0; i < a.comp.size(); ++i)
      if (a.comp[i].map != b.comp[i].map) return false;
    return true;
  };
  A.invertible = [](const CoconeMorphism& a) {
    for (auto& p : a.comp)
      if (!is_bijective(p)) return false;
    return true;
  };
  ConcreteCategory<Prof, ProfMorphism> B;
  B.objects = modules_over_total(enc, cap);
  B.hom = [](const Prof& a, const Prof& b) { return prof_nats(a, b); };
  B.compose = [](const ProfMorphism& g, const ProfMorphism& f) { return compose_morphisms(g, f); };
  B.equal = [](const ProfMorphism& a, const ProfMorphism& b) { return a.map == b.map; };
  B.invertible = [](const ProfMorphism& a) { return is_bijective(a); };
  B.key = [](const ProfMorphism& a) { return a.map; };
  // object translations, memoized by address (every list below outlives the check)
  std::map<const void*, Prof> to_module;
  std::map<const void*, LaxCocone> to_cocone;
  auto module_of = [&](const LaxCocone& c) -> const Prof& {
    auto it = to_module.find(&c);
    if (it == to_module.end()) it = to_module.emplace(&c, cocone_to_module(d, enc, c)).first;
    return it->second;
  };
  auto cocone_of = [&](const Prof& G) -> const LaxCocone& {
    auto it = to_cocone.find(&G);
    if (it == to_cocone.end()) it = to_cocone.emplace(&G, module_to_cocone(d, enc, G)).first;
    return it->second;
  };
  ConcreteFunctor<LaxCocone, CoconeMorphism, Prof, ProfMorphism> phi;
  phi.ob = [&](const LaxCocone& c) { return cocone_to_module(d, enc, c); };
  // positional correspondence between the fibers of a cocone and of a module over the total category
  struct Link {
    std::vector<std::pair<int, int>> origin;  // module element -> (vertex, element)
    std::vector<std::vector<int>> to_total;   // (vertex, element) -> module element
  };
  std::map<std::pair<const void*, const void*>, Link> links;
  auto link = [&](const LaxCocone& c, const Prof& G) -> const Link& {
    auto key = std::make_pair(static_cast<const void*>(&c), static_cast<const void*>(G.get()));
    auto it = links.find(key);
    if (it != links.end()) return it->second;
    Link l;
    l.origin.assign(G->size(), {-1, -1});
    FiberIndex fg = fiber_index(*G);
    for (int i = 0; i <= d.n; ++i) {
      FiberIndex fi = fiber_index(*c.F[i]);
      l.to_total.emplace_back(c.F[i]->size());
      for (int e = 0; e < c.F[i]->size(); ++e) {
        int g = fg.els[enc.obj_base[i] + c.F[i]->over[e]][fi.pos[e]];
        l.to_total[i][e] = g;
        l.origin[g] = {i, e};
      }
    }
    return links.emplace(key, std::move(l)).first->second;
  };
  phi.mor = [&](const CoconeMorphism& h, const LaxCocone& a, const LaxCocone& b) {
    const Prof& Ga = module_of(a);
    const Prof& Gb = module_of(b);
    const Link& la = link(a, Ga);
    const Link& lb = link(b, Gb);
    ProfMorphism k{Ga, Gb, std::vector<int>(Ga->size())};
    for (int g = 0; g < Ga->size(); ++g) {
      auto [i, e] = la.origin[g];
      k.map[g] = lb.to_total[i][h.comp[i].map[e]];
    }
    return k;
  };
  ConcreteFunctor<Prof, ProfMorphism, LaxCocone, CoconeMorphism> psi;
  psi.ob = [&](const Prof& G) { return module_to_cocone(d, enc, G); };
  psi.mor = [&](const ProfMorphism& k, const Prof& a, const Prof& b) {
    const LaxCocone& ca = cocone_of(a);
    const LaxCocone& cb = cocone_of(b);
    const Link& la = link(ca, a);
    const Link& lb = link(cb, b);
    CoconeMorphism h;
    for (int i = 0; i <= d.n; ++i) {
      ProfMorphism m{ca.F[i], cb.F[i], std::vector<int>(ca.F[i]->size())};
      for (int e = 0; e < ca.F[i]->size(); ++e) m.map[e] = lb.origin[k.map[la.to_total[i][e]]].second;
      h.comp.push_back(std::move(m));
    }
    return h;
  };
  std::function<CoconeMorphism(const LaxCocone&, const LaxCocone&)> eta = [](const LaxCocone& a, const LaxCocone& b) {
    CoconeMorphism h;
    for (size_t i = 0; i < a.F.size(); ++i) h.comp.push_back(positional_map(a.F[i], b.F[i]));
    return h;
  };
  std::function<ProfMorphism(const Prof&, const Prof&)> eps = [](const Prof& a, const Prof& b) {
    return positional_map(a, b);
  };
  auto r = check_equivalence(A, B, phi, psi, eta, eps);
  // the unit and counit must also be morphisms of their categories
  if (r.ok)
    for (auto& c : A.objects) {
      LaxCocone back = psi.ob(phi.ob(c));
      if (!is_cocone_morphism(d, c, back, eta(c, back).comp)) {
        r.fail("unit component is not a cocone morphism");
        break;
      }
    }
  if (r.ok)
    for (auto& G : B.objects) {
      Prof back = phi.ob(psi.ob(G));
      if (!validate_prof_morphism(eps(back, G)).empty()) {
        r.fail("counit component is not equivariant");
        break;
      }
    }
  return r;
}

// ---------------------------------------------------------------------------
// Contracting fibers

struct Collapsed {
  Cat cat;
  FinFunctor over;      // to [n]
  FinFunctor quotient;  // E -> cat
  Quotient q;
};

/// Contracts the images of the D-fiber morphisms, which must be invertible in E.
inline Collapsed collapse_fibers(const WrrObject& w, int bound) {
  auto v = validate_wrr(w);
  if (!v.empty()) throw StructuralError("collapse_fibers: " + v.front());
  const auto& D = *w.h.src;
  const auto& E = *w.h.tgt;
  std::vector<int> parent(E.nobj());
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
  std::vector<int> contracted;
  for (int f = 0; f < D.nmor(); ++f) {
    int g = w.h.mo[f];
    if (w.p.ob[E.src(g)] != w.p.ob[E.tgt(g)] || E.is_identity(g)) continue;
    if (!is_iso(E, g)) throw StructuralError("collapse_fibers: image of " + D.mor_name(f) + " is not invertible");
    contracted.push_back(g);
    int a = find(E.src(g)), b = find(E.tgt(g));
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
  Presentation p;
  std::vector<int> comp(E.nobj(), -1), rep;
  for (int x = 0; x < E.nobj(); ++x)
    if (find(x) == x) {
      comp[x] = p.add_object(E.obj_name(x));
      rep.push_back(x);
    }
  for (int x = 0; x < E.nobj(); ++x) comp[x] = comp[find(x)];
  auto word = p.add_category(E, comp);
  for (int g : contracted)
    if (!word[g].empty()) p.relate(comp[E.src(g)], word[g], {});
  Collapsed r;
  r.q = enumerate_category(p, bound);
  r.cat = r.q.cat;
  const Cat& B = w.p.tgt;
  r.over = {r.cat, B, {}, {}};
  for (int c = 0; c < r.cat->nobj(); ++c) r.over.ob.push_back(w.p.ob[rep[c]]);
  // generators were added in the order of generate(E)
  auto gens = generate(E).gens;
  for (int f = 0; f < r.cat->nmor(); ++f) {
    int cur = B->identity[r.over.ob[r.cat->src(f)]];
    for (int s : r.q.word[f]) cur = B->compose(w.p.mo[gens[s]], cur);
    r.over.mo.push_back(cur);
  }
  r.quotient = {w.h.tgt, r.cat, comp, {}};
  for (int f = 0; f < E.nmor(); ++f) r.quotient.mo.push_back(r.q.eval(comp[E.src(f)], word[f]));
  return r;
}

}  // namespace corr
