// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace corr {

/// Malformed input: dangling references, duplicate names, type mismatches
/// between a value and the category it claims to live in.
class StructuralError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A bounded enumeration ran out of room before closing.
class Unsaturated : public std::runtime_error {
 public:
  explicit Unsaturated(int bound, const std::string& what = "")
      : std::runtime_error("unsaturated at bound " + std::to_string(bound) +
                           (what.empty() ? "" : ": " + what)),
        bound(bound) {}
  int bound;
};

struct Morphism {
  std::string name;
  int src = -1;
  int tgt = -1;
};

class FinCategory {
 public:
  std::vector<std::string> objects;
  std::vector<Morphism> morphisms;
  std::vector<int> identity;
  // table[g * nmor + f] = g o f, or -1 when undefined
  std::vector<int> table;

  int nobj() const { return static_cast<int>(objects.size()); }
  int nmor() const { return static_cast<int>(morphisms.size()); }
  int src(int f) const { return morphisms[f].src; }
  int tgt(int f) const { return morphisms[f].tgt; }
  int compose(int g, int f) const { return table[static_cast<size_t>(g) * nmor() + f]; }
  bool composable(int g, int f) const { return tgt(f) == src(g); }
  bool is_identity(int f) const { return identity[src(f)] == f; }
  const std::string& obj_name(int x) const { return objects[x]; }
  const std::string& mor_name(int f) const { return morphisms[f].name; }

  const std::vector<int>& hom(int x, int y) const {
    return homs_[static_cast<size_t>(x) * nobj() + y];
  }
  const std::vector<int>& out(int x) const { return out_[x]; }
  const std::vector<int>& in(int x) const { return in_[x]; }

  int object_index(const std::string& n) const {
    auto it = obj_ix_.find(n);
    return it == obj_ix_.end() ? -1 : it->second;
  }
  int morphism_index(const std::string& n) const {
    auto it = mor_ix_.find(n);
    return it == mor_ix_.end() ? -1 : it->second;
  }

  /// Rebuild name indices and hom lists. Call after filling the tables.
  void reindex() {
    obj_ix_.clear();
    mor_ix_.clear();
    for (int i = 0; i < nobj(); ++i) obj_ix_[objects[i]] = i;
    for (int i = 0; i < nmor(); ++i) mor_ix_[morphisms[i].name] = i;
    homs_.assign(static_cast<size_t>(nobj()) * nobj(), {});
    out_.assign(nobj(), {});
    in_.assign(nobj(), {});
    for (int f = 0; f < nmor(); ++f) {
      homs_[static_cast<size_t>(src(f)) * nobj() + tgt(f)].push_back(f);
      out_[src(f)].push_back(f);
      in_[tgt(f)].push_back(f);
    }
  }

 private:
  std::unordered_map<std::string, int> obj_ix_, mor_ix_;
  std::vector<std::vector<int>> homs_;
  std::vector<std::vector<int>> out_, in_;
};

using Cat = std::shared_ptr<const FinCategory>;

/// Builds a category from names, reporting dangling references as StructuralError.
class CategoryBuilder {
 public:
  CategoryBuilder& object(const std::string& x) {
    if (obj_.count(x)) throw StructuralError("duplicate object '" + x + "'");
    obj_[x] = static_cast<int>(c_.objects.size());
    c_.objects.push_back(x);
    return *this;
  }
  CategoryBuilder& morphism(const std::string& f, const std::string& s, const std::string& t) {
    if (mor_.count(f)) throw StructuralError("duplicate morphism '" + f + "'");
    mor_[f] = static_cast<int>(c_.morphisms.size());
    c_.morphisms.push_back({f, obj(s), obj(t)});
    return *this;
  }
  CategoryBuilder& identity(const std::string& x, const std::string& f) {
    ids_.emplace_back(obj(x), mor(f));
    return *this;
  }
  CategoryBuilder& compose(const std::string& g, const std::string& f, const std::string& h) {
    comps_.push_back({mor(g), mor(f), mor(h)});
    return *this;
  }
  Cat build() {
    auto c = std::make_shared<FinCategory>(c_);
    c->identity.assign(c->nobj(), -1);
    for (auto [x, f] : ids_) {
      if (c->identity[x] != -1 && c->identity[x] != f)
        throw StructuralError("object '" + c->objects[x] + "' has two identities");
      c->identity[x] = f;
    }
    for (int x = 0; x < c->nobj(); ++x)
      if (c->identity[x] == -1) throw StructuralError("object '" + c->objects[x] + "' has no identity");
    c->table.assign(static_cast<size_t>(c->nmor()) * c->nmor(), -1);
    for (auto& r : comps_) {
      int& slot = c->table[static_cast<size_t>(r[0]) * c->nmor() + r[1]];
      if (slot != -1 && slot != r[2])
        throw StructuralError("conflicting composites for " + c->morphisms[r[0]].name + " o " +
                              c->morphisms[r[1]].name);
      slot = r[2];
    }
    c->reindex();
    return c;
  }

 private:
  int obj(const std::string& x) const {
    auto it = obj_.find(x);
    if (it == obj_.end()) throw StructuralError("unknown object '" + x + "'");
    return it->second;
  }
  int mor(const std::string& f) const {
    auto it = mor_.find(f);
    if (it == mor_.end()) throw StructuralError("unknown morphism '" + f + "'");
    return it->second;
  }
  FinCategory c_;
  std::unordered_map<std::string, int> obj_, mor_;
  std::vector<std::pair<int, int>> ids_;
  std::vector<std::array<int, 3>> comps_;
};

/// Category from index data and a composition rule on composable pairs.
inline Cat make_category(std::vector<std::string> objects, std::vector<Morphism> morphisms,
                         std::vector<int> identity,
                         const std::function<int(int, int)>& comp) {
  auto c = std::make_shared<FinCategory>();
  c->objects = std::move(objects);
  c->morphisms = std::move(morphisms);
  c->identity = std::move(identity);
  const int m = c->nmor();
  c->table.assign(static_cast<size_t>(m) * m, -1);
  for (int g = 0; g < m; ++g)
    for (int f = 0; f < m; ++f)
      if (c->morphisms[f].tgt == c->morphisms[g].src) c->table[static_cast<size_t>(g) * m + f] = comp(g, f);
  c->reindex();
  return c;
}

/// Every violated category axiom, in a stable order. Empty means valid.
inline std::vector<std::string> validate_category(const FinCategory& c) {
  std::vector<std::string> out;
  const int n = c.nobj(), m = c.nmor();
  if (static_cast<int>(c.identity.size()) != n) {
    out.push_back("identity table has wrong size");
    return out;
  }
  for (int f = 0; f < m; ++f)
    if (c.src(f) < 0 || c.src(f) >= n || c.tgt(f) < 0 || c.tgt(f) >= n) {
      out.push_back("morphism " + c.mor_name(f) + " has an endpoint out of range");
      return out;
    }
  bool ids_ok = true;
  for (int x = 0; x < n; ++x) {
    int i = c.identity[x];
    if (i < 0 || i >= m) {
      out.push_back("identity of " + c.obj_name(x) + " out of range");
      ids_ok = false;
      continue;
    }
    if (c.src(i) != x || c.tgt(i) != x)
      out.push_back("identity " + c.mor_name(i) + " of " + c.obj_name(x) + " is not an endomorphism of it");
  }
  bool typed = true;
  for (int g = 0; g < m; ++g)
    for (int f = 0; f < m; ++f) {
      int h = c.compose(g, f);
      if (!c.composable(g, f)) {
        if (h != -1) {
          out.push_back("typing: " + c.mor_name(g) + " o " + c.mor_name(f) + " defined for non-composable pair");
          typed = false;
        }
        continue;
      }
      if (h < 0 || h >= m) {
        out.push_back("composite " + c.mor_name(g) + " o " + c.mor_name(f) + " undefined");
        typed = false;
        continue;
      }
      if (c.src(h) != c.src(f) || c.tgt(h) != c.tgt(g)) {
        out.push_back("typing: " + c.mor_name(g) + " o " + c.mor_name(f) + " = " + c.mor_name(h) +
                      " has wrong source or target");
        typed = false;
      }
    }
  if (!typed || !ids_ok) return out;
  for (int f = 0; f < m; ++f) {
    if (c.compose(c.identity[c.tgt(f)], f) != f) out.push_back("left unit fails at " + c.mor_name(f));
    if (c.compose(f, c.identity[c.src(f)]) != f) out.push_back("right unit fails at " + c.mor_name(f));
  }
  for (int f = 0; f < m; ++f)
    for (int g : c.out(c.tgt(f)))
      for (int h : c.out(c.tgt(g)))
        if (c.compose(h, c.compose(g, f)) != c.compose(c.compose(h, g), f))
          out.push_back("associativity fails at (" + c.mor_name(h) + ", " + c.mor_name(g) + ", " +
                        c.mor_name(f) + ")");
  return out;
}

inline bool is_valid(const FinCategory& c) { return validate_category(c).empty(); }

/// Two-sided inverse of f, or -1.
inline int inverse_of(const FinCategory& c, int f) {
  for (int g : c.hom(c.tgt(f), c.src(f)))
    if (c.compose(g, f) == c.identity[c.src(f)] && c.compose(f, g) == c.identity[c.tgt(f)]) return g;
  return -1;
}

inline bool is_iso(const FinCategory& c, int f) { return inverse_of(c, f) != -1; }

/// Sub-category on a set of morphisms closed under composition and containing identities.
inline Cat subcategory(const FinCategory& c, const std::vector<int>& keep) {
  std::vector<int> pos(c.nmor(), -1);
  std::vector<Morphism> mors;
  for (int f : keep) {
    pos[f] = static_cast<int>(mors.size());
    mors.push_back(c.morphisms[f]);
  }
  std::vector<int> ids(c.nobj());
  for (int x = 0; x < c.nobj(); ++x) ids[x] = pos[c.identity[x]];
  return make_category(c.objects, mors, ids, [&](int g, int f) { return pos[c.compose(keep[g], keep[f])]; });
}

/// Maximal subgroupoid.
inline Cat core(const FinCategory& c) {
  std::vector<int> keep;
  for (int f = 0; f < c.nmor(); ++f)
    if (is_iso(c, f)) keep.push_back(f);
  return subcategory(c, keep);
}

inline bool is_groupoid(const FinCategory& c) {
  for (int f = 0; f < c.nmor(); ++f)
    if (!is_iso(c, f)) return false;
  return true;
}

/// No non-identity isomorphisms.
inline bool is_gaunt(const FinCategory& c) {
  for (int f = 0; f < c.nmor(); ++f)
    if (!c.is_identity(f) && is_iso(c, f)) return false;
  return true;
}

inline Cat full_subcategory(const FinCategory& c, const std::vector<int>& objs) {
  std::vector<int> opos(c.nobj(), -1);
  std::vector<std::string> names;
  for (int x : objs) {
    opos[x] = static_cast<int>(names.size());
    names.push_back(c.objects[x]);
  }
  std::vector<int> mpos(c.nmor(), -1), back;
  std::vector<Morphism> mors;
  for (int f = 0; f < c.nmor(); ++f)
    if (opos[c.src(f)] >= 0 && opos[c.tgt(f)] >= 0) {
      mpos[f] = static_cast<int>(mors.size());
      back.push_back(f);
      mors.push_back({c.mor_name(f), opos[c.src(f)], opos[c.tgt(f)]});
    }
  std::vector<int> ids;
  for (int x : objs) ids.push_back(mpos[c.identity[x]]);
  return make_category(names, mors, ids, [&](int g, int f) { return mpos[c.compose(back[g], back[f])]; });
}

inline Cat opposite(const FinCategory& c) {
  std::vector<Morphism> mors;
  for (auto& f : c.morphisms) mors.push_back({f.name, f.tgt, f.src});
  return make_category(c.objects, mors, c.identity, [&](int g, int f) { return c.compose(f, g); });
}

inline Cat product(const FinCategory& a, const FinCategory& b) {
  std::vector<std::string> objs;
  for (auto& x : a.objects)
    for (auto& y : b.objects) objs.push_back("(" + x + "," + y + ")");
  std::vector<Morphism> mors;
  const int nb = b.nobj(), mb = b.nmor();
  for (int f = 0; f < a.nmor(); ++f)
    for (int g = 0; g < mb; ++g)
      mors.push_back({"(" + a.mor_name(f) + "," + b.mor_name(g) + ")", a.src(f) * nb + b.src(g),
                      a.tgt(f) * nb + b.tgt(g)});
  std::vector<int> ids;
  for (int x = 0; x < a.nobj(); ++x)
    for (int y = 0; y < nb; ++y) ids.push_back(a.identity[x] * mb + b.identity[y]);
  return make_category(objs, mors, ids, [&](int g, int f) {
    return a.compose(g / mb, f / mb) * mb + b.compose(g % mb, f % mb);
  });
}

/// Disjoint union, names prefixed by the given tags.
inline Cat coproduct(const FinCategory& a, const FinCategory& b, const std::string& ta = "0.",
                     const std::string& tb = "1.") {
  std::vector<std::string> objs;
  for (auto& x : a.objects) objs.push_back(ta + x);
  for (auto& x : b.objects) objs.push_back(tb + x);
  std::vector<Morphism> mors;
  for (auto& f : a.morphisms) mors.push_back({ta + f.name, f.src, f.tgt});
  for (auto& f : b.morphisms) mors.push_back({tb + f.name, f.src + a.nobj(), f.tgt + a.nobj()});
  std::vector<int> ids = a.identity;
  for (int i : b.identity) ids.push_back(i + a.nmor());
  const int ma = a.nmor();
  return make_category(objs, mors, ids, [&](int g, int f) {
    if (g < ma) return a.compose(g, f);
    return b.compose(g - ma, f - ma) + ma;
  });
}

// ---------------------------------------------------------------------------
// Functors and natural transformations

struct FinFunctor {
  Cat src, tgt;
  std::vector<int> ob;
  std::vector<int> mo;

  int operator()(int f) const { return mo[f]; }
};

inline std::vector<std::string> validate_functor(const FinFunctor& F) {
  std::vector<std::string> out;
  const auto& A = *F.src;
  const auto& B = *F.tgt;
  if (static_cast<int>(F.ob.size()) != A.nobj() || static_cast<int>(F.mo.size()) != A.nmor()) {
    out.push_back("functor tables have the wrong size");
    return out;
  }
  for (int x = 0; x < A.nobj(); ++x)
    if (F.ob[x] < 0 || F.ob[x] >= B.nobj()) out.push_back("object " + A.obj_name(x) + " maps out of range");
  for (int f = 0; f < A.nmor(); ++f)
    if (F.mo[f] < 0 || F.mo[f] >= B.nmor()) out.push_back("morphism " + A.mor_name(f) + " maps out of range");
  if (!out.empty()) return out;
  for (int f = 0; f < A.nmor(); ++f)
    if (B.src(F.mo[f]) != F.ob[A.src(f)] || B.tgt(F.mo[f]) != F.ob[A.tgt(f)])
      out.push_back("morphism " + A.mor_name(f) + " maps to " + B.mor_name(F.mo[f]) + " with wrong endpoints");
  for (int x = 0; x < A.nobj(); ++x)
    if (F.mo[A.identity[x]] != B.identity[F.ob[x]]) out.push_back("identity of " + A.obj_name(x) + " not preserved");
  if (!out.empty()) return out;
  for (int g = 0; g < A.nmor(); ++g)
    for (int f : A.in(A.src(g)))
      if (F.mo[A.compose(g, f)] != B.compose(F.mo[g], F.mo[f]))
        out.push_back("composite " + A.mor_name(g) + " o " + A.mor_name(f) + " not preserved");
  return out;
}

inline FinFunctor identity_functor(const Cat& c) {
  FinFunctor F{c, c, {}, {}};
  for (int x = 0; x < c->nobj(); ++x) F.ob.push_back(x);
  for (int f = 0; f < c->nmor(); ++f) F.mo.push_back(f);
  return F;
}

/// g o f
inline FinFunctor compose_functors(const FinFunctor& g, const FinFunctor& f) {
  if (f.tgt != g.src && f.tgt->objects != g.src->objects)
    throw StructuralError("functors are not composable");
  FinFunctor h{f.src, g.tgt, {}, {}};
  for (int x : f.ob) h.ob.push_back(g.ob[x]);
  for (int m : f.mo) h.mo.push_back(g.mo[m]);
  return h;
}

inline bool functors_equal(const FinFunctor& a, const FinFunctor& b) { return a.ob == b.ob && a.mo == b.mo; }

inline bool is_bijective_on_objects(const FinFunctor& F) {
  if (F.src->nobj() != F.tgt->nobj()) return false;
  std::vector<char> hit(F.tgt->nobj(), 0);
  for (int y : F.ob) {
    if (hit[y]) return false;
    hit[y] = 1;
  }
  return true;
}

inline bool is_surjective_on_objects(const FinFunctor& F) {
  std::vector<char> hit(F.tgt->nobj(), 0);
  for (int y : F.ob) hit[y] = 1;
  return std::all_of(hit.begin(), hit.end(), [](char c) { return c != 0; });
}

/// Functor given by name tables.
inline FinFunctor functor_by_names(const Cat& a, const Cat& b, const std::map<std::string, std::string>& obs,
                                   const std::map<std::string, std::string>& mors) {
  FinFunctor F{a, b, std::vector<int>(a->nobj(), -1), std::vector<int>(a->nmor(), -1)};
  for (auto& [x, y] : obs) {
    int i = a->object_index(x), j = b->object_index(y);
    if (i < 0) throw StructuralError("unknown source object '" + x + "'");
    if (j < 0) throw StructuralError("unknown target object '" + y + "'");
    F.ob[i] = j;
  }
  for (auto& [f, g] : mors) {
    int i = a->morphism_index(f), j = b->morphism_index(g);
    if (i < 0) throw StructuralError("unknown source morphism '" + f + "'");
    if (j < 0) throw StructuralError("unknown target morphism '" + g + "'");
    F.mo[i] = j;
  }
  for (int x = 0; x < a->nobj(); ++x)
    if (F.ob[x] < 0) throw StructuralError("object '" + a->obj_name(x) + "' has no image");
  for (int f = 0; f < a->nmor(); ++f)
    if (F.mo[f] < 0) throw StructuralError("morphism '" + a->mor_name(f) + "' has no image");
  return F;
}

struct NatTransf {
  FinFunctor F, G;
  std::vector<int> comp;
};

inline bool parallel(const FinFunctor& F, const FinFunctor& G) {
  return F.src->objects == G.src->objects && F.tgt->objects == G.tgt->objects &&
         F.src->nmor() == G.src->nmor() && F.tgt->nmor() == G.tgt->nmor();
}

inline bool is_natural(const NatTransf& a) {
  const auto& A = *a.F.src;
  const auto& B = *a.F.tgt;
  for (int x = 0; x < A.nobj(); ++x) {
    int c = a.comp[x];
    if (c < 0 || B.src(c) != a.F.ob[x] || B.tgt(c) != a.G.ob[x]) return false;
  }
  for (int f = 0; f < A.nmor(); ++f)
    if (B.compose(a.G.mo[f], a.comp[A.src(f)]) != B.compose(a.comp[A.tgt(f)], a.F.mo[f])) return false;
  return true;
}

/// All natural transformations F => G.
inline std::vector<NatTransf> nat_set(const FinFunctor& F, const FinFunctor& G) {
  if (!parallel(F, G)) throw StructuralError("nat_set: functors are not parallel");
  const auto& A = *F.src;
  const auto& B = *F.tgt;
  const int n = A.nobj();
  std::vector<NatTransf> out;
  std::vector<int> comp(n, -1);
  // constraints checked as soon as both endpoint components are chosen
  std::vector<std::vector<int>> ready(n);
  for (int f = 0; f < A.nmor(); ++f) ready[std::max(A.src(f), A.tgt(f))].push_back(f);
  std::function<void(int)> rec = [&](int x) {
    if (x == n) {
      out.push_back({F, G, comp});
      return;
    }
    for (int c : B.hom(F.ob[x], G.ob[x])) {
      comp[x] = c;
      bool ok = true;
      for (int f : ready[x])
        if (B.compose(G.mo[f], comp[A.src(f)]) != B.compose(comp[A.tgt(f)], F.mo[f])) {
          ok = false;
          break;
        }
      if (ok) rec(x + 1);
    }
    comp[x] = -1;
  };
  rec(0);
  return out;
}

// ---------------------------------------------------------------------------
// Generators: a small generating set with shortest words for every morphism

struct Generation {
  std::vector<int> gens;
  // word[f] lists generator positions, first applied first
  std::vector<std::vector<int>> word;
};

inline Generation generate(const FinCategory& c) {
  Generation g;
  const int m = c.nmor();
  std::vector<char> reached(m, 0);
  g.word.assign(m, {});
  auto close = [&]() {
    // breadth-first closure under post-composition with generators
    std::vector<int> frontier;
    for (int f = 0; f < m; ++f)
      if (reached[f]) frontier.push_back(f);
    while (!frontier.empty()) {
      std::vector<int> next;
      for (int f : frontier)
        for (size_t k = 0; k < g.gens.size(); ++k) {
          int s = g.gens[k];
          if (c.src(s) != c.tgt(f)) continue;
          int h = c.compose(s, f);
          if (reached[h]) continue;
          reached[h] = 1;
          g.word[h] = g.word[f];
          g.word[h].push_back(static_cast<int>(k));
          next.push_back(h);
        }
      frontier.swap(next);
    }
  };
  for (int x = 0; x < c.nobj(); ++x) reached[c.identity[x]] = 1;
  // irreducible non-identities first, then anything still missing
  std::vector<char> reducible(m, 0);
  for (int f = 0; f < m; ++f)
    for (int h = 0; h < m; ++h)
      if (!c.is_identity(f) && !c.is_identity(h) && c.composable(h, f)) {
        int k = c.compose(h, f);
        if (k != f && k != h) reducible[k] = 1;
      }
  for (int f = 0; f < m; ++f)
    if (!c.is_identity(f) && !reducible[f]) {
      g.gens.push_back(f);
      reached[f] = 1;
      g.word[f] = {static_cast<int>(g.gens.size()) - 1};
    }
  close();
  for (int f = 0; f < m; ++f)
    if (!reached[f]) {
      g.gens.push_back(f);
      reached[f] = 1;
      g.word[f] = {static_cast<int>(g.gens.size()) - 1};
      close();
    }
  return g;
}

/// Enumerate functors A -> B. `fixed_ob` pins object images (-1 = free).
/// The callback returns false to stop.
inline void for_each_functor(const Cat& A, const Cat& B, const std::vector<int>& fixed_ob,
                             const std::function<bool(const FinFunctor&)>& cb,
                             const std::function<bool(int, int)>& mor_ok = nullptr) {
  const int n = A->nobj();
  Generation gen = generate(*A);
  const int k = static_cast<int>(gen.gens.size());
  FinFunctor F{A, B, std::vector<int>(n, -1), std::vector<int>(A->nmor(), -1)};
  // composable pairs bucketed by the last generator their words need
  auto last_gen = [&](int f) {
    int mx = -1;
    for (int s : gen.word[f]) mx = std::max(mx, s);
    return mx;
  };
  std::vector<int> lg(A->nmor());
  for (int f = 0; f < A->nmor(); ++f) lg[f] = last_gen(f);
  std::vector<std::vector<std::pair<int, int>>> checks(k + 1);
  for (int g = 0; g < A->nmor(); ++g)
    for (int f : A->in(A->src(g))) {
      int h = A->compose(g, f);
      int mx = std::max({lg[g], lg[f], lg[h]});
      checks[mx + 1].push_back({g, f});
    }
  std::vector<int> gimg(k, -1);
  auto eval = [&](int f) {
    int x = A->src(f);
    int cur = B->identity[F.ob[x]];
    for (int s : gen.word[f]) cur = B->compose(gimg[s], cur);
    return cur;
  };
  bool stop = false;
  std::function<void(int)> rec_mor = [&](int i) {
    if (stop) return;
    if (i == k) {
      for (int f = 0; f < A->nmor(); ++f) F.mo[f] = eval(f);
      for (auto [g, f] : checks[k])
        if (F.mo[A->compose(g, f)] != B->compose(F.mo[g], F.mo[f])) return;
      if (!cb(F)) stop = true;
      return;
    }
    int s = gen.gens[i];
    for (int t : B->hom(F.ob[A->src(s)], F.ob[A->tgt(s)])) {
      if (mor_ok && !mor_ok(s, t)) continue;
      gimg[i] = t;
      bool ok = true;
      for (auto [g, f] : checks[i + 1])
        if (eval(A->compose(g, f)) != B->compose(eval(g), eval(f))) {
          ok = false;
          break;
        }
      if (ok) rec_mor(i + 1);
      if (stop) return;
    }
    gimg[i] = -1;
  };
  std::function<void(int)> rec_ob = [&](int x) {
    if (stop) return;
    if (x == n) {
      rec_mor(0);
      return;
    }
    if (!fixed_ob.empty() && fixed_ob[x] >= 0) {
      F.ob[x] = fixed_ob[x];
      rec_ob(x + 1);
      return;
    }
    for (int y = 0; y < B->nobj(); ++y) {
      F.ob[x] = y;
      rec_ob(x + 1);
      if (stop) return;
    }
  };
  rec_ob(0);
}

inline std::vector<FinFunctor> all_functors(const Cat& A, const Cat& B) {
  std::vector<FinFunctor> out;
  for_each_functor(A, B, {}, [&](const FinFunctor& F) {
    out.push_back(F);
    return true;
  });
  return out;
}

/// Isomorphism of categories, if one exists.
inline std::optional<FinFunctor> find_isomorphism(const Cat& A, const Cat& B) {
  if (A->nobj() != B->nobj() || A->nmor() != B->nmor()) return std::nullopt;
  std::optional<FinFunctor> found;
  // injective on objects and on each hom-set, with matching hom sizes
  std::vector<int> fixed;
  const int n = A->nobj();
  std::vector<int> obmap(n, -1);
  std::vector<char> used(n, 0);
  std::function<void(int)> rec = [&](int x) {
    if (found) return;
    if (x == n) {
      for_each_functor(A, B, obmap, [&](const FinFunctor& F) {
        std::vector<char> hit(B->nmor(), 0);
        for (int t : F.mo) {
          if (hit[t]) return true;
          hit[t] = 1;
        }
        found = F;
        return false;
      });
      return;
    }
    for (int y = 0; y < n; ++y) {
      if (used[y]) continue;
      bool ok = true;
      for (int z = 0; z <= x && ok; ++z) {
        int w = z == x ? y : obmap[z];
        if (A->hom(x, z).size() != B->hom(y, w).size() || A->hom(z, x).size() != B->hom(w, y).size()) ok = false;
      }
      if (!ok) continue;
      used[y] = 1;
      obmap[x] = y;
      rec(x + 1);
      used[y] = 0;
      obmap[x] = -1;
    }
  };
  rec(0);
  return found;
}

inline bool is_isomorphism(const FinFunctor& F) {
  if (!is_bijective_on_objects(F) || F.src->nmor() != F.tgt->nmor()) return false;
  std::vector<char> hit(F.tgt->nmor(), 0);
  for (int t : F.mo) {
    if (hit[t]) return false;
    hit[t] = 1;
  }
  return true;
}

/// Hom-set maps bijective for every pair of objects.
inline bool is_fully_faithful(const FinFunctor& F) {
  const auto& A = *F.src;
  const auto& B = *F.tgt;
  for (int x = 0; x < A.nobj(); ++x)
    for (int y = 0; y < A.nobj(); ++y) {
      const auto& h = A.hom(x, y);
      const auto& k = B.hom(F.ob[x], F.ob[y]);
      if (h.size() != k.size()) return false;
      std::set<int> img;
      for (int f : h) img.insert(F.mo[f]);
      if (img.size() != h.size()) return false;
    }
  return true;
}

// ---------------------------------------------------------------------------
// Flags

struct FlaggedCategory {
  Cat base;
  Cat flag;
  FinFunctor flag_map;
};

inline FinFunctor core_inclusion(const Cat& c) {
  Cat k = core(*c);
  FinFunctor F{k, c, {}, {}};
  for (int x = 0; x < c->nobj(); ++x) F.ob.push_back(x);
  for (auto& f : k->morphisms) F.mo.push_back(c->morphism_index(f.name));
  return F;
}

inline Cat discrete_on(const FinCategory& c) {
  std::vector<Morphism> mors;
  std::vector<int> ids;
  for (int x = 0; x < c.nobj(); ++x) {
    ids.push_back(x);
    mors.push_back({c.mor_name(c.identity[x]), x, x});
  }
  return make_category(c.objects, mors, ids, [](int g, int) { return g; });
}

inline FlaggedCategory discrete_flag(const Cat& c) {
  Cat d = discrete_on(*c);
  FinFunctor F{d, c, {}, {}};
  for (int x = 0; x < c->nobj(); ++x) {
    F.ob.push_back(x);
    F.mo.push_back(c->identity[x]);
  }
  return {c, d, F};
}

inline std::vector<std::string> validate_flagged(const FlaggedCategory& fc) {
  std::vector<std::string> out;
  if (!is_groupoid(*fc.flag)) out.push_back("flag is not a groupoid");
  for (auto& s : validate_functor(fc.flag_map)) out.push_back("flag map: " + s);
  if (!out.empty()) return out;
  if (!is_surjective_on_objects(fc.flag_map)) out.push_back("flag map is not surjective on objects");
  for (int f : fc.flag_map.mo)
    if (!is_iso(*fc.base, f)) {
      out.push_back("flag map hits non-invertible " + fc.base->mor_name(f));
      break;
    }
  return out;
}

inline FlaggedCategory complete_flagged(const FlaggedCategory& fc) {
  FinFunctor inc = core_inclusion(fc.base);
  return {fc.base, inc.src, inc};
}

/// Complete iff the flag map is an equivalence onto core(base).
inline bool is_complete(const FlaggedCategory& fc, std::string* why = nullptr) {
  const auto& B = *fc.base;
  const auto& G = *fc.flag;
  const auto& F = fc.flag_map;
  // essential surjectivity onto core(base)
  std::vector<char> hit(B.nobj(), 0);
  for (int y : F.ob) hit[y] = 1;
  for (int y = 0; y < B.nobj(); ++y) {
    if (hit[y]) continue;
    bool reach = false;
    for (int x = 0; x < B.nobj() && !reach; ++x)
      if (hit[x])
        for (int f : B.hom(x, y))
          if (is_iso(B, f)) reach = true;
    if (!reach) {
      if (why) *why = "object " + B.obj_name(y) + " not in the essential image of the flag";
      return false;
    }
  }
  for (int a = 0; a < G.nobj(); ++a)
    for (int b = 0; b < G.nobj(); ++b) {
      std::vector<int> isos;
      for (int f : B.hom(F.ob[a], F.ob[b]))
        if (is_iso(B, f)) isos.push_back(f);
      std::set<int> img;
      for (int g : G.hom(a, b)) img.insert(F.mo[g]);
      if (img.size() != G.hom(a, b).size()) {
        if (why) *why = "flag map not faithful on " + G.obj_name(a) + " -> " + G.obj_name(b);
        return false;
      }
      if (img.size() != isos.size()) {
        if (why) *why = "flag map not full on " + G.obj_name(a) + " -> " + G.obj_name(b);
        return false;
      }
    }
  return true;
}

// ---------------------------------------------------------------------------
// Free coCartesian fibration E x_C Arr_C(D)

struct FreeFibration {
  FinFunctor proj;  // E' -> C
  FinFunctor unit;  // E -> E', e |-> (e, id)
  // object k of E' is (obj_e[k], obj_f[k])
  std::vector<int> obj_e, obj_f;
  // morphism k of E' is the square (mor_a[k] in E, mor_b[k] in C)
  std::vector<int> mor_a, mor_b;
};

inline void check_wide_subcategory(const FinCategory& C, const std::vector<char>& d) {
  if (static_cast<int>(d.size()) != C.nmor()) throw StructuralError("subcategory mask has wrong size");
  for (int x = 0; x < C.nobj(); ++x)
    if (!d[C.identity[x]]) throw StructuralError("subcategory misses identity of " + C.obj_name(x));
  for (int g = 0; g < C.nmor(); ++g)
    for (int f : C.in(C.src(g)))
      if (d[g] && d[f] && !d[C.compose(g, f)]) throw StructuralError("subcategory not closed under composition");
}

inline std::vector<char> identities_mask(const FinCategory& C) {
  std::vector<char> d(C.nmor(), 0);
  for (int x : C.identity) d[x] = 1;
  return d;
}

inline std::vector<char> all_mask(const FinCategory& C) { return std::vector<char>(C.nmor(), 1); }

inline FreeFibration free_cocart_fibration(const FinFunctor& p, const std::vector<char>& d) {
  const auto& E = *p.src;
  const auto& C = *p.tgt;
  check_wide_subcategory(C, d);
  FreeFibration r;
  std::vector<std::string> objs;
  std::map<std::pair<int, int>, int> oix;
  for (int e = 0; e < E.nobj(); ++e)
    for (int f : C.out(p.ob[e]))
      if (d[f]) {
        oix[{e, f}] = static_cast<int>(objs.size());
        objs.push_back("(" + E.obj_name(e) + "," + C.mor_name(f) + ")");
        r.obj_e.push_back(e);
        r.obj_f.push_back(f);
      }
  std::vector<Morphism> mors;
  std::map<std::pair<int, int>, int> mix;
  std::vector<int> ids(objs.size(), -1);
  for (size_t s = 0; s < objs.size(); ++s)
    for (size_t t = 0; t < objs.size(); ++t) {
      int e = r.obj_e[s], f = r.obj_f[s], e2 = r.obj_e[t], f2 = r.obj_f[t];
      for (int a : E.hom(e, e2))
        for (int b : C.hom(C.tgt(f), C.tgt(f2)))
          if (C.compose(b, f) == C.compose(f2, p.mo[a])) {
            int k = static_cast<int>(mors.size());
            mix[{a, b}] = k;
            mors.push_back({"(" + E.mor_name(a) + "," + C.mor_name(b) + ")@" + objs[s], static_cast<int>(s),
                            static_cast<int>(t)});
            r.mor_a.push_back(a);
            r.mor_b.push_back(b);
            if (s == t && a == E.identity[e] && b == C.identity[C.tgt(f)]) ids[s] = k;
          }
    }
  // a square is determined by (a, b) together with its source object
  auto find = [&](int s, int a, int b) {
    for (size_t k = 0; k < mors.size(); ++k)
      if (mors[k].src == s && r.mor_a[k] == a && r.mor_b[k] == b) return static_cast<int>(k);
    return -1;
  };
  Cat Ep = make_category(objs, mors, ids, [&](int g, int f) {
    return find(mors[f].src, E.compose(r.mor_a[g], r.mor_a[f]), C.compose(r.mor_b[g], r.mor_b[f]));
  });
  r.proj = FinFunctor{Ep, p.tgt, {}, {}};
  for (size_t s = 0; s < objs.size(); ++s) r.proj.ob.push_back(C.tgt(r.obj_f[s]));
  for (size_t k = 0; k < mors.size(); ++k) r.proj.mo.push_back(r.mor_b[k]);
  r.unit = FinFunctor{p.src, Ep, {}, {}};
  for (int e = 0; e < E.nobj(); ++e) r.unit.ob.push_back(oix.at({e, C.identity[p.ob[e]]}));
  for (int a = 0; a < E.nmor(); ++a) r.unit.mo.push_back(find(r.unit.ob[E.src(a)], a, p.mo[a]));
  return r;
}

struct Lift {
  int e, f, lift;
};

struct LiftReport {
  bool ok = true;
  std::vector<Lift> lifts;
  std::string witness;
};

/// A lift l: e -> e' of f is coCartesian when, for every z, composing gives a
/// bijection E(e', z) -> E(e, z) x_{C(pe, pz)} C(pe', pz).
inline bool is_cocartesian(const FinFunctor& p, int l) {
  const auto& E = *p.src;
  const auto& C = *p.tgt;
  int e = E.src(l), e2 = E.tgt(l);
  int f = p.mo[l];
  for (int z = 0; z < E.nobj(); ++z) {
    std::set<std::pair<int, int>> fiber;
    for (int a : E.hom(e, z))
      for (int b : C.hom(p.ob[e2], p.ob[z]))
        if (C.compose(b, f) == p.mo[a]) fiber.insert({a, b});
    std::set<std::pair<int, int>> img;
    for (int phi : E.hom(e2, z)) img.insert({E.compose(phi, l), p.mo[phi]});
    if (img != fiber || E.hom(e2, z).size() != fiber.size()) return false;
  }
  return true;
}

inline LiftReport has_cocartesian_lifts(const FinFunctor& p, const std::vector<char>& d) {
  const auto& E = *p.src;
  const auto& C = *p.tgt;
  check_wide_subcategory(C, d);
  LiftReport r;
  for (int e = 0; e < E.nobj(); ++e)
    for (int f : C.out(p.ob[e])) {
      if (!d[f]) continue;
      int found = -1;
      for (int l : E.out(e))
        if (p.mo[l] == f && is_cocartesian(p, l)) {
          found = l;
          break;
        }
      if (found < 0) {
        if (r.ok) r.witness = "no coCartesian lift of " + C.mor_name(f) + " at " + E.obj_name(e);
        r.ok = false;
      } else {
        r.lifts.push_back({e, f, found});
      }
    }
  return r;
}

}  // namespace corr
