// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <string>
#include <vector>

#include "fincat.hpp"

namespace corr {

/// Category presentation: objects, generating arrows and relations between
/// parallel words. Words list generators in the order they are applied.
struct Presentation {
  struct Relation {
    int obj;
    std::vector<int> lhs, rhs;
  };
  std::vector<std::string> objects;
  std::vector<Morphism> gens;
  std::vector<Relation> rels;

  int add_object(const std::string& n) {
    objects.push_back(n);
    return static_cast<int>(objects.size()) - 1;
  }
  int add_gen(const std::string& n, int s, int t) {
    gens.push_back({n, s, t});
    return static_cast<int>(gens.size()) - 1;
  }
  void relate(int obj, std::vector<int> lhs, std::vector<int> rhs) {
    rels.push_back({obj, std::move(lhs), std::move(rhs)});
  }

  /// Adds a generating set of c (objects through `obj`) with the relations
  /// word(f) s = word(s o f) for every morphism f and generator s. Returns
  /// the word of each morphism of c.
  std::vector<std::vector<int>> add_category(const FinCategory& c, const std::vector<int>& obj,
                                             const std::string& prefix = "") {
    Generation g = generate(c);
    std::vector<int> gid;
    for (int f : g.gens) gid.push_back(add_gen(prefix + c.mor_name(f), obj[c.src(f)], obj[c.tgt(f)]));
    std::vector<std::vector<int>> word(c.nmor());
    for (int f = 0; f < c.nmor(); ++f)
      for (int k : g.word[f]) word[f].push_back(gid[k]);
    for (int f = 0; f < c.nmor(); ++f)
      for (size_t k = 0; k < g.gens.size(); ++k) {
        int s = g.gens[k];
        if (c.src(s) != c.tgt(f)) continue;
        std::vector<int> lhs = word[f];
        lhs.push_back(gid[k]);
        if (lhs != word[c.compose(s, f)]) relate(obj[c.src(f)], lhs, word[c.compose(s, f)]);
      }
    return word;
  }
};

/// Result of a closed coset enumeration.
struct Quotient {
  Cat cat;
  std::vector<std::vector<int>> word;  // normal form of each morphism
  std::vector<int> gen_image;          // generator -> morphism
  int cosets_defined = 0;
  int max_depth = 0;
  int bound = 0;  // closed without exceeding this word length

  /// Morphism named by a word starting at obj.
  int eval(int obj, const std::vector<int>& w) const {
    int cur = cat->identity[obj];
    for (int s : w) cur = cat->compose(gen_image[s], cur);
    return cur;
  }
};

namespace detail {

class CosetTable {
 public:
  CosetTable(const Presentation& p, int root, int bound, size_t max_cosets)
      : p_(p), ng_(static_cast<int>(p.gens.size())), bound_(bound), max_(max_cosets) {
    define(root, 0);
  }

  int find(int c) {
    while (parent_[c] != c) c = parent_[c] = parent_[parent_[c]];
    return c;
  }
  int size() const { return static_cast<int>(obj_.size()); }
  int obj(int c) const { return obj_[c]; }
  int depth(int c) const { return depth_[c]; }
  int max_depth() const { return max_depth_; }
  int next(int c, int s) {
    int t = next_[static_cast<size_t>(c) * ng_ + s];
    return t < 0 ? t : find(t);
  }

  int step(int c, int s) {
    c = find(c);
    int t = next(c, s);
    if (t >= 0) return t;
    t = define(p_.gens[s].tgt, depth_[c] + 1);
    next_[static_cast<size_t>(c) * ng_ + s] = t;
    return t;
  }

  int trace(int c, const std::vector<int>& w) {
    for (int s : w) c = step(c, s);
    return find(c);
  }

  /// Follows w without defining anything; -1 if an edge is missing.
  int follow(int c, const std::vector<int>& w) {
    c = find(c);
    for (int s : w) {
      c = next(c, s);
      if (c < 0) return -1;
    }
    return c;
  }

  void coincide(int a, int b) {
    std::vector<std::pair<int, int>> queue{{a, b}};
    while (!queue.empty()) {
      auto [x, y] = queue.back();
      queue.pop_back();
      x = find(x);
      y = find(y);
      if (x == y) continue;
      if (x > y) std::swap(x, y);
      parent_[y] = x;
      for (int s = 0; s < ng_; ++s) {
        int t = next_[static_cast<size_t>(y) * ng_ + s];
        if (t < 0) continue;
        int& u = next_[static_cast<size_t>(x) * ng_ + s];
        if (u < 0) u = t;
        else queue.push_back({u, t});
      }
    }
  }

  /// Scans relations and generator edges at every live coset until nothing changes.
  void close() {
    for (int pass = 0;; ++pass) {
      for (int c = 0; c < size(); ++c) {
        if (find(c) != c) continue;
        for (auto& r : p_.rels) {
          if (r.obj != obj_[c]) continue;
          int a = trace(c, r.lhs);
          int b = trace(c, r.rhs);
          coincide(a, b);
          if (find(c) != c) break;
        }
        if (find(c) != c) continue;
        for (int s = 0; s < ng_; ++s)
          if (p_.gens[s].src == obj_[c]) step(c, s);
      }
      if (consistent()) return;
    }
  }

  bool consistent() {
    for (int c = 0; c < size(); ++c) {
      if (find(c) != c) continue;
      for (int s = 0; s < ng_; ++s)
        if (p_.gens[s].src == obj_[c] && next(c, s) < 0) return false;
      for (auto& r : p_.rels)
        if (r.obj == obj_[c] && follow(c, r.lhs) != follow(c, r.rhs)) return false;
    }
    return true;
  }

 private:
  int define(int o, int d) {
    if (d > bound_) throw Unsaturated(bound_, "word length exceeded");
    if (obj_.size() >= max_) throw Unsaturated(bound_, "coset limit exceeded");
    int c = size();
    obj_.push_back(o);
    depth_.push_back(d);
    parent_.push_back(c);
    next_.resize(next_.size() + ng_, -1);
    max_depth_ = std::max(max_depth_, d);
    return c;
  }

  const Presentation& p_;
  int ng_;
  int bound_;
  size_t max_;
  std::vector<int> obj_, depth_, parent_, next_;
  int max_depth_ = 0;
};

}  // namespace detail

inline std::string default_word_name(const Presentation& p, int obj, const std::vector<int>& w) {
  if (w.empty()) return "id_" + p.objects[obj];
  std::string s;
  for (size_t i = w.size(); i-- > 0;) {
    s += p.gens[w[i]].name;
    if (i) s += "*";
  }
  return s;
}

/// Todd-Coxeter enumeration of every representable out of each object.
/// Throws Unsaturated when a definition would need a word longer than bound.
inline Quotient enumerate_category(
    const Presentation& p, int bound,
    const std::function<std::string(int, const std::vector<int>&)>& namer = nullptr,
    size_t max_cosets = 200000) {
  const int no = static_cast<int>(p.objects.size());
  const int ng = static_cast<int>(p.gens.size());
  for (auto& g : p.gens)
    if (g.src < 0 || g.src >= no || g.tgt < 0 || g.tgt >= no) throw StructuralError("generator " + g.name + " has a bad endpoint");
  for (auto& r : p.rels) {
    auto end = [&](const std::vector<int>& w) {
      int cur = r.obj;
      for (int s : w) {
        if (s < 0 || s >= ng || p.gens[s].src != cur) throw StructuralError("relation word is not composable");
        cur = p.gens[s].tgt;
      }
      return cur;
    };
    if (end(r.lhs) != end(r.rhs)) throw StructuralError("relation sides are not parallel");
  }
  Quotient q;
  q.bound = bound;
  std::vector<std::vector<int>> words;  // per global morphism
  std::vector<int> msrc, mtgt;
  std::vector<std::vector<int>> local;  // per object: coset -> global index
  std::vector<detail::CosetTable> tables;
  std::vector<int> base(no);
  for (int x = 0; x < no; ++x) {
    tables.emplace_back(p, x, bound, max_cosets);
    auto& t = tables.back();
    t.close();
    q.cosets_defined += t.size();
    q.max_depth = std::max(q.max_depth, t.max_depth());
    // breadth-first numbering gives shortlex normal forms
    base[x] = static_cast<int>(words.size());
    std::vector<int> idx(t.size(), -1);
    std::vector<int> order{t.find(0)};
    std::vector<std::vector<int>> w{{}};
    idx[order[0]] = 0;
    for (size_t k = 0; k < order.size(); ++k)
      for (int s = 0; s < ng; ++s) {
        if (p.gens[s].src != t.obj(order[k])) continue;
        int n = t.next(order[k], s);
        if (idx[n] >= 0) continue;
        idx[n] = static_cast<int>(order.size());
        order.push_back(n);
        auto nw = w[k];
        nw.push_back(s);
        w.push_back(nw);
      }
    for (size_t k = 0; k < order.size(); ++k) {
      words.push_back(w[k]);
      msrc.push_back(x);
      mtgt.push_back(t.obj(order[k]));
    }
    std::vector<int> loc(t.size(), -1);
    for (int c = 0; c < t.size(); ++c) loc[c] = base[x] + idx[t.find(c)];
    local.push_back(loc);
  }
  std::vector<Morphism> mors;
  for (size_t f = 0; f < words.size(); ++f)
    mors.push_back({namer ? namer(msrc[f], words[f]) : default_word_name(p, msrc[f], words[f]), msrc[f], mtgt[f]});
  std::vector<int> ids(base.begin(), base.end());
  q.cat = make_category(p.objects, mors, ids, [&](int g, int f) {
    auto& t = tables[msrc[f]];
    int c = t.follow(t.find(0), words[f]);
    c = t.follow(c, words[g]);
    return local[msrc[f]][c];
  });
  q.word = words;
  for (int s = 0; s < ng; ++s) {
    auto& t = tables[p.gens[s].src];
    q.gen_image.push_back(local[p.gens[s].src][t.follow(t.find(0), {s})]);
  }
  return q;
}

}  // namespace corr
