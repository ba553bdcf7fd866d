// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace corr::simplex {

/// Monotone map [n] -> [m]; n or m may be -1 for the empty interval.
struct SimplexMap {
  int n = 0, m = 0;
  std::vector<int> v;

  bool operator==(const SimplexMap&) const = default;
};

inline bool valid(const SimplexMap& f) {
  if (f.n < -1 || f.m < -1 || static_cast<int>(f.v.size()) != f.n + 1) return false;
  for (int i = 0; i <= f.n; ++i) {
    if (f.v[i] < 0 || f.v[i] > f.m) return false;
    if (i > 0 && f.v[i] < f.v[i - 1]) return false;
  }
  return true;
}

inline SimplexMap make(int m, std::vector<int> v) {
  SimplexMap f{static_cast<int>(v.size()) - 1, m, std::move(v)};
  if (!valid(f)) throw std::invalid_argument("not a monotone map into [" + std::to_string(m) + "]");
  return f;
}

inline SimplexMap identity(int n) {
  SimplexMap f{n, n, {}};
  for (int i = 0; i <= n; ++i) f.v.push_back(i);
  return f;
}

/// g o f
inline SimplexMap compose(const SimplexMap& g, const SimplexMap& f) {
  if (f.m != g.n) throw std::invalid_argument("simplex maps not composable");
  SimplexMap h{f.n, g.m, {}};
  for (int x : f.v) h.v.push_back(g.v[x]);
  return h;
}

/// Endpoint-preserving. The empty map is active only into the empty interval.
inline bool is_active(const SimplexMap& f) {
  if (f.n < 0) return f.m < 0;
  return f.v.front() == 0 && f.v.back() == f.m;
}

/// Inclusion of a subinterval.
inline bool is_inert(const SimplexMap& f) {
  for (int i = 1; i <= f.n; ++i)
    if (f.v[i] != f.v[i - 1] + 1) return false;
  return true;
}

inline bool is_injective(const SimplexMap& f) {
  for (int i = 1; i <= f.n; ++i)
    if (f.v[i] == f.v[i - 1]) return false;
  return true;
}

inline bool is_surjective(const SimplexMap& f) {
  if (f.m < 0) return true;
  if (f.n < 0) return false;
  if (f.v.front() != 0 || f.v.back() != f.m) return false;
  for (int i = 1; i <= f.n; ++i)
    if (f.v[i] > f.v[i - 1] + 1) return false;
  return true;
}

inline bool is_cellular(const SimplexMap& f) {
  for (int i = 1; i <= f.n; ++i)
    if (f.v[i] > f.v[i - 1] + 1) return false;
  return true;
}

/// f = i o a with a active and i inert.
inline std::pair<SimplexMap, SimplexMap> factor_active_inert(const SimplexMap& f) {
  if (f.n < 0) return {SimplexMap{-1, -1, {}}, SimplexMap{-1, f.m, {}}};
  int lo = f.v.front(), hi = f.v.back();
  SimplexMap a{f.n, hi - lo, {}};
  for (int x : f.v) a.v.push_back(x - lo);
  SimplexMap i{hi - lo, f.m, {}};
  for (int k = lo; k <= hi; ++k) i.v.push_back(k);
  return {a, i};
}

/// f = j o s with s surjective and j injective.
inline std::pair<SimplexMap, SimplexMap> factor_surj_inj(const SimplexMap& f) {
  SimplexMap s{f.n, -1, {}}, j{-1, f.m, {}};
  for (int i = 0; i <= f.n; ++i) {
    if (i == 0 || f.v[i] != f.v[i - 1]) j.v.push_back(f.v[i]);
    s.v.push_back(static_cast<int>(j.v.size()) - 1);
  }
  j.n = static_cast<int>(j.v.size()) - 1;
  s.m = j.n;
  return {s, j};
}

enum class MapClass { all, active, inert, cellular, surjective, injective };

inline bool in_class(const SimplexMap& f, MapClass c) {
  switch (c) {
    case MapClass::all: return true;
    case MapClass::active: return is_active(f);
    case MapClass::inert: return is_inert(f);
    case MapClass::cellular: return is_cellular(f);
    case MapClass::surjective: return is_surjective(f);
    case MapClass::injective: return is_injective(f);
  }
  return false;
}

/// All maps [n] -> [m] of the class, in lexicographic order of values.
inline std::vector<SimplexMap> enumerate_maps(int n, int m, MapClass c = MapClass::all) {
  std::vector<SimplexMap> out;
  SimplexMap f{n, m, std::vector<int>(n + 1, 0)};
  if (n < 0) {
    if (in_class(f, c)) out.push_back(f);
    return out;
  }
  if (m < 0) return out;
  auto rec = [&](auto&& self, int i, int lo) -> void {
    if (i > n) {
      if (in_class(f, c)) out.push_back(f);
      return;
    }
    for (int x = lo; x <= m; ++x) {
      f.v[i] = x;
      self(self, i + 1, x);
    }
  };
  rec(rec, 0, 0);
  return out;
}

/// Monoidal product on intervals, [n] * [m] = [n + m + 1], unit [-1].
inline int interval_join(int n, int m) {
  if (n < -1 || m < -1) throw std::invalid_argument("interval sizes start at -1");
  return n + m + 1;
}

/// Active injective maps [k] -> [d] for all k.
inline std::vector<SimplexMap> active_injective_into(int d) {
  std::vector<SimplexMap> out;
  if (d < 0) return out;
  for (int k = 0; k <= d; ++k)
    for (auto& f : enumerate_maps(k, d, MapClass::injective))
      if (is_active(f)) out.push_back(f);
  return out;
}

/// Hom between i and j in the unital variant: active injective maps into [j - i].
inline std::vector<SimplexMap> unital_bimod_hom(int n, int i, int j) {
  if (i < 0 || j > n || i > j) return {};
  return active_injective_into(j - i);
}

/// Object of the hom between i and j: an active injective a: [k] -> [j - i]
/// and one interval (size >= -1) per point of [k].
struct BimodHom {
  int i = 0, j = 0;
  SimplexMap a;
  std::vector<int> c;

  bool operator==(const BimodHom&) const = default;
};

inline std::vector<BimodHom> bimod_hom(int n, int i, int j, int size_bound) {
  std::vector<BimodHom> out;
  if (i < 0 || j > n || i > j) return out;
  for (auto& a : active_injective_into(j - i)) {
    std::vector<int> c(a.n + 1, -1);
    auto rec = [&](auto&& self, int p) -> void {
      if (p > a.n) {
        out.push_back({i, j, a, c});
        return;
      }
      for (int s = -1; s <= size_bound; ++s) {
        c[p] = s;
        self(self, p + 1);
      }
    };
    rec(rec, 0);
  }
  return out;
}

/// Glue x: i -> j and y: j -> l into i -> l; the intervals at the glued
/// point are joined.
inline BimodHom compose_bimod(const BimodHom& x, const BimodHom& y) {
  if (x.j != y.i) throw std::invalid_argument("bimod morphisms not composable");
  BimodHom r{x.i, y.j, SimplexMap{x.a.n + y.a.n, x.a.m + y.a.m, {}}, {}};
  r.a.v = x.a.v;
  for (int p = 1; p <= y.a.n; ++p) r.a.v.push_back(y.a.v[p] + x.a.m);
  r.c.assign(x.c.begin(), x.c.end() - 1);
  r.c.push_back(interval_join(x.c.back(), y.c.front()));
  r.c.insert(r.c.end(), y.c.begin() + 1, y.c.end());
  return r;
}

inline unsigned long long binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  unsigned long long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace corr::simplex
