// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "fincat.hpp"

namespace corr::cats {

inline Cat terminal() {
  return make_category({"*"}, {{"id", 0, 0}}, {0}, [](int, int) { return 0; });
}

inline Cat empty() {
  return make_category({}, {}, {}, [](int, int) { return -1; });
}

inline Cat discrete(const std::vector<std::string>& names) {
  std::vector<Morphism> mors;
  std::vector<int> ids;
  for (size_t i = 0; i < names.size(); ++i) {
    mors.push_back({"id_" + names[i], static_cast<int>(i), static_cast<int>(i)});
    ids.push_back(static_cast<int>(i));
  }
  return make_category(names, mors, ids, [](int g, int) { return g; });
}

inline Cat discrete(int n) {
  std::vector<std::string> names;
  for (int i = 0; i < n; ++i) names.push_back("d" + std::to_string(i));
  return discrete(names);
}

/// The poset [n] = {0 < 1 < ... < n}.
inline Cat chain(int n) {
  std::vector<std::string> objs;
  for (int i = 0; i <= n; ++i) objs.push_back(std::to_string(i));
  std::vector<Morphism> mors;
  std::vector<std::vector<int>> ix(n + 1, std::vector<int>(n + 1, -1));
  std::vector<int> ids(n + 1);
  for (int i = 0; i <= n; ++i)
    for (int j = i; j <= n; ++j) {
      ix[i][j] = static_cast<int>(mors.size());
      mors.push_back({i == j ? "id_" + objs[i] : objs[i] + "_" + objs[j], i, j});
      if (i == j) ids[i] = ix[i][j];
    }
  return make_category(objs, mors, ids, [&](int g, int f) { return ix[mors[f].src][mors[g].tgt]; });
}

/// Every hom-set a singleton.
inline Cat codiscrete(const std::vector<std::string>& names) {
  const int n = static_cast<int>(names.size());
  std::vector<Morphism> mors;
  std::vector<int> ids(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) ids[i] = static_cast<int>(mors.size());
      mors.push_back({i == j ? "id_" + names[i] : names[i] + "_" + names[j], i, j});
    }
  return make_category(names, mors, ids, [&](int g, int f) { return mors[f].src * n + mors[g].tgt; });
}

inline Cat walking_iso() { return codiscrete({"x", "y"}); }

/// One-object category from a multiplication table; element 0 is the unit.
/// mult[a][b] is a*b, read as "a after b".
inline Cat monoid(const std::vector<std::string>& elems, const std::vector<std::vector<int>>& mult,
                  const std::string& obj = "o") {
  std::vector<Morphism> mors;
  for (auto& e : elems) mors.push_back({e, 0, 0});
  return make_category({obj}, mors, {0}, [&](int g, int f) { return mult[g][f]; });
}

inline Cat cyclic_group(int n, const std::string& obj = "o") {
  std::vector<std::string> elems;
  std::vector<std::vector<int>> mult(n, std::vector<int>(n));
  for (int i = 0; i < n; ++i) elems.push_back(i == 0 ? "e" : "g" + std::to_string(i));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) mult[a][b] = (a + b) % n;
  return monoid(elems, mult, obj);
}

inline Cat klein_four(const std::string& obj = "o") {
  std::vector<std::vector<int>> mult(4, std::vector<int>(4));
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) mult[a][b] = a ^ b;
  return monoid({"e", "a", "b", "c"}, mult, obj);
}

/// {1, e} with e idempotent.
inline Cat idempotent_monoid(const std::string& obj = "o") {
  return monoid({"1", "e"}, {{0, 1}, {1, 1}}, obj);
}

/// Two objects 0, 1 with r: 0 -> 1 and s: 1 -> 0, s r = id_0 and r s = e an idempotent.
inline Cat walking_retraction() {
  CategoryBuilder b;
  b.object("0").object("1");
  b.morphism("id_0", "0", "0").morphism("id_1", "1", "1");
  b.morphism("r", "0", "1").morphism("s", "1", "0").morphism("e", "1", "1");
  b.identity("0", "id_0").identity("1", "id_1");
  b.compose("id_0", "id_0", "id_0").compose("r", "id_0", "r");
  b.compose("id_0", "s", "s").compose("r", "s", "e");
  b.compose("id_1", "r", "r").compose("s", "r", "id_0").compose("e", "r", "r");
  b.compose("id_1", "id_1", "id_1").compose("s", "id_1", "s").compose("e", "id_1", "e");
  b.compose("id_1", "e", "e").compose("s", "e", "s").compose("e", "e", "e");
  return b.build();
}

/// A pair of parallel arrows a, b: 0 -> 1.
inline Cat parallel_pair() {
  CategoryBuilder b;
  b.object("0").object("1");
  b.morphism("id_0", "0", "0").morphism("id_1", "1", "1").morphism("a", "0", "1").morphism("b", "0", "1");
  b.identity("0", "id_0").identity("1", "id_1");
  b.compose("id_0", "id_0", "id_0").compose("id_1", "id_1", "id_1");
  for (auto f : {"a", "b"}) b.compose(f, "id_0", f).compose("id_1", f, f);
  return b.build();
}

/// Span shape 1 <- 0 -> 2.
inline Cat span_shape() {
  CategoryBuilder b;
  b.object("0").object("1").object("2");
  for (auto x : {"0", "1", "2"}) b.morphism(std::string("id_") + x, x, x).identity(x, std::string("id_") + x);
  b.morphism("l", "0", "1").morphism("r", "0", "2");
  for (auto x : {"0", "1", "2"}) b.compose(std::string("id_") + x, std::string("id_") + x, std::string("id_") + x);
  b.compose("l", "id_0", "l").compose("id_1", "l", "l").compose("r", "id_0", "r").compose("id_2", "r", "r");
  return b.build();
}

}  // namespace corr::cats
