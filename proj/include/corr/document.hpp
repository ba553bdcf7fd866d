// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "catalog.hpp"
#include "fincat.hpp"
#include "laxdiag.hpp"
#include "monad.hpp"
#include "prof.hpp"
#include "theory.hpp"

namespace corr {

/// Syntax error at a 1-based line and column.
class ParseError : public std::runtime_error {
 public:
  ParseError(int line, int col, const std::string& msg)
      : std::runtime_error(std::to_string(line) + ":" + std::to_string(col) + ": " + msg), line(line), col(col) {}
  int line, col;
};

/// A name that does not resolve to anything declared.
class DanglingReference : public ParseError {
 public:
  using ParseError::ParseError;
};

struct Token {
  enum Kind { Name, Colon, Comma, Equals, Arrow, Circ, Dot } kind;
  std::string text;
  int line = 0, col = 0;
};

struct Row {
  std::vector<Token> tokens;
  int line = 0;
};

struct Section {
  std::string name;
  std::vector<Row> rows;
  int line = 0;
};

struct Document {
  std::string kind, name;
  std::map<std::string, std::string> header;  // keys other than kind and name
  std::vector<Section> sections;
  int line = 0;

  const Section* section(const std::string& s) const {
    for (auto& x : sections)
      if (x.name == s) return &x;
    return nullptr;
  }
  std::string get(const std::string& key, int* at = nullptr) const {
    auto it = header.find(key);
    if (it == header.end()) throw ParseError(line, 1, name + ": missing header field '" + key + "'");
    if (at) *at = line;
    return it->second;
  }
};

namespace detail {

inline const std::map<std::string, std::vector<std::string>>& section_order() {
  static const std::map<std::string, std::vector<std::string>> m = {
      {"category", {"objects", "morphisms", "identity", "compose"}},
      {"functor", {"objects", "morphisms"}},
      {"profunctor", {"elements", "left", "right"}},
      {"monad", {"objects", "morphisms", "unit", "mult"}},
      {"theory", {}},
      {"laxdiagram", {"vertices", "edges", "cells"}},
  };
  return m;
}

inline bool raw_name_char(const std::string& s, size_t i) {
  unsigned char c = static_cast<unsigned char>(s[i]);
  if (std::isspace(c) || c == ':' || c == ',' || c == '=' || c == '"' || c == '#') return false;
  if (s.compare(i, 2, "->") == 0) return false;
  if (s.compare(i, 3, "\xE2\x88\x98") == 0 || s.compare(i, 2, "\xC2\xB7") == 0) return false;
  return true;
}

inline std::vector<Token> tokenize(const std::string& line, int ln) {
  std::vector<Token> out;
  size_t i = 0;
  while (i < line.size()) {
    unsigned char c = static_cast<unsigned char>(line[i]);
    int col = static_cast<int>(i) + 1;
    if (std::isspace(c)) {
      ++i;
    } else if (c == '#') {
      break;
    } else if (c == ':') {
      out.push_back({Token::Colon, ":", ln, col});
      ++i;
    } else if (c == ',') {
      out.push_back({Token::Comma, ",", ln, col});
      ++i;
    } else if (c == '=') {
      out.push_back({Token::Equals, "=", ln, col});
      ++i;
    } else if (line.compare(i, 2, "->") == 0) {
      out.push_back({Token::Arrow, "->", ln, col});
      i += 2;
    } else if (line.compare(i, 3, "\xE2\x88\x98") == 0) {
      out.push_back({Token::Circ, "\xE2\x88\x98", ln, col});
      i += 3;
    } else if (line.compare(i, 2, "\xC2\xB7") == 0) {
      out.push_back({Token::Dot, "\xC2\xB7", ln, col});
      i += 2;
    } else if (c == '"') {
      std::string s;
      ++i;
      bool closed = false;
      while (i < line.size()) {
        if (line[i] == '\\' && i + 1 < line.size()) {
          s += line[i + 1];
          i += 2;
        } else if (line[i] == '"') {
          closed = true;
          ++i;
          break;
        } else {
          s += line[i++];
        }
      }
      if (!closed) throw ParseError(ln, col, "unterminated quoted name");
      out.push_back({Token::Name, s, ln, col});
    } else {
      size_t j = i;
      while (j < line.size() && raw_name_char(line, j)) ++j;
      std::string s = line.substr(i, j - i);
      // a lone "." or "o" in operator position is read as the operator by the row parsers
      out.push_back({Token::Name, s, ln, col});
      i = j;
    }
  }
  return out;
}

inline std::string quote(const std::string& s) {
  bool raw = !s.empty();
  for (size_t i = 0; raw && i < s.size(); ++i) raw = raw_name_char(s, i);
  if (raw && s != "." && s != "o") return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') q += '\\';
    q += c;
  }
  return q + "\"";
}

inline std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Row grammar helpers

namespace detail {

struct RowReader {
  const Row& r;
  size_t i = 0;

  [[noreturn]] void fail(const std::string& what) const {
    if (i < r.tokens.size()) throw ParseError(r.line, r.tokens[i].col, what + ", found '" + r.tokens[i].text + "'");
    int col = r.tokens.empty() ? 1 : r.tokens.back().col + static_cast<int>(r.tokens.back().text.size());
    throw ParseError(r.line, col, what + " at end of line");
  }
  const Token& name() {
    if (i >= r.tokens.size() || r.tokens[i].kind != Token::Name) fail("expected a name");
    return r.tokens[i++];
  }
  void expect(Token::Kind k, const char* what) {
    if (i >= r.tokens.size() || r.tokens[i].kind != k) fail(std::string("expected '") + what + "'");
    ++i;
  }
  void op(bool compose) {
    if (i < r.tokens.size()) {
      const Token& t = r.tokens[i];
      if ((compose && t.kind == Token::Circ) || (!compose && t.kind == Token::Dot) ||
          (t.kind == Token::Name && (t.text == "." || (compose && t.text == "o")))) {
        ++i;
        return;
      }
    }
    fail(compose ? "expected '\xE2\x88\x98'" : "expected '\xC2\xB7'");
  }
  bool done() const { return i == r.tokens.size(); }
  void end() {
    if (!done()) fail("unexpected token");
  }
};

inline int lookup(const std::vector<std::string>& names, const Token& t, const std::string& what) {
  auto it = std::find(names.begin(), names.end(), t.text);
  if (it == names.end()) throw DanglingReference(t.line, t.col, "unknown " + what + " '" + t.text + "'");
  return static_cast<int>(it - names.begin());
}

}  // namespace detail

namespace detail {

/// Grammar of one row, without resolving names.
inline void check_row(const std::string& kind, const std::string& sec, const Row& r) {
  RowReader rd{r};
  auto arrow_pair = [&] {
    rd.name();
    rd.expect(Token::Arrow, "->");
    rd.name();
  };
  if (sec == "objects" && kind == "category") {
    rd.name();
    while (!rd.done()) {
      rd.expect(Token::Comma, ",");
      rd.name();
    }
  } else if (sec == "objects" || (sec == "morphisms" && kind != "category")) {
    arrow_pair();
  } else if (sec == "morphisms" || sec == "elements") {
    rd.name();
    rd.expect(Token::Colon, ":");
    arrow_pair();
  } else if (sec == "identity" || sec == "unit" || sec == "mult" || sec == "vertices") {
    rd.name();
    rd.expect(Token::Colon, ":");
    rd.name();
  } else if (sec == "compose" || sec == "left" || sec == "right") {
    rd.name();
    rd.op(sec == "compose");
    rd.name();
    rd.expect(Token::Equals, "=");
    rd.name();
  } else if (sec == "edges") {
    rd.name();
    rd.name();
    rd.expect(Token::Colon, ":");
    rd.name();
  } else if (sec == "cells") {
    rd.name();
    rd.name();
    rd.name();
    rd.expect(Token::Colon, ":");
    rd.name();
    rd.expect(Token::Comma, ",");
    arrow_pair();
  }
  rd.end();
}

}  // namespace detail

/// Parses one or more documents separated by lines reading `---`.
inline std::vector<Document> parse_documents(const std::string& text) {
  std::vector<Document> docs;
  std::istringstream in(text);
  std::string line;
  int ln = 0;
  Document* cur = nullptr;
  Section* sec = nullptr;
  auto start = [&](int at) {
    docs.emplace_back();
    cur = &docs.back();
    cur->line = at;
    sec = nullptr;
  };
  while (std::getline(in, line)) {
    ++ln;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::string t = detail::trim(line);
    if (t.empty() || t[0] == '#') continue;
    if (t == "---") {
      cur = nullptr;
      continue;
    }
    if (!cur) start(ln);
    if (t[0] == '[') {
      if (t.back() != ']') throw ParseError(ln, static_cast<int>(line.size()), "expected ']'");
      std::string name = detail::trim(t.substr(1, t.size() - 2));
      for (auto& s : cur->sections)
        if (s.name == name) throw ParseError(ln, 1, "duplicate section [" + name + "]");
      cur->sections.push_back({name, {}, ln});
      sec = &cur->sections.back();
      continue;
    }
    if (!sec) {
      auto p = t.find(':');
      if (p == std::string::npos) throw ParseError(ln, 1, "expected 'key: value' header line");
      std::string key = detail::trim(t.substr(0, p)), value = detail::trim(t.substr(p + 1));
      auto hash = value.find(" #");
      if (hash != std::string::npos) value = detail::trim(value.substr(0, hash));
      if (key == "kind") cur->kind = value;
      else if (key == "name") cur->name = value;
      else if (!cur->header.emplace(key, value).second) throw ParseError(ln, 1, "duplicate header field '" + key + "'");
      continue;
    }
    auto toks = detail::tokenize(line, ln);
    if (!toks.empty()) sec->rows.push_back({toks, ln});
  }
  for (auto& d : docs) {
    if (d.kind.empty()) throw ParseError(d.line, 1, "missing 'kind:' header");
    auto it = detail::section_order().find(d.kind);
    if (it == detail::section_order().end()) throw ParseError(d.line, 1, "unknown kind '" + d.kind + "'");
    if (d.name.empty()) throw ParseError(d.line, 1, "missing 'name:' header");
    for (auto& s : d.sections)
      if (std::find(it->second.begin(), it->second.end(), s.name) == it->second.end())
        throw ParseError(s.line, 1, "section [" + s.name + "] is not allowed in a " + d.kind);
    for (auto& s : d.sections)
      for (auto& r : s.rows) detail::check_row(d.kind, s.name, r);
  }
  std::set<std::string> seen;
  for (auto& d : docs)
    if (!seen.insert(d.name).second) throw ParseError(d.line, 1, "duplicate document name '" + d.name + "'");
  return docs;
}

/// Canonical text: fixed header and section order, one space between tokens,
/// operators spelled `->`, `∘` and `·`, names quoted only when needed.
inline std::string serialize(const Document& d) {
  std::string out = "kind: " + d.kind + "\nname: " + d.name + "\n";
  for (auto& [k, v] : d.header) out += k + ": " + v + "\n";
  const auto& order = detail::section_order().at(d.kind);
  for (auto& sname : order) {
    const Section* s = d.section(sname);
    if (!s) continue;
    out += "[" + sname + "]\n";
    for (auto& r : s->rows) {
      std::string line;
      for (size_t i = 0; i < r.tokens.size(); ++i) {
        const Token& t = r.tokens[i];
        bool op_pos = (sname == "compose" || sname == "left" || sname == "right") && i == 1;
        std::string text;
        switch (t.kind) {
          case Token::Name:
            if (op_pos && (t.text == "." || t.text == "o"))
              text = sname == "compose" ? "\xE2\x88\x98" : "\xC2\xB7";
            else
              text = detail::quote(t.text);
            break;
          default:
            text = t.text;
        }
        if (i > 0 && t.kind != Token::Colon && t.kind != Token::Comma) line += " ";
        line += text;
      }
      out += line + "\n";
    }
  }
  return out;
}

inline std::string serialize(const std::vector<Document>& docs) {
  std::string out;
  for (size_t i = 0; i < docs.size(); ++i) {
    if (i) out += "---\n";
    out += serialize(docs[i]);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Documents to objects

inline Cat category_from_document(const Document& d) {
  if (d.kind != "category") throw ParseError(d.line, 1, d.name + " is a " + d.kind + ", expected a category");
  std::vector<std::string> objs;
  if (auto s = d.section("objects"))
    for (auto& r : s->rows) {
      detail::RowReader rd{r};
      while (!rd.done()) {
        const Token& t = rd.name();
        if (std::find(objs.begin(), objs.end(), t.text) != objs.end())
          throw ParseError(t.line, t.col, "duplicate object '" + t.text + "'");
        objs.push_back(t.text);
        if (!rd.done()) rd.expect(Token::Comma, ",");
      }
    }
  std::vector<Morphism> mors;
  std::vector<std::string> mnames;
  if (auto s = d.section("morphisms"))
    for (auto& r : s->rows) {
      detail::RowReader rd{r};
      const Token& f = rd.name();
      rd.expect(Token::Colon, ":");
      int x = detail::lookup(objs, rd.name(), "object");
      rd.expect(Token::Arrow, "->");
      int y = detail::lookup(objs, rd.name(), "object");
      rd.end();
      if (std::find(mnames.begin(), mnames.end(), f.text) != mnames.end())
        throw ParseError(f.line, f.col, "duplicate morphism '" + f.text + "'");
      mors.push_back({f.text, x, y});
      mnames.push_back(f.text);
    }
  std::vector<int> ids(objs.size(), -1);
  if (auto s = d.section("identity"))
    for (auto& r : s->rows) {
      detail::RowReader rd{r};
      int x = detail::lookup(objs, rd.name(), "object");
      rd.expect(Token::Colon, ":");
      const Token& ft = rd.name();
      int f = detail::lookup(mnames, ft, "morphism");
      rd.end();
      if (mors[f].src != x || mors[f].tgt != x) throw ParseError(ft.line, ft.col, "identity is not an endomorphism");
      ids[x] = f;
    }
  for (size_t x = 0; x < objs.size(); ++x)
    if (ids[x] < 0) {
      auto it = std::find(mnames.begin(), mnames.end(), "id_" + objs[x]);
      if (it == mnames.end()) {
        mors.push_back({"id_" + objs[x], static_cast<int>(x), static_cast<int>(x)});
        mnames.push_back("id_" + objs[x]);
        ids[x] = static_cast<int>(mors.size()) - 1;
      } else {
        ids[x] = static_cast<int>(it - mnames.begin());
      }
    }
  const int n = static_cast<int>(mors.size());
  std::vector<int> table(static_cast<size_t>(n) * n, -1);
  std::vector<char> is_id(n, 0);
  for (int f : ids) is_id[f] = 1;
  for (int f = 0; f < n; ++f)
    for (int g = 0; g < n; ++g)
      if (mors[f].tgt == mors[g].src) {
        if (is_id[g]) table[g * n + f] = f;
        else if (is_id[f]) table[g * n + f] = g;
      }
  if (auto s = d.section("compose"))
    for (auto& r : s->rows) {
      detail::RowReader rd{r};
      const Token& gt = rd.name();
      int g = detail::lookup(mnames, gt, "morphism");
      rd.op(true);
      int f = detail::lookup(mnames, rd.name(), "morphism");
      rd.expect(Token::Equals, "=");
      const Token& ht = rd.name();
      int h = detail::lookup(mnames, ht, "morphism");
      rd.end();
      if (mors[f].tgt != mors[g].src) throw ParseError(gt.line, gt.col, "morphisms are not composable");
      int& cell = table[g * n + f];
      if (cell >= 0 && cell != h) throw ParseError(ht.line, ht.col, "conflicting composite");
      cell = h;
    }
  for (int f = 0; f < n; ++f)
    for (int g = 0; g < n; ++g)
      if (mors[f].tgt == mors[g].src && table[g * n + f] < 0)
        throw ParseError(d.line, 1, d.name + ": composite " + mnames[g] + " \xE2\x88\x98 " + mnames[f] + " is not given");
  Cat c = make_category(objs, mors, ids, [&](int g, int f) { return table[g * n + f]; });
  auto v = validate_category(*c);
  if (!v.empty()) throw StructuralError(d.name + ": " + v.front());
  return c;
}

inline Document category_document(const FinCategory& c, const std::string& name) {
  Document d;
  d.kind = "category";
  d.name = name;
  auto nm = [](const std::string& s) { return Token{Token::Name, s, 0, 0}; };
  Section ob{"objects", {}, 0}, mo{"morphisms", {}, 0}, id{"identity", {}, 0}, co{"compose", {}, 0};
  for (auto& x : c.objects) ob.rows.push_back({{nm(x)}, 0});
  for (auto& m : c.morphisms)
    mo.rows.push_back({{nm(m.name), {Token::Colon, ":"}, nm(c.objects[m.src]), {Token::Arrow, "->"}, nm(c.objects[m.tgt])}, 0});
  for (int x = 0; x < c.nobj(); ++x) id.rows.push_back({{nm(c.objects[x]), {Token::Colon, ":"}, nm(c.mor_name(c.identity[x]))}, 0});
  for (int f = 0; f < c.nmor(); ++f)
    for (int g : c.out(c.tgt(f))) {
      if (c.is_identity(f) || c.is_identity(g)) continue;
      co.rows.push_back({{nm(c.mor_name(g)), {Token::Circ, "\xE2\x88\x98"}, nm(c.mor_name(f)), {Token::Equals, "="},
                          nm(c.mor_name(c.compose(g, f)))},
                         0});
    }
  d.sections = {ob, mo, id};
  if (!co.rows.empty()) d.sections.push_back(co);
  return d;
}

/// Builtin categories addressed as @name: terminal, empty, chain(n), discrete(n),
/// codiscrete(n), cyclic(n), walking_iso, klein_four, idempotent, retraction,
/// parallel, span.
inline std::optional<Cat> builtin_category(const std::string& ref) {
  if (ref.empty() || ref[0] != '@') return std::nullopt;
  std::string s = ref.substr(1);
  auto arg = [&](const std::string& head) -> std::optional<int> {
    if (s.rfind(head + "(", 0) != 0 || s.back() != ')') return std::nullopt;
    try {
      return std::stoi(s.substr(head.size() + 1, s.size() - head.size() - 2));
    } catch (...) {
      return std::nullopt;
    }
  };
  if (s == "terminal") return point();
  if (s == "empty") return cats::empty();
  if (s == "walking_iso") return cats::walking_iso();
  if (s == "klein_four") return cats::klein_four();
  if (s == "idempotent") return cats::idempotent_monoid();
  if (s == "retraction") return cats::walking_retraction();
  if (s == "parallel") return cats::parallel_pair();
  if (s == "span") return cats::span_shape();
  if (auto n = arg("chain"); n && *n >= 0) return cats::chain(*n);
  if (auto n = arg("discrete"); n && *n >= 0) return cats::discrete(*n);
  if (auto n = arg("cyclic"); n && *n >= 1) return cats::cyclic_group(*n);
  if (auto n = arg("codiscrete"); n && *n >= 0) {
    std::vector<std::string> names;
    for (int i = 0; i < *n; ++i) names.push_back("x" + std::to_string(i));
    return cats::codiscrete(names);
  }
  return std::nullopt;
}

/// All documents of a file with their objects built on demand.
class Workspace {
 public:
  explicit Workspace(std::vector<Document> docs) : docs_(std::move(docs)) {}
  static Workspace from_text(const std::string& text) { return Workspace(parse_documents(text)); }

  const std::vector<Document>& documents() const { return docs_; }

  const Document& doc(const std::string& name, int line = 0, int col = 0) const {
    for (auto& d : docs_)
      if (d.name == name) return d;
    throw DanglingReference(line, col, "no document named '" + name + "'");
  }

  /// The last document of the given kind, or the named one.
  const Document& pick(const std::string& kind, const std::string& name = "") const {
    if (!name.empty()) {
      const Document& d = doc(name);
      if (!kind.empty() && d.kind != kind) throw ParseError(d.line, 1, name + " is a " + d.kind + ", expected a " + kind);
      return d;
    }
    for (auto it = docs_.rbegin(); it != docs_.rend(); ++it)
      if (kind.empty() || it->kind == kind) return *it;
    throw ParseError(1, 1, "no " + kind + " document in input");
  }

  Cat category(const std::string& ref, int line = 0) {
    if (auto b = builtin_category(ref)) {
      auto it = cats_.find(ref);
      if (it == cats_.end()) it = cats_.emplace(ref, *b).first;
      return it->second;
    }
    if (ref.empty() || ref[0] == '@') throw DanglingReference(line, 1, "unknown builtin category '" + ref + "'");
    auto it = cats_.find(ref);
    if (it != cats_.end()) return it->second;
    Cat c = category_from_document(doc(ref, line, 1));
    cats_.emplace(ref, c);
    return c;
  }

  FinFunctor functor(const std::string& name) {
    const Document& d = doc(name);
    if (d.kind != "functor") throw ParseError(d.line, 1, name + " is a " + d.kind + ", expected a functor");
    Cat A = category(d.get("source"), d.line), B = category(d.get("target"), d.line);
    return read_functor(d, A, B);
  }

  Prof profunctor(const std::string& name) {
    const Document& d = doc(name);
    if (d.kind != "profunctor") throw ParseError(d.line, 1, name + " is a " + d.kind + ", expected a profunctor");
    Cat C = category(d.get("source"), d.line), D = category(d.get("target"), d.line);
    std::vector<std::string> names;
    std::vector<int> u, o;
    if (auto s = d.section("elements"))
      for (auto& r : s->rows) {
        detail::RowReader rd{r};
        const Token& e = rd.name();
        rd.expect(Token::Colon, ":");
        int x = detail::lookup(C->objects, rd.name(), "source object");
        rd.expect(Token::Arrow, "->");
        int y = detail::lookup(D->objects, rd.name(), "target object");
        rd.end();
        if (std::find(names.begin(), names.end(), e.text) != names.end())
          throw ParseError(e.line, e.col, "duplicate element '" + e.text + "'");
        names.push_back(e.text);
        u.push_back(x);
        o.push_back(y);
      }
    const int n = static_cast<int>(names.size());
    std::vector<int> left(static_cast<size_t>(n) * C->nmor(), -1), right(static_cast<size_t>(n) * D->nmor(), -1);
    std::vector<std::string> cm, dm;
    for (auto& m : C->morphisms) cm.push_back(m.name);
    for (auto& m : D->morphisms) dm.push_back(m.name);
    for (int e = 0; e < n; ++e) {
      left[e * C->nmor() + C->identity[u[e]]] = e;
      right[e * D->nmor() + D->identity[o[e]]] = e;
    }
    if (auto s = d.section("left"))
      for (auto& r : s->rows) {
        detail::RowReader rd{r};
        const Token& ft = rd.name();
        int f = detail::lookup(cm, ft, "source morphism");
        rd.op(false);
        int e = detail::lookup(names, rd.name(), "element");
        rd.expect(Token::Equals, "=");
        int e2 = detail::lookup(names, rd.name(), "element");
        rd.end();
        if (C->tgt(f) != u[e]) throw ParseError(ft.line, ft.col, "morphism does not end under the element");
        left[e * C->nmor() + f] = e2;
      }
    if (auto s = d.section("right"))
      for (auto& r : s->rows) {
        detail::RowReader rd{r};
        int e = detail::lookup(names, rd.name(), "element");
        rd.op(false);
        const Token& gt = rd.name();
        int g = detail::lookup(dm, gt, "target morphism");
        rd.expect(Token::Equals, "=");
        int e2 = detail::lookup(names, rd.name(), "element");
        rd.end();
        if (D->src(g) != o[e]) throw ParseError(gt.line, gt.col, "morphism does not start over the element");
        right[e * D->nmor() + g] = e2;
      }
    for (int e = 0; e < n; ++e) {
      for (int f : C->in(u[e]))
        if (left[e * C->nmor() + f] < 0)
          throw ParseError(d.line, 1, name + ": left action " + C->mor_name(f) + " \xC2\xB7 " + names[e] + " is not given");
      for (int g : D->out(o[e]))
        if (right[e * D->nmor() + g] < 0)
          throw ParseError(d.line, 1, name + ": right action " + names[e] + " \xC2\xB7 " + D->mor_name(g) + " is not given");
    }
    Prof P = make_prof(
        C, D, names, u, o, [&](int e, int f) { return left[e * C->nmor() + f]; },
        [&](int e, int g) { return right[e * D->nmor() + g]; });
    auto v = validate_prof(*P);
    if (!v.empty()) throw StructuralError(name + ": " + v.front());
    return P;
  }

  Monad monad(const std::string& name) {
    const Document& d = doc(name);
    if (d.kind != "monad") throw ParseError(d.line, 1, name + " is a " + d.kind + ", expected a monad");
    Cat C = category(d.get("base"), d.line);
    Monad m{C, read_functor(d, C, C), std::vector<int>(C->nobj(), -1), std::vector<int>(C->nobj(), -1)};
    std::vector<std::string> mn;
    for (auto& f : C->morphisms) mn.push_back(f.name);
    for (const char* sec : {"unit", "mult"}) {
      auto& target = std::string(sec) == "unit" ? m.unit : m.mult;
      if (auto s = d.section(sec))
        for (auto& r : s->rows) {
          detail::RowReader rd{r};
          int x = detail::lookup(C->objects, rd.name(), "object");
          rd.expect(Token::Colon, ":");
          target[x] = detail::lookup(mn, rd.name(), "morphism");
          rd.end();
        }
      for (int x = 0; x < C->nobj(); ++x)
        if (target[x] < 0) throw ParseError(d.line, 1, name + ": " + sec + " component at " + C->obj_name(x) + " is not given");
    }
    auto v = validate_monad(m);
    if (!v.empty()) throw StructuralError(name + ": " + v.front());
    return m;
  }

  /// Arity field: `all`, `dense x y ...` or `explicit m1 m2 ...` (modules over T0).
  AritySpec arities(const std::string& spec, const Cat& T0, int line = 0) {
    std::istringstream in(spec);
    std::string mode;
    in >> mode;
    std::vector<std::string> args;
    for (std::string a; in >> a;) args.push_back(a);
    if (mode == "all") return all_arities(T0);
    if (mode == "dense") {
      std::vector<int> objs;
      for (auto& a : args) {
        int x = T0->object_index(a);
        if (x < 0) throw DanglingReference(line, 1, "unknown arity object '" + a + "'");
        objs.push_back(x);
      }
      return dense_arities(T0, objs);
    }
    if (mode == "explicit") {
      std::vector<Prof> mods;
      for (auto& a : args) {
        Prof F = profunctor(a);
        if (!same_category(F->src, point()) || !same_category(F->tgt, T0))
          throw StructuralError(a + " is not a module over the arity base");
        mods.push_back(F);
      }
      return explicit_arities(T0, mods);
    }
    throw ParseError(line, 1, "arities must be 'all', 'dense ...' or 'explicit ...'");
  }

  AritySpec arities(const Document& d, const Cat& T0) {
    return arities(d.header.count("arities") ? d.header.at("arities") : "all", T0, d.line);
  }

  Theory theory(const std::string& name) {
    const Document& d = doc(name);
    if (d.kind != "theory") throw ParseError(d.line, 1, name + " is a " + d.kind + ", expected a theory");
    FinFunctor t = functor(d.get("functor"));
    return make_theory(t, arities(d, t.src));
  }

  LaxDiagram lax(const std::string& name) {
    const Document& d = doc(name);
    if (d.kind != "laxdiagram") throw ParseError(d.line, 1, name + " is a " + d.kind + ", expected a laxdiagram");
    std::map<int, FinFunctor> vs;
    if (auto s = d.section("vertices"))
      for (auto& r : s->rows) {
        detail::RowReader rd{r};
        int i = index(rd.name());
        rd.expect(Token::Colon, ":");
        const Token& f = rd.name();
        rd.end();
        if (!doc_exists(f.text)) throw DanglingReference(f.line, f.col, "no document named '" + f.text + "'");
        vs[i] = functor(f.text);
      }
    std::vector<FinFunctor> vertices;
    for (int i = 0; i < static_cast<int>(vs.size()); ++i) {
      if (!vs.count(i)) throw ParseError(d.line, 1, name + ": vertex " + std::to_string(i) + " is missing");
      vertices.push_back(vs[i]);
    }
    LaxDiagram L = lax_diagram(vertices);
    if (auto s = d.section("edges"))
      for (auto& r : s->rows) {
        detail::RowReader rd{r};
        int i = index(rd.name()), j = index(rd.name());
        rd.expect(Token::Colon, ":");
        const Token& p = rd.name();
        rd.end();
        if (!(0 <= i && i < j && j <= L.n)) throw ParseError(r.line, 1, "edge indices out of range");
        if (!doc_exists(p.text)) throw DanglingReference(p.line, p.col, "no document named '" + p.text + "'");
        L.edge[{i, j}] = profunctor(p.text);
      }
    for (int i = 0; i <= L.n; ++i)
      for (int j = i + 1; j <= L.n; ++j)
        if (!L.edge.count({i, j})) throw ParseError(d.line, 1, name + ": edge " + std::to_string(i) + " " + std::to_string(j) + " is missing");
    std::map<std::array<int, 3>, std::vector<int>> cells;
    if (auto s = d.section("cells"))
      for (auto& r : s->rows) {
        detail::RowReader rd{r};
        int i = index(rd.name()), j = index(rd.name()), k = index(rd.name());
        rd.expect(Token::Colon, ":");
        if (!(0 <= i && i < j && j < k && k <= L.n)) throw ParseError(r.line, 1, "cell indices out of range");
        const Prof& A = L.M(i, j);
        const Prof& B = L.M(j, k);
        const Prof& T = L.M(i, k);
        int x = detail::lookup(A->name, rd.name(), "element");
        rd.expect(Token::Comma, ",");
        int y = detail::lookup(B->name, rd.name(), "element");
        rd.expect(Token::Arrow, "->");
        const Token& zt = rd.name();
        int z = detail::lookup(T->name, zt, "element");
        rd.end();
        auto& map = cells[{i, j, k}];
        if (map.empty()) {
          cache_.emplace(std::array<int, 3>{i, j, k}, compose_prof(A, B));
          map.assign(cache_.at({i, j, k})->size(), -1);
        }
        int c = cache_.at({i, j, k})->cls(x, y);
        if (c < 0) throw ParseError(r.line, 1, "elements do not match over the middle vertex");
        if (map[c] >= 0 && map[c] != z) throw ParseError(zt.line, zt.col, "conflicting value for this class");
        map[c] = z;
      }
    for (int i = 0; i <= L.n; ++i)
      for (int j = i + 1; j <= L.n; ++j)
        for (int k = j + 1; k <= L.n; ++k) {
          Prof comp = cache_.count({i, j, k}) ? cache_.at({i, j, k}) : compose_prof(L.M(i, j), L.M(j, k));
          auto map = cells.count({i, j, k}) ? cells.at({i, j, k}) : std::vector<int>(comp->size(), -1);
          for (int c = 0; c < comp->size(); ++c)
            if (map[c] < 0) {
              auto [x, y] = comp->coend->rep[c];
              throw ParseError(d.line, 1, name + ": cell " + std::to_string(i) + std::to_string(j) + std::to_string(k) +
                                              " has no value at (" + L.M(i, j)->name[x] + ", " + L.M(j, k)->name[y] + ")");
            }
          L.cell[{i, j, k}] = ProfMorphism{comp, L.M(i, k), map};
        }
    cache_.clear();
    return L;
  }

  bool doc_exists(const std::string& name) const {
    for (auto& d : docs_)
      if (d.name == name) return true;
    return false;
  }

 private:
  static int index(const Token& t) {
    try {
      size_t used = 0;
      int v = std::stoi(t.text, &used);
      if (used == t.text.size()) return v;
    } catch (...) {
    }
    throw ParseError(t.line, t.col, "expected a vertex index");
  }

  static FinFunctor read_functor(const Document& d, const Cat& A, const Cat& B) {
    FinFunctor F{A, B, std::vector<int>(A->nobj(), -1), std::vector<int>(A->nmor(), -1)};
    std::vector<std::string> am, bm;
    for (auto& m : A->morphisms) am.push_back(m.name);
    for (auto& m : B->morphisms) bm.push_back(m.name);
    if (auto s = d.section("objects"))
      for (auto& r : s->rows) {
        detail::RowReader rd{r};
        int x = detail::lookup(A->objects, rd.name(), "source object");
        rd.expect(Token::Arrow, "->");
        F.ob[x] = detail::lookup(B->objects, rd.name(), "target object");
        rd.end();
      }
    if (auto s = d.section("morphisms"))
      for (auto& r : s->rows) {
        detail::RowReader rd{r};
        int f = detail::lookup(am, rd.name(), "source morphism");
        rd.expect(Token::Arrow, "->");
        F.mo[f] = detail::lookup(bm, rd.name(), "target morphism");
        rd.end();
      }
    for (int x = 0; x < A->nobj(); ++x) {
      if (F.ob[x] < 0) throw ParseError(d.line, 1, d.name + ": object " + A->obj_name(x) + " has no image");
      if (F.mo[A->identity[x]] < 0) F.mo[A->identity[x]] = B->identity[F.ob[x]];
    }
    for (int f = 0; f < A->nmor(); ++f)
      if (F.mo[f] < 0) throw ParseError(d.line, 1, d.name + ": morphism " + A->mor_name(f) + " has no image");
    auto v = validate_functor(F);
    if (!v.empty()) throw StructuralError(d.name + ": " + v.front());
    return F;
  }

  std::vector<Document> docs_;
  std::map<std::string, Cat> cats_;
  std::map<std::array<int, 3>, Prof> cache_;
};

// ---------------------------------------------------------------------------
// Objects to documents

namespace detail {
inline Token nm(const std::string& s) { return {Token::Name, s, 0, 0}; }
inline Token sym(Token::Kind k, const char* s) { return {k, s, 0, 0}; }
}  // namespace detail

inline Document functor_document(const FinFunctor& F, const std::string& name, const std::string& src,
                                 const std::string& tgt) {
  using detail::nm;
  using detail::sym;
  Document d;
  d.kind = "functor";
  d.name = name;
  d.header = {{"source", src}, {"target", tgt}};
  Section ob{"objects", {}, 0}, mo{"morphisms", {}, 0};
  for (int x = 0; x < F.src->nobj(); ++x)
    ob.rows.push_back({{nm(F.src->obj_name(x)), sym(Token::Arrow, "->"), nm(F.tgt->obj_name(F.ob[x]))}, 0});
  for (int f = 0; f < F.src->nmor(); ++f)
    if (!F.src->is_identity(f))
      mo.rows.push_back({{nm(F.src->mor_name(f)), sym(Token::Arrow, "->"), nm(F.tgt->mor_name(F.mo[f]))}, 0});
  d.sections = {ob};
  if (!mo.rows.empty()) d.sections.push_back(mo);
  return d;
}

inline Document profunctor_document(const Prof& P, const std::string& name, const std::string& src,
                                    const std::string& tgt) {
  using detail::nm;
  using detail::sym;
  Document d;
  d.kind = "profunctor";
  d.name = name;
  d.header = {{"source", src}, {"target", tgt}};
  Section el{"elements", {}, 0}, le{"left", {}, 0}, ri{"right", {}, 0};
  const auto& C = *P->src;
  const auto& D = *P->tgt;
  for (int e = 0; e < P->size(); ++e) {
    el.rows.push_back({{nm(P->name[e]), sym(Token::Colon, ":"), nm(C.obj_name(P->under[e])), sym(Token::Arrow, "->"),
                        nm(D.obj_name(P->over[e]))},
                       0});
    for (int f : C.in(P->under[e]))
      if (!C.is_identity(f))
        le.rows.push_back({{nm(C.mor_name(f)), sym(Token::Dot, "\xC2\xB7"), nm(P->name[e]), sym(Token::Equals, "="),
                            nm(P->name[P->lact(e, f)])},
                           0});
    for (int g : D.out(P->over[e]))
      if (!D.is_identity(g))
        ri.rows.push_back({{nm(P->name[e]), sym(Token::Dot, "\xC2\xB7"), nm(D.mor_name(g)), sym(Token::Equals, "="),
                            nm(P->name[P->ract(e, g)])},
                           0});
  }
  for (auto* s : {&el, &le, &ri})
    if (!s->rows.empty()) d.sections.push_back(*s);
  return d;
}

/// Collects documents for derived objects, naming each category once.
class DocumentWriter {
 public:
  /// Refers to c by ref without emitting it (builtins, or categories already in the output).
  void known(const Cat& c, const std::string& ref) {
    cats_.emplace_back(c, ref);
    used_.insert(ref);
  }

  std::string category(const Cat& c, const std::string& name) {
    for (auto& [k, ref] : cats_)
      if (k == c) return ref;
    if (same_category(c, point())) return "@terminal";
    std::string n = fresh(name);
    docs.push_back(category_document(*c, n));
    cats_.emplace_back(c, n);
    return n;
  }

  std::string functor(const FinFunctor& F, const std::string& name, const std::string& src_hint = "",
                      const std::string& tgt_hint = "") {
    std::string a = category(F.src, src_hint.empty() ? name + ".src" : src_hint);
    std::string b = category(F.tgt, tgt_hint.empty() ? name + ".tgt" : tgt_hint);
    std::string n = fresh(name);
    docs.push_back(functor_document(F, n, a, b));
    return n;
  }

  std::string profunctor(const Prof& P, const std::string& name, const std::string& src_hint = "",
                         const std::string& tgt_hint = "") {
    std::string a = category(P->src, src_hint.empty() ? name + ".src" : src_hint);
    std::string b = category(P->tgt, tgt_hint.empty() ? name + ".tgt" : tgt_hint);
    std::string n = fresh(name);
    docs.push_back(profunctor_document(P, n, a, b));
    return n;
  }

  std::string monad(const Monad& m, const std::string& name) {
    using detail::nm;
    using detail::sym;
    std::string base = category(m.base, name + ".base");
    Document d = functor_document(m.T, fresh(name), base, base);
    d.kind = "monad";
    d.header = {{"base", base}};
    Section un{"unit", {}, 0}, mu{"mult", {}, 0};
    for (int x = 0; x < m.base->nobj(); ++x) {
      un.rows.push_back({{nm(m.base->obj_name(x)), sym(Token::Colon, ":"), nm(m.base->mor_name(m.unit[x]))}, 0});
      mu.rows.push_back({{nm(m.base->obj_name(x)), sym(Token::Colon, ":"), nm(m.base->mor_name(m.mult[x]))}, 0});
    }
    d.sections.push_back(un);
    d.sections.push_back(mu);
    docs.push_back(d);
    return d.name;
  }

  std::string lax(const LaxDiagram& L, const std::string& name) {
    using detail::nm;
    using detail::sym;
    Document d;
    d.kind = "laxdiagram";
    d.name = fresh(name);
    Section ve{"vertices", {}, 0}, ed{"edges", {}, 0}, ce{"cells", {}, 0};
    for (int i = 0; i <= L.n; ++i) {
      std::string si = std::to_string(i);
      std::string v = functor(L.vertex[i], name + ".v" + si, name + ".D" + si, name + ".E" + si);
      ve.rows.push_back({{nm(si), sym(Token::Colon, ":"), nm(v)}, 0});
    }
    for (auto& [ij, P] : L.edge) {
      std::string si = std::to_string(ij.first), sj = std::to_string(ij.second);
      std::string e = profunctor(P, name + ".M" + si + sj);
      ed.rows.push_back({{nm(si), nm(sj), sym(Token::Colon, ":"), nm(e)}, 0});
    }
    for (auto& [ijk, g] : L.cell) {
      auto [i, j, k] = ijk;
      for (int c = 0; c < g.src->size(); ++c) {
        auto [x, y] = g.src->coend->rep[c];
        ce.rows.push_back({{nm(std::to_string(i)), nm(std::to_string(j)), nm(std::to_string(k)), sym(Token::Colon, ":"),
                            nm(L.M(i, j)->name[x]), sym(Token::Comma, ","), nm(L.M(j, k)->name[y]),
                            sym(Token::Arrow, "->"), nm(L.M(i, k)->name[g.map[c]])},
                           0});
      }
    }
    d.sections = {ve, ed};
    if (!ce.rows.empty()) d.sections.push_back(ce);
    docs.push_back(d);
    return d.name;
  }

  std::string text() const { return serialize(docs); }

  std::vector<Document> docs;

 private:
  std::string fresh(const std::string& base) {
    std::string n = base;
    for (int k = 2; used_.count(n); ++k) n = base + "." + std::to_string(k);
    used_.insert(n);
    return n;
  }

  std::vector<std::pair<Cat, std::string>> cats_;
  std::set<std::string> used_;
};

}  // namespace corr
