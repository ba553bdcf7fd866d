// SPDX-License-Identifier: Apache-2.0
// Command-line front end: reads .cat documents, runs one construction or check, reports.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <iterator>
#include <json.hpp>
#include <random>
#include <sstream>

#include "corr/document.hpp"
#include "corr/simplex.hpp"

using namespace corr;
using json = nlohmann::ordered_json;

namespace {

enum Exit { kOk = 0, kFalse = 1, kInput = 2, kBound = 3 };

/// Failed checked property; carries the witness.
struct PropertyFalse : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string file = "-";
  std::string name;
  int cap = 3;
  int bound = 8;
  bool json_out = false;
  unsigned seed = 0;
};

struct Report {
  json j = json::object();
  DocumentWriter out;
  std::vector<std::string> lines;

  template <class T>
  void kv(const std::string& k, const T& v) {
    j[k] = v;
    std::ostringstream s;
    if constexpr (std::is_same_v<T, bool>) s << (v ? "true" : "false");
    else s << v;
    lines.push_back(k + ": " + s.str());
  }
  void note(const std::string& k, const json& v, const std::string& text) {
    j[k] = v;
    lines.push_back(k + ": " + text);
  }
};

std::string read_input(const std::string& file) {
  if (file == "-") return {std::istreambuf_iterator<char>(std::cin), {}};
  std::ifstream in(file);
  if (!in) throw ParseError(0, 0, "cannot open " + file);
  return {std::istreambuf_iterator<char>(in), {}};
}

std::string join(const std::vector<int>& v) {
  std::string s;
  for (size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + std::to_string(v[i]);
  return s;
}

json sizes_of(const Prof& M) {
  std::vector<int> n(M->tgt->nobj(), 0);
  for (int e = 0; e < M->size(); ++e) ++n[M->over[e]];
  return n;
}

/// Registers workspace categories so derived documents refer to them by name.
void register_inputs(Workspace& ws, DocumentWriter& w) {
  for (auto& d : ws.documents()) {
    if (d.kind == "category") try {
        w.known(ws.category(d.name), d.name);
      } catch (const StructuralError&) {
      }
    for (auto& [k, v] : d.header)
      if ((k == "source" || k == "target" || k == "base") && v.rfind('@', 0) == 0) w.known(ws.category(v, d.line), v);
  }
}

const Document& pick_any(Workspace& ws, const Options& o, std::initializer_list<const char*> kinds) {
  if (!o.name.empty()) {
    const Document& d = ws.doc(o.name);
    for (auto k : kinds)
      if (d.kind == k) return d;
    throw ParseError(d.line, 1, d.name + " has kind " + d.kind + ", which this command does not accept");
  }
  for (auto it = ws.documents().rbegin(); it != ws.documents().rend(); ++it)
    for (auto k : kinds)
      if (it->kind == k) return *it;
  throw ParseError(1, 1, "input has no document of a suitable kind");
}

// ---------------------------------------------------------------------------
// Commands

void cmd_validate(Workspace& ws, const Options& o, Report& r) {
  json items = json::array();
  bool all = true;
  for (auto& d : ws.documents()) {
    if (!o.name.empty() && d.name != o.name) continue;
    json it{{"name", d.name}, {"kind", d.kind}};
    std::vector<std::string> problems;
    try {
      if (d.kind == "category") ws.category(d.name);
      else if (d.kind == "functor") ws.functor(d.name);
      else if (d.kind == "profunctor") ws.profunctor(d.name);
      else if (d.kind == "monad") ws.monad(d.name);
      else if (d.kind == "laxdiagram") problems = validate_lax(ws.lax(d.name));
      else if (d.kind == "theory") problems = validate_theory(ws.theory(d.name), o.cap);
    } catch (const StructuralError& e) {
      problems.push_back(e.what());
    }
    it["valid"] = problems.empty();
    if (!problems.empty()) it["problems"] = problems;
    r.lines.push_back(d.kind + " " + d.name + ": " + (problems.empty() ? "valid" : "INVALID: " + problems.front()));
    all = all && problems.empty();
    items.push_back(it);
  }
  r.j["documents"] = items;
  r.j["valid"] = all;
  if (!all) throw PropertyFalse("some documents are invalid");
}

void cmd_core(Workspace& ws, const Options& o, Report& r) {
  const Document& d = ws.pick("category", o.name);
  Cat c = ws.category(d.name);
  Cat k = core(*c);
  r.kv("groupoid", is_groupoid(*c));
  r.kv("gaunt", is_gaunt(*c));
  r.kv("core_morphisms", k->nmor());
  r.j["core"] = r.out.category(k, d.name + ".core");
}

void cmd_complete(Workspace& ws, const Options& o, Report& r, const std::string& flag) {
  FlaggedCategory fc;
  if (!flag.empty()) {
    FinFunctor F = ws.functor(flag);
    fc = FlaggedCategory{F.tgt, F.src, F};
  } else {
    fc = discrete_flag(ws.category(ws.pick("category", o.name).name));
  }
  auto problems = validate_flagged(fc);
  if (!problems.empty()) throw StructuralError(problems.front());
  std::string why;
  bool was = is_complete(fc, &why);
  r.kv("complete", was);
  if (!was) r.kv("reason", why);
  FlaggedCategory c = complete_flagged(fc);
  r.kv("completed_flag_morphisms", c.flag->nmor());
  r.j["flag_map"] = r.out.functor(c.flag_map, "completed_flag", "completed_flag.src");
}

void cmd_compose(Workspace& ws, Report& r, const std::string& a, const std::string& b) {
  const Document& da = ws.doc(a);
  if (da.kind == "functor") {
    FinFunctor f = ws.functor(a), g = ws.functor(b);
    if (!same_category(f.tgt, g.src)) throw StructuralError("functors are not composable");
    r.j["composite"] = r.out.functor(compose_functors(g, f), b + "." + a);
    return;
  }
  Prof M = ws.profunctor(a), N = ws.profunctor(b);
  if (!same_category(M->tgt, N->src)) throw StructuralError("profunctors are not composable");
  Prof MN = compose_prof(M, N);
  r.kv("elements", MN->size());
  r.j["composite"] = r.out.profunctor(MN, a + "." + b);
}

void cmd_companion(Workspace& ws, const Options& o, Report& r, bool conj) {
  const Document& d = ws.pick("functor", o.name);
  FinFunctor F = ws.functor(d.name);
  Prof P = conj ? conjoint(F) : companion(F);
  r.kv("elements", P->size());
  r.j[conj ? "conjoint" : "companion"] = r.out.profunctor(P, d.name + (conj ? ".conjoint" : ".companion"));
}

void cmd_adjunction(Workspace& ws, const Options& o, Report& r) {
  const Document& d = ws.pick("functor", o.name);
  AdjunctionProof p = check_adjunction(ws.functor(d.name));
  r.kv("companion_elements", p.comp->size());
  r.kv("conjoint_elements", p.conj->size());
  r.kv("unit_natural", p.unit_ok);
  r.kv("counit_natural", p.counit_ok);
  r.kv("triangle_companion", p.triangle_companion);
  r.kv("triangle_conjoint", p.triangle_conjoint);
  r.kv("adjunction", p.ok());
  if (!p.ok()) throw PropertyFalse(p.witness);
}

void cmd_collage(Workspace& ws, const Options& o, Report& r) {
  const Document& d = ws.pick("profunctor", o.name);
  Prof M = ws.profunctor(d.name);
  Collage c = collage(M);
  r.kv("objects", c.cat->nobj());
  r.kv("morphisms", c.cat->nmor());
  r.j["projection"] = r.out.functor(c.proj, d.name + ".proj", d.name + ".collage");
  CollageFactorization f = collage_factor(M);
  r.kv("factorization", f.ok);
  if (!f.ok) throw PropertyFalse(f.witness);
}

void cmd_nats(Workspace& ws, Report& r, const std::string& a, const std::string& b) {
  if (ws.doc(a).kind == "functor") {
    FinFunctor F = ws.functor(a), G = ws.functor(b);
    if (!parallel(F, G)) throw StructuralError("functors are not parallel");
    auto ns = nat_set(F, G);
    json list = json::array();
    for (auto& n : ns) {
      std::vector<std::string> comps;
      for (int c : n.comp) comps.push_back(G.tgt->mor_name(c));
      list.push_back(comps);
    }
    r.kv("count", ns.size());
    r.j["transformations"] = list;
    for (auto& l : list) r.lines.push_back("  " + l.dump());
    return;
  }
  Prof M = ws.profunctor(a), N = ws.profunctor(b);
  if (!same_category(M->src, N->src) || !same_category(M->tgt, N->tgt))
    throw StructuralError("profunctors are not parallel");
  auto ns = prof_nats(M, N);
  json list = json::array();
  for (auto& n : ns) {
    json m = json::object();
    for (int e = 0; e < M->size(); ++e) m[M->name[e]] = N->name[n.map[e]];
    list.push_back(m);
  }
  r.kv("count", ns.size());
  r.j["transformations"] = list;
  for (auto& l : list) r.lines.push_back("  " + l.dump());
}

void cmd_mate(Workspace& ws, Report& r, const std::string& f, const std::string& g, const std::string& m,
              const std::string& n) {
  MateContext ctx(ws.functor(f), ws.functor(g), ws.profunctor(m), ws.profunctor(n));
  auto squares = prof_nats(ctx.Mg, ctx.fN);
  auto transposes = prof_nats(ctx.M, ctx.fN_g);
  r.kv("squares", squares.size());
  r.kv("transposes", transposes.size());
  json list = json::array();
  for (auto& a : squares) {
    ProfMorphism b = ctx.mate(a);
    if (!validate_prof_morphism(b).empty()) throw PropertyFalse("mate is not natural");
    if (!same_map(ctx.unmate(b), a)) throw PropertyFalse("unmate(mate(alpha)) differs from alpha");
    json row = json::object();
    for (int e = 0; e < ctx.M->size(); ++e) {
      auto [u, je] = ctx.fN_g->coend->rep[b.map[e]];
      auto [fe, ne] = ctx.fN->coend->rep[u];
      row[ctx.M->name[e]] = ctx.fc->name[fe] + " ; " + ctx.N->name[ne] + " ; " + ctx.gj->name[je];
    }
    list.push_back(row);
  }
  for (auto& b : transposes)
    if (!same_map(ctx.mate(ctx.unmate(b)), b)) throw PropertyFalse("mate(unmate(beta)) differs from beta");
  r.j["mates"] = list;
  r.kv("bijection", squares.size() == transposes.size());
  if (squares.size() != transposes.size()) throw PropertyFalse("square and transpose counts differ");
}

void cmd_kleisli(Workspace& ws, const Options& o, Report& r) {
  const Document& d = ws.pick("monad", o.name);
  Kleisli k = kleisli(ws.monad(d.name));
  r.kv("morphisms", k.cat->nmor());
  r.j["inclusion"] = r.out.functor(k.j, d.name + ".j", "", d.name + ".kleisli");
}

void cmd_em(Workspace& ws, const Options& o, Report& r) {
  const Document& d = ws.pick("monad", o.name);
  EMCategory e = em_category(ws.monad(d.name));
  r.kv("algebras", e.cat->nobj());
  r.kv("morphisms", e.cat->nmor());
  r.j["forget"] = r.out.functor(e.forget, d.name + ".forget", d.name + ".em");
}

void cmd_promonad(Workspace& ws, const Options& o, Report& r) {
  const Document& d = pick_any(ws, o, {"monad", "functor"});
  Promonad p;
  FinFunctor j;
  if (d.kind == "monad") {
    p = kleisli_promonad(ws.monad(d.name));
  } else {
    j = ws.functor(d.name);
    if (!is_bijective_on_objects(j)) throw StructuralError(d.name + " is not bijective on objects");
    p = promonad_from_iof(j);
  }
  auto problems = validate_promonad(p);
  if (!problems.empty()) throw PropertyFalse(problems.front());
  r.kv("carrier_elements", p.carrier->size());
  r.j["carrier"] = r.out.profunctor(p.carrier, d.name + ".carrier");
  FinFunctor back = iof_from_promonad(p);
  bool rt = d.kind == "monad" || find_isomorphism(back.tgt, j.tgt).has_value();
  r.kv("roundtrip", rt);
  r.j["identity_on_objects"] = r.out.functor(back, d.name + ".iof", "", d.name + ".iof.tgt");
  if (!rt) throw PropertyFalse("identity-on-objects functor of the promonad differs");
}

WrrObject wrr_from(Workspace& ws, const std::string& h, const std::string& p) {
  WrrObject w{ws.functor(h), ws.functor(p)};
  auto problems = validate_wrr(w);
  if (!problems.empty()) throw StructuralError(problems.front());
  return w;
}

void cmd_wrr_encode(Workspace& ws, const Options& o, Report& r) {
  const Document& d = ws.pick("laxdiagram", o.name);
  LaxDiagram L = ws.lax(d.name);
  LaxEncoding enc = encode_lax(L);
  r.kv("length", enc.w.length());
  r.kv("total_objects", enc.E()->nobj());
  r.kv("total_morphisms", enc.E()->nmor());
  r.j["h"] = r.out.functor(enc.w.h, d.name + ".h", d.name + ".D", d.name + ".E");
  r.j["p"] = r.out.functor(enc.w.p, d.name + ".p", "", "@chain(" + std::to_string(enc.w.length()) + ")");
  auto rep = decode_encode_iso(L, decode_lax(enc.w));
  r.kv("roundtrip", rep.ok);
  if (!rep.ok) throw PropertyFalse(rep.witness);
}

void cmd_wrr_decode(Workspace& ws, Report& r, const std::string& h, const std::string& p) {
  WrrObject w = wrr_from(ws, h, p);
  LaxDiagram L = decode_lax(w);
  r.kv("length", L.n);
  r.j["diagram"] = r.out.lax(L, h + ".decoded");
  auto rep = encode_decode_iso(w, encode_lax(L).w);
  r.kv("roundtrip", rep.ok);
  if (!rep.ok) throw PropertyFalse(rep.witness);
}

void cmd_laxcolim(Workspace& ws, const Options& o, Report& r) {
  const Document& d = ws.pick("laxdiagram", o.name);
  EquivalenceReport e = colimit_check(ws.lax(d.name), o.cap);
  r.kv("cap", o.cap);
  r.kv("cocones", e.left_objects);
  r.kv("modules", e.right_objects);
  r.kv("cocone_morphisms", e.left_morphisms);
  r.kv("module_morphisms", e.right_morphisms);
  r.kv("equivalence", e.ok);
  if (!e.ok) throw PropertyFalse(e.witness);
}

void cmd_collapse(Workspace& ws, const Options& o, Report& r, const std::string& h, const std::string& p) {
  Collapsed c = collapse_fibers(wrr_from(ws, h, p), o.bound);
  r.kv("bound", c.q.bound);
  r.kv("max_depth", c.q.max_depth);
  r.kv("morphisms", c.cat->nmor());
  r.j["quotient"] = r.out.functor(c.quotient, h + ".collapse", "", h + ".collapsed");
}

void cmd_nerve(Workspace& ws, const Options& o, Report& r, const std::vector<std::string>& objs) {
  const Document& d = ws.pick("category", o.name);
  Cat c = ws.category(d.name);
  std::vector<int> A;
  for (auto& a : objs) {
    int x = c->object_index(a);
    if (x < 0) throw DanglingReference(0, 0, "unknown object '" + a + "'");
    A.push_back(x);
  }
  if (A.empty())
    for (int x = 0; x < c->nobj(); ++x) A.push_back(x);
  auto nv = nerve(c, A);
  json sizes = json::array();
  for (int x = 0; x < c->nobj(); ++x) {
    std::vector<int> s(A.size(), 0);
    for (int e = 0; e < nv[x]->size(); ++e) ++s[nv[x]->under[e]];
    sizes.push_back({{"object", c->obj_name(x)}, {"fibers", s}});
    r.lines.push_back("nerve(" + c->obj_name(x) + "): " + join(s));
  }
  r.j["nerves"] = sizes;
  NerveReport ff = nerve_ff(c, A);
  r.kv("fully_faithful", ff.ok);
  if (!ff.ok) throw PropertyFalse(ff.witness);
}

void cmd_theory_from_monad(Workspace& ws, const Options& o, Report& r, const std::string& ar) {
  const Document& d = ws.pick("monad", o.name);
  Monad m = ws.monad(d.name);
  Theory th = theory_from_monad(m, ws.arities(ar, m.base), o.cap);
  r.kv("arities", ar);
  r.j["functor"] = r.out.functor(th.t, d.name + ".theory", "", d.name + ".kleisli");
  auto problems = validate_theory(th, o.cap);
  r.kv("valid", problems.empty());
  if (!problems.empty()) throw PropertyFalse(problems.front());
}

Theory load_theory(Workspace& ws, const Options& o) { return ws.theory(ws.pick("theory", o.name).name); }

void cmd_models(Workspace& ws, const Options& o, Report& r) {
  Theory th = load_theory(ws, o);
  auto ms = models(th, o.cap);
  r.kv("cap", o.cap);
  r.kv("count", ms.size());
  json list = json::array();
  for (auto& M : ms) list.push_back(sizes_of(M));
  r.j["fiber_sizes"] = list;
  for (auto& l : list) r.lines.push_back("  " + l.dump());
}

json verdict(const Verdict& v) {
  json j{{"ok", v.ok}};
  if (!v.ok) j["witness"] = v.witness;
  return j;
}

void put_goodness(Report& r, const GoodnessReport& g) {
  r.note("unit_counit", verdict(g.unit_counit), g.unit_counit.ok ? "ok" : "FAIL " + g.unit_counit.witness);
  r.note("edges", verdict(g.edges), g.edges.ok ? "ok" : "FAIL " + g.edges.witness);
  r.note("pullback", verdict(g.pullback), g.pullback.ok ? "ok" : "FAIL " + g.pullback.witness);
  r.note("monad", verdict(g.monad), g.monad.ok ? "ok" : "FAIL " + g.monad.witness);
  r.kv("saturated_bound", g.saturation_bound);
  r.kv("max_depth", g.max_depth);
  r.kv("good", g.good());
}

void cmd_good(Workspace& ws, const Options& o, Report& r) {
  GoodnessReport g = is_good(load_theory(ws, o), o.bound, o.cap);
  put_goodness(r, g);
  if (!g.good()) throw PropertyFalse("theory is not good");
}

void cmd_complete_theory(Workspace& ws, const Options& o, Report& r) {
  const Document& d = ws.pick("theory", o.name);
  Theory th = ws.theory(d.name);
  std::string why;
  r.kv("complete", theory_complete(th, &why));
  Completion c = complete_theory(th, o.bound, o.cap);
  put_goodness(r, c.goodness);
  r.kv("completed_objects", c.theory.T0()->nobj());
  r.kv("completed_morphisms", c.theory.T0()->nmor());
  r.kv("result_complete", theory_complete(c.theory));
  r.j["u"] = r.out.functor(c.u, d.name + ".u", "", d.name + ".completed");
  r.j["functor"] = r.out.functor(c.theory.t, d.name + ".completion");
  Verdict idem = completion_idempotent(th, o.bound, o.cap);
  r.note("idempotent", verdict(idem), idem.ok ? "ok" : "FAIL " + idem.witness);
  if (!c.goodness.good() || !idem.ok) throw PropertyFalse("completion check failed");
}

void cmd_models_invariance(Workspace& ws, const Options& o, Report& r) {
  EquivalenceReport e = models_invariance(load_theory(ws, o), o.cap, o.bound);
  r.kv("cap", o.cap);
  r.kv("models", e.left_objects);
  r.kv("completed_models", e.right_objects);
  r.kv("equivalence", e.ok);
  if (!e.ok) throw PropertyFalse(e.witness);
}

simplex::MapClass map_class(const std::string& s) {
  using simplex::MapClass;
  static const std::map<std::string, MapClass> m = {{"all", MapClass::all},           {"active", MapClass::active},
                                                    {"inert", MapClass::inert},       {"cellular", MapClass::cellular},
                                                    {"surjective", MapClass::surjective}, {"injective", MapClass::injective}};
  auto it = m.find(s);
  if (it == m.end()) throw ParseError(0, 0, "unknown map class '" + s + "'");
  return it->second;
}

json map_json(const simplex::SimplexMap& f) { return {{"n", f.n}, {"m", f.m}, {"values", f.v}}; }
std::string map_text(const simplex::SimplexMap& f) {
  return "[" + std::to_string(f.n) + "]->[" + std::to_string(f.m) + "] (" + join(f.v) + ")";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite categories, profunctors and theories with arities"};
  app.require_subcommand(1);
  app.fallthrough();
  Options o;
  app.add_option("--cap", o.cap, "module fiber cap")->capture_default_str();
  app.add_option("--bound", o.bound, "string-saturation bound")->capture_default_str();
  app.add_flag("--json", o.json_out, "machine-readable report");
  app.add_option("--seed", o.seed, "seed for randomized choices")->capture_default_str();

  auto input = [&](CLI::App* c, bool named = true) {
    c->add_option("file", o.file, "input .cat file, - for stdin")->capture_default_str();
    if (named) c->add_option("-n,--name", o.name, "document to use (default: last of the right kind)");
  };
  std::string a, b, f, g, m, n, flag, arities = "all", klass = "all", values;
  std::vector<std::string> objs;
  int sn = 0, sm = 0, si = 0, sj = 0, size_bound = 4;

  std::map<std::string, CLI::App*> sub;
  auto add = [&](const std::string& name, const std::string& help) { return sub[name] = app.add_subcommand(name, help); };
  input(add("validate", "check every axiom of each document"));
  input(add("core", "maximal subgroupoid of a category"));
  input(add("complete", "complete a flagged category"));
  sub["complete"]->add_option("--flag", flag, "functor document flag -> base (default: discrete flag)");
  input(add("compose", "compose two functors or two profunctors"), false);
  sub["compose"]->add_option("first", a)->required();
  sub["compose"]->add_option("second", b)->required();
  input(add("companion", "companion profunctor of a functor"));
  input(add("conjoint", "conjoint profunctor of a functor"));
  input(add("adjunction", "unit, counit and triangle identities for companion and conjoint"));
  input(add("collage", "collage of a profunctor and its factorization"));
  input(add("nats", "natural transformations between two functors or profunctors"), false);
  sub["nats"]->add_option("first", a)->required();
  sub["nats"]->add_option("second", b)->required();
  input(add("mate", "mate correspondence for squares M g_! => f_! N"), false);
  sub["mate"]->add_option("--f", f)->required();
  sub["mate"]->add_option("--g", g)->required();
  sub["mate"]->add_option("--m", m)->required();
  sub["mate"]->add_option("--n", n)->required();
  input(add("kleisli", "Kleisli category of a monad"));
  input(add("em", "Eilenberg-Moore category of a monad"));
  input(add("promonad", "promonad of a monad or an identity-on-objects functor"));
  input(add("wrr-encode", "encode a lax diagram as a functor over [n]"));
  input(add("wrr-decode", "decode a functor over [n] into a lax diagram"), false);
  sub["wrr-decode"]->add_option("--map", f, "functor h: D -> E")->required();
  sub["wrr-decode"]->add_option("--over", g, "functor p: E -> [n]")->required();
  input(add("laxcolim", "compare lax cocones with modules over the encoding"));
  input(add("collapse", "invert the fiberwise arrows of an encoding"), false);
  sub["collapse"]->add_option("--map", f, "functor h: D -> E")->required();
  sub["collapse"]->add_option("--over", g, "functor p: E -> [n]")->required();
  input(add("nerve", "nerve of each object relative to a full subcategory"));
  sub["nerve"]->add_option("--objects", objs, "objects of the subcategory (default: all)");
  input(add("theory-from-monad", "Kleisli theory of a monad with arities"));
  sub["theory-from-monad"]->add_option("--arities", arities, "all | dense x y ... | explicit m1 ...")->capture_default_str();
  input(add("models", "models of a theory up to the cap"));
  input(add("good", "goodness checks of a theory"));
  input(add("complete-theory", "completion of a good theory"));
  input(add("models-invariance", "models of a theory versus its completion"));
  auto* sx = add("simplex", "maps of the simplex category");
  sx->require_subcommand(1);
  auto* sx_enum = sx->add_subcommand("enumerate", "list maps [n] -> [m] of a class");
  sx_enum->add_option("n", sn)->required();
  sx_enum->add_option("m", sm)->required();
  sx_enum->add_option("--class", klass)->capture_default_str();
  auto* sx_factor = sx->add_subcommand("factor", "active/inert and surjective/injective factorizations");
  sx_factor->add_option("m", sm)->required();
  sx_factor->add_option("values", values, "images of 0..n, space separated")->required();
  auto* sx_bimod = sx->add_subcommand("bimod", "bimodule homs between intervals of [n]");
  sx_bimod->add_option("n", sn)->required();
  sx_bimod->add_option("i", si)->required();
  sx_bimod->add_option("j", sj)->required();
  sx_bimod->add_option("--size-bound", size_bound)->capture_default_str();
  sx_bimod->add_flag("--unital", "only unital homs");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kOk : kInput;
  }

  Report r;
  int rc = kOk;
  std::string cmd;
  for (auto& [k, c] : sub)
    if (c->parsed()) cmd = k;
  r.j["command"] = cmd;
  try {
    if (cmd == "simplex") {
      if (sx_enum->parsed()) {
        auto maps = simplex::enumerate_maps(sn, sm, map_class(klass));
        r.kv("count", maps.size());
        json list = json::array();
        for (auto& x : maps) {
          list.push_back(x.v);
          r.lines.push_back("  " + map_text(x));
        }
        r.j["maps"] = list;
      } else if (sx_factor->parsed()) {
        std::vector<int> v;
        std::istringstream in(values);
        for (int x; in >> x;) v.push_back(x);
        simplex::SimplexMap fm{static_cast<int>(v.size()) - 1, sm, v};
        if (v.empty() || !simplex::valid(fm)) throw ParseError(0, 0, "not a monotone map into [" + std::to_string(sm) + "]");
        auto [act, inert] = simplex::factor_active_inert(fm);
        auto [surj, inj] = simplex::factor_surj_inj(fm);
        r.note("active", map_json(act), map_text(act));
        r.note("inert", map_json(inert), map_text(inert));
        r.note("surjective", map_json(surj), map_text(surj));
        r.note("injective", map_json(inj), map_text(inj));
        if (!(simplex::compose(inert, act) == fm) || !(simplex::compose(inj, surj) == fm))
          throw PropertyFalse("factorization does not compose back");
      } else {
        if (!(0 <= si && si <= sn && 0 <= sj && sj <= sn)) throw ParseError(0, 0, "indices out of range");
        if (sx_bimod->count("--unital")) {
          auto hs = simplex::unital_bimod_hom(sn, si, sj);
          r.kv("count", hs.size());
          for (auto& x : hs) r.lines.push_back("  " + map_text(x));
        } else {
          auto hs = simplex::bimod_hom(sn, si, sj, size_bound);
          r.kv("count", hs.size());
          for (auto& x : hs) r.lines.push_back("  " + map_text(x.a) + " intervals " + join(x.c));
        }
      }
    } else {
      Workspace ws = Workspace::from_text(read_input(o.file));
      register_inputs(ws, r.out);
      if (cmd == "validate") cmd_validate(ws, o, r);
      else if (cmd == "core") cmd_core(ws, o, r);
      else if (cmd == "complete") cmd_complete(ws, o, r, flag);
      else if (cmd == "compose") cmd_compose(ws, r, a, b);
      else if (cmd == "companion") cmd_companion(ws, o, r, false);
      else if (cmd == "conjoint") cmd_companion(ws, o, r, true);
      else if (cmd == "adjunction") cmd_adjunction(ws, o, r);
      else if (cmd == "collage") cmd_collage(ws, o, r);
      else if (cmd == "nats") cmd_nats(ws, r, a, b);
      else if (cmd == "mate") cmd_mate(ws, r, f, g, m, n);
      else if (cmd == "kleisli") cmd_kleisli(ws, o, r);
      else if (cmd == "em") cmd_em(ws, o, r);
      else if (cmd == "promonad") cmd_promonad(ws, o, r);
      else if (cmd == "wrr-encode") cmd_wrr_encode(ws, o, r);
      else if (cmd == "wrr-decode") cmd_wrr_decode(ws, r, f, g);
      else if (cmd == "laxcolim") cmd_laxcolim(ws, o, r);
      else if (cmd == "collapse") cmd_collapse(ws, o, r, f, g);
      else if (cmd == "nerve") cmd_nerve(ws, o, r, objs);
      else if (cmd == "theory-from-monad") cmd_theory_from_monad(ws, o, r, arities);
      else if (cmd == "models") cmd_models(ws, o, r);
      else if (cmd == "good") cmd_good(ws, o, r);
      else if (cmd == "complete-theory") cmd_complete_theory(ws, o, r);
      else if (cmd == "models-invariance") cmd_models_invariance(ws, o, r);
    }
  } catch (const PropertyFalse& e) {
    rc = kFalse;
    r.j["witness"] = e.what();
    r.lines.push_back(std::string("FALSE: ") + e.what());
  } catch (const Unsaturated& e) {
    rc = kBound;
    r.j["error"] = e.what();
    r.lines.push_back(std::string("BOUND: ") + e.what());
  } catch (const ParseError& e) {
    rc = kInput;
    r.j["error"] = e.what();
    r.lines.push_back(std::string("INPUT: ") + e.what());
  } catch (const StructuralError& e) {
    rc = kInput;
    r.j["error"] = e.what();
    r.lines.push_back(std::string("INPUT: ") + e.what());
  }
  r.j["status"] = rc;
  if (o.json_out) {
    if (!r.out.docs.empty()) r.j["documents"] = r.out.text();
    std::cout << r.j.dump(2) << "\n";
  } else {
    for (auto& l : r.lines) std::cout << "# " << l << "\n";
    if (!r.out.docs.empty()) std::cout << r.out.text();
  }
  return rc;
}
