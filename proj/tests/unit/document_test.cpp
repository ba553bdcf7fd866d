#include <gtest/gtest.h>

#include "corr/catalog.hpp"
#include "corr/document.hpp"

using namespace corr;

namespace {

const char* kArrow = R"(
# the arrow category
kind: category
name: arrow
[objects]
a, b
[morphisms]
f : a->b
)";

const char* kFile = R"(
kind: category
name: Z2
[objects]
o
[morphisms]
e: o -> o
s: o -> o
[identity]
o: e
[compose]
s o s = e
---
kind: functor
name: collapse
source: Z2
target: @terminal
[objects]
o -> *
[morphisms]
s -> id
---
kind: profunctor
name: twist
source: @terminal
target: Z2
[elements]
p: * -> o
q: * -> o
[right]
p . s = q
q · s = p
---
kind: monad
name: idm
base: @chain(1)
[objects]
0 -> 0
1 -> 1
[morphisms]
0_1 -> 0_1
[unit]
0: id_0
1: id_1
[mult]
0: id_0
1: id_1
---
kind: theory
name: th
functor: collapse
arities: all
)";

template <class F>
ParseError parse_error(F&& f) {
  try {
    f();
  } catch (const ParseError& e) {
    return e;
  }
  ADD_FAILURE() << "no ParseError";
  return ParseError(0, 0, "");
}

}  // namespace

TEST(Document, CategoryWithImplicitIdentities) {
  auto ws = Workspace::from_text(kArrow);
  Cat c = ws.category("arrow");
  EXPECT_EQ(c->nobj(), 2);
  EXPECT_EQ(c->nmor(), 3);
  EXPECT_TRUE(find_isomorphism(c, cats::chain(1)).has_value());
}

TEST(Document, SerializeIsCanonicalAndIdempotent) {
  auto docs = parse_documents(kFile);
  std::string once = serialize(docs);
  std::string twice = serialize(parse_documents(once));
  EXPECT_EQ(once, twice);
  EXPECT_NE(once.find("s \xE2\x88\x98 s = e"), std::string::npos);
  EXPECT_NE(once.find("p \xC2\xB7 s = q"), std::string::npos);
  EXPECT_EQ(once.find('#'), std::string::npos);
}

TEST(Document, CatalogRoundtrip) {
  for (Cat c : {cats::terminal(), cats::chain(3), cats::cyclic_group(3), cats::klein_four(), cats::walking_iso(),
                cats::idempotent_monoid(), cats::walking_retraction(), cats::parallel_pair(), cats::span_shape()}) {
    std::string text = serialize(category_document(*c, "c"));
    Cat back = Workspace::from_text(text).category("c");
    ASSERT_EQ(back->nmor(), c->nmor());
    for (int g = 0; g < c->nmor(); ++g)
      for (int f = 0; f < c->nmor(); ++f) EXPECT_EQ(back->table[g * c->nmor() + f], c->table[g * c->nmor() + f]);
    EXPECT_EQ(serialize(parse_documents(text)), text);
  }
}

TEST(Document, FunctorProfunctorMonadTheory) {
  auto ws = Workspace::from_text(kFile);
  FinFunctor F = ws.functor("collapse");
  EXPECT_EQ(F.mo[ws.category("Z2")->morphism_index("s")], 0);
  Prof P = ws.profunctor("twist");
  EXPECT_EQ(P->size(), 2);
  EXPECT_EQ(P->ract(0, ws.category("Z2")->morphism_index("s")), 1);
  Monad m = ws.monad("idm");
  EXPECT_TRUE(validate_monad(m).empty());
  Theory t = ws.theory("th");
  EXPECT_EQ(t.T1()->nmor(), 1);
}

TEST(Document, ProfunctorRoundtrip) {
  auto A = cats::chain(2);
  auto B = cats::walking_retraction();
  FinFunctor F{A, B, {0, 0, 1}, {}};
  for (int f = 0; f < A->nmor(); ++f) {
    int x = F.ob[A->src(f)], y = F.ob[A->tgt(f)];
    F.mo.push_back(x == y ? B->identity[x] : B->hom(x, y).front());
  }
  ASSERT_TRUE(validate_functor(F).empty());
  Prof P = companion(F);
  std::string text = serialize(category_document(*A, "A")) + "---\n" + serialize(category_document(*B, "B")) + "---\n" +
                     serialize(profunctor_document(P, "P", "A", "B"));
  Prof back = Workspace::from_text(text).profunctor("P");
  EXPECT_TRUE(prof_isomorphic(P, back));
  EXPECT_EQ(serialize(parse_documents(text)), text);
}

TEST(Document, QuotedNamesSurvive) {
  auto c = make_category({"0:x"}, {{"id:0", 0, 0}}, {0}, [](int, int) { return 0; });
  std::string text = serialize(category_document(*c, "q"));
  EXPECT_NE(text.find("\"0:x\""), std::string::npos);
  EXPECT_EQ(Workspace::from_text(text).category("q")->obj_name(0), "0:x");
}

TEST(Document, SyntaxErrorsCarryPositions) {
  auto e = parse_error([] { parse_documents("kind: category\nname: c\n[objects]\nx\n[morphisms]\nf x -> x\n"); });
  EXPECT_EQ(e.line, 6);
  e = parse_error([] { Workspace::from_text("kind: category\nname: c\n[objects]\nx\n[morphisms]\nf x -> x\n").category("c"); });
  EXPECT_EQ(e.line, 6);
  EXPECT_EQ(e.col, 3);
  e = parse_error([] { parse_documents("kind: category\nname: c\n[objects\n"); });
  EXPECT_EQ(e.line, 3);
  e = parse_error([] { parse_documents("kind: widget\nname: c\n"); });
  EXPECT_EQ(e.line, 1);
  e = parse_error([] { parse_documents("kind: functor\nname: c\n[compose]\n"); });
  EXPECT_EQ(e.line, 3);
  e = parse_error([] { parse_documents("kind: category\nname: c\n[objects]\n\"x\n"); });
  EXPECT_EQ(e.line, 4);
  EXPECT_EQ(e.col, 1);
}

TEST(Document, DanglingReferences) {
  const std::string base = "kind: category\nname: c\n[objects]\nx\n[morphisms]\n";
  try {
    Workspace::from_text(base + "f: x -> y\n").category("c");
    FAIL();
  } catch (const DanglingReference& e) {
    EXPECT_EQ(e.line, 6);
    EXPECT_EQ(e.col, 9);
  }
  EXPECT_THROW(Workspace::from_text("kind: functor\nname: F\nsource: nowhere\ntarget: @terminal\n").functor("F"),
               DanglingReference);
  EXPECT_THROW(Workspace::from_text("kind: functor\nname: F\nsource: @chain(x)\ntarget: @terminal\n").functor("F"),
               DanglingReference);
}

TEST(Document, MissingCompositeIsReported) {
  const char* text = "kind: category\nname: c\n[objects]\nx\n[morphisms]\ns: x -> x\n";
  EXPECT_THROW(Workspace::from_text(text).category("c"), ParseError);
}

TEST(Document, InvalidStructureIsRejected) {
  const char* text =
      "kind: category\nname: c\n[objects]\nx\n[morphisms]\na: x -> x\nb: x -> x\n[compose]\n"
      "a o a = b\na o b = id_x\nb o a = a\nb o b = a\n";
  EXPECT_THROW(Workspace::from_text(text).category("c"), StructuralError);
}

TEST(Document, LaxDiagramRoundtripThroughText) {
  const char* text = R"(
kind: functor
name: v
source: @terminal
target: @terminal
[objects]
* -> *
---
kind: profunctor
name: one
source: @terminal
target: @terminal
[elements]
u: * -> *
---
kind: laxdiagram
name: L
[vertices]
0: v
1: v
2: v
[edges]
0 1: one
1 2: one
0 2: one
[cells]
0 1 2: u, u -> u
)";
  LaxDiagram L = Workspace::from_text(text).lax("L");
  EXPECT_EQ(L.n, 2);
  EXPECT_TRUE(validate_lax(L).empty());
  EXPECT_THROW(Workspace::from_text(std::string(text).substr(0, std::string(text).find("0 1 2"))).lax("L"), ParseError);
}

TEST(Document, WriterOutputIsSelfContained) {
  Monad m = all_monads(cats::chain(1)).back();
  DocumentWriter w;
  std::string mn = w.monad(m, "T");
  Kleisli k = kleisli(m);
  std::string jn = w.functor(k.j, "j", "", "K");
  auto ws = Workspace::from_text(w.text());
  EXPECT_TRUE(validate_monad(ws.monad(mn)).empty());
  FinFunctor j = ws.functor(jn);
  EXPECT_TRUE(find_isomorphism(j.tgt, k.cat).has_value());
  EXPECT_EQ(serialize(parse_documents(w.text())), w.text());
}

TEST(Document, LaxDiagramWriterRoundtrip) {
  Cat c1 = cats::chain(1);
  FinFunctor v = identity_functor(c1);
  LaxDiagram L = lax_diagram({v, v});
  L.edge[{0, 1}] = identity_prof(c1);
  DocumentWriter w;
  std::string n = w.lax(L, "L");
  LaxDiagram back = Workspace::from_text(w.text()).lax(n);
  EXPECT_TRUE(validate_lax(back).empty());
  EXPECT_TRUE(prof_isomorphic(back.M(0, 1), L.M(0, 1)));
  auto enc = encode_lax(back);
  EXPECT_TRUE(decode_encode_iso(back, decode_lax(enc.w)).ok);
}
