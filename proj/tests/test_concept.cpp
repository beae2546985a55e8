#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "alc/normal_form.hpp"
#include "alc/ontology.hpp"
#include "alc/set_oracle.hpp"
#include "support.hpp"

using namespace alc;
using namespace alc_test;

namespace {

Signature abr() {
    Signature s;
    s.add_concept("A");
    s.add_concept("B");
    s.add_role("R");
    return s;
}

Concept P(const char* text) { return parse_concept(text, abr()); }

// Rules (i)-(iv) run to a fixpoint over NNF members, written independently.
std::set<std::string> closure_oracle(const Concept& c0, const Ontology& o) {
    std::set<std::string> seen;
    std::vector<Concept> work{canonical_nnf(c0)};
    for (const auto& g : o.axioms()) work.push_back(canonical_nnf(Concept::disj(Concept::negation(g.lhs), g.rhs)));
    while (!work.empty()) {
        Concept c = work.back();
        work.pop_back();
        if (!seen.insert(c.text()).second) continue;
        switch (c.kind()) {
            case Kind::Not:
            case Kind::Exists:
            case Kind::Forall: work.push_back(c.left()); break;
            case Kind::And:
            case Kind::Or:
                work.push_back(c.left());
                work.push_back(c.right());
                break;
            default: break;
        }
    }
    return seen;
}

std::size_t size_of(const Concept& c) {
    if (c.is_atomic()) return 1;
    if (c.is(Kind::And) || c.is(Kind::Or)) return 1 + size_of(c.left()) + size_of(c.right());
    return 1 + size_of(c.left());
}

}  // namespace

TEST_CASE("parse examples") {
    CHECK(P("A") == Concept::name("A"));
    CHECK(P("(and A (not A))") == Concept::conj(Concept::name("A"), Concept::negation(Concept::name("A"))));
    CHECK(P("(some R (or A B))") ==
          Concept::exists("R", Concept::disj(Concept::name("A"), Concept::name("B"))));
    CHECK(P("  ( and\tA\n B ) ") == P("(and A B)"));
    CHECK(P("top").is(Kind::Top));
    CHECK(P("bot").is(Kind::Bot));
}

TEST_CASE("parse errors") {
    CHECK_THROWS_AS(P("(and A"), ParseError);
    CHECK_THROWS_AS(P("(and A B C)"), ParseError);
    CHECK_THROWS_AS(P("(maybe A)"), ParseError);
    CHECK_THROWS_AS(P(""), ParseError);
    CHECK_THROWS_AS(P("A B"), ParseError);
    try {
        P("(and A (not Z))");
        FAIL("expected an undeclared identifier");
    } catch (const UndeclaredIdentifier& e) {
        CHECK(e.identifier() == "Z");
    }
    CHECK_THROWS_AS(P("(some Q A)"), UndeclaredIdentifier);
    CHECK_THROWS_AS(P("(some A A)"), UndeclaredIdentifier);  // A is a concept name
    try {
        P("(and A !)");
        FAIL("expected a syntax error");
    } catch (const ParseError& e) {
        CHECK(e.position() == 7);
    }
}

TEST_CASE("print examples") {
    CHECK(print_concept(Concept::top()) == "top");
    CHECK(print_concept(Concept::negation(Concept::name("A"))) == "(not A)");
    CHECK(print_concept(Concept::forall("R", Concept::bot())) == "(all R bot)");
    CHECK(print_concept(P("(some R (or A B))")) == "(some R (or A B))");
}

TEST_CASE("print/parse roundtrip") {
    std::mt19937_64 rng(11);
    Signature sig = abr();
    sig.add_concept("C");
    sig.add_role("S");
    for (int i = 0; i < 500; ++i) {
        Concept c = random_concept(rng, 4, 3, 2);
        CHECK(parse_concept(print_concept(c), sig) == c);
    }
}

TEST_CASE("signature rules") {
    Signature s;
    CHECK_THROWS_AS(s.add_concept("1A"), std::invalid_argument);
    CHECK_THROWS_AS(s.add_concept("A B"), std::invalid_argument);
    s.add_concept("A_1-x");
    CHECK(s.has_concept("A_1-x"));
    CHECK_FALSE(s.has_concept("a_1-x"));
    CHECK_THROWS_AS(s.add_role("A_1-x"), std::invalid_argument);
    CHECK(is_identifier("Ab9"));
    CHECK_FALSE(is_identifier("_A"));
}

TEST_CASE("nnf examples") {
    CHECK(nnf(P("(not (and A B))")) == P("(or (not A) (not B))"));
    CHECK(nnf(P("(not (not A))")) == P("A"));
    CHECK(nnf(P("(not (some R A))")) == P("(all R (not A))"));
    CHECK(nnf(P("(not (all R A))")) == P("(some R (not A))"));
    CHECK(nnf(P("(not top)")) == P("bot"));
    CHECK(nnf(P("(not bot)")) == P("top"));
    CHECK(nnf(P("(not (or A (not B)))")) == P("(and (not A) B)"));
}

TEST_CASE("nnf properties") {
    std::mt19937_64 rng(5);
    auto worlds = tiny_worlds();
    CHECK(worlds.size() == 8 + 256);
    for (int i = 0; i < 300; ++i) {
        Concept c = random_concept(rng, 3);
        Concept n = nnf(c);
        CHECK(is_nnf(n));
        CHECK(nnf(n) == n);
        for (const auto& w : worlds) REQUIRE(ev(c, w) == ev(n, w));
    }
}

TEST_CASE("sub_closure examples") {
    auto texts = [](const std::vector<Concept>& v) {
        std::set<std::string> s;
        for (const auto& c : v) s.insert(c.text());
        return s;
    };
    CHECK(texts(sub_closure(P("A"), {})) == std::set<std::string>{"A"});
    CHECK(texts(sub_closure(P("(and A B)"), {})) == std::set<std::string>{"(and A B)", "A", "B"});
    Ontology o = parse_ontology("A => B");
    auto got = sub_closure(P("(some R A)"), o);
    CHECK(texts(got) == closure_oracle(P("(some R A)"), o));
    CHECK(texts(got) ==
          std::set<std::string>{"(some R A)", "A", "(or (not A) B)", "(not A)", "B"});
    CHECK(got.size() == 5);
    CHECK(got[0] == canonical_nnf(P("(some R A)")));
}

TEST_CASE("sub_closure is closed, deterministic and linear") {
    std::mt19937_64 rng(9);
    for (int i = 0; i < 200; ++i) {
        Concept c = random_concept(rng, 4, 3, 2);
        std::vector<GCI> ax;
        for (int k = 0; k < 3; ++k) ax.push_back({random_concept(rng, 2, 3, 2), random_concept(rng, 2, 3, 2)});
        Signature sig;
        for (const auto& g : ax) {
            collect_signature(g.lhs, sig);
            collect_signature(g.rhs, sig);
        }
        Ontology o(sig);
        for (const auto& g : ax) o.add(g);
        auto cl = sub_closure(c, o);
        std::set<std::string> s;
        for (const auto& m : cl) {
            CHECK(is_nnf(m));
            s.insert(m.text());
        }
        CHECK(s.size() == cl.size());
        CHECK(s == closure_oracle(c, o));
        CHECK(sub_closure(c, o) == cl);
        std::size_t bound = size_of(c);
        for (const auto& g : o.axioms()) bound += size_of(g.as_disjunction());
        CHECK(cl.size() <= 2 * bound);
    }
}

TEST_CASE("canonical keys") {
    CHECK(canonical_key(P("(and A B)")) == canonical_key(P("(and B A)")));
    CHECK(canonical_key(P("(and A B)")) != canonical_key(P("(or A B)")));
    CHECK(canonical_key(P("A")) != canonical_key(P("(not (not A))")));
    CHECK(canonical_key(nnf(P("A"))) == canonical_key(nnf(P("(not (not A))"))));
    CHECK(canonical(P("(and A A)")).text() == "(and A A)");
    CHECK(canonical_key(P("(some R (or B (and B A)))")) == canonical_key(P("(some R (or (and A B) B))")));
    // key order is a total order over printed forms
    CHECK(canonical_key(P("A")) < canonical_key(P("B")));
}

TEST_CASE("ontology format") {
    Ontology o = parse_ontology(
        "# a comment\n"
        "concepts: A B C\n"
        "roles: R\n"
        "A => (some R B)\n"
        "\n"
        "A => (some R B)   # duplicate\n"
        "(and B C) => bot\n");
    CHECK(o.axioms().size() == 2);
    CHECK(o.signature().has_role("R"));
    CHECK(o.axioms()[1].lhs.text() == "(and B C)");
    CHECK(o.axioms()[0].rhs.text() == "(some R B)");
    CHECK_THROWS_AS(parse_ontology("concepts: A\nA => B\n"), UndeclaredIdentifier);
    CHECK_THROWS(parse_ontology("A =>\n"));
    CHECK_THROWS(parse_ontology("A B\n"));
    // hash is stable and order sensitive
    Ontology p = parse_ontology("A => (some R B)\n(and B C) => bot\n");
    Ontology q = parse_ontology("(and B C) => bot\nA => (some R B)\n");
    CHECK(p.hash() == o.hash());
    CHECK(p.hash() != q.hash());
    CHECK(p.hash().size() == 16);
    CHECK(parse_ontology(p.to_text()).hash() == p.hash());
    CHECK(Ontology{}.empty());
}

TEST_CASE("library evaluator agrees with the direct semantics") {
    std::mt19937_64 rng(21);
    auto worlds = tiny_worlds();
    for (int i = 0; i < 100; ++i) {
        Concept c = random_concept(rng, 3);
        for (std::size_t k = 0; k < worlds.size(); k += 7) {
            const auto& w = worlds[k];
            Interpretation in;
            in.domain_size = w.n;
            for (const auto& [name, ext] : w.c)
                for (int e : ext) in.concept_ext[name] |= Subset{1} << e;
            for (const auto& [name, ext] : w.r) in.role_ext[name] = ext;
            std::set<int> lib;
            for (int e : members(eval_concept(c, in))) lib.insert(e);
            REQUIRE(lib == ev(c, w));
        }
    }
}
