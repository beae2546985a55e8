#include <doctest.h>

#include <random>

#include "alc/certificate.hpp"
#include "alc/normal_form.hpp"
#include "alc/tableau.hpp"

using namespace alc;

namespace {

Concept P(const char* text) {
    Signature sig;
    return parse_concept_lenient(text, sig);
}

Certificate extract(const Concept& c, const Ontology& o, RuleOrder order = RuleOrder::Standard) {
    TableauConfig cfg;
    cfg.order = order;
    auto v = decide_sat(c, o, cfg);
    REQUIRE_FALSE(v.satisfiable);
    return extract_certificate(v.meta, c, o);
}

void expect_valid(const char* text, const char* onto = "") {
    CAPTURE(text);
    Concept c = P(text);
    Ontology o = parse_ontology(onto);
    Certificate cert = extract(c, o);
    auto r = check_certificate(cert, c, o);
    CAPTURE(r.reason);
    CAPTURE(r.failed_step);
    CHECK(r.ok);
    CHECK(guided_cat_unsat(cert, c, o));
}

// random concept over names A B C, roles R S
Concept random_concept(std::mt19937_64& rng, int depth) {
    std::uniform_int_distribution<int> pick(0, depth <= 0 ? 2 : 8);
    const char* names[] = {"A", "B", "C"};
    const char* roles[] = {"R", "S"};
    switch (pick(rng)) {
        case 0:
        case 1: return Concept::name(names[rng() % 3]);
        case 2: return Concept::negation(Concept::name(names[rng() % 3]));
        case 3: return Concept::negation(random_concept(rng, depth - 1));
        case 4:
        case 5: return Concept::conj(random_concept(rng, depth - 1), random_concept(rng, depth - 1));
        case 6: return Concept::disj(random_concept(rng, depth - 1), random_concept(rng, depth - 1));
        case 7: return Concept::exists(roles[rng() % 2], random_concept(rng, depth - 1));
        default: return Concept::forall(roles[rng() % 2], random_concept(rng, depth - 1));
    }
}

std::vector<Certificate> mutations(const Certificate& c, std::mt19937_64& rng) {
    std::vector<Certificate> out;
    const int n = static_cast<int>(c.steps.size());
    std::vector<std::string> keys;
    for (const auto& s : c.steps) {
        keys.push_back(s.src);
        keys.push_back(s.dst);
    }
    const auto& rules = rule_names();
    for (int i = 0; i < n; ++i) {
        const CertStep& s = c.steps[i];
        if (s.src != s.dst) {
            Certificate m = c;
            std::swap(m.steps[i].src, m.steps[i].dst);
            out.push_back(m);
        }
        {
            Certificate m = c;
            std::string k = keys[rng() % keys.size()];
            if (k != s.dst) {
                m.steps[i].dst = k;
                out.push_back(m);
            }
        }
        {
            Certificate m = c;
            std::string k = keys[rng() % keys.size()];
            if (k != s.src) {
                m.steps[i].src = k;
                out.push_back(m);
            }
        }
        {
            Certificate m = c;
            std::string r = rules[rng() % rules.size()];
            if (r != s.rule) {
                m.steps[i].rule = r;
                out.push_back(m);
            }
        }
        if (!s.premises.empty()) {
            Certificate m = c;
            m.steps[i].premises.pop_back();
            out.push_back(m);
            Certificate m2 = c;
            int& q = m2.steps[i].premises[rng() % s.premises.size()];
            int other = static_cast<int>(rng() % static_cast<unsigned>(i));
            if (other != q && m2.steps[other].src + m2.steps[other].dst != c.steps[q].src + c.steps[q].dst) {
                q = other;
                out.push_back(m2);
            }
        }
        {
            Certificate m = c;
            m.steps.erase(m.steps.begin() + i);
            out.push_back(m);
        }
    }
    return out;
}

}  // namespace

TEST_CASE("bottom has the empty certificate") {
    Certificate cert = extract(Concept::bot(), {});
    CHECK(cert.steps.empty());
    CHECK(check_certificate(cert, Concept::bot(), {}).ok);
    CHECK_FALSE(check_certificate(cert, P("(and A (not A))"), {}).ok);
}

TEST_CASE("hand-picked unsatisfiable concepts") {
    expect_valid("(and A (not A))");
    expect_valid("(and (not A) A)");
    expect_valid("(not top)");
    expect_valid("(and A (and B (not A)))");
    expect_valid("(and (or A B) (and (not A) (not B)))");
    expect_valid("(and (or A B) (and (or (not A) C) (and (not B) (not C))))");
    expect_valid("(and (some R A) (all R (not A)))");
    expect_valid("(and (some R A) (and (all R B) (all R (not B))))");
    expect_valid("(and (some R (some S A)) (all R (all S (not A))))");
    expect_valid("(and (some R (or A B)) (all R (and (not A) (not B))))");
    expect_valid("(not (or (all R A) (some R (not A))))");
    expect_valid("(not (or (not (and A B)) A))");
    expect_valid("(and (some R bot) B)");
}

TEST_CASE("certificates with ontologies") {
    expect_valid("A", "A => bot");
    expect_valid("A", "A => (some R B)\nB => bot");
    expect_valid("(and A B)", "A => (not B)");
    expect_valid("A", "A => (or B C)\nB => bot\nC => (not A)");
    expect_valid("(some R A)", "top => (all R (not A))");
}

TEST_CASE("satisfiable concepts have no certificate") {
    Concept c = P("(and A (some R B))");
    auto v = decide_sat(c, {});
    REQUIRE(v.satisfiable);
    CHECK_THROWS_AS(extract_certificate(v.meta, c, {}), NoCertificate);
}

TEST_CASE("listed rule order is refused") {
    Concept c = P("(and A (not A))");
    TableauConfig cfg;
    cfg.order = RuleOrder::Listed;
    auto v = decide_sat(c, {}, cfg);
    CHECK_THROWS_AS(extract_certificate(v.meta, c, {}), CertificateRefused);
}

TEST_CASE("wrong concept or ontology is rejected") {
    Concept c = P("(and A (not A))");
    Certificate cert = extract(c, {});
    CHECK_FALSE(check_certificate(cert, P("(and B (not B))"), {}).ok);
    CHECK_FALSE(check_certificate(cert, c, parse_ontology("A => B")).ok);
}

TEST_CASE("json round trip") {
    Concept c = P("(and (some R A) (and (all R B) (all R (not B))))");
    Certificate cert = extract(c, {});
    std::string js = certificate_json(cert);
    Certificate back = certificate_from_json(js);
    CHECK(back.steps == cert.steps);
    CHECK(back.c0 == cert.c0);
    CHECK(back.ontology_hash == cert.ontology_hash);
    CHECK(certificate_json(back) == js);
    CHECK_THROWS_AS(certificate_from_json("{"), std::invalid_argument);
    CHECK_THROWS_AS(certificate_from_json(R"({"concept":"A"})"), std::invalid_argument);
}

TEST_CASE("single-step mutations are rejected") {
    std::mt19937_64 rng(7);
    for (const char* text : {"(and (some R A) (and (all R B) (all R (not B))))",
                             "(and (or A B) (and (not A) (not B)))",
                             "(not (or (all R A) (some R (not A))))"}) {
        Concept c = P(text);
        Certificate cert = extract(c, {});
        REQUIRE(check_certificate(cert, c, {}).ok);
        for (const auto& m : mutations(cert, rng)) {
            auto r = check_certificate(m, c, {});
            CHECK_FALSE(r.ok);
        }
    }
}

TEST_CASE("random unsatisfiable concepts certify") {
    std::mt19937_64 rng(2024);
    int unsat = 0;
    for (int i = 0; i < 1500; ++i) {
        Concept c = random_concept(rng, 4);
        auto v = decide_sat(c, {});
        if (v.satisfiable) continue;
        ++unsat;
        CAPTURE(c.text());
        Certificate cert = extract_certificate(v.meta, c, {});
        auto r = check_certificate(cert, c, {});
        CAPTURE(r.reason);
        CAPTURE(r.failed_step);
        REQUIRE(r.ok);
        CHECK(guided_cat_unsat(cert, c, {}));
    }
    CHECK(unsat > 50);
}
