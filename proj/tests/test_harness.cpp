#include <doctest.h>

#include <cstdlib>
#include <functional>

#include "alc/harness.hpp"
#include "alc/normal_form.hpp"

using namespace alc;

namespace {

int depth(const Concept& c) {
    if (c.is_atomic()) return 0;
    if (c.is(Kind::And) || c.is(Kind::Or)) return 1 + std::max(depth(c.left()), depth(c.right()));
    return 1 + depth(c.left());
}

bool only(const Concept& c, const std::function<bool(Kind)>& ok) {
    if (c.is_atomic()) return true;
    if (!ok(c.kind())) return false;
    if (c.is(Kind::And) || c.is(Kind::Or)) return only(c.left(), ok) && only(c.right(), ok);
    return only(c.left(), ok);
}

Instance instance(const char* text, const char* onto = "") {
    Signature sig;
    Instance i;
    i.raw = parse_concept_lenient(text, sig);
    i.nnf = canonical_nnf(i.raw);
    i.ontology = parse_ontology(onto);
    return i;
}

}  // namespace

TEST_CASE("generator is deterministic") {
    GenConfig cfg;
    cfg.seed = 1;
    cfg.count = 1;
    auto a = generate(cfg), b = generate(cfg);
    REQUIRE(a.size() == 1);
    CHECK(a[0].raw == b[0].raw);
    CHECK(a[0].ontology.hash() == b[0].ontology.hash());
    cfg.count = 50;
    auto c = generate(cfg), d = generate(cfg);
    for (std::size_t i = 0; i < c.size(); ++i) {
        CHECK(c[i].raw == d[i].raw);
        CHECK(c[i].ontology.to_text() == d[i].ontology.to_text());
    }
}

TEST_CASE("generator respects bounds") {
    GenConfig cfg;
    cfg.count = 200;
    cfg.n_concept_names = 2;
    cfg.n_roles = 1;
    cfg.max_depth = 3;
    cfg.n_axioms = 4;
    for (const auto& i : generate(cfg)) {
        CHECK(depth(i.raw) <= 3);
        CHECK(i.ontology.axioms().size() <= 4);
        Signature sig;
        collect_signature(i.raw, sig);
        for (const auto& g : i.ontology.axioms()) {
            collect_signature(g.lhs, sig);
            collect_signature(g.rhs, sig);
        }
        for (const auto& n : sig.concept_names) CHECK((n == "A" || n == "B"));
        for (const auto& r : sig.role_names) CHECK(r == "R");
        CHECK(i.nnf == canonical_nnf(i.raw));
    }
}

TEST_CASE("depth zero gives atoms") {
    GenConfig cfg;
    cfg.count = 50;
    cfg.max_depth = 0;
    for (const auto& i : generate(cfg)) CHECK(i.raw.is_atomic());
}

TEST_CASE("conjunction-only weights give conjunction trees") {
    GenConfig cfg;
    cfg.count = 30;
    cfg.max_depth = 2;
    cfg.weights = ConnectiveWeights{0, 0, 0, 0, 1, 0, 0, 0};
    for (const auto& i : generate(cfg)) {
        CHECK(depth(i.raw) == 2);
        CHECK(only(i.raw, [](Kind k) { return k == Kind::And; }));
    }
}

TEST_CASE("invalid generator configs") {
    GenConfig cfg;
    cfg.n_concept_names = 5;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = {};
    cfg.n_roles = 0;
    CHECK_THROWS_AS(generate(cfg), std::invalid_argument);
    cfg = {};
    cfg.max_depth = 5;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = {};
    cfg.weights = ConnectiveWeights{0, 0, 0, 0, 0, 0, 0, 0};
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("contradiction: all engines unsat, certificate verified") {
    auto r = run_instance(instance("(and A (not A))"), 0, Budgets{});
    CHECK(r.tableau == Verdict::Unsat);
    CHECK(r.cat_syntactic == Verdict::Unsat);
    CHECK(r.cat_guided == Verdict::Unsat);
    CHECK(r.certificate == "verified");
    CHECK_FALSE(r.witness);
    CHECK(r.discrepancies.empty());
}

TEST_CASE("a name: sat, no bottom arrow, model of size 1") {
    auto r = run_instance(instance("A"), 0, Budgets{});
    CHECK(r.tableau == Verdict::Sat);
    CHECK(r.cat_syntactic == Verdict::Sat);
    REQUIRE(r.witness);
    CHECK(r.witness_valid);
    CHECK(r.witness->find("\"domain_size\":1") != std::string::npos);
    CHECK(r.discrepancies.empty());
}

TEST_CASE("fixture corpus has no discrepancies") {
    auto rep = run_diff(fixture_corpus(), Budgets{});
    INFO(rep.table());
    CHECK(rep.ok());
    CHECK(rep.skipped == 0);
    CHECK(rep.unsat >= 13);
}

TEST_CASE("budget exhaustion is recorded as skipped") {
    Budgets b;
    b.max_nodes = 2;
    auto r = run_instance(instance("(some R (some R (some R A)))"), 0, b);
    CHECK(r.tableau == Verdict::Skipped);
    CHECK_FALSE(r.skipped.empty());
    auto rep = run_diff({instance("(some R (some R (some R A)))")}, b);
    CHECK(rep.skipped == 1);
    CHECK(rep.sat == 0);
}

TEST_CASE("environment budget override") {
    setenv("ALC_BUDGET_SECS", "2.5", 1);
    CHECK(Budgets::from_env().seconds == doctest::Approx(2.5));
    setenv("ALC_BUDGET_SECS", "junk", 1);
    CHECK(Budgets::from_env().seconds == doctest::Approx(10));
    unsetenv("ALC_BUDGET_SECS");
}

TEST_CASE("report is order stable across thread counts") {
    GenConfig cfg;
    cfg.count = 40;
    auto corpus = generate(cfg);
    Budgets one;
    one.threads = 1;
    Budgets many;
    many.threads = 4;
    auto a = run_diff(corpus, one), b = run_diff(corpus, many);
    REQUIRE(a.instances.size() == b.instances.size());
    for (std::size_t i = 0; i < a.instances.size(); ++i) {
        CHECK(a.instances[i].index == static_cast<int>(i));
        CHECK(a.instances[i].concept_text == b.instances[i].concept_text);
        CHECK(a.instances[i].tableau == b.instances[i].tableau);
        CHECK(a.instances[i].certificate == b.instances[i].certificate);
    }
    CHECK(a.discrepancies == b.discrepancies);
}

TEST_CASE("mutations differ from the original") {
    Signature sig;
    Concept c = parse_concept_lenient("(and (some R A) (all R (not A)))", sig);
    auto v = decide_sat(c, {});
    Certificate cert = extract_certificate(v.meta, c, {});
    std::mt19937_64 rng(3);
    auto ms = mutate_certificate(cert, rng, 20);
    CHECK(ms.size() == 20);
    for (const auto& m : ms) {
        CHECK_FALSE(m.steps == cert.steps);
        CHECK_FALSE(check_certificate(m, c, {}).ok);
    }
}
