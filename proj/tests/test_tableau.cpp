#include <doctest.h>

#include "alc/certificate.hpp"
#include "alc/normal_form.hpp"
#include "alc/set_oracle.hpp"
#include "alc/tableau.hpp"
#include "support.hpp"

using namespace alc;
using namespace alc_test;

namespace {

Concept L(const char* text) {
    Signature sig;
    return parse_concept_lenient(text, sig);
}

std::vector<std::string> root_label(const MetaTree& mt, int tree = 0) {
    std::vector<std::string> out;
    for (const auto& c : mt.label_concepts(tree, 0)) out.push_back(c.text());
    return out;
}

TableauConfig full() {
    TableauConfig cfg;
    cfg.stop_at_first_model = false;
    cfg.prune = true;
    return cfg;
}

Ontology random_ontology(std::mt19937_64& rng) {
    std::vector<GCI> ax;
    int n = static_cast<int>(rng() % 3);
    for (int k = 0; k < n; ++k) ax.push_back({random_concept(rng, 1), random_concept(rng, 2)});
    Signature sig;
    for (const auto& g : ax) {
        collect_signature(g.lhs, sig);
        collect_signature(g.rhs, sig);
    }
    Ontology o(sig);
    for (const auto& g : ax) o.add(g);
    return o;
}

}  // namespace

TEST_CASE("init examples") {
    auto a = init_tableau(L("A"), {});
    CHECK(a.trees.size() == 1);
    CHECK(a.trees[0].tree.nodes.size() == 1);
    CHECK(root_label(a) == std::vector<std::string>{"A"});
    CHECK(root_label(init_tableau(L("(and A B)"), {})) == std::vector<std::string>{"(and A B)"});
    auto o = init_tableau(L("A"), parse_ontology("A => B"));
    CHECK(root_label(o) == std::vector<std::string>{"A"});
    CHECK(o.axioms.size() == 1);
    CHECK(o.closure[o.axioms[0]].text() == "(or (not A) B)");
    // NNF is applied at init
    CHECK(root_label(init_tableau(L("(not (or A B))"), {})) == std::vector<std::string>{"(and (not A) (not B))"});
}

TEST_CASE("step examples") {
    TableauConfig cfg;
    cfg.record_trace = true;
    TableauRunner r(init_tableau(L("(and A (not A))"), {}), cfg);
    CHECK(r.step());
    CHECK(r.meta().trees[0].status == MetaNode::Status::Clashed);
    REQUIRE(r.meta().trees[0].clash);
    CHECK(r.meta().trees[0].clash->type == Clash::Type::Complement);
    CHECK(r.meta().trees[0].clash->name == "A");
    CHECK(r.meta().label_concepts(0, 0).size() == 3);
    CHECK_FALSE(r.step());

    // hand run: and at the root, some creates node 1, all adds (not A) there
    auto v = decide_sat(L("(and (some R A) (all R (not A)))"), {}, [] {
        TableauConfig c;
        c.record_trace = true;
        return c;
    }());
    CHECK_FALSE(v.satisfiable);
    std::vector<std::string> lines;
    for (const auto& t : v.trace) lines.push_back(t.to_string());
    CHECK(lines == std::vector<std::string>{"tree=0 rule=and node=0 added=(all R (not A)),(some R A)",
                                            "tree=0 rule=some node=1 added=A",
                                            "tree=0 rule=all node=1 added=(not A)"});
    CHECK(v.meta.trees[0].clash->node == 1);
    for (int n = 1; n <= 3; ++n) CHECK_FALSE(find_model_of_size(L("(and (some R A) (all R (not A)))"), {}, n));
}

TEST_CASE("blocking example") {
    Ontology o = parse_ontology("A => (some R A)");
    auto v = decide_sat(L("A"), o);
    CHECK(v.satisfiable);
    REQUIRE(v.witness_tree);
    const auto& t = v.meta.trees[*v.witness_tree].tree;
    bool blocked = false;
    for (int n = 0; n < static_cast<int>(t.nodes.size()); ++n) {
        if (auto b = t.blocked_by(n)) {
            blocked = true;
            CHECK(t.is_ancestor(*b, n));
            CHECK(t.nodes[*b].label == t.nodes[n].label);
            CHECK(t.nodes[n].children.empty());
        }
    }
    CHECK(blocked);
    CHECK(t.nodes.size() == 2);
    auto m = find_model(L("A"), o, 1);
    REQUIRE(m);
    CHECK(m->role_ext.at("R") == std::set<std::pair<int, int>>{{0, 0}});
}

TEST_CASE("decide examples") {
    CHECK_FALSE(decide_sat(L("(and A (not A))"), {}).satisfiable);
    CHECK_FALSE(decide_sat(L("A"), parse_ontology("A => bot")).satisfiable);
    auto v = decide_sat(L("(or A B)"), parse_ontology("A => bot\nB => bot"), full());
    CHECK_FALSE(v.satisfiable);
    CHECK(v.meta.leaves().size() >= 2);
    for (int l : v.meta.leaves()) CHECK(v.meta.trees[l].status == MetaNode::Status::Clashed);
    CHECK(decide_sat(L("A"), {}).satisfiable);
    CHECK(decide_sat(L("top"), {}).satisfiable);
    CHECK_FALSE(decide_sat(L("bot"), {}).satisfiable);
}

TEST_CASE("entails examples") {
    CHECK(entails({}, L("A"), L("A")));
    CHECK(entails(parse_ontology("A => B\nB => C"), L("A"), L("C")));
    CHECK_FALSE(entails({}, L("A"), L("B")));
    CHECK_FALSE(entails(parse_ontology("A => B"), L("B"), L("A")));
    CHECK(entails({}, L("(all R (and A B))"), L("(all R A)")));
}

TEST_CASE("budget errors") {
    TableauConfig cfg;
    cfg.max_nodes_per_tree = 2;
    CHECK_THROWS_AS(decide_sat(L("(some R (some R (some R A)))"), {}, cfg), BudgetExceeded);
    cfg = {};
    cfg.max_trees = 2;
    CHECK_THROWS_AS(decide_sat(L("(and (or A B) (or (not A) (not B)))"), {}, cfg), BudgetExceeded);
}

TEST_CASE("Listed order breaks P1, Standard keeps it") {
    Concept c = L("(and (some R A) (or bot B))");
    TableauConfig listed = full();
    listed.order = RuleOrder::Listed;
    auto bad = decide_sat(c, {}, listed);
    std::string why;
    CHECK_FALSE(check_clash_nodes_are_leaves(bad.meta, &why));
    CHECK(why.find("has children") != std::string::npos);
    auto good = decide_sat(c, {}, full());
    CHECK(check_clash_nodes_are_leaves(good.meta));
    CHECK(good.satisfiable == bad.satisfiable);
}

TEST_CASE("runs keep P1, P2, structure and agree with models") {
    std::mt19937_64 rng(101);
    int unsat = 0;
    for (int k = 0; k < 400; ++k) {
        Concept c = random_concept(rng, 3, 3, 2);
        Ontology o = random_ontology(rng);
        TableauConfig cfg;
        cfg.prune = true;
        auto v = decide_sat(c, o, cfg);
        std::string why;
        CHECK_MESSAGE(check_clash_nodes_are_leaves(v.meta, &why), why);
        CHECK_MESSAGE(check_split_order(v.meta, &why), why);
        CHECK_MESSAGE(check_meta_tree(v.meta, &why), why);
        // sat iff a complete clash-free leaf exists
        bool open = false;
        for (int l : v.meta.leaves()) open = open || v.meta.trees[l].status == MetaNode::Status::Complete;
        CHECK(open == v.satisfiable);
        // binary meta-tree: trees = 2 * splits + 1, leaves = splits + 1 <= 2^splits
        std::size_t splits = 0;
        for (const auto& t : v.meta.trees) splits += t.status == MetaNode::Status::Split;
        CHECK(v.meta.trees.size() == 2 * splits + 1);
        CHECK(v.meta.leaves().size() <= (std::size_t{1} << std::min<std::size_t>(splits, 60)));
        if (!v.satisfiable) {
            ++unsat;
            ModelSearchConfig m;
            m.max_candidates = 1 << 16;
            for (int n = 1; n <= 2; ++n) {
                try {
                    CHECK_FALSE(find_model_of_size(c, o, n, m));
                } catch (const BudgetExceeded&) {
                }
            }
        }
    }
    CHECK(unsat > 20);
}

TEST_CASE("labels only grow and stay in the closure") {
    std::mt19937_64 rng(7);
    for (int k = 0; k < 40; ++k) {
        Concept c = random_concept(rng, 3, 2, 1);
        Ontology o = random_ontology(rng);
        TableauConfig cfg = full();
        TableauRunner r(init_tableau(c, o), cfg);
        const std::size_t closure = r.meta().closure.size();
        CHECK(closure == sub_closure(c, o).size());
        MetaTree before = r.meta();
        for (int s = 0; s < 400 && r.step(); ++s) {
            const auto& after = r.meta();
            for (std::size_t t = 0; t < before.trees.size(); ++t) {
                const auto& a = before.trees[t].tree.nodes;
                const auto& b = after.trees[t].tree.nodes;
                REQUIRE(b.size() >= a.size());
                bool grew = true;
                for (std::size_t n = 0; n < a.size(); ++n)
                    for (int i : a[n].label.indices()) grew = grew && b[n].label.contains(i);
                REQUIRE(grew);
            }
            bool inside = true;
            for (const auto& t : after.trees)
                for (const auto& n : t.tree.nodes)
                    for (int i : n.label.indices()) inside = inside && static_cast<std::size_t>(i) < closure;
            REQUIRE(inside);
            before = after;
        }
    }
}

TEST_CASE("pruning keeps verdicts and certificates") {
    std::mt19937_64 rng(55);
    int unsat = 0, pruned = 0;
    for (int k = 0; k < 600; ++k) {
        Concept c = random_concept(rng, 3, 3, 2);
        Ontology o = random_ontology(rng);
        TableauConfig plain, fast;
        fast.prune = true;
        auto a = decide_sat(c, o, plain), b = decide_sat(c, o, fast);
        REQUIRE(a.satisfiable == b.satisfiable);
        CHECK(b.meta.trees.size() <= a.meta.trees.size() + (a.satisfiable ? b.meta.trees.size() : 0));
        std::string why;
        CHECK_MESSAGE(check_meta_tree(b.meta, &why), why);
        CHECK(check_clash_nodes_are_leaves(b.meta));
        if (!b.satisfiable) {
            ++unsat;
            for (const auto& t : b.meta.trees) pruned += t.status == MetaNode::Status::Pruned;
            auto cert = extract_certificate(b.meta, c, o);
            auto res = check_certificate(cert, c, o);
            CHECK_MESSAGE(res.ok, res.reason);
        }
    }
    CHECK(unsat > 30);
    CHECK(pruned > 0);
}

TEST_CASE("decide_sat is deterministic") {
    std::mt19937_64 rng(4);
    for (int k = 0; k < 50; ++k) {
        Concept c = random_concept(rng, 3, 3, 2);
        Ontology o = random_ontology(rng);
        CHECK(meta_tree_json(decide_sat(c, o, full()).meta) == meta_tree_json(decide_sat(c, o, full()).meta));
    }
}

TEST_CASE("meta-tree json") {
    auto v = decide_sat(L("(or A B)"), parse_ontology("A => bot\nB => bot"), full());
    std::string j = meta_tree_json(v.meta);
    CHECK(j.find("\"clashed\"") != std::string::npos);
    CHECK(j.find("\"split\"") != std::string::npos);
    CHECK(j.find("\"closed_at\"") != std::string::npos);
}
