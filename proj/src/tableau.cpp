#include "alc/tableau.hpp"

#include <algorithm>
#include <json.hpp>
#include <numeric>
#include <unordered_map>

#include "alc/normal_form.hpp"

namespace alc {

std::string_view rule_name(Rule r) noexcept {
    switch (r) {
        case Rule::Subsumption: return "subsumption";
        case Rule::Conjunction: return "and";
        case Rule::Universal: return "all";
        case Rule::Existential: return "some";
        case Rule::Disjunction: return "or";
    }
    return "?";
}

std::array<Rule, 5> rule_sequence(RuleOrder order) noexcept {
    if (order == RuleOrder::Listed)
        return {Rule::Subsumption, Rule::Conjunction, Rule::Universal, Rule::Existential,
                Rule::Disjunction};
    return {Rule::Subsumption, Rule::Conjunction, Rule::Universal, Rule::Disjunction,
            Rule::Existential};
}

bool Label::insert(int i) {
    auto k = static_cast<std::size_t>(i);
    if (bits_[k]) return false;
    bits_[k] = true;
    ++count_;
    return true;
}

std::vector<int> Label::indices() const {
    std::vector<int> out;
    out.reserve(count_);
    for (std::size_t k = 0; k < bits_.size(); ++k)
        if (bits_[k]) out.push_back(static_cast<int>(k));
    return out;
}

bool CompletionTree::is_ancestor(int anc, int node) const {
    for (int p = nodes[node].parent; p >= 0; p = nodes[p].parent)
        if (p == anc) return true;
    return false;
}

std::optional<int> CompletionTree::blocked_by(int node) const {
    for (int p = nodes[node].parent; p >= 0; p = nodes[p].parent)
        if (nodes[p].label == nodes[node].label) return p;
    return std::nullopt;
}

int MetaTree::index_of(const Concept& c) const {
    auto it = std::find(closure.begin(), closure.end(), c);
    return it == closure.end() ? -1 : static_cast<int>(it - closure.begin());
}

std::vector<int> MetaTree::leaves() const {
    std::vector<int> out;
    for (std::size_t k = 0; k < trees.size(); ++k)
        if (trees[k].status != MetaNode::Status::Split) out.push_back(static_cast<int>(k));
    return out;
}

std::vector<Concept> MetaTree::label_concepts(int tree, int node) const {
    std::vector<Concept> out;
    for (int i : trees[tree].tree.nodes[node].label.indices()) out.push_back(closure[i]);
    return out;
}

std::string TraceEntry::to_string() const {
    std::string s = "tree=" + std::to_string(tree) + " rule=" + std::string(rule_name(rule)) +
                    " node=" + std::to_string(node) + " added=";
    for (std::size_t k = 0; k < added.size(); ++k) {
        if (k) s += ",";
        s += added[k].text();
    }
    return s;
}

MetaTree init_tableau(const Concept& c0, const Ontology& o, RuleOrder order) {
    MetaTree mt;
    mt.c0 = c0;
    mt.order = order;
    mt.closure = sub_closure(c0, o);
    for (const auto& ax : compiled_axioms(o)) mt.axioms.push_back(mt.index_of(ax));
    MetaNode root;
    TreeNode r;
    r.label = Label(mt.closure.size());
    r.origin = 0;
    r.label.insert(0);  // canonical nnf(c0) is the first closure member
    root.tree.nodes.push_back(std::move(r));
    mt.trees.push_back(std::move(root));
    return mt;
}

TableauRunner::TableauRunner(MetaTree mt, TableauConfig cfg) : mt_(std::move(mt)), cfg_(cfg) {
    std::unordered_map<std::string, int> index;
    for (std::size_t k = 0; k < mt_.closure.size(); ++k)
        index.emplace(mt_.closure[k].text(), static_cast<int>(k));
    auto idx = [&](const Concept& c) {
        auto it = index.find(c.text());
        return it == index.end() ? -1 : it->second;
    };
    info_.resize(mt_.closure.size());
    for (std::size_t k = 0; k < mt_.closure.size(); ++k) {
        const auto& c = mt_.closure[k];
        auto& in = info_[k];
        in.kind = c.kind();
        switch (c.kind()) {
            case Kind::Name: in.complement = idx(Concept::negation(c)); break;
            case Kind::Not: in.complement = idx(c.operand()); break;
            case Kind::And:
            case Kind::Or:
                in.left = idx(c.left());
                in.right = idx(c.right());
                break;
            case Kind::Exists:
            case Kind::Forall:
                in.left = idx(c.filler());
                in.role = c.id();
                break;
            default: break;
        }
    }
    for (std::size_t t = 0; t < mt_.trees.size(); ++t)
        if (mt_.trees[t].status == MetaNode::Status::Open)
            for (std::size_t n = 0; n < mt_.trees[t].tree.nodes.size(); ++n)
                check_clash(static_cast<int>(t), static_cast<int>(n));
    found_model_ = std::any_of(mt_.trees.begin(), mt_.trees.end(), [](const MetaNode& m) {
        return m.status == MetaNode::Status::Complete;
    });
}

void TableauRunner::record(int tree, Rule rule, int node, std::vector<Concept> added) {
    if (cfg_.record_trace) trace_.push_back({tree, rule, node, std::move(added)});
}

void TableauRunner::check_clash(int t, int node) {
    auto& mn = mt_.trees[t];
    if (mn.status == MetaNode::Status::Clashed) return;
    const auto& label = mn.tree.nodes[node].label;
    for (int i : label.indices()) {
        const auto& in = info_[i];
        if (in.kind == Kind::Bot) {
            mn.status = MetaNode::Status::Clashed;
            mn.clash = Clash{node, Clash::Type::Bottom, {}};
            break;
        }
        if (in.kind == Kind::Name && in.complement >= 0 && label.contains(in.complement)) {
            mn.status = MetaNode::Status::Clashed;
            mn.clash = Clash{node, Clash::Type::Complement, mt_.closure[i].id()};
            break;
        }
    }
    if (mn.status == MetaNode::Status::Clashed && cfg_.prune) close(t, node);
}

void TableauRunner::close(int t, int node) {
    while (true) {
        mt_.trees[t].closed_at = node;
        const int p = mt_.trees[t].parent;
        if (p < 0) return;
        const auto& nodes = mt_.trees[t].tree.nodes;
        const auto& pm = mt_.trees[p];
        while (node >= static_cast<int>(pm.tree.nodes.size())) node = nodes[node].parent;
        const int other = pm.children[0] == t ? pm.children[1] : pm.children[0];
        if (node == pm.split_node) {
            if (mt_.trees[other].closed_at < 0) return;
        } else {
            prune_subtree(other);
        }
        t = p;
    }
}

void TableauRunner::prune_subtree(int t) {
    std::vector<int> stack{t};
    while (!stack.empty()) {
        auto& mn = mt_.trees[stack.back()];
        stack.pop_back();
        if (mn.status == MetaNode::Status::Open) mn.status = MetaNode::Status::Pruned;
        if (mn.status == MetaNode::Status::Split) stack.insert(stack.end(), mn.children.begin(), mn.children.end());
    }
}

void TableauRunner::add(int t, int node, int ci, Rule, std::vector<Concept>& added) {
    if (mt_.trees[t].tree.nodes[node].label.insert(ci)) added.push_back(mt_.closure[ci]);
}

int TableauRunner::create_node(CompletionTree& t, int parent, const std::string& role,
                               int filler) {
    if (t.nodes.size() >= cfg_.max_nodes_per_tree)
        throw BudgetExceeded("tableau: completion tree exceeds " +
                             std::to_string(cfg_.max_nodes_per_tree) + " nodes");
    TreeNode n;
    n.parent = parent;
    n.role = role;
    n.origin = filler;
    n.depth = t.nodes[parent].depth + 1;
    n.label = Label(mt_.closure.size());
    n.label.insert(filler);
    int id = static_cast<int>(t.nodes.size());
    t.nodes.push_back(std::move(n));
    t.nodes[parent].children.push_back(id);
    return id;
}

bool TableauRunner::try_rule(int t, Rule rule, const std::vector<int>& order) {
    for (int x : order) {
        auto& tree = mt_.trees[t].tree;
        const auto indices = tree.nodes[x].label.indices();
        std::vector<Concept> added;
        switch (rule) {
            case Rule::Subsumption:
                for (int ax : mt_.axioms) {
                    if (tree.nodes[x].label.contains(ax)) continue;
                    add(t, x, ax, rule, added);
                    record(t, rule, x, added);
                    check_clash(t, x);
                    return true;
                }
                break;
            case Rule::Conjunction:
                for (int i : indices) {
                    const auto& in = info_[i];
                    if (in.kind != Kind::And) continue;
                    if (tree.nodes[x].label.contains(in.left) &&
                        tree.nodes[x].label.contains(in.right))
                        continue;
                    add(t, x, in.left, rule, added);
                    add(t, x, in.right, rule, added);
                    record(t, rule, x, added);
                    check_clash(t, x);
                    return true;
                }
                break;
            case Rule::Universal:
                for (int i : indices) {
                    const auto& in = info_[i];
                    if (in.kind != Kind::Forall) continue;
                    for (int c : tree.nodes[x].children) {
                        if (tree.nodes[c].role != in.role || tree.nodes[c].label.contains(in.left))
                            continue;
                        add(t, c, in.left, rule, added);
                        record(t, rule, c, added);
                        check_clash(t, c);
                        return true;
                    }
                }
                break;
            case Rule::Existential: {
                bool blocked_checked = false;
                for (int i : indices) {
                    const auto& in = info_[i];
                    if (in.kind != Kind::Exists) continue;
                    bool has = std::any_of(
                        tree.nodes[x].children.begin(), tree.nodes[x].children.end(), [&](int c) {
                            return tree.nodes[c].role == in.role &&
                                   tree.nodes[c].label.contains(in.left);
                        });
                    if (has) continue;
                    if (!blocked_checked) {
                        if (tree.blocked_by(x)) break;
                        blocked_checked = true;
                    }
                    int c = create_node(tree, x, in.role, in.left);
                    record(t, rule, c, {mt_.closure[in.left]});
                    check_clash(t, c);
                    return true;
                }
                break;
            }
            case Rule::Disjunction:
                for (int i : indices) {
                    const auto& in = info_[i];
                    if (in.kind != Kind::Or) continue;
                    if (tree.nodes[x].label.contains(in.left) ||
                        tree.nodes[x].label.contains(in.right))
                        continue;
                    if (mt_.trees.size() + 2 > cfg_.max_trees)
                        throw BudgetExceeded("tableau: meta-tree exceeds " +
                                             std::to_string(cfg_.max_trees) + " trees");
                    std::array<int, 2> kids{};
                    for (int b = 0; b < 2; ++b) {
                        MetaNode child;
                        child.tree = mt_.trees[t].tree;
                        child.parent = t;
                        child.branch = b;
                        kids[b] = static_cast<int>(mt_.trees.size());
                        mt_.trees.push_back(std::move(child));
                    }
                    auto& parent = mt_.trees[t];
                    parent.status = MetaNode::Status::Split;
                    parent.children = kids;
                    parent.split_node = x;
                    parent.split_concept = i;
                    for (int b = 0; b < 2; ++b) {
                        std::vector<Concept> a;
                        add(kids[b], x, b == 0 ? in.left : in.right, rule, a);
                        record(kids[b], rule, x, a);
                        check_clash(kids[b], x);
                    }
                    return true;
                }
                break;
        }
    }
    return false;
}

bool TableauRunner::apply_in(int t) {
    const auto& nodes = mt_.trees[t].tree.nodes;
    std::vector<int> order(nodes.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return nodes[a].depth < nodes[b].depth; });
    for (Rule r : rule_sequence(mt_.order))
        if (try_rule(t, r, order)) return true;
    return false;
}

std::optional<int> TableauRunner::next_open_leaf() {
    while (!cursor_.empty()) {
        int t = cursor_.back();
        const auto& mn = mt_.trees[t];
        if (mn.status == MetaNode::Status::Open) return t;
        cursor_.pop_back();
        if (mn.status == MetaNode::Status::Split) {
            cursor_.push_back(mn.children[1]);
            cursor_.push_back(mn.children[0]);
        }
    }
    return std::nullopt;
}

bool TableauRunner::step() {
    // Leftmost-first order: once a leaf is final, everything left of the next
    // open leaf is final too, so a cursor over a DFS stack suffices.
    while (true) {
        cfg_.deadline.check("tableau");
        if (cfg_.stop_at_first_model && found_model_) return false;
        auto t = next_open_leaf();
        if (!t) return false;
        if (apply_in(*t)) {
            ++steps_;
            return true;
        }
        mt_.trees[*t].status = MetaNode::Status::Complete;
        found_model_ = true;
    }
}

TableauVerdict TableauRunner::run() {
    while (step()) {
    }
    TableauVerdict v;
    for (std::size_t k = 0; k < mt_.trees.size(); ++k) {
        if (mt_.trees[k].status == MetaNode::Status::Complete) {
            v.satisfiable = true;
            v.witness_tree = static_cast<int>(k);
            break;
        }
    }
    v.meta = mt_;
    v.trace = trace_;
    v.steps = steps_;
    return v;
}

TableauVerdict run_to_completion(MetaTree mt, TableauConfig cfg) {
    return TableauRunner(std::move(mt), cfg).run();
}

TableauVerdict decide_sat(const Concept& c0, const Ontology& o, TableauConfig cfg) {
    return run_to_completion(init_tableau(c0, o, cfg.order), cfg);
}

bool entails(const Ontology& o, const Concept& x, const Concept& y, TableauConfig cfg) {
    return !decide_sat(Concept::conj(x, Concept::negation(y)), o, cfg).satisfiable;
}

bool check_clash_nodes_are_leaves(const MetaTree& mt, std::string* why) {
    for (std::size_t k = 0; k < mt.trees.size(); ++k) {
        const auto& mn = mt.trees[k];
        if (!mn.clash) continue;
        if (!mn.tree.nodes[mn.clash->node].children.empty()) {
            if (why)
                *why = "tree " + std::to_string(k) + ": clash node " +
                       std::to_string(mn.clash->node) + " has children";
            return false;
        }
    }
    return true;
}

bool check_split_order(const MetaTree& mt, std::string* why) {
    for (std::size_t k = 0; k < mt.trees.size(); ++k) {
        const auto& later = mt.trees[k];
        if (later.status != MetaNode::Status::Split) continue;
        for (int p = later.parent; p >= 0; p = mt.trees[p].parent) {
            int earlier = mt.trees[p].split_node;
            if (later.tree.is_ancestor(later.split_node, earlier)) {
                if (why)
                    *why = "tree " + std::to_string(k) + " splits at node " +
                           std::to_string(later.split_node) + " after its descendant " +
                           std::to_string(earlier) + " was split";
                return false;
            }
        }
    }
    return true;
}

bool check_meta_tree(const MetaTree& mt, std::string* why) {
    auto fail = [&](std::string msg) {
        if (why) *why = std::move(msg);
        return false;
    };
    for (std::size_t k = 0; k < mt.trees.size(); ++k) {
        const auto& mn = mt.trees[k];
        const auto& nodes = mn.tree.nodes;
        if (nodes.empty()) return fail("tree " + std::to_string(k) + " has no root");
        if (nodes[0].parent != -1) return fail("root has a parent");
        for (std::size_t n = 1; n < nodes.size(); ++n) {
            int p = nodes[n].parent;
            if (p < 0 || p >= static_cast<int>(n)) return fail("node parent out of order");
            const auto& sib = nodes[p].children;
            if (std::count(sib.begin(), sib.end(), static_cast<int>(n)) != 1)
                return fail("node missing from its parent's children");
            if (nodes[n].role.empty()) return fail("edge without role");
            if (nodes[n].depth != nodes[p].depth + 1) return fail("inconsistent depth");
        }
        if (mn.status == MetaNode::Status::Split) {
            for (int c : mn.children)
                if (c < 0 || c >= static_cast<int>(mt.trees.size()) || mt.trees[c].parent != (int)k)
                    return fail("broken meta-tree edge");
        }
        if (mn.parent >= 0) {
            const auto& pn = mt.trees[mn.parent];
            for (std::size_t n = 0; n < pn.tree.nodes.size(); ++n)
                for (int i : pn.tree.nodes[n].label.indices())
                    if (!nodes[n].label.contains(i)) return fail("label shrank in a child tree");
        }
    }
    return true;
}

std::string meta_tree_json(const MetaTree& mt) {
    using nlohmann::ordered_json;
    ordered_json j;
    j["concept"] = mt.c0.text();
    j["order"] = mt.order == RuleOrder::Standard ? "standard" : "listed";
    ordered_json trees = ordered_json::array();
    for (std::size_t k = 0; k < mt.trees.size(); ++k) {
        const auto& mn = mt.trees[k];
        ordered_json t;
        t["id"] = k;
        t["parent"] = mn.parent;
        static constexpr const char* kStatus[] = {"open", "clashed", "complete", "split", "pruned"};
        t["status"] = kStatus[static_cast<int>(mn.status)];
        if (mn.status == MetaNode::Status::Split) {
            t["children"] = {mn.children[0], mn.children[1]};
            t["split_node"] = mn.split_node;
            t["split_concept"] = mt.closure[mn.split_concept].text();
        }
        if (mn.clash) t["clash_node"] = mn.clash->node;
        if (mn.closed_at >= 0) t["closed_at"] = mn.closed_at;
        ordered_json nodes = ordered_json::array();
        for (std::size_t n = 0; n < mn.tree.nodes.size(); ++n) {
            const auto& tn = mn.tree.nodes[n];
            ordered_json jn;
            jn["id"] = n;
            jn["parent"] = tn.parent;
            if (tn.parent >= 0) jn["role"] = tn.role;
            ordered_json label = ordered_json::array();
            for (int i : tn.label.indices()) label.push_back(mt.closure[i].text());
            jn["label"] = label;
            nodes.push_back(jn);
        }
        t["nodes"] = nodes;
        trees.push_back(t);
    }
    j["trees"] = trees;
    return j.dump(2);
}

}  // namespace alc
