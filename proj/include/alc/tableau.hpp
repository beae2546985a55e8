#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "alc/budget.hpp"
#include "alc/concept.hpp"
#include "alc/ontology.hpp"

namespace alc {

enum class Rule { Subsumption, Conjunction, Universal, Existential, Disjunction };

std::string_view rule_name(Rule r) noexcept;

/// Rule priority. `Standard` applies the disjunction rule before the
/// existential rule, which keeps every clash node a leaf of its tree;
/// `Listed` is the order subsumption, conjunction, universal, existential,
/// disjunction.
enum class RuleOrder { Standard, Listed };

std::array<Rule, 5> rule_sequence(RuleOrder order) noexcept;

/// A label: membership bitmap over the indices of the subconcept closure.
class Label {
public:
    Label() = default;
    explicit Label(std::size_t universe) : bits_(universe, false) {}

    bool contains(int i) const { return bits_[static_cast<std::size_t>(i)]; }
    bool insert(int i);
    std::size_t size() const noexcept { return count_; }
    std::vector<int> indices() const;

    friend bool operator==(const Label& a, const Label& b) { return a.bits_ == b.bits_; }

private:
    std::vector<bool> bits_;
    std::size_t count_ = 0;
};

struct TreeNode {
    int parent = -1;
    std::string role;     // label of the edge from parent
    int origin = -1;      // closure index of the filler that created this node
    int depth = 0;
    Label label;
    std::vector<int> children;
};

struct Clash {
    enum class Type { Bottom, Complement };
    int node = -1;
    Type type = Type::Bottom;
    std::string name;  // concept name A for a {A, (not A)} clash
};

struct CompletionTree {
    std::vector<TreeNode> nodes;  // node 0 is the root

    bool is_ancestor(int anc, int node) const;
    /// Strict ancestor whose label equals the node's label, if any.
    std::optional<int> blocked_by(int node) const;
};

struct MetaNode {
    /// Pruned: never expanded because a sibling subtree closed independently
    /// of the split (TableauConfig::prune).
    enum class Status { Open, Clashed, Complete, Split, Pruned };

    CompletionTree tree;
    Status status = Status::Open;
    std::optional<Clash> clash;
    int parent = -1;
    std::array<int, 2> children{-1, -1};
    int split_node = -1;     // completion-tree node the disjunction rule fired at
    int split_concept = -1;  // closure index of the disjunction
    int branch = -1;         // which disjunct (0 or 1) this tree took from its parent
    /// Set once every leaf below is clashed or pruned: the completion-tree node
    /// whose label the closing argument ends at.
    int closed_at = -1;
};

/// The tree whose nodes are completion trees; the disjunction rule creates
/// two children. Carries the closure the labels index into.
struct MetaTree {
    Concept c0 = Concept::top();
    std::vector<Concept> closure;
    std::vector<int> axioms;  // closure indices of compiled axioms, axiom order
    RuleOrder order = RuleOrder::Standard;
    std::vector<MetaNode> trees;  // index 0 is the initial tree

    int index_of(const Concept& c) const;  // -1 when absent
    std::vector<int> leaves() const;
    std::vector<Concept> label_concepts(int tree, int node) const;
};

struct TraceEntry {
    int tree;
    Rule rule;
    int node;
    std::vector<Concept> added;

    std::string to_string() const;
};

struct TableauConfig {
    std::size_t max_nodes_per_tree = std::size_t{1} << 16;
    std::size_t max_trees = std::size_t{1} << 16;
    RuleOrder order = RuleOrder::Standard;
    /// Stop as soon as a complete clash-free tree exists.
    bool stop_at_first_model = true;
    bool record_trace = false;
    /// When the left subtree of a split closes at a node other than the split
    /// node (after climbing out of nodes created below the split), the right
    /// subtree is marked Pruned instead of being expanded.
    bool prune = false;
    Deadline deadline;
};

struct TableauVerdict {
    bool satisfiable = false;
    std::optional<int> witness_tree;
    MetaTree meta;
    std::vector<TraceEntry> trace;
    std::size_t steps = 0;
};

/// Single tree with root label {nnf(c0)}.
MetaTree init_tableau(const Concept& c0, const Ontology& o, RuleOrder order = RuleOrder::Standard);

/// Drives one meta-tree through single rule applications.
class TableauRunner {
public:
    TableauRunner(MetaTree mt, TableauConfig cfg = {});

    /// Applies one rule instance in the leftmost non-final leaf tree.
    /// Returns false when every leaf tree is final.
    bool step();

    /// Steps until every leaf is final (or, with stop_at_first_model, until a
    /// complete clash-free leaf appears).
    TableauVerdict run();

    const MetaTree& meta() const noexcept { return mt_; }
    const std::vector<TraceEntry>& trace() const noexcept { return trace_; }

private:
    struct Info {
        Kind kind;
        int left = -1, right = -1;
        std::string role;
        int complement = -1;  // for a name A: index of (not A); for (not A): index of A
    };

    std::optional<int> next_open_leaf();
    bool apply_in(int tree_index);
    bool try_rule(int tree_index, Rule rule, const std::vector<int>& order);
    void add(int tree_index, int node, int ci, Rule rule, std::vector<Concept>& added);
    void check_clash(int tree_index, int node);
    int create_node(CompletionTree& t, int parent, const std::string& role, int filler);
    void record(int tree, Rule rule, int node, std::vector<Concept> added);
    void close(int tree, int node);
    void prune_subtree(int tree);

    MetaTree mt_;
    TableauConfig cfg_;
    std::vector<Info> info_;
    std::vector<TraceEntry> trace_;
    std::size_t steps_ = 0;
    std::vector<int> cursor_{0};  // DFS stack over the meta-tree, leftmost first
    bool found_model_ = false;
};

TableauVerdict run_to_completion(MetaTree mt, TableauConfig cfg = {});

TableauVerdict decide_sat(const Concept& c0, const Ontology& o, TableauConfig cfg = {});

/// True iff x and (not y) is unsatisfiable with respect to o.
bool entails(const Ontology& o, const Concept& x, const Concept& y, TableauConfig cfg = {});

/// Every clash node is a leaf of its completion tree.
bool check_clash_nodes_are_leaves(const MetaTree& mt, std::string* why = nullptr);

/// Along every meta-tree path, a split at a completion-tree node precedes any
/// split at one of its strict descendants (never the reverse).
bool check_split_order(const MetaTree& mt, std::string* why = nullptr);

/// Structural invariants: tree shape, labels inside the closure, blocking by
/// strict ancestors only, leaf trees final.
bool check_meta_tree(const MetaTree& mt, std::string* why = nullptr);

/// Meta-tree dump consumed by the certificate tooling.
std::string meta_tree_json(const MetaTree& mt);

}  // namespace alc
