#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "alc/budget.hpp"
#include "alc/concept.hpp"
#include "alc/ontology.hpp"

namespace alc {

/// Object keys. A concept object is keyed by its canonical printed form; the
/// dom/cod objects of a role are "dom:<role key>" and "cod:<role key>".
/// Role keys: a role name, "top", "bot", "exists:<text of (some R C)>",
/// "aux:<text of X>|<text of (some R D)>".
std::string role_key_exists(const Concept& ex);
std::string role_key_aux(const Concept& x, const Concept& ex);

/// Names of the saturation rules; every stored edge carries one of these or
/// one of the built-in tags identity, top, bot, axiom, fixture,
/// role-terminal, role-initial.
const std::vector<std::string>& rule_names();

using RuleMask = std::set<std::string>;

/// "full", "weak-conjunction" (no distrib), "weak-negation" (no neg-max,
/// neg-min), or a comma-separated list of rule names. Throws
/// std::invalid_argument on an unknown name.
RuleMask parse_rule_mask(const std::string& text);
RuleMask full_mask();

class ObjectNotInUniverse : public std::invalid_argument {
public:
    explicit ObjectNotInUniverse(const std::string& key)
        : std::invalid_argument("object not in universe: " + key), key_(key) {}
    const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

struct ConceptObject {
    std::string key;
    std::optional<Concept> term;  // empty for dom/cod objects of roles
    bool is_top = false;
    bool is_bot = false;
};

struct RoleObject {
    enum class Kind { Named, Top, Bot, Exists, Aux };
    std::string key;
    Kind kind = Kind::Named;
    std::string base;        // role name for Named/Exists/Aux
    int exists_object = -1;  // Exists: the (some R C) object; Aux: its (some R D)
    int defining = -1;       // Aux: the conjunction X
    int dom = -1;
    int cod = -1;
};

struct Edge {
    int src;
    int dst;
    std::string rule;
};

struct UniverseConfig {
    std::vector<Concept> extra_objects;
    std::size_t max_objects = 10000;
    /// Role objects R_X for conjunctions X holding both (some R D) and some
    /// (all R C) among their conjuncts.
    bool aux_roles = true;
};

enum class Schedule { Forward, Reverse };

struct SaturationConfig {
    RuleMask mask = full_mask();
    Schedule schedule = Schedule::Forward;
    Deadline deadline;
};

/// Reachability closure kept incrementally over a growing edge set.
class Reach {
public:
    void resize(std::size_t n);
    std::size_t size() const noexcept { return n_; }
    bool has(int a, int b) const { return row(a)[b >> 6] >> (b & 63) & 1; }
    /// Adds a -> b and closes transitively. False if already reachable.
    bool add(int a, int b);
    const std::uint64_t* row(int a) const { return fwd_.data() + a * words_; }
    const std::uint64_t* col(int b) const { return bwd_.data() + b * words_; }
    std::size_t words() const noexcept { return words_; }
    friend bool operator==(const Reach& a, const Reach& b) { return a.fwd_ == b.fwd_; }

private:
    std::size_t n_ = 0, words_ = 0;
    std::vector<std::uint64_t> fwd_, bwd_;
};

class OntologyCategory {
public:
    /// Objects of c0, the axiom disjunctions, the subconcept closure, their
    /// single negations and the extras, closed under subterms, plus the
    /// auxiliary objects the rules need. Throws BudgetExceeded past
    /// cfg.max_objects.
    static OntologyCategory build(const Concept& c0, const Ontology& o,
                                  const UniverseConfig& cfg = {});

    /// Exactly the given objects (plus subterms, top and bot) with the given
    /// arrows tagged "fixture".
    static OntologyCategory fixture(const std::vector<Concept>& objects,
                                    const std::vector<std::pair<Concept, Concept>>& arrows);

    void add_fixture_arrow(const Concept& x, const Concept& y);
    void enable_rules(RuleMask mask) { mask_ = std::move(mask); }
    const RuleMask& mask() const noexcept { return mask_; }

    /// Least fixpoint under the enabled rules. Returns the number of rounds.
    int saturate(const SaturationConfig& cfg);
    int saturate();

    bool has_arrow(const Concept& x, const Concept& y) const;
    bool has_arrow_key(const std::string& x, const std::string& y) const;
    bool has_role_arrow(const std::string& r, const std::string& s) const;

    std::optional<int> find(const Concept& c) const;
    std::optional<int> find_key(const std::string& key) const;
    std::optional<int> find_role(const std::string& key) const;

    const std::vector<ConceptObject>& objects() const noexcept { return objects_; }
    const std::vector<RoleObject>& roles() const noexcept { return roles_; }
    const std::vector<Edge>& edges() const noexcept { return edges_; }
    const std::vector<Edge>& role_edges() const noexcept { return role_edges_; }
    const Reach& reach() const noexcept { return reach_; }
    const Reach& role_reach() const noexcept { return rreach_; }
    int top() const noexcept { return top_; }
    int bot() const noexcept { return bot_; }

    /// Pairs (x, y), x != y, with x -> y.
    std::vector<std::pair<int, int>> arrow_pairs() const;

    /// {objects:[{id, concept}], arrows:[{src, dst, rule}]}
    std::string to_json() const;

private:
    OntologyCategory() = default;

    int intern(const Concept& c);
    int intern_special(const std::string& key);
    int add_role(RoleObject r);
    void add_subterms(const Concept& c);
    void finish(bool aux_roles);
    bool link(int a, int b, const char* rule);
    bool role_link(int a, int b, const char* rule);
    bool on(const char* rule) const { return mask_.count(rule) != 0; }
    bool round(Schedule s, const Deadline& d);

    std::vector<ConceptObject> objects_;
    std::unordered_map<std::string, int> index_;
    std::vector<RoleObject> roles_;
    std::unordered_map<std::string, int> role_index_;
    std::vector<Edge> edges_, role_edges_;
    Reach reach_, rreach_;
    RuleMask mask_ = full_mask();
    std::size_t max_objects_ = 10000;
    int top_ = -1, bot_ = -1, role_top_ = -1, role_bot_ = -1;

    // per-object structure, filled by finish()
    struct Shape {
        int left = -1, right = -1;  // And/Or operands, Not operand (left), fillers (left)
        int negation = -1;          // object for (not this), if present
        std::array<int, 2> distrib{-1, -1};  // And: targets of the distributivity arrow
        int contradiction = -1;     // Not C: object C and (not C)
        int excluded_middle = -1;   // Not C: object C or (not C)
        int role = -1;              // Exists: R_(some R C); Exists/Forall: named role
        int named = -1;
        int forall_dual = -1;       // Forall R.C: (not (some R (not C)))
    };
    std::vector<Shape> shape_;
    std::vector<int> axiom_objects_;
};

struct CategoryConfig {
    UniverseConfig universe;
    SaturationConfig saturation;
};

/// Builds, saturates and tests c0 -> bot.
bool decide_cat_unsat(const Concept& c0, const Ontology& o, const CategoryConfig& cfg = {});

struct DotOptions {
    /// Also draw, dashed, arrows that hold by composition only (top and bot
    /// excluded).
    bool show_derived = false;
};

std::string export_dot(const OntologyCategory& cat, const DotOptions& opts = {});

/// The category pictures used as fixtures: 1 (meeting states), 2
/// (distributivity), 3 (negation). Returned unsaturated.
OntologyCategory example_fixture(int which);

}  // namespace alc
