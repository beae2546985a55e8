#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "alc/certificate.hpp"
#include "alc/concept.hpp"
#include "alc/ontology.hpp"

namespace alc {

struct ConnectiveWeights {
    double name = 4, top = 0.3, bot = 0.2, negation = 1, conj = 2, disj = 2, exists = 1.5,
           forall = 1.5;
};

struct GenConfig {
    std::uint64_t seed = 42;
    int count = 500;
    int n_concept_names = 3;  // 1..4
    int n_roles = 2;          // 1..2
    int max_depth = 3;        // 0..4
    int n_axioms = 4;         // 0..5, per instance the count is drawn from 0..n_axioms
    ConnectiveWeights weights;

    /// Throws std::invalid_argument when a bound is out of range.
    void validate() const;
};

struct Instance {
    Concept raw = Concept::top();
    Concept nnf = Concept::top();
    Ontology ontology;
};

/// Deterministic in cfg.
std::vector<Instance> generate(const GenConfig& cfg);

/// A random concept over the names A, B, ... and roles R, S.
Concept random_concept(std::mt19937_64& rng, const GenConfig& cfg, int depth);

struct Budgets {
    double seconds = 10;  // per instance; ALC_BUDGET_SECS overrides
    std::size_t max_nodes = std::size_t{1} << 16;
    std::size_t max_objects = 10000;
    int model_size = 3;
    std::uint64_t model_candidates = std::uint64_t{1} << 20;
    int soundness_samples = 2;  // saturated arrows checked per instance
    int mutations = 6;          // single-step certificate mutations per certificate
    int threads = 0;            // 0: hardware concurrency
    std::uint64_t seed = 1;     // sampling and mutation
    bool prune = true;          // TableauConfig::prune for every tableau run

    /// Defaults with ALC_BUDGET_SECS applied.
    static Budgets from_env();
};

enum class Verdict { Sat, Unsat, Skipped, NotRun };
std::string verdict_name(Verdict v);

struct InstanceReport {
    int index = 0;
    std::string concept_text;
    std::string ontology_text;
    Verdict tableau = Verdict::NotRun;
    Verdict cat_syntactic = Verdict::NotRun;
    Verdict cat_guided = Verdict::NotRun;
    std::optional<std::string> witness;  // witness json
    int model_sizes_searched = 0;
    bool witness_valid = false;
    std::string certificate = "none";  // none, verified, rejected: <why>, error: <why>
    int certificate_steps = 0;
    int mutations_tried = 0;
    int mutations_accepted = 0;
    int soundness_checked = 0;
    int soundness_failed = 0;
    bool p1 = true, p2 = true, meta_ok = true;
    std::size_t tableau_trees = 0;
    std::size_t category_objects = 0;
    std::vector<std::string> skipped;  // which engines ran out of budget
    std::vector<std::string> discrepancies;
    double millis = 0;
};

struct DiffReport {
    std::vector<InstanceReport> instances;
    int sat = 0, unsat = 0, skipped = 0;
    int syntactic_gap = 0;  // tableau unsat, syntactic category sat
    int certificates_verified = 0;
    int witnesses = 0;
    int soundness_checked = 0, soundness_failed = 0;
    int mutations_tried = 0, mutations_accepted = 0;
    std::vector<std::string> discrepancies;  // "instance <i>: <what>"
    double seconds = 0;

    bool ok() const { return discrepancies.empty(); }
    std::string to_json() const;
    std::string table() const;
};

InstanceReport run_instance(const Instance& inst, int index, const Budgets& b);

/// Runs every engine on every instance in a worker pool; the report keeps
/// instance order.
DiffReport run_diff(const std::vector<Instance>& corpus, const Budgets& b);

/// The same certificate with one step altered, deleted, or rewired.
std::vector<Certificate> mutate_certificate(const Certificate& cert, std::mt19937_64& rng, int n);

/// Fixture instances and a hand-picked unsatisfiable set.
std::vector<Instance> fixture_corpus();

}  // namespace alc
