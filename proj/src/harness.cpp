#include "alc/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <iomanip>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "alc/category.hpp"
#include "alc/normal_form.hpp"
#include "alc/set_oracle.hpp"
#include "alc/tableau.hpp"

namespace alc {

namespace {

Ontology make_ontology(const std::vector<GCI>& axioms) {
    Signature sig;
    for (const auto& g : axioms) {
        collect_signature(g.lhs, sig);
        collect_signature(g.rhs, sig);
    }
    Ontology o(sig);
    for (const auto& g : axioms) o.add(g);
    return o;
}

}  // namespace

void GenConfig::validate() const {
    auto need = [](bool ok, const char* what) {
        if (!ok) throw std::invalid_argument(what);
    };
    need(count >= 0, "count must be non-negative");
    need(n_concept_names >= 1 && n_concept_names <= 4, "n_concept_names must be in 1..4");
    need(n_roles >= 1 && n_roles <= 2, "n_roles must be in 1..2");
    need(max_depth >= 0 && max_depth <= 4, "max_depth must be in 0..4");
    need(n_axioms >= 0 && n_axioms <= 5, "n_axioms must be in 0..5");
    const auto& w = weights;
    for (double x : {w.name, w.top, w.bot, w.negation, w.conj, w.disj, w.exists, w.forall})
        need(x >= 0, "weights must be non-negative");
    need(w.name + w.top + w.bot + w.negation + w.conj + w.disj + w.exists + w.forall > 0,
         "at least one weight must be positive");
}

Concept random_concept(std::mt19937_64& rng, const GenConfig& cfg, int depth) {
    static const char* names[] = {"A", "B", "C", "D"};
    static const char* roles[] = {"R", "S"};
    const auto& w = cfg.weights;
    auto name = [&] {
        return Concept::name(names[std::uniform_int_distribution<int>(0, cfg.n_concept_names - 1)(rng)]);
    };
    auto role = [&] {
        return std::string(roles[std::uniform_int_distribution<int>(0, cfg.n_roles - 1)(rng)]);
    };
    std::vector<double> weights{w.name, w.top, w.bot};
    if (depth > 0)
        weights.insert(weights.end(), {w.negation, w.conj, w.disj, w.exists, w.forall});
    double sum = 0;
    for (double x : weights) sum += x;
    if (sum <= 0) return name();
    std::discrete_distribution<int> pick(weights.begin(), weights.end());
    switch (pick(rng)) {
        case 0: return name();
        case 1: return Concept::top();
        case 2: return Concept::bot();
        case 3: return Concept::negation(random_concept(rng, cfg, depth - 1));
        case 4: {
            Concept l = random_concept(rng, cfg, depth - 1);
            return Concept::conj(l, random_concept(rng, cfg, depth - 1));
        }
        case 5: {
            Concept l = random_concept(rng, cfg, depth - 1);
            return Concept::disj(l, random_concept(rng, cfg, depth - 1));
        }
        case 6: {
            std::string r = role();
            return Concept::exists(r, random_concept(rng, cfg, depth - 1));
        }
        default: {
            std::string r = role();
            return Concept::forall(r, random_concept(rng, cfg, depth - 1));
        }
    }
}

std::vector<Instance> generate(const GenConfig& cfg) {
    cfg.validate();
    std::mt19937_64 rng(cfg.seed);
    std::vector<Instance> out;
    out.reserve(static_cast<std::size_t>(cfg.count));
    const int ax_depth = std::min(cfg.max_depth, 2);
    for (int i = 0; i < cfg.count; ++i) {
        Instance inst;
        inst.raw = random_concept(rng, cfg, cfg.max_depth);
        inst.nnf = canonical_nnf(inst.raw);
        int n = std::uniform_int_distribution<int>(0, cfg.n_axioms)(rng);
        std::vector<GCI> axioms;
        for (int k = 0; k < n; ++k) {
            Concept l = random_concept(rng, cfg, ax_depth);
            Concept r = random_concept(rng, cfg, ax_depth);
            axioms.push_back(GCI{l, r});
        }
        inst.ontology = make_ontology(axioms);
        out.push_back(std::move(inst));
    }
    return out;
}

Budgets Budgets::from_env() {
    Budgets b;
    if (const char* s = std::getenv("ALC_BUDGET_SECS")) {
        try {
            double v = std::stod(s);
            if (v > 0) b.seconds = v;
        } catch (const std::exception&) {
        }
    }
    return b;
}

std::string verdict_name(Verdict v) {
    switch (v) {
        case Verdict::Sat: return "sat";
        case Verdict::Unsat: return "unsat";
        case Verdict::Skipped: return "skipped";
        default: return "-";
    }
}

std::vector<Certificate> mutate_certificate(const Certificate& cert, std::mt19937_64& rng, int n) {
    std::vector<Certificate> out;
    const int size = static_cast<int>(cert.steps.size());
    if (size == 0) return out;
    std::vector<std::string> keys;
    for (const auto& s : cert.steps) {
        keys.push_back(s.src);
        keys.push_back(s.dst);
    }
    std::vector<std::string> rules = rule_names();
    for (const char* r : {"identity", "trans", "top", "bot", "axiom", "role-initial", "role-terminal"})
        rules.push_back(r);
    auto below = [&](int k) { return static_cast<int>(rng() % static_cast<unsigned>(k)); };
    for (int attempt = 0; static_cast<int>(out.size()) < n && attempt < 20 * n; ++attempt) {
        int i = below(size);
        Certificate m = cert;
        CertStep& s = m.steps[i];
        switch (below(7)) {
            case 0:
                if (s.src == s.dst) continue;
                std::swap(s.src, s.dst);
                break;
            case 1: {
                const auto& k = keys[below(static_cast<int>(keys.size()))];
                if (k == s.src) continue;
                s.src = k;
                break;
            }
            case 2: {
                const auto& k = keys[below(static_cast<int>(keys.size()))];
                if (k == s.dst) continue;
                s.dst = k;
                break;
            }
            case 3: {
                const auto& r = rules[below(static_cast<int>(rules.size()))];
                if (r == s.rule) continue;
                s.rule = r;
                break;
            }
            case 4:
                if (s.premises.empty()) continue;
                s.premises.erase(s.premises.begin() + below(static_cast<int>(s.premises.size())));
                break;
            case 5: {
                if (s.premises.empty() || i < 2) continue;
                int& q = s.premises[below(static_cast<int>(s.premises.size()))];
                int other = below(i);
                if (other == q) continue;
                q = other;
                break;
            }
            default: m.steps.erase(m.steps.begin() + i); break;
        }
        out.push_back(std::move(m));
    }
    return out;
}

InstanceReport run_instance(const Instance& inst, int index, const Budgets& b) {
    using clock = std::chrono::steady_clock;
    const auto t0 = clock::now();
    InstanceReport r;
    r.index = index;
    r.concept_text = inst.raw.text();
    r.ontology_text = inst.ontology.to_text();
    const Concept& c = inst.raw;
    const Ontology& o = inst.ontology;
    const Deadline deadline =
        Deadline::after(std::chrono::milliseconds(static_cast<long long>(b.seconds * 1000)));
    std::mt19937_64 rng(b.seed ^ (0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(index + 1)));

    TableauConfig tcfg;
    tcfg.max_nodes_per_tree = b.max_nodes;
    tcfg.deadline = deadline;
    tcfg.prune = b.prune;
    std::optional<TableauVerdict> tv;
    try {
        tv = decide_sat(c, o, tcfg);
        r.tableau = tv->satisfiable ? Verdict::Sat : Verdict::Unsat;
        r.tableau_trees = tv->meta.trees.size();
        std::string why;
        r.p1 = check_clash_nodes_are_leaves(tv->meta, &why);
        if (!r.p1) r.discrepancies.push_back("P1 violated: " + why);
        r.p2 = check_split_order(tv->meta, &why);
        if (!r.p2) r.discrepancies.push_back("P2 violated: " + why);
        r.meta_ok = check_meta_tree(tv->meta, &why);
        if (!r.meta_ok) r.discrepancies.push_back("meta-tree malformed: " + why);
    } catch (const BudgetExceeded&) {
        r.tableau = Verdict::Skipped;
        r.skipped.push_back("tableau");
    }

    CategoryConfig ccfg;
    ccfg.universe.max_objects = b.max_objects;
    ccfg.saturation.deadline = deadline;
    try {
        auto cat = OntologyCategory::build(c, o, ccfg.universe);
        cat.saturate(ccfg.saturation);
        r.category_objects = cat.objects().size();
        r.cat_syntactic = cat.has_arrow(canonical(c), Concept::bot()) ? Verdict::Unsat : Verdict::Sat;

        // soundness: sampled saturated arrows are entailments
        std::vector<std::pair<int, int>> pairs;
        for (auto [x, y] : cat.arrow_pairs())
            if (cat.objects()[x].term && cat.objects()[y].term) pairs.emplace_back(x, y);
        for (int k = 0; k < b.soundness_samples && !pairs.empty(); ++k) {
            auto [x, y] = pairs[rng() % pairs.size()];
            try {
                TableauConfig ecfg = tcfg;
                ++r.soundness_checked;
                if (!entails(o, *cat.objects()[x].term, *cat.objects()[y].term, ecfg)) {
                    ++r.soundness_failed;
                    r.discrepancies.push_back("arrow " + cat.objects()[x].key + " -> " +
                                              cat.objects()[y].key + " is not an entailment");
                }
            } catch (const BudgetExceeded&) {
                --r.soundness_checked;
            }
        }
    } catch (const BudgetExceeded&) {
        r.cat_syntactic = Verdict::Skipped;
        r.skipped.push_back("category");
    }

    if (r.tableau == Verdict::Unsat) {
        try {
            Certificate cert = extract_certificate(tv->meta, c, o);
            r.certificate_steps = static_cast<int>(cert.steps.size());
            auto chk = check_certificate(cert, c, o);
            if (chk.ok) {
                r.certificate = "verified";
            } else {
                r.certificate = "rejected: step " + std::to_string(chk.failed_step) + ": " + chk.reason;
                r.discrepancies.push_back("certificate " + r.certificate);
            }
            for (const auto& m : mutate_certificate(cert, rng, b.mutations)) {
                ++r.mutations_tried;
                if (check_certificate(m, c, o).ok) {
                    ++r.mutations_accepted;
                    r.discrepancies.push_back("mutated certificate accepted");
                }
            }
            try {
                r.cat_guided = guided_cat_unsat(cert, c, o, ccfg) ? Verdict::Unsat : Verdict::Sat;
            } catch (const BudgetExceeded&) {
                r.cat_guided = Verdict::Skipped;
                r.skipped.push_back("guided category");
            }
        } catch (const BudgetExceeded&) {
            r.certificate = "skipped";
            r.skipped.push_back("certificate");
        } catch (const std::exception& e) {
            r.certificate = std::string("error: ") + e.what();
            r.discrepancies.push_back("certificate extraction failed: " + std::string(e.what()));
        }
    } else {
        // no certificate objects to add
        r.cat_guided = r.cat_syntactic;
    }

    std::optional<Interpretation> model;
    ModelSearchConfig mcfg;
    mcfg.max_candidates = b.model_candidates;
    for (int n = 1; n <= b.model_size && !model && !deadline.expired(); ++n) {
        try {
            model = find_model_of_size(c, o, n, mcfg);
            r.model_sizes_searched = n;
        } catch (const BudgetExceeded&) {
            break;
        }
    }
    if (model) {
        r.witness = witness_json(*model);
        r.witness_valid = eval_concept(c, *model) != 0 && satisfies(o, *model);
        if (!r.witness_valid) r.discrepancies.push_back("witness fails validation");
    }

    // agreement matrix
    auto unsat = [](Verdict v) { return v == Verdict::Unsat; };
    if (r.tableau == Verdict::Unsat && r.cat_guided == Verdict::Sat)
        r.discrepancies.push_back("tableau unsat, guided category sat");
    if (r.tableau == Verdict::Sat && (unsat(r.cat_syntactic) || unsat(r.cat_guided)))
        r.discrepancies.push_back("category unsat, tableau sat");
    if (model && (unsat(r.tableau) || unsat(r.cat_syntactic) || unsat(r.cat_guided)))
        r.discrepancies.push_back("model found for an instance reported unsat");

    r.millis = std::chrono::duration<double, std::milli>(clock::now() - t0).count();
    return r;
}

DiffReport run_diff(const std::vector<Instance>& corpus, const Budgets& b) {
    const auto t0 = std::chrono::steady_clock::now();
    DiffReport rep;
    rep.instances.resize(corpus.size());
    int threads = b.threads > 0 ? b.threads : static_cast<int>(std::thread::hardware_concurrency());
    threads = std::max(1, std::min<int>(threads, static_cast<int>(corpus.size())));
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i; (i = next++) < corpus.size();) {
            try {
                rep.instances[i] = run_instance(corpus[i], static_cast<int>(i), b);
            } catch (const std::exception& e) {
                InstanceReport r;
                r.index = static_cast<int>(i);
                r.concept_text = corpus[i].raw.text();
                r.discrepancies.push_back(std::string("error: ") + e.what());
                rep.instances[i] = std::move(r);
            }
        }
    };
    std::vector<std::thread> pool;
    for (int k = 1; k < threads; ++k) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();

    for (const auto& r : rep.instances) {
        if (r.tableau == Verdict::Sat) ++rep.sat;
        if (r.tableau == Verdict::Unsat) ++rep.unsat;
        if (!r.skipped.empty()) ++rep.skipped;
        if (r.tableau == Verdict::Unsat && r.cat_syntactic == Verdict::Sat) ++rep.syntactic_gap;
        if (r.certificate == "verified") ++rep.certificates_verified;
        if (r.witness) ++rep.witnesses;
        rep.soundness_checked += r.soundness_checked;
        rep.soundness_failed += r.soundness_failed;
        rep.mutations_tried += r.mutations_tried;
        rep.mutations_accepted += r.mutations_accepted;
        for (const auto& d : r.discrepancies)
            rep.discrepancies.push_back("instance " + std::to_string(r.index) + ": " + d);
    }
    rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

std::string DiffReport::to_json() const {
    nlohmann::ordered_json j;
    auto& s = j["summary"];
    s["instances"] = instances.size();
    s["sat"] = sat;
    s["unsat"] = unsat;
    s["skipped"] = skipped;
    s["syntactic_gap"] = syntactic_gap;
    s["certificates_verified"] = certificates_verified;
    s["witnesses"] = witnesses;
    s["soundness_checked"] = soundness_checked;
    s["soundness_failed"] = soundness_failed;
    s["mutations_tried"] = mutations_tried;
    s["mutations_accepted"] = mutations_accepted;
    s["discrepancies"] = discrepancies.size();
    j["discrepancies"] = discrepancies;
    auto& arr = j["instances"] = nlohmann::ordered_json::array();
    for (const auto& r : instances) {
        nlohmann::ordered_json e;
        e["index"] = r.index;
        e["concept"] = r.concept_text;
        e["ontology"] = r.ontology_text;
        e["tableau"] = verdict_name(r.tableau);
        e["category_syntactic"] = verdict_name(r.cat_syntactic);
        e["category_guided"] = verdict_name(r.cat_guided);
        e["model"] = r.witness ? nlohmann::ordered_json::parse(*r.witness) : nlohmann::ordered_json();
        e["model_sizes_searched"] = r.model_sizes_searched;
        e["certificate"] = r.certificate;
        e["certificate_steps"] = r.certificate_steps;
        e["p1"] = r.p1;
        e["p2"] = r.p2;
        e["skipped"] = r.skipped;
        e["discrepancies"] = r.discrepancies;
        arr.push_back(std::move(e));
    }
    return j.dump(1);
}

std::string DiffReport::table() const {
    std::ostringstream out;
    out << std::left << std::setw(6) << "#" << std::setw(9) << "tableau" << std::setw(9) << "cat"
        << std::setw(9) << "guided" << std::setw(7) << "model" << std::setw(11) << "cert"
        << "ms\n";
    for (const auto& r : instances) {
        std::string cert = r.certificate.substr(0, r.certificate.find(':'));
        out << std::setw(6) << r.index << std::setw(9) << verdict_name(r.tableau) << std::setw(9)
            << verdict_name(r.cat_syntactic) << std::setw(9) << verdict_name(r.cat_guided)
            << std::setw(7) << (r.witness ? "yes" : "-") << std::setw(11) << cert << std::fixed
            << std::setprecision(1) << r.millis << (r.discrepancies.empty() ? "" : "  !") << "\n";
    }
    out << "instances " << instances.size() << ", sat " << sat << ", unsat " << unsat
        << ", skipped " << skipped << "\n";
    out << "syntactic universe missed " << syntactic_gap << " unsat instance(s)\n";
    out << "certificates verified " << certificates_verified << ", mutations rejected "
        << (mutations_tried - mutations_accepted) << "/" << mutations_tried << "\n";
    out << "witnesses " << witnesses << ", soundness samples " << soundness_checked << " ("
        << soundness_failed << " failed)\n";
    out << "discrepancies " << discrepancies.size() << "\n";
    for (const auto& d : discrepancies) out << "  " << d << "\n";
    return out.str();
}

std::vector<Instance> fixture_corpus() {
    std::vector<Instance> out;
    auto add = [&](const Concept& c, Ontology o) {
        Instance i;
        i.raw = c;
        i.nnf = canonical_nnf(c);
        i.ontology = std::move(o);
        out.push_back(std::move(i));
    };
    // each fixture picture read as an ontology, one instance per object
    for (int which = 1; which <= 3; ++which) {
        auto cat = example_fixture(which);
        std::vector<GCI> axioms;
        for (const auto& e : cat.edges())
            if (e.rule == "fixture")
                axioms.push_back(GCI{*cat.objects()[e.src].term, *cat.objects()[e.dst].term});
        Ontology o = make_ontology(axioms);
        for (const auto& obj : cat.objects())
            if (obj.term && !obj.is_top && !obj.is_bot) add(*obj.term, o);
    }
    Signature sig;
    auto P = [&](const char* t) { return parse_concept_lenient(t, sig); };
    for (const char* t : {"(and A (not A))", "(not top)", "bot", "(and (or A B) (and (not A) (not B)))",
                          "(and (some R A) (all R (not A)))",
                          "(and (some R A) (and (all R B) (all R (not B))))",
                          "(and (some R (some S A)) (all R (all S (not A))))",
                          "(not (or (all R A) (some R (not A))))", "(and (some R bot) B)"})
        add(P(t), Ontology{});
    add(P("A"), parse_ontology("A => bot"));
    add(P("A"), parse_ontology("A => (some R B)\nB => bot"));
    add(P("(and A B)"), parse_ontology("A => (not B)"));
    add(P("(some R A)"), parse_ontology("top => (all R (not A))"));
    add(P("A"), Ontology{});
    return out;
}

}  // namespace alc
