#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "alc/category.hpp"
#include "alc/certificate.hpp"
#include "alc/harness.hpp"
#include "alc/normal_form.hpp"
#include "alc/set_oracle.hpp"
#include "alc/tableau.hpp"

using namespace alc;

namespace {

struct Usage : std::runtime_error {
    using std::runtime_error::runtime_error;
};

Ontology ontology_from(const std::string& path) {
    if (path.empty()) return {};
    try {
        return load_ontology(path);
    } catch (const std::exception& e) {
        throw Usage(e.what());
    }
}

Concept concept_from(const std::string& text, const Ontology& o) {
    Signature sig = o.signature();
    try {
        return parse_concept_lenient(text, sig);
    } catch (const std::exception& e) {
        throw Usage(std::string("bad concept: ") + e.what());
    }
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Usage("cannot open '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_out(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        if (!text.empty() && text.back() != '\n') std::cout << "\n";
        return;
    }
    std::ofstream out(path);
    if (!out) throw Usage("cannot write '" + path + "'");
    out << text;
}

TableauConfig tableau_config(const Budgets& b) {
    TableauConfig cfg;
    cfg.max_nodes_per_tree = b.max_nodes;
    cfg.deadline = Deadline::after(std::chrono::milliseconds(static_cast<long long>(b.seconds * 1000)));
    return cfg;
}

CategoryConfig category_config(const Budgets& b, const std::string& mask) {
    CategoryConfig cfg;
    cfg.universe.max_objects = b.max_objects;
    cfg.saturation.deadline =
        Deadline::after(std::chrono::milliseconds(static_cast<long long>(b.seconds * 1000)));
    try {
        cfg.saturation.mask = parse_rule_mask(mask);
    } catch (const std::invalid_argument& e) {
        throw Usage(e.what());
    }
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"alcr: ALC reasoning by tableau, category saturation and model search"};
    app.require_subcommand(1);
    Budgets budgets = Budgets::from_env();

    std::string concept_text, onto_path, mode = "tableau", mask = "full", out_path;
    bool trace = false;

    auto* check = app.add_subcommand("check", "Decide satisfiability of one concept");
    check->add_option("-c,--concept", concept_text, "Concept, e.g. \"(and A (not A))\"")->required();
    check->add_option("-o,--onto", onto_path, "Ontology file (lines \"X => Y\")");
    check->add_option("-m,--mode", mode, "tableau, category or both")
        ->check(CLI::IsMember({"tableau", "category", "both"}));
    check->add_option("--mask", mask, "Category rule mask: full, weak-conjunction, weak-negation or a list");
    check->add_flag("--trace", trace, "Print tableau rule applications");

    std::string x_text, y_text;
    bool entail_category = false;
    auto* entail = app.add_subcommand("entail", "Decide whether the ontology entails X => Y");
    entail->add_option("x", x_text, "Subsumee")->required();
    entail->add_option("y", y_text, "Subsumer")->required();
    entail->add_option("-o,--onto", onto_path, "Ontology file");
    entail->add_flag("--category", entail_category, "Also report the category arrow x -> y");

    auto* extract = app.add_subcommand("extract-cert", "Write a certificate for an unsatisfiable concept");
    extract->add_option("-c,--concept", concept_text, "Concept")->required();
    extract->add_option("-o,--onto", onto_path, "Ontology file");
    extract->add_option("--out", out_path, "Output file (default stdout)");

    std::string cert_path;
    auto* verify = app.add_subcommand("verify-cert", "Check a certificate; exit 1 names the failing step");
    verify->add_option("certificate", cert_path, "Certificate JSON file")->required();
    verify->add_option("-o,--onto", onto_path, "Ontology file");
    verify->add_option("-c,--concept", concept_text, "Concept (default: the one in the certificate)");

    int fixture = 0;
    bool derived = false, saturate = true;
    auto* dot = app.add_subcommand("export-dot", "Saturate and print the category as DOT");
    dot->add_option("-c,--concept", concept_text, "Concept whose universe is drawn");
    dot->add_option("-o,--onto", onto_path, "Ontology file");
    dot->add_option("--fixture", fixture, "Draw a fixture picture instead (1, 2 or 3)")
        ->check(CLI::Range(1, 3));
    dot->add_option("--mask", mask, "Rule mask");
    dot->add_flag("--derived", derived, "Dash arrows that hold only by composition");
    dot->add_flag("!--no-saturate", saturate, "Draw the category before saturation");
    dot->add_option("--out", out_path, "Output file (default stdout)");

    GenConfig gen;
    std::string json_path;
    bool show_table = true;
    auto* fuzz = app.add_subcommand("fuzz", "Random differential run: tableau, category, models");
    fuzz->add_option("--seed", gen.seed, "Generator seed");
    fuzz->add_option("--count", gen.count, "Number of instances");
    fuzz->add_option("--names", gen.n_concept_names, "Concept names (1..4)");
    fuzz->add_option("--roles", gen.n_roles, "Roles (1..2)");
    fuzz->add_option("--depth", gen.max_depth, "Maximum concept depth (0..4)");
    fuzz->add_option("--axioms", gen.n_axioms, "Maximum axioms per instance (0..5)");
    fuzz->add_option("--w-name", gen.weights.name, "Weight of concept names");
    fuzz->add_option("--w-top", gen.weights.top, "Weight of top");
    fuzz->add_option("--w-bot", gen.weights.bot, "Weight of bot");
    fuzz->add_option("--w-not", gen.weights.negation, "Weight of negation");
    fuzz->add_option("--w-and", gen.weights.conj, "Weight of conjunction");
    fuzz->add_option("--w-or", gen.weights.disj, "Weight of disjunction");
    fuzz->add_option("--w-some", gen.weights.exists, "Weight of existentials");
    fuzz->add_option("--w-all", gen.weights.forall, "Weight of universals");
    fuzz->add_option("--threads", budgets.threads, "Worker threads (0: all cores)");
    fuzz->add_option("--samples", budgets.soundness_samples, "Saturated arrows checked per instance");
    fuzz->add_option("--mutations", budgets.mutations, "Certificate mutations per certificate");
    fuzz->add_option("--json", json_path, "Also write the JSON report here");
    fuzz->add_flag("!--quiet", show_table, "Print only the summary");
    fuzz->add_flag("--fixtures", "Run the fixture corpus instead of random instances");

    int max_size = 3;
    std::string emit_path;
    auto* model = app.add_subcommand("model", "Bounded search for a finite model");
    model->add_option("-c,--concept", concept_text, "Concept")->required();
    model->add_option("-o,--onto", onto_path, "Ontology file");
    model->add_option("--max-size", max_size, "Largest domain tried (1..8)")->check(CLI::Range(1, 8));
    model->add_option("--emit-model", emit_path, "Write the witness JSON here ('-' for stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (*check) {
            Ontology o = ontology_from(onto_path);
            Concept c = concept_from(concept_text, o);
            std::optional<bool> tab, cat;
            if (mode != "category") {
                auto cfg = tableau_config(budgets);
                cfg.record_trace = trace;
                auto v = decide_sat(c, o, cfg);
                tab = !v.satisfiable;
                if (trace)
                    for (const auto& t : v.trace) std::cout << t.to_string() << "\n";
            }
            if (mode != "tableau") cat = decide_cat_unsat(c, o, category_config(budgets, mask));
            auto word = [](bool unsat) { return unsat ? "unsat" : "sat"; };
            if (tab && cat)
                std::cout << word(*tab) << " / " << word(*cat) << "\n";
            else
                std::cout << word(tab ? *tab : *cat) << "\n";
            // the category may miss an unsat instance; the reverse is a discrepancy
            if (tab && cat && *cat && !*tab) return 1;
            return 0;
        }
        if (*entail) {
            Ontology o = ontology_from(onto_path);
            Concept x = concept_from(x_text, o), y = concept_from(y_text, o);
            bool yes = entails(o, x, y, tableau_config(budgets));
            std::cout << (yes ? "yes" : "no");
            int rc = 0;
            if (entail_category) {
                CategoryConfig cfg = category_config(budgets, mask);
                cfg.universe.extra_objects = {x, y};
                auto catg = OntologyCategory::build(x, o, cfg.universe);
                catg.saturate(cfg.saturation);
                bool arrow = catg.has_arrow(canonical(x), canonical(y));
                std::cout << " / " << (arrow ? "arrow" : "no arrow");
                if (arrow && !yes) rc = 1;
            }
            std::cout << "\n";
            return rc;
        }
        if (*extract) {
            Ontology o = ontology_from(onto_path);
            Concept c = concept_from(concept_text, o);
            auto v = decide_sat(c, o, tableau_config(budgets));
            if (v.satisfiable) {
                std::cerr << "satisfiable: no certificate\n";
                return 1;
            }
            write_out(out_path, certificate_json(extract_certificate(v.meta, c, o)));
            return 0;
        }
        if (*verify) {
            Ontology o = ontology_from(onto_path);
            Certificate cert;
            try {
                cert = certificate_from_json(read_file(cert_path));
            } catch (const std::invalid_argument& e) {
                throw Usage(e.what());
            }
            Concept c = concept_text.empty() ? cert.c0 : concept_from(concept_text, o);
            auto r = check_certificate(cert, c, o);
            if (r.ok) {
                std::cout << "valid: " << cert.steps.size() << " steps\n";
                return 0;
            }
            std::cout << "invalid";
            if (r.failed_step >= 0) std::cout << " at step " << r.failed_step;
            std::cout << ": " << r.reason << "\n";
            return 1;
        }
        if (*dot) {
            DotOptions opts;
            opts.show_derived = derived;
            if (fixture) {
                auto cat = example_fixture(fixture);
                if (saturate) {
                    SaturationConfig s = category_config(budgets, mask).saturation;
                    cat.saturate(s);
                }
                write_out(out_path, export_dot(cat, opts));
                return 0;
            }
            if (concept_text.empty()) throw Usage("export-dot needs --concept or --fixture");
            Ontology o = ontology_from(onto_path);
            Concept c = concept_from(concept_text, o);
            CategoryConfig cfg = category_config(budgets, mask);
            auto cat = OntologyCategory::build(c, o, cfg.universe);
            if (saturate) cat.saturate(cfg.saturation);
            write_out(out_path, export_dot(cat, opts));
            return 0;
        }
        if (*fuzz) {
            std::vector<Instance> corpus;
            if (fuzz->count("--fixtures")) {
                corpus = fixture_corpus();
            } else {
                try {
                    corpus = generate(gen);
                } catch (const std::invalid_argument& e) {
                    throw Usage(e.what());
                }
            }
            DiffReport rep = run_diff(corpus, budgets);
            std::string table = rep.table();
            if (!show_table) table = table.substr(table.find("instances "));
            std::cout << table;
            if (!json_path.empty()) write_out(json_path, rep.to_json());
            return rep.ok() ? 0 : 1;
        }
        if (*model) {
            Ontology o = ontology_from(onto_path);
            Concept c = concept_from(concept_text, o);
            ModelSearchConfig mcfg;
            std::optional<Interpretation> m;
            int searched = 0;
            for (int n = 1; n <= max_size && !m; ++n) {
                try {
                    m = find_model_of_size(c, o, n, mcfg);
                    searched = n;
                } catch (const BudgetExceeded& e) {
                    std::cerr << e.what() << "\n";
                    break;
                }
            }
            if (!m) {
                std::cout << "no model up to size " << searched << "\n";
                return 0;
            }
            std::cout << "model of size " << m->domain_size << "\n";
            if (!emit_path.empty()) write_out(emit_path, witness_json(*m));
            return 0;
        }
    } catch (const Usage& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const BudgetExceeded& e) {
        std::cerr << "budget exhausted: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 2;
}
