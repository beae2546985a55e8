#include "alc/category.hpp"

#include <algorithm>
#include <bit>
#include <json.hpp>
#include <sstream>

#include "alc/normal_form.hpp"

namespace alc {

namespace {

const std::vector<std::string> kRules = {
    "disj-intro", "disj-elim",  "conj-elim",   "conj-intro",  "distrib",
    "neg-bot",    "neg-top",    "neg-max",     "neg-min",     "exists-role",
    "exists-cod", "exists-max", "forall-def",  "forall-elim", "functor-dom",
    "functor-cod", "role-bot",  "aux-role",
};

template <class F>
void for_bits(const std::vector<std::uint64_t>& words, F f) {
    for (std::size_t w = 0; w < words.size(); ++w) {
        std::uint64_t x = words[w];
        while (x) {
            f(static_cast<int>(w * 64 + std::countr_zero(x)));
            x &= x - 1;
        }
    }
}

// And-descendants of x that are not themselves conjunctions.
void conjuncts(const Concept& x, std::vector<Concept>& out) {
    if (x.is(Kind::And)) {
        conjuncts(x.left(), out);
        conjuncts(x.right(), out);
    } else {
        out.push_back(x);
    }
}

}  // namespace

std::string role_key_exists(const Concept& ex) { return "exists:" + canonical(ex).text(); }

std::string role_key_aux(const Concept& x, const Concept& ex) {
    return "aux:" + canonical(x).text() + "|" + canonical(ex).text();
}

const std::vector<std::string>& rule_names() { return kRules; }

RuleMask full_mask() { return RuleMask(kRules.begin(), kRules.end()); }

RuleMask parse_rule_mask(const std::string& text) {
    if (text == "full") return full_mask();
    if (text == "weak-conjunction") {
        auto m = full_mask();
        m.erase("distrib");
        return m;
    }
    if (text == "weak-negation") {
        auto m = full_mask();
        m.erase("neg-max");
        m.erase("neg-min");
        return m;
    }
    RuleMask m;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        if (std::find(kRules.begin(), kRules.end(), item) == kRules.end())
            throw std::invalid_argument("unknown rule '" + item + "'");
        m.insert(item);
    }
    return m;
}

void Reach::resize(std::size_t n) {
    n_ = n;
    words_ = (n + 63) / 64;
    fwd_.assign(n * words_, 0);
    bwd_.assign(n * words_, 0);
    for (std::size_t i = 0; i < n; ++i) {
        fwd_[i * words_ + i / 64] |= std::uint64_t{1} << (i % 64);
        bwd_[i * words_ + i / 64] |= std::uint64_t{1} << (i % 64);
    }
}

bool Reach::add(int a, int b) {
    if (has(a, b)) return false;
    std::vector<std::uint64_t> before(col(a), col(a) + words_);
    std::vector<std::uint64_t> after(row(b), row(b) + words_);
    for_bits(before, [&](int x) {
        auto* r = fwd_.data() + x * words_;
        for (std::size_t w = 0; w < words_; ++w) r[w] |= after[w];
    });
    for_bits(after, [&](int y) {
        auto* c = bwd_.data() + y * words_;
        for (std::size_t w = 0; w < words_; ++w) c[w] |= before[w];
    });
    return true;
}

int OntologyCategory::intern(const Concept& raw) {
    Concept c = canonical(raw);
    auto it = index_.find(c.text());
    if (it != index_.end()) return it->second;
    if (objects_.size() >= max_objects_)
        throw BudgetExceeded("category: universe exceeds " + std::to_string(max_objects_) +
                             " objects");
    int id = static_cast<int>(objects_.size());
    ConceptObject o;
    o.key = c.text();
    o.is_top = c.is(Kind::Top);
    o.is_bot = c.is(Kind::Bot);
    o.term = std::move(c);
    index_.emplace(o.key, id);
    objects_.push_back(std::move(o));
    return id;
}

int OntologyCategory::intern_special(const std::string& key) {
    auto it = index_.find(key);
    if (it != index_.end()) return it->second;
    if (objects_.size() >= max_objects_)
        throw BudgetExceeded("category: universe exceeds " + std::to_string(max_objects_) +
                             " objects");
    int id = static_cast<int>(objects_.size());
    objects_.push_back({key, std::nullopt, false, false});
    index_.emplace(key, id);
    return id;
}

void OntologyCategory::add_subterms(const Concept& c) {
    intern(c);
    switch (c.kind()) {
        case Kind::Not:
        case Kind::Exists:
        case Kind::Forall: add_subterms(c.left()); break;
        case Kind::And:
        case Kind::Or:
            add_subterms(c.left());
            add_subterms(c.right());
            break;
        default: break;
    }
}

int OntologyCategory::add_role(RoleObject r) {
    auto it = role_index_.find(r.key);
    if (it != role_index_.end()) return it->second;
    int id = static_cast<int>(roles_.size());
    role_index_.emplace(r.key, id);
    roles_.push_back(std::move(r));
    return id;
}

void OntologyCategory::finish(bool aux_roles) {
    top_ = intern(Concept::top());
    bot_ = intern(Concept::bot());

    RoleObject rt;
    rt.key = "top";
    rt.kind = RoleObject::Kind::Top;
    rt.dom = rt.cod = top_;
    role_top_ = add_role(rt);
    RoleObject rb;
    rb.key = "bot";
    rb.kind = RoleObject::Kind::Bot;
    rb.dom = rb.cod = bot_;
    role_bot_ = add_role(rb);

    auto named = [&](const std::string& name) {
        if (auto it = role_index_.find(name); it != role_index_.end()) return it->second;
        RoleObject r;
        r.key = name;
        r.base = name;
        r.dom = intern_special("dom:" + name);
        r.cod = intern_special("cod:" + name);
        return add_role(r);
    };

    const std::size_t concept_count = objects_.size();
    std::vector<int> exists_role(concept_count, -1), named_role(concept_count, -1);
    for (std::size_t i = 0; i < concept_count; ++i) {
        const Concept c = *objects_[i].term;
        if (!c.is(Kind::Exists) && !c.is(Kind::Forall)) continue;
        named_role[i] = named(c.id());
        if (c.is(Kind::Exists)) {
            RoleObject r;
            r.key = role_key_exists(c);
            r.kind = RoleObject::Kind::Exists;
            r.base = c.id();
            r.exists_object = static_cast<int>(i);
            r.dom = static_cast<int>(i);
            r.cod = intern_special("cod:" + r.key);
            exists_role[i] = add_role(r);
        }
    }
    if (aux_roles) {
        for (std::size_t i = 0; i < concept_count; ++i) {
            const Concept x = *objects_[i].term;
            if (!x.is(Kind::And)) continue;
            std::vector<Concept> parts;
            conjuncts(x, parts);
            for (const auto& e : parts) {
                if (!e.is(Kind::Exists)) continue;
                bool paired = std::any_of(parts.begin(), parts.end(), [&](const Concept& f) {
                    return f.is(Kind::Forall) && f.id() == e.id();
                });
                if (!paired) continue;
                RoleObject r;
                r.key = role_key_aux(x, e);
                r.kind = RoleObject::Kind::Aux;
                r.base = e.id();
                r.exists_object = index_.at(canonical(e).text());
                r.defining = static_cast<int>(i);
                r.dom = static_cast<int>(i);
                r.cod = intern_special("cod:" + r.key);
                add_role(r);
            }
        }
    }

    auto find_c = [&](const Concept& c) {
        auto it = index_.find(canonical(c).text());
        return it == index_.end() ? -1 : it->second;
    };
    shape_.assign(objects_.size(), Shape{});
    for (std::size_t i = 0; i < concept_count; ++i) {
        const auto& c = *objects_[i].term;
        auto& s = shape_[i];
        s.negation = find_c(Concept::negation(c));
        switch (c.kind()) {
            case Kind::And:
            case Kind::Or:
                s.left = find_c(c.left());
                s.right = find_c(c.right());
                if (c.is(Kind::And)) {
                    for (int side = 0; side < 2; ++side) {
                        const Concept& other = side == 0 ? c.left() : c.right();
                        const Concept& dis = side == 0 ? c.right() : c.left();
                        if (!dis.is(Kind::Or)) continue;
                        s.distrib[side] = find_c(Concept::disj(Concept::conj(other, dis.left()),
                                                               Concept::conj(other, dis.right())));
                    }
                }
                break;
            case Kind::Not:
                s.left = find_c(c.operand());
                s.contradiction = find_c(Concept::conj(c.operand(), c));
                s.excluded_middle = find_c(Concept::disj(c.operand(), c));
                break;
            case Kind::Exists:
                s.left = find_c(c.filler());
                s.role = exists_role[i];
                s.named = named_role[i];
                break;
            case Kind::Forall:
                s.left = find_c(c.filler());
                s.named = named_role[i];
                s.forall_dual = find_c(Concept::negation(
                    Concept::exists(c.id(), Concept::negation(c.filler()))));
                break;
            default: break;
        }
    }

    reach_.resize(objects_.size());
    rreach_.resize(roles_.size());
    link(bot_, top_, "bot");
    for (std::size_t i = 0; i < objects_.size(); ++i) {
        link(bot_, static_cast<int>(i), "bot");
        link(static_cast<int>(i), top_, "top");
    }
    for (std::size_t r = 0; r < roles_.size(); ++r) {
        role_link(role_bot_, static_cast<int>(r), "role-initial");
        role_link(static_cast<int>(r), role_top_, "role-terminal");
    }
    for (int a : axiom_objects_) link(top_, a, "axiom");
}

bool OntologyCategory::link(int a, int b, const char* rule) {
    if (!reach_.add(a, b)) return false;
    edges_.push_back({a, b, rule});
    return true;
}

bool OntologyCategory::role_link(int a, int b, const char* rule) {
    if (!rreach_.add(a, b)) return false;
    role_edges_.push_back({a, b, rule});
    return true;
}

OntologyCategory OntologyCategory::build(const Concept& c0, const Ontology& o,
                                         const UniverseConfig& cfg) {
    OntologyCategory cat;
    cat.max_objects_ = cfg.max_objects;
    std::vector<Concept> base{c0, Concept::top(), Concept::bot()};
    std::vector<Concept> axioms;
    for (const auto& g : o.axioms()) axioms.push_back(g.as_disjunction());
    base.insert(base.end(), axioms.begin(), axioms.end());
    for (const auto& c : sub_closure(c0, o)) base.push_back(c);
    const std::size_t nbase = base.size();
    for (std::size_t k = 0; k < nbase; ++k) base.push_back(Concept::negation(base[k]));
    base.insert(base.end(), cfg.extra_objects.begin(), cfg.extra_objects.end());
    for (const auto& c : base) cat.add_subterms(c);

    auto snapshot = [&] {
        std::vector<Concept> v;
        for (const auto& ob : cat.objects_) v.push_back(*ob.term);
        return v;
    };
    for (const auto& c : snapshot()) {
        if (!c.is(Kind::Forall)) continue;
        Concept neg = Concept::negation(c.filler());
        cat.add_subterms(Concept::negation(Concept::exists(c.id(), neg)));
    }
    for (const auto& c : snapshot()) {
        if (!c.is(Kind::Not)) continue;
        cat.add_subterms(Concept::conj(c.operand(), c));
        cat.add_subterms(Concept::disj(c.operand(), c));
    }
    for (const auto& a : axioms) cat.axiom_objects_.push_back(cat.intern(a));
    cat.finish(cfg.aux_roles);
    return cat;
}

OntologyCategory OntologyCategory::fixture(
    const std::vector<Concept>& objects, const std::vector<std::pair<Concept, Concept>>& arrows) {
    OntologyCategory cat;
    for (const auto& c : objects) cat.add_subterms(c);
    cat.finish(true);
    for (const auto& [x, y] : arrows) cat.add_fixture_arrow(x, y);
    return cat;
}

void OntologyCategory::add_fixture_arrow(const Concept& x, const Concept& y) {
    auto a = find(x), b = find(y);
    if (!a) throw ObjectNotInUniverse(canonical(x).text());
    if (!b) throw ObjectNotInUniverse(canonical(y).text());
    link(*a, *b, "fixture");
}

bool OntologyCategory::round(Schedule sched, const Deadline& deadline) {
    bool changed = false;
    auto mark = [&](bool b) { changed |= b; };
    const int n = static_cast<int>(objects_.size());
    const int nr = static_cast<int>(roles_.size());
    const std::size_t words = reach_.words();
    std::vector<std::uint64_t> buf(words);

    for (int step = 0; step < nr; ++step) {
        int r = sched == Schedule::Forward ? step : nr - 1 - step;
        const auto& ro = roles_[r];
        if (ro.kind == RoleObject::Kind::Exists) {
            if (on("exists-role")) mark(role_link(r, role_index_.at(ro.base), "exists-role"));
            if (on("exists-cod")) mark(link(ro.cod, shape_[ro.exists_object].left, "exists-cod"));
        } else if (ro.kind == RoleObject::Kind::Aux && on("aux-role")) {
            mark(role_link(r, shape_[ro.exists_object].role, "aux-role"));
        }
    }

    for (int step = 0; step < n; ++step) {
        if ((step & 255) == 0) deadline.check("category");
        int i = sched == Schedule::Forward ? step : n - 1 - step;
        if (!objects_[i].term) continue;
        const Concept& c = *objects_[i].term;
        const Shape& s = shape_[i];
        switch (c.kind()) {
            case Kind::Or:
                if (on("disj-intro")) {
                    mark(link(s.left, i, "disj-intro"));
                    mark(link(s.right, i, "disj-intro"));
                }
                if (on("disj-elim")) {
                    const auto *a = reach_.row(s.left), *b = reach_.row(s.right),
                               *self = reach_.row(i);
                    for (std::size_t w = 0; w < words; ++w) buf[w] = a[w] & b[w] & ~self[w];
                    for_bits(buf, [&](int x) { mark(link(i, x, "disj-elim")); });
                }
                if (on("neg-min") && reach_.has(top_, i)) {
                    if (shape_[s.left].negation >= 0)
                        mark(link(shape_[s.left].negation, s.right, "neg-min"));
                    if (shape_[s.right].negation >= 0)
                        mark(link(shape_[s.right].negation, s.left, "neg-min"));
                }
                break;
            case Kind::And:
                if (on("conj-elim")) {
                    mark(link(i, s.left, "conj-elim"));
                    mark(link(i, s.right, "conj-elim"));
                }
                if (on("conj-intro")) {
                    const auto *a = reach_.col(s.left), *b = reach_.col(s.right),
                               *self = reach_.col(i);
                    for (std::size_t w = 0; w < words; ++w) buf[w] = a[w] & b[w] & ~self[w];
                    for_bits(buf, [&](int x) { mark(link(x, i, "conj-intro")); });
                }
                if (on("distrib"))
                    for (int t : s.distrib)
                        if (t >= 0) mark(link(i, t, "distrib"));
                if (on("neg-max") && reach_.has(i, bot_)) {
                    if (shape_[s.left].negation >= 0)
                        mark(link(s.right, shape_[s.left].negation, "neg-max"));
                    if (shape_[s.right].negation >= 0)
                        mark(link(s.left, shape_[s.right].negation, "neg-max"));
                }
                break;
            case Kind::Not:
                if (on("neg-bot") && s.contradiction >= 0)
                    mark(link(s.contradiction, bot_, "neg-bot"));
                if (on("neg-top") && s.excluded_middle >= 0)
                    mark(link(top_, s.excluded_middle, "neg-top"));
                break;
            case Kind::Exists:
                if (on("exists-max"))
                    for (int r = 0; r < nr; ++r)
                        if (rreach_.has(r, s.named) && reach_.has(roles_[r].cod, s.left))
                            mark(link(roles_[r].dom, i, "exists-max"));
                break;
            case Kind::Forall:
                if (on("forall-def") && s.forall_dual >= 0) {
                    mark(link(i, s.forall_dual, "forall-def"));
                    mark(link(s.forall_dual, i, "forall-def"));
                }
                if (on("forall-elim"))
                    for (int r = 0; r < nr; ++r)
                        if (rreach_.has(r, s.named) && reach_.has(roles_[r].dom, i))
                            mark(link(roles_[r].cod, s.left, "forall-elim"));
                break;
            default: break;
        }
    }

    for (int step = 0; step < nr; ++step) {
        int r = sched == Schedule::Forward ? step : nr - 1 - step;
        for (int t = 0; t < nr; ++t) {
            if (t == r || !rreach_.has(r, t)) continue;
            if (on("functor-dom")) mark(link(roles_[r].dom, roles_[t].dom, "functor-dom"));
            if (on("functor-cod")) mark(link(roles_[r].cod, roles_[t].cod, "functor-cod"));
        }
        if (on("role-bot") &&
            (reach_.has(roles_[r].dom, bot_) || reach_.has(roles_[r].cod, bot_)))
            mark(role_link(r, role_bot_, "role-bot"));
    }
    return changed;
}

int OntologyCategory::saturate(const SaturationConfig& cfg) {
    mask_ = cfg.mask;
    int rounds = 0;
    while (true) {
        cfg.deadline.check("category");
        ++rounds;
        if (!round(cfg.schedule, cfg.deadline)) break;
    }
    return rounds;
}

int OntologyCategory::saturate() {
    SaturationConfig cfg;
    cfg.mask = mask_;
    return saturate(cfg);
}

std::optional<int> OntologyCategory::find(const Concept& c) const {
    return find_key(canonical(c).text());
}

std::optional<int> OntologyCategory::find_key(const std::string& key) const {
    auto it = index_.find(key);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

std::optional<int> OntologyCategory::find_role(const std::string& key) const {
    auto it = role_index_.find(key);
    if (it == role_index_.end()) return std::nullopt;
    return it->second;
}

bool OntologyCategory::has_arrow(const Concept& x, const Concept& y) const {
    return has_arrow_key(canonical(x).text(), canonical(y).text());
}

bool OntologyCategory::has_arrow_key(const std::string& x, const std::string& y) const {
    auto a = find_key(x), b = find_key(y);
    if (!a) throw ObjectNotInUniverse(x);
    if (!b) throw ObjectNotInUniverse(y);
    return reach_.has(*a, *b);
}

bool OntologyCategory::has_role_arrow(const std::string& r, const std::string& s) const {
    auto a = find_role(r), b = find_role(s);
    if (!a) throw ObjectNotInUniverse(r);
    if (!b) throw ObjectNotInUniverse(s);
    return rreach_.has(*a, *b);
}

std::vector<std::pair<int, int>> OntologyCategory::arrow_pairs() const {
    std::vector<std::pair<int, int>> out;
    const int n = static_cast<int>(objects_.size());
    for (int a = 0; a < n; ++a) {
        std::vector<std::uint64_t> row(reach_.row(a), reach_.row(a) + reach_.words());
        for_bits(row, [&](int b) {
            if (a != b) out.emplace_back(a, b);
        });
    }
    return out;
}

std::string OntologyCategory::to_json() const {
    using nlohmann::ordered_json;
    ordered_json j;
    j["objects"] = ordered_json::array();
    for (std::size_t i = 0; i < objects_.size(); ++i)
        j["objects"].push_back({{"id", i}, {"concept", objects_[i].key}});
    j["arrows"] = ordered_json::array();
    for (const auto& e : edges_)
        j["arrows"].push_back({{"src", e.src}, {"dst", e.dst}, {"rule", e.rule}});
    j["roles"] = ordered_json::array();
    for (std::size_t r = 0; r < roles_.size(); ++r)
        j["roles"].push_back(
            {{"id", r}, {"role", roles_[r].key}, {"dom", roles_[r].dom}, {"cod", roles_[r].cod}});
    j["role_arrows"] = ordered_json::array();
    for (const auto& e : role_edges_)
        j["role_arrows"].push_back({{"src", e.src}, {"dst", e.dst}, {"rule", e.rule}});
    return j.dump(2);
}

bool decide_cat_unsat(const Concept& c0, const Ontology& o, const CategoryConfig& cfg) {
    auto cat = OntologyCategory::build(c0, o, cfg.universe);
    cat.saturate(cfg.saturation);
    return cat.has_arrow(c0, Concept::bot());
}

namespace {

std::string dot_quote(const std::string& s) {
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"' || ch == '\\') out += '\\';
        out += ch;
    }
    return out + "\"";
}

}  // namespace

std::string export_dot(const OntologyCategory& cat, const DotOptions& opts) {
    const auto& objs = cat.objects();
    std::vector<int> order(objs.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return objs[a].key < objs[b].key; });

    std::ostringstream out;
    out << "digraph category {\n";
    for (int i : order) out << "  " << dot_quote(objs[i].key) << ";\n";

    std::vector<Edge> edges = cat.edges();
    std::sort(edges.begin(), edges.end(), [&](const Edge& a, const Edge& b) {
        return std::tie(objs[a.src].key, objs[a.dst].key, a.rule) <
               std::tie(objs[b.src].key, objs[b.dst].key, b.rule);
    });
    std::set<std::pair<int, int>> stored;
    for (const auto& e : edges) {
        stored.emplace(e.src, e.dst);
        out << "  " << dot_quote(objs[e.src].key) << " -> " << dot_quote(objs[e.dst].key)
            << " [label=" << dot_quote(e.rule) << "];\n";
    }
    if (opts.show_derived) {
        std::vector<std::pair<std::string, std::string>> derived;
        for (auto [a, b] : cat.arrow_pairs()) {
            if (objs[a].is_top || objs[a].is_bot || objs[b].is_top || objs[b].is_bot) continue;
            if (stored.count({a, b})) continue;
            derived.emplace_back(objs[a].key, objs[b].key);
        }
        std::sort(derived.begin(), derived.end());
        for (const auto& [a, b] : derived)
            out << "  " << dot_quote(a) << " -> " << dot_quote(b) << " [style=dashed];\n";
    }
    out << "}\n";
    return out.str();
}

OntologyCategory example_fixture(int which) {
    auto n = [](const char* s) { return Concept::name(s); };
    auto conj = [](Concept a, Concept b) { return Concept::conj(std::move(a), std::move(b)); };
    auto disj = [](Concept a, Concept b) { return Concept::disj(std::move(a), std::move(b)); };
    auto neg = [](Concept a) { return Concept::negation(std::move(a)); };
    std::vector<std::pair<Concept, Concept>> arrows;
    auto both = [&](const Concept& a, const Concept& b) {
        arrows.emplace_back(a, b);
        arrows.emplace_back(b, a);
    };

    if (which == 1) {
        Concept arrived = n("arrived"), filled = n("filled-room"), starting = n("starting"),
                started = n("started"), finished = n("finished");
        arrows = {{arrived, filled},  {filled, finished},  {starting, finished},
                  {started, finished}, {arrived, starting}, {arrived, started}};
        return OntologyCategory::fixture({arrived, filled, starting, started, finished}, arrows);
    }

    Concept I = n("I"), F = n("F"), S = n("S"), D = n("D"), T = n("T");
    Concept DS = disj(D, S);
    std::vector<Concept> objects{I, F, S, D, T, DS};
    arrows = {{S, DS}, {D, DS}, {I, F}, {F, T}, {S, T}, {D, T}, {I, S}, {I, D}};
    both(DS, T);

    if (which == 2) {
        Concept FD = conj(F, D), FS = conj(F, S);
        objects.insert(objects.end(), {FD, FS, conj(F, DS), disj(FD, FS)});
        arrows.insert(arrows.end(), {{FD, D}, {FD, F}, {FS, S}, {FS, F}});
        both(FS, I);
        both(FD, I);
        return OntologyCategory::fixture(objects, arrows);
    }
    if (which == 3) {
        Concept FoS = disj(F, S), DaS = conj(D, S), FS = conj(F, S);
        Concept nF = neg(F), nS = neg(S), nnF = neg(nF);
        objects.insert(objects.end(),
                       {FoS, DaS, FS, nF, nS, nnF, conj(F, nF), disj(F, nF), conj(nF, nnF),
                        disj(nF, nnF), conj(S, nS), disj(S, nS)});
        arrows.insert(arrows.end(), {{S, FoS}, {F, FoS}, {FS, S}, {FS, F}, {DaS, S}, {DaS, D}});
        both(T, FoS);
        both(FS, I);
        both(DaS, I);
        both(nF, S);
        both(nS, D);
        both(nnF, D);
        return OntologyCategory::fixture(objects, arrows);
    }
    throw std::invalid_argument("no fixture " + std::to_string(which));
}

}  // namespace alc
