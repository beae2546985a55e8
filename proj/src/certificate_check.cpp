#include <algorithm>
#include <map>
#include <set>

#include <json.hpp>

#include "alc/certificate.hpp"

namespace alc {

namespace {

using Sort = CertStep::Sort;

struct Fail {
    std::string why;
};

[[noreturn]] void fail(std::string why) { throw Fail{std::move(why)}; }

bool starts(const std::string& s, const char* p) { return s.rfind(p, 0) == 0; }

class Checker {
public:
    Checker(const Concept& c0, const Ontology& o) {
        objects_.insert("top");
        objects_.insert("bot");
        objects_.insert(canonical(c0).text());
        for (const auto& g : o.axioms()) {
            std::string k = canonical(g.as_disjunction()).text();
            objects_.insert(k);
            axioms_.insert(k);
        }
    }

    void step(const std::vector<CertStep>& steps, int i) {
        const CertStep& s = steps[i];
        for (const auto& k : s.objects) introduce(k);
        if (s.sort == Sort::Concept) {
            need_object(s.src);
            need_object(s.dst);
        } else {
            need_role(s.src);
            need_role(s.dst);
        }
        for (int q : s.premises)
            if (q < 0 || q >= i) fail("premise " + std::to_string(q) + " is not an earlier step");
        if (!arrows_.insert({s.sort, s.src, s.dst}).second) fail("arrow stated twice");
        std::vector<const CertStep*> p;
        for (int q : s.premises) p.push_back(&steps[q]);
        if (s.sort == Sort::Concept)
            concept_rule(s, p);
        else
            role_rule(s, p);
    }

private:
    // --- objects ---------------------------------------------------------------

    Concept term(const std::string& k) {
        if (auto it = terms_.find(k); it != terms_.end()) return it->second;
        Signature sig;
        Concept c = Concept::top();
        try {
            c = parse_concept_lenient(k, sig);
        } catch (const std::exception&) {
            fail("bad concept key " + k);
        }
        if (canonical(c).text() != k) fail("concept key not canonical: " + k);
        terms_.emplace(k, c);
        return c;
    }

    bool is_special(const std::string& k) { return starts(k, "dom:") || starts(k, "cod:"); }

    void check_role_key(const std::string& r) {
        if (r == "top" || r == "bot") return;
        if (starts(r, "exists:")) {
            if (!term(r.substr(7)).is(Kind::Exists)) fail("bad role key " + r);
            return;
        }
        if (starts(r, "aux:")) {
            auto bar = r.find('|');
            if (bar == std::string::npos) fail("bad role key " + r);
            Concept x = term(r.substr(4, bar - 4)), e = term(r.substr(bar + 1));
            if (!x.is(Kind::And) || !e.is(Kind::Exists)) fail("bad role key " + r);
            return;
        }
        if (r.empty() || r.find_first_of("():| ") != std::string::npos) fail("bad role key " + r);
    }

    void introduce(const std::string& k) {
        if (starts(k, "role:")) {
            std::string r = k.substr(5);
            check_role_key(r);
            if (starts(r, "exists:")) need_object(r.substr(7));
            if (starts(r, "aux:")) {
                auto bar = r.find('|');
                need_object(r.substr(4, bar - 4));
                need_object(r.substr(bar + 1));
            }
            if (!roles_.insert(r).second) fail("role introduced twice: " + r);
            return;
        }
        if (is_special(k)) fail("dom/cod objects come with their role: " + k);
        term(k);
        if (!objects_.insert(k).second) fail("object introduced twice: " + k);
    }

    void need_role(const std::string& r) {
        if (!roles_.count(r) && r != "top" && r != "bot") fail("unknown role " + r);
    }

    void need_object(const std::string& k) {
        if (is_special(k)) {
            std::string r = k.substr(4);
            need_role(r);
            if (r == "top" || r == "bot" || (k != dom(r) && k != cod(r)))
                fail("no such object " + k);
            return;
        }
        if (!objects_.count(k)) fail("unknown object " + k);
    }

    static std::string dom(const std::string& r) {
        if (r == "top" || r == "bot") return r;
        if (starts(r, "exists:")) return r.substr(7);
        if (starts(r, "aux:")) return r.substr(4, r.find('|') - 4);
        return "dom:" + r;
    }

    static std::string cod(const std::string& r) {
        if (r == "top" || r == "bot") return r;
        return "cod:" + r;
    }

    // --- rules -----------------------------------------------------------------

    static void arity(const std::vector<const CertStep*>& p, std::size_t n) {
        if (p.size() != n) fail("expected " + std::to_string(n) + " premises");
    }

    static void sort_of(const CertStep* p, Sort s) {
        if (p->sort != s) fail("premise of the wrong sort");
    }

    std::optional<Concept> concept_or_none(const std::string& k) {
        if (is_special(k)) return std::nullopt;
        return term(k);
    }

    Concept need_kind(const std::string& k, Kind kind, const char* what) {
        auto c = concept_or_none(k);
        if (!c || !c->is(kind)) fail(std::string("expected ") + what + ": " + k);
        return *c;
    }

    static bool negates(const Concept& a, const Concept& b) {
        return a.is(Kind::Not) && a.operand() == b;
    }

    void concept_rule(const CertStep& s, const std::vector<const CertStep*>& p) {
        const std::string& r = s.rule;
        const std::string &a = s.src, &b = s.dst;
        if (r != "trans" && r != "disj-elim" && r != "conj-intro" && r != "neg-max" &&
            r != "neg-min" && r != "exists-max" && r != "forall-elim" && r != "functor-dom" &&
            r != "functor-cod") {
            arity(p, 0);
        }
        if (r == "identity") {
            if (a != b) fail("identity needs equal ends");
        } else if (r == "top") {
            if (b != "top") fail("top arrow must end in top");
        } else if (r == "bot") {
            if (a != "bot") fail("bot arrow must start at bot");
        } else if (r == "axiom") {
            if (a != "top" || !axioms_.count(b)) fail("not an axiom arrow");
        } else if (r == "trans") {
            arity(p, 2);
            sort_of(p[0], Sort::Concept);
            sort_of(p[1], Sort::Concept);
            if (p[0]->src != a || p[0]->dst != p[1]->src || p[1]->dst != b)
                fail("premises do not compose");
        } else if (r == "disj-intro") {
            Concept d = need_kind(b, Kind::Or, "disjunction");
            if (d.left().text() != a && d.right().text() != a) fail("source is not a disjunct");
        } else if (r == "disj-elim") {
            Concept d = need_kind(a, Kind::Or, "disjunction");
            arity(p, 2);
            for (auto* q : p) {
                sort_of(q, Sort::Concept);
                if (q->dst != b) fail("premise target differs");
            }
            if (!same_pair(p[0]->src, p[1]->src, d.left().text(), d.right().text()))
                fail("premises do not cover the disjuncts");
        } else if (r == "conj-elim") {
            Concept c = need_kind(a, Kind::And, "conjunction");
            if (c.left().text() != b && c.right().text() != b) fail("target is not a conjunct");
        } else if (r == "conj-intro") {
            Concept c = need_kind(b, Kind::And, "conjunction");
            arity(p, 2);
            for (auto* q : p) {
                sort_of(q, Sort::Concept);
                if (q->src != a) fail("premise source differs");
            }
            if (!same_pair(p[0]->dst, p[1]->dst, c.left().text(), c.right().text()))
                fail("premises do not cover the conjuncts");
        } else if (r == "distrib") {
            Concept c = need_kind(a, Kind::And, "conjunction");
            bool ok = false;
            for (int side = 0; side < 2 && !ok; ++side) {
                Concept d = side == 0 ? c.left() : c.right();
                Concept rest = side == 0 ? c.right() : c.left();
                if (!d.is(Kind::Or)) continue;
                Concept want = canonical(Concept::disj(Concept::conj(rest, d.left()),
                                                       Concept::conj(rest, d.right())));
                ok = want.text() == b;
            }
            if (!ok) fail("not a distributivity arrow");
        } else if (r == "neg-bot") {
            Concept c = need_kind(a, Kind::And, "conjunction");
            if (b != "bot" || !(negates(c.left(), c.right()) || negates(c.right(), c.left())))
                fail("not a contradiction");
        } else if (r == "neg-top") {
            Concept d = need_kind(b, Kind::Or, "disjunction");
            if (a != "top" || !(negates(d.left(), d.right()) || negates(d.right(), d.left())))
                fail("not an excluded middle");
        } else if (r == "neg-max") {
            arity(p, 1);
            sort_of(p[0], Sort::Concept);
            Concept c = need_kind(p[0]->src, Kind::And, "conjunction premise");
            if (p[0]->dst != "bot") fail("premise must end in bot");
            auto nb = concept_or_none(b);
            bool ok = nb && ((a == c.right().text() && negates(*nb, c.left())) ||
                             (a == c.left().text() && negates(*nb, c.right())));
            if (!ok) fail("neg-max conclusion does not match");
        } else if (r == "neg-min") {
            arity(p, 1);
            sort_of(p[0], Sort::Concept);
            Concept d = need_kind(p[0]->dst, Kind::Or, "disjunction premise");
            if (p[0]->src != "top") fail("premise must start at top");
            auto na = concept_or_none(a);
            bool ok = na && ((negates(*na, d.left()) && b == d.right().text()) ||
                             (negates(*na, d.right()) && b == d.left().text()));
            if (!ok) fail("neg-min conclusion does not match");
        } else if (r == "exists-cod") {
            if (!starts(a, "cod:exists:")) fail("source must be cod of an existential role");
            Concept e = term(a.substr(11));
            if (e.filler().text() != b) fail("target is not the filler");
        } else if (r == "exists-max") {
            Concept e = need_kind(b, Kind::Exists, "existential");
            arity(p, 2);
            sort_of(p[0], Sort::Role);
            sort_of(p[1], Sort::Concept);
            const std::string& rr = p[0]->src;
            if (p[0]->dst != e.id()) fail("role premise must end in the named role");
            if (p[1]->src != cod(rr) || p[1]->dst != e.filler().text())
                fail("codomain premise does not match");
            if (a != dom(rr)) fail("source is not the role domain");
        } else if (r == "forall-def") {
            auto def = [&](const std::string& x, const std::string& y) {
                auto f = concept_or_none(x);
                if (!f || !f->is(Kind::Forall)) return false;
                Concept want = Concept::negation(
                    Concept::exists(f->id(), Concept::negation(f->filler())));
                return canonical(want).text() == y;
            };
            if (!def(a, b) && !def(b, a)) fail("not a universal/dual pair");
        } else if (r == "forall-elim") {
            arity(p, 2);
            sort_of(p[0], Sort::Role);
            sort_of(p[1], Sort::Concept);
            const std::string& rr = p[0]->src;
            Concept f = need_kind(p[1]->dst, Kind::Forall, "universal premise");
            if (p[0]->dst != f.id()) fail("role premise must end in the named role");
            if (p[1]->src != dom(rr)) fail("universal premise must start at the role domain");
            if (a != cod(rr) || b != f.filler().text()) fail("forall-elim conclusion does not match");
        } else if (r == "functor-dom" || r == "functor-cod") {
            arity(p, 1);
            sort_of(p[0], Sort::Role);
            bool d = r == "functor-dom";
            std::string want_a = d ? dom(p[0]->src) : cod(p[0]->src);
            std::string want_b = d ? dom(p[0]->dst) : cod(p[0]->dst);
            if (a != want_a || b != want_b) fail("functor image does not match");
        } else {
            fail("unknown concept rule " + r);
        }
    }

    void role_rule(const CertStep& s, const std::vector<const CertStep*>& p) {
        const std::string& r = s.rule;
        const std::string &a = s.src, &b = s.dst;
        if (r != "trans" && r != "role-bot") arity(p, 0);
        if (r == "identity") {
            if (a != b) fail("identity needs equal ends");
        } else if (r == "role-terminal") {
            if (b != "top") fail("must end in the top role");
        } else if (r == "role-initial") {
            if (a != "bot") fail("must start at the bottom role");
        } else if (r == "trans") {
            arity(p, 2);
            sort_of(p[0], Sort::Role);
            sort_of(p[1], Sort::Role);
            if (p[0]->src != a || p[0]->dst != p[1]->src || p[1]->dst != b)
                fail("premises do not compose");
        } else if (r == "exists-role") {
            if (!starts(a, "exists:") || term(a.substr(7)).id() != b)
                fail("not an existential role inclusion");
        } else if (r == "aux-role") {
            if (!starts(a, "aux:") || b != "exists:" + a.substr(a.find('|') + 1))
                fail("not an auxiliary role inclusion");
            // the existential must be a conjunct of X
            Concept x = term(a.substr(4, a.find('|') - 4));
            std::string e = a.substr(a.find('|') + 1);
            if (!has_conjunct(x, e)) fail("existential is not a conjunct of the defining object");
        } else if (r == "role-bot") {
            arity(p, 1);
            sort_of(p[0], Sort::Concept);
            if (b != "bot") fail("must end in the bottom role");
            if ((p[0]->src != dom(a) && p[0]->src != cod(a)) || p[0]->dst != "bot")
                fail("premise must send dom or cod to bot");
        } else {
            fail("unknown role rule " + r);
        }
    }

    static bool has_conjunct(const Concept& x, const std::string& e) {
        if (x.text() == e) return true;
        if (!x.is(Kind::And)) return false;
        return has_conjunct(x.left(), e) || has_conjunct(x.right(), e);
    }

    static bool same_pair(const std::string& p, const std::string& q, const std::string& l,
                          const std::string& r) {
        return (p == l && q == r) || (p == r && q == l);
    }

    std::set<std::string> objects_, roles_, axioms_;
    std::set<std::tuple<Sort, std::string, std::string>> arrows_;
    std::map<std::string, Concept> terms_;
};

}  // namespace

CheckResult check_certificate(const Certificate& cert, const Concept& c0, const Ontology& o) {
    CheckResult res;
    std::string c0k = canonical(c0).text();
    if (canonical(cert.c0).text() != c0k) {
        res.reason = "certificate is for another concept";
        return res;
    }
    if (cert.ontology_hash != o.hash()) {
        res.reason = "ontology hash mismatch";
        return res;
    }
    if (cert.steps.empty()) {
        res.ok = c0k == "bot";
        if (!res.ok) res.reason = "empty derivation";
        return res;
    }
    Checker chk(c0, o);
    const int n = static_cast<int>(cert.steps.size());
    std::vector<bool> used(cert.steps.size(), false);
    for (int i = 0; i < n; ++i) {
        try {
            chk.step(cert.steps, i);
        } catch (const Fail& f) {
            res.failed_step = i;
            res.reason = f.why;
            return res;
        }
        for (int q : cert.steps[i].premises) used[q] = true;
    }
    const auto& last = cert.steps.back();
    if (last.sort != Sort::Concept || last.src != c0k || last.dst != "bot") {
        res.failed_step = n - 1;
        res.reason = "last step is not c0 -> bot";
        return res;
    }
    for (int i = 0; i + 1 < n; ++i)
        if (!used[i]) {
            res.failed_step = i;
            res.reason = "step is never used";
            return res;
        }
    res.ok = true;
    return res;
}

std::string certificate_json(const Certificate& cert) {
    nlohmann::ordered_json j;
    j["concept"] = cert.c0.text();
    j["ontology_hash"] = cert.ontology_hash;
    j["steps"] = nlohmann::ordered_json::array();
    for (const auto& s : cert.steps) {
        nlohmann::ordered_json e;
        e["objects"] = s.objects;
        e["arrow"] = {s.src, s.dst};
        e["sort"] = s.sort == Sort::Concept ? "concept" : "role";
        e["rule"] = s.rule;
        e["premises"] = s.premises;
        j["steps"].push_back(std::move(e));
    }
    return j.dump(1);
}

Certificate certificate_from_json(const std::string& text) {
    try {
        auto j = nlohmann::json::parse(text);
        Certificate c;
        Signature sig;
        c.c0 = parse_concept_lenient(j.at("concept").get<std::string>(), sig);
        c.ontology_hash = j.at("ontology_hash").get<std::string>();
        for (const auto& e : j.at("steps")) {
            CertStep s;
            s.objects = e.at("objects").get<std::vector<std::string>>();
            const auto& arrow = e.at("arrow");
            if (!arrow.is_array() || arrow.size() != 2)
                throw std::invalid_argument("arrow must be a pair");
            s.src = arrow[0].get<std::string>();
            s.dst = arrow[1].get<std::string>();
            std::string sort = e.at("sort").get<std::string>();
            if (sort != "concept" && sort != "role") throw std::invalid_argument("bad sort " + sort);
            s.sort = sort == "concept" ? Sort::Concept : Sort::Role;
            s.rule = e.at("rule").get<std::string>();
            s.premises = e.at("premises").get<std::vector<int>>();
            c.steps.push_back(std::move(s));
        }
        return c;
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("certificate json: ") + e.what());
    }
}

}  // namespace alc
