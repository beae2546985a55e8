#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <unordered_map>

#include "alc/certificate.hpp"
#include "alc/normal_form.hpp"

namespace alc {

namespace {

using Sort = CertStep::Sort;
using Have = std::map<std::string, int>;  // concept key -> step index of G -> concept

Concept canon(const Concept& c) { return canonical(c); }
const std::string& key(const Concept& c) { return c.text(); }

/// Right-nested conjunction of the members in key order.
Concept label_conj(std::vector<Concept> members) {
    std::sort(members.begin(), members.end());
    members.erase(std::unique(members.begin(), members.end()), members.end());
    Concept acc = members.back();
    for (auto it = members.rbegin() + 1; it != members.rend(); ++it) acc = Concept::conj(*it, acc);
    return canon(acc);
}

class Builder {
public:
    Builder(const Concept& c0, const Ontology& o) : o_(o) {
        for (const auto& c : {Concept::top(), Concept::bot(), canon(c0)}) known_.insert(key(c));
        for (const auto& g : o.axioms()) known_.insert(key(canon(g.as_disjunction())));
    }

    std::vector<CertStep> take() { return std::move(steps_); }
    const CertStep& step(int i) const { return steps_[i]; }

    // --- object bookkeeping ----------------------------------------------------

    static std::string cod(const std::string& role) { return "cod:" + role; }

    void note_concept(const std::string& k, std::vector<std::string>& fresh) {
        if (known_.insert(k).second) fresh.push_back(k);
    }

    void note_role(const std::string& r, std::vector<std::string>& fresh) {
        if (!roles_.insert(r).second) return;
        if (r.rfind("exists:", 0) == 0) {
            note_concept(r.substr(7), fresh);
        } else if (r.rfind("aux:", 0) == 0) {
            auto bar = r.find('|');
            note_concept(r.substr(4, bar - 4), fresh);
            note_concept(r.substr(bar + 1), fresh);
        }
        fresh.push_back("role:" + r);
    }

    void note_endpoint(const std::string& k, std::vector<std::string>& fresh) {
        if (k.rfind("cod:", 0) == 0 || k.rfind("dom:", 0) == 0)
            note_role(k.substr(4), fresh);
        else
            note_concept(k, fresh);
    }

    int arrow(const std::string& src, const std::string& dst, const char* rule,
              std::vector<int> premises = {}, Sort sort = Sort::Concept) {
        auto mk = std::make_tuple(sort, src, dst);
        if (auto it = memo_.find(mk); it != memo_.end()) return it->second;
        CertStep s;
        if (sort == Sort::Concept) {
            note_endpoint(src, s.objects);
            note_endpoint(dst, s.objects);
        } else {
            note_role(src, s.objects);
            note_role(dst, s.objects);
        }
        s.src = src;
        s.dst = dst;
        s.sort = sort;
        s.rule = rule;
        s.premises = std::move(premises);
        int id = static_cast<int>(steps_.size());
        steps_.push_back(std::move(s));
        memo_.emplace(mk, id);
        return id;
    }

    int arrow(const Concept& a, const Concept& b, const char* rule, std::vector<int> p = {}) {
        return arrow(key(a), key(b), rule, std::move(p));
    }

    int role_arrow(const std::string& a, const std::string& b, const char* rule,
                   std::vector<int> p = {}) {
        return arrow(a, b, rule, std::move(p), Sort::Role);
    }

    // --- derived arrows --------------------------------------------------------

    int id(const std::string& a) { return arrow(a, a, "identity"); }
    int id(const Concept& a) { return id(key(a)); }

    int trans(int p, int q) {
        const auto& sp = steps_[p];
        const auto& sq = steps_[q];
        if (sp.dst != sq.src) throw std::logic_error("certificate: trans mismatch");
        if (sp.src == sp.dst) return q;
        if (sq.src == sq.dst) return p;
        Sort sort = sp.sort;
        std::string a = sp.src, b = sq.dst;
        return arrow(a, b, "trans", {p, q}, sort);
    }

    /// x -> m along conjunction eliminations, or -1.
    int elim(const Concept& x, const Concept& m) {
        if (x == m) return id(x);
        if (!x.is(Kind::And)) return -1;
        for (const Concept& side : {x.left(), x.right()}) {
            int r = elim(side, m);
            if (r >= 0) return trans(arrow(x, side, "conj-elim"), r);
        }
        return -1;
    }

    int must_elim(const Concept& x, const Concept& m) {
        int r = elim(x, m);
        if (r < 0)
            throw std::logic_error("certificate: " + key(m) + " is not a conjunct of " + key(x));
        return r;
    }

    /// src -> target, assembling target's conjunction tree from `have`.
    int intro(const std::string& src, const Concept& target, const Have& have) {
        if (auto it = have.find(key(target)); it != have.end()) return it->second;
        if (src == key(target)) return id(src);
        if (!target.is(Kind::And))
            throw std::logic_error("certificate: cannot reach " + key(target) + " from " + src);
        int a = intro(src, target.left(), have);
        int b = intro(src, target.right(), have);
        return arrow(src, key(target), "conj-intro", {a, b});
    }

    int dneg_elim(const Concept& c) {
        Concept n = Concept::negation(c);
        int t = arrow(Concept::top(), canon(Concept::disj(c, n)), "neg-top");
        return arrow(Concept::negation(n), c, "neg-min", {t});
    }

    /// From p: x -> y derive (not y) -> (not x).
    int contra(int p) {
        Concept x = parse(steps_[p].src), y = parse(steps_[p].dst);
        Concept ny = Concept::negation(y), nx = Concept::negation(x);
        Concept z = canon(Concept::conj(x, ny));
        int zy = trans(must_elim(z, x), p);
        int zn = must_elim(z, ny);
        Concept clash = canon(Concept::conj(y, ny));
        int zc = z == clash ? id(z) : arrow(z, clash, "conj-intro", {zy, zn});
        int zb = trans(zc, arrow(clash, Concept::bot(), "neg-bot"));
        return arrow(ny, nx, "neg-max", {zb});
    }

    /// From p: a -> b derive (some R a) -> (some R b).
    int exist_sub(int p, const std::string& role) {
        Concept a = parse(steps_[p].src), b = parse(steps_[p].dst);
        Concept ea = Concept::exists(role, a), eb = Concept::exists(role, b);
        if (a == b) return id(ea);
        std::string r = role_key_exists(ea);
        int r1 = role_arrow(r, role, "exists-role");
        int c1 = trans(arrow(cod(r), key(a), "exists-cod"), p);
        return arrow(ea, eb, "exists-max", {r1, c1});
    }

    /// From p: a -> b derive (all R a) -> (all R b).
    int forall_sub(int p, const std::string& role) {
        Concept a = parse(steps_[p].src), b = parse(steps_[p].dst);
        if (a == b) return id(Concept::forall(role, a));
        int q = contra(exist_sub(contra(p), role));
        auto dual = [&](const Concept& c) {
            return canon(Concept::negation(Concept::exists(role, Concept::negation(c))));
        };
        int f1 = arrow(Concept::forall(role, a), dual(a), "forall-def");
        int f2 = arrow(dual(b), Concept::forall(role, b), "forall-def");
        return trans(trans(f1, q), f2);
    }

    /// c -> canonical nnf(c).
    int to_nnf(const Concept& raw) {
        Concept c = canon(raw);
        if (auto it = nnf_memo_.find(key(c)); it != nnf_memo_.end()) return it->second;
        Concept n = canonical_nnf(c);
        int r;
        if (c == n) {
            r = id(c);
        } else {
            r = nnf_step(c, n);
        }
        nnf_memo_.emplace(key(c), r);
        return r;
    }

    Concept parse(const std::string& k) {
        if (auto it = parsed_.find(k); it != parsed_.end()) return it->second;
        Signature sig;
        Concept c = parse_concept_lenient(k, sig);
        parsed_.emplace(k, c);
        return c;
    }

    int axiom_member(const std::string& g, const Concept& compiled) {
        for (const auto& ax : o_.axioms()) {
            Concept raw = canon(ax.as_disjunction());
            if (canonical_nnf(raw) != compiled) continue;
            int a = arrow(key(Concept::top()), key(raw), "axiom");
            int t = arrow(g, key(Concept::top()), "top");
            return trans(trans(t, a), to_nnf(raw));
        }
        return -1;
    }

    /// Extends `have` (arrows g -> member) until it covers `label`, using
    /// conjunction elimination and the axioms.
    void derive_label(const std::string& g, Have& have, const std::vector<Concept>& label) {
        auto close = [&] {
            std::vector<std::pair<std::string, int>> work(have.begin(), have.end());
            while (!work.empty()) {
                auto [k, s] = work.back();
                work.pop_back();
                Concept c = parse(k);
                if (!c.is(Kind::And)) continue;
                for (const Concept& side : {c.left(), c.right()}) {
                    if (have.count(key(side))) continue;
                    int t = trans(s, arrow(c, side, "conj-elim"));
                    have.emplace(key(side), t);
                    work.emplace_back(key(side), t);
                }
            }
        };
        close();
        bool added = false;
        for (const auto& m : label) {
            if (have.count(key(m))) continue;
            int s = axiom_member(g, m);
            if (s >= 0) {
                have.emplace(key(m), s);
                added = true;
            }
        }
        if (added) close();
        for (const auto& m : label)
            if (!have.count(key(m)))
                throw std::logic_error("certificate: label member " + key(m) +
                                       " not derivable from " + g);
    }

private:
    int nnf_step(const Concept& c, const Concept& n) {
        switch (c.kind()) {
            case Kind::And: {
                int a = trans(must_elim(c, c.left()), to_nnf(c.left()));
                int b = trans(must_elim(c, c.right()), to_nnf(c.right()));
                return arrow(c, n, "conj-intro", {a, b});
            }
            case Kind::Or: {
                Concept na = canonical_nnf(c.left()), nb = canonical_nnf(c.right());
                int a = trans(to_nnf(c.left()), arrow(na, n, "disj-intro"));
                int b = trans(to_nnf(c.right()), arrow(nb, n, "disj-intro"));
                return arrow(c, n, "disj-elim", {a, b});
            }
            case Kind::Exists: return exist_sub(to_nnf(c.filler()), c.id());
            case Kind::Forall: return forall_sub(to_nnf(c.filler()), c.id());
            case Kind::Not: return neg_nnf(c, n);
            default: return id(c);
        }
    }

    int neg_nnf(const Concept& c, const Concept& n) {
        const Concept& x = c.operand();
        switch (x.kind()) {
            case Kind::Top: {
                int t = arrow(Concept::top(), canon(Concept::disj(Concept::top(), Concept::bot())),
                              "disj-intro");
                return arrow(c, Concept::bot(), "neg-min", {t});
            }
            case Kind::Bot: return arrow(c, Concept::top(), "top");
            case Kind::Not: return trans(dneg_elim(x.operand()), to_nnf(x.operand()));
            case Kind::And: {
                Concept a = x.left(), b = x.right();
                Concept na = Concept::negation(a), nb = Concept::negation(b);
                Concept d = canon(Concept::disj(na, nb));
                Concept nd = Concept::negation(d);
                int ea = trans(contra(arrow(na, d, "disj-intro")), dneg_elim(a));
                int eb = trans(contra(arrow(nb, d, "disj-intro")), dneg_elim(b));
                int k = arrow(nd, x, "conj-intro", {ea, eb});
                int dm = trans(contra(k), dneg_elim(d));
                int la = trans(to_nnf(na), arrow(canonical_nnf(na), n, "disj-intro"));
                int lb = trans(to_nnf(nb), arrow(canonical_nnf(nb), n, "disj-intro"));
                return trans(dm, arrow(d, n, "disj-elim", {la, lb}));
            }
            case Kind::Or: {
                Concept a = x.left(), b = x.right();
                int ca = trans(contra(arrow(a, x, "disj-intro")), to_nnf(Concept::negation(a)));
                int cb = trans(contra(arrow(b, x, "disj-intro")), to_nnf(Concept::negation(b)));
                return arrow(c, n, "conj-intro", {ca, cb});
            }
            case Kind::Exists: {
                const std::string& r = x.id();
                Concept a = x.filler();
                Concept na = Concept::negation(a);
                int s1 = contra(exist_sub(dneg_elim(a), r));
                int s2 = arrow(Concept::negation(Concept::exists(r, Concept::negation(na))),
                               Concept::forall(r, na), "forall-def");
                return trans(trans(s1, s2), forall_sub(to_nnf(na), r));
            }
            case Kind::Forall: {
                const std::string& r = x.id();
                Concept a = x.filler();
                Concept na = Concept::negation(a);
                Concept ex = Concept::exists(r, na);
                int def = arrow(Concept::negation(ex), x, "forall-def");
                int s1 = trans(contra(def), dneg_elim(ex));
                return trans(s1, exist_sub(to_nnf(na), r));
            }
            default: return id(c);
        }
    }

    const Ontology& o_;
    std::vector<CertStep> steps_;
    std::map<std::tuple<Sort, std::string, std::string>, int> memo_;
    std::set<std::string> known_, roles_;
    std::unordered_map<std::string, int> nnf_memo_;
    std::unordered_map<std::string, Concept> parsed_;
};

struct Proof {
    int node;
    int step;  // K(label(node)) -> bot
};

class Extractor {
public:
    Extractor(const MetaTree& mt, const Concept& c0, const Ontology& o)
        : mt_(mt), c0_(canon(c0)), b_(c0, o) {}

    Certificate run() {
        Proof p = result(0);
        while (p.node != 0) p = climb(0, p);
        const Concept& root = mt_.closure[0];
        Have have{{key(root), b_.id(root)}};
        auto label = mt_.label_concepts(0, 0);
        b_.derive_label(key(root), have, label);
        int k = b_.intro(key(root), label_conj(label), have);
        int fin = b_.trans(b_.to_nnf(c0_), b_.trans(k, p.step));
        Certificate cert;
        cert.c0 = c0_;
        auto steps = b_.take();
        if (steps[fin].src != key(c0_) || steps[fin].dst != "bot")
            throw std::logic_error("certificate: derivation does not end in c0 -> bot");
        if (steps[fin].src == steps[fin].dst) return cert;  // c0 is bot itself
        // keep only what the final arrow depends on, in order
        std::vector<bool> used(steps.size(), false);
        used[fin] = true;
        for (int i = fin; i >= 0; --i)
            if (used[i])
                for (int q : steps[i].premises) used[q] = true;
        std::vector<int> remap(steps.size(), -1);
        for (int i = 0; i <= fin; ++i) {
            if (!used[i]) continue;
            CertStep s = steps[i];
            for (int& q : s.premises) q = remap[q];
            remap[i] = static_cast<int>(cert.steps.size());
            cert.steps.push_back(std::move(s));
        }
        reassign_objects(cert, steps);
        return cert;
    }

private:
    // Dropping unused steps can orphan object introductions; re-derive them.
    static void reassign_objects(Certificate& cert, const std::vector<CertStep>& built) {
        std::set<std::string> introduced, all;
        for (const auto& s : built) all.insert(s.objects.begin(), s.objects.end());
        for (auto& s : cert.steps) s.objects.clear();
        // every object is introduced at the first step whose endpoints need it
        auto mention = [&](CertStep& s, const std::string& k) {
            if (all.count(k) && introduced.insert(k).second) s.objects.push_back(k);
        };
        for (auto& s : cert.steps) {
            auto endpoint = [&](const std::string& k) {
                if (s.sort == CertStep::Sort::Role) {
                    role(s, k, mention);
                } else if (k.rfind("cod:", 0) == 0 || k.rfind("dom:", 0) == 0) {
                    role(s, k.substr(4), mention);
                } else {
                    mention(s, k);
                }
            };
            endpoint(s.src);
            endpoint(s.dst);
        }
    }

    template <class M>
    static void role(CertStep& s, const std::string& r, M& mention) {
        if (r.rfind("exists:", 0) == 0) {
            mention(s, r.substr(7));
        } else if (r.rfind("aux:", 0) == 0) {
            auto bar = r.find('|');
            mention(s, r.substr(4, bar - 4));
            mention(s, r.substr(bar + 1));
        }
        mention(s, "role:" + r);
    }

    std::vector<Concept> label(int t, int n) const { return mt_.label_concepts(t, n); }

    Proof clash_proof(int t) {
        const auto& mn = mt_.trees[t];
        const auto& cl = *mn.clash;
        Concept k = label_conj(label(t, cl.node));
        if (cl.type == Clash::Type::Bottom) return {cl.node, b_.must_elim(k, Concept::bot())};
        Concept a = Concept::name(cl.name), na = Concept::negation(a);
        Concept pair = canon(Concept::conj(a, na));
        int s = k == pair ? b_.id(k)
                          : b_.arrow(k, pair, "conj-intro", {b_.must_elim(k, a), b_.must_elim(k, na)});
        return {cl.node, b_.trans(s, b_.arrow(pair, Concept::bot(), "neg-bot"))};
    }

    /// From K(L(w)) -> bot to K(L(parent w)) -> bot within tree t.
    Proof climb(int t, Proof p) {
        const auto& tree = mt_.trees[t].tree;
        const auto& w = tree.nodes[p.node];
        const int z = w.parent;
        const std::string& r = w.role;
        const Concept d = mt_.closure[w.origin];
        std::vector<Concept> fillers;
        std::vector<Concept> zl = label(t, z);
        for (const auto& c : zl)
            if (c.is(Kind::Forall) && c.id() == r) fillers.push_back(c.filler());
        std::vector<Concept> gens = fillers;
        gens.push_back(d);
        Concept g = label_conj(gens);

        Have have;
        for (const auto& m : gens) have.emplace(key(m), b_.must_elim(g, m));
        auto wl = label(t, p.node);
        b_.derive_label(key(g), have, wl);
        int gb = b_.trans(b_.intro(key(g), label_conj(wl), have), p.step);

        Concept x = label_conj(zl);
        Concept ex = canon(Concept::exists(r, d));
        std::string er = role_key_exists(ex);
        if (fillers.empty()) {
            int c = b_.trans(b_.arrow(Builder::cod(er), key(d), "exists-cod"), gb);
            int rb = b_.role_arrow(er, "bot", "role-bot", {c});
            int eb = b_.arrow(ex, Concept::bot(), "functor-dom", {rb});
            return {z, b_.trans(b_.must_elim(x, ex), eb)};
        }
        std::string ar = role_key_aux(x, ex);
        int r1 = b_.role_arrow(ar, er, "aux-role");
        int r3 = b_.trans(r1, b_.role_arrow(er, r, "exists-role"));
        std::string cod = Builder::cod(ar);
        Have cov;
        cov.emplace(key(d), b_.trans(b_.arrow(cod, Builder::cod(er), "functor-cod", {r1}),
                                     b_.arrow(Builder::cod(er), key(d), "exists-cod")));
        for (const auto& f : fillers) {
            if (cov.count(key(f))) continue;
            int xf = b_.must_elim(x, canon(Concept::forall(r, f)));
            cov.emplace(key(f), b_.arrow(cod, key(f), "forall-elim", {r3, xf}));
        }
        int cb = b_.trans(b_.intro(cod, g, cov), gb);
        int rb = b_.role_arrow(ar, "bot", "role-bot", {cb});
        return {z, b_.arrow(x, Concept::bot(), "functor-dom", {rb})};
    }

    Proof result(int t) {
        const auto& mn = mt_.trees[t];
        if (mn.status == MetaNode::Status::Clashed) return clash_proof(t);
        if (mn.status == MetaNode::Status::Pruned)
            throw std::logic_error("certificate: reached a pruned tree");
        if (mn.status != MetaNode::Status::Split)
            throw NoCertificate("meta-tree has a clash-free leaf");
        const int size = static_cast<int>(mn.tree.nodes.size());
        const int x = mn.split_node;
        std::array<Proof, 2> kid{};
        for (int i = 0; i < 2; ++i) {
            int c = mn.children[i];
            Proof p = result(c);
            while (p.node >= size) p = climb(c, p);
            if (p.node != x) return p;  // label unchanged by the split
            kid[i] = p;
        }
        return distribute(t, kid);
    }

    Proof distribute(int t, const std::array<Proof, 2>& kid) {
        const auto& mn = mt_.trees[t];
        const int x = mn.split_node;
        const Concept& dis = mt_.closure[mn.split_concept];
        auto w = label(t, x);
        Concept kw = label_conj(w);
        Concept y = canon(Concept::conj(kw, dis));
        int ky = b_.arrow(kw, y, "conj-intro", {b_.id(kw), b_.must_elim(kw, dis)});
        Concept z = canon(Concept::disj(Concept::conj(kw, dis.left()), Concept::conj(kw, dis.right())));
        int yz = b_.arrow(y, z, "distrib");
        std::array<int, 2> branch{};
        for (int i = 0; i < 2; ++i) {
            const Concept& part = i == 0 ? dis.left() : dis.right();
            Concept gi = canon(Concept::conj(kw, part));
            int gk = b_.must_elim(gi, kw);
            Have have;
            for (const auto& m : w) have.emplace(key(m), b_.trans(gk, b_.must_elim(kw, m)));
            have[key(kw)] = gk;
            have[key(part)] = b_.must_elim(gi, part);
            auto li = label(mn.children[i], x);
            b_.derive_label(key(gi), have, li);
            branch[i] = b_.trans(b_.intro(key(gi), label_conj(li), have), kid[i].step);
        }
        int zb = b_.arrow(z, Concept::bot(), "disj-elim", {branch[0], branch[1]});
        return {x, b_.trans(b_.trans(ky, yz), zb)};
    }

    const MetaTree& mt_;
    Concept c0_;
    Builder b_;
};

}  // namespace

Certificate extract_certificate(const MetaTree& mt, const Concept& c0, const Ontology& o) {
    if (mt.order != RuleOrder::Standard)
        throw CertificateRefused("certificate extraction needs the standard rule order");
    if (mt.trees.empty()) throw NoCertificate("empty meta-tree");
    Certificate cert = Extractor(mt, c0, o).run();
    cert.ontology_hash = o.hash();
    return cert;
}

std::vector<Concept> Certificate::introduced_objects() const {
    std::vector<Concept> out;
    for (const auto& s : steps)
        for (const auto& k : s.objects) {
            if (k.rfind("role:", 0) == 0) continue;
            Signature sig;
            out.push_back(parse_concept_lenient(k, sig));
        }
    return out;
}

bool guided_cat_unsat(const Certificate& cert, const Concept& c0, const Ontology& o,
                      CategoryConfig cfg) {
    auto extra = cert.introduced_objects();
    cfg.universe.extra_objects.insert(cfg.universe.extra_objects.end(), extra.begin(),
                                      extra.end());
    return decide_cat_unsat(c0, o, cfg);
}

}  // namespace alc
