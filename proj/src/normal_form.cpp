#include "alc/normal_form.hpp"

#include <unordered_set>

namespace alc {

namespace {

Concept push_negation(const Concept& c);

Concept nnf_impl(const Concept& c) {
    switch (c.kind()) {
        case Kind::Top:
        case Kind::Bot:
        case Kind::Name: return c;
        case Kind::Not: return push_negation(c.operand());
        case Kind::And: return Concept::conj(nnf_impl(c.left()), nnf_impl(c.right()));
        case Kind::Or: return Concept::disj(nnf_impl(c.left()), nnf_impl(c.right()));
        case Kind::Exists: return Concept::exists(c.id(), nnf_impl(c.filler()));
        case Kind::Forall: return Concept::forall(c.id(), nnf_impl(c.filler()));
    }
    return c;
}

// nnf of (not c)
Concept push_negation(const Concept& c) {
    switch (c.kind()) {
        case Kind::Top: return Concept::bot();
        case Kind::Bot: return Concept::top();
        case Kind::Name: return Concept::negation(c);
        case Kind::Not: return nnf_impl(c.operand());
        case Kind::And: return Concept::disj(push_negation(c.left()), push_negation(c.right()));
        case Kind::Or: return Concept::conj(push_negation(c.left()), push_negation(c.right()));
        case Kind::Exists: return Concept::forall(c.id(), push_negation(c.filler()));
        case Kind::Forall: return Concept::exists(c.id(), push_negation(c.filler()));
    }
    return c;
}

}  // namespace

Concept nnf(const Concept& c) { return nnf_impl(c); }

bool is_nnf(const Concept& c) {
    switch (c.kind()) {
        case Kind::Top:
        case Kind::Bot:
        case Kind::Name: return true;
        case Kind::Not: return c.operand().is(Kind::Name);
        case Kind::And:
        case Kind::Or: return is_nnf(c.left()) && is_nnf(c.right());
        case Kind::Exists:
        case Kind::Forall: return is_nnf(c.filler());
    }
    return false;
}

Concept canonical_nnf(const Concept& c) { return canonical(nnf(c)); }

std::vector<Concept> compiled_axioms(const Ontology& o) {
    std::vector<Concept> out;
    out.reserve(o.axioms().size());
    for (const auto& g : o.axioms()) out.push_back(canonical_nnf(g.as_disjunction()));
    return out;
}

std::vector<Concept> sub_closure(const Concept& c0, const Ontology& o) {
    std::vector<Concept> out;
    std::unordered_set<Concept> seen;
    auto visit = [&](auto&& self, const Concept& c) -> void {
        if (!seen.insert(c).second) return;
        out.push_back(c);
        switch (c.kind()) {
            case Kind::Top:
            case Kind::Bot:
            case Kind::Name: return;
            case Kind::Not: self(self, c.operand()); return;
            case Kind::And:
            case Kind::Or:
                self(self, c.left());
                self(self, c.right());
                return;
            case Kind::Exists:
            case Kind::Forall: self(self, c.filler()); return;
        }
    };
    visit(visit, canonical_nnf(c0));
    for (const auto& ax : compiled_axioms(o)) visit(visit, ax);
    return out;
}

}  // namespace alc
