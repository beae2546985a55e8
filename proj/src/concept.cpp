#include "alc/concept.hpp"

#include <algorithm>
#include <cctype>

namespace alc {

std::string_view kind_name(Kind k) noexcept {
    switch (k) {
        case Kind::Top: return "top";
        case Kind::Bot: return "bot";
        case Kind::Name: return "name";
        case Kind::Not: return "not";
        case Kind::And: return "and";
        case Kind::Or: return "or";
        case Kind::Exists: return "some";
        case Kind::Forall: return "all";
    }
    return "?";
}

Concept Concept::make(Kind k, std::string id, std::vector<Concept> children) {
    auto n = std::make_shared<Node>();
    n->kind = k;
    n->id = std::move(id);
    n->children = std::move(children);
    for (const auto& c : n->children) {
        n->size += c.size();
        n->depth = std::max(n->depth, c.depth() + 1);
    }
    switch (k) {
        case Kind::Top: n->text = "top"; break;
        case Kind::Bot: n->text = "bot"; break;
        case Kind::Name: n->text = n->id; break;
        case Kind::Not: n->text = "(not " + n->children[0].text() + ")"; break;
        case Kind::And:
            n->text = "(and " + n->children[0].text() + " " + n->children[1].text() + ")";
            break;
        case Kind::Or:
            n->text = "(or " + n->children[0].text() + " " + n->children[1].text() + ")";
            break;
        case Kind::Exists:
            n->text = "(some " + n->id + " " + n->children[0].text() + ")";
            break;
        case Kind::Forall:
            n->text = "(all " + n->id + " " + n->children[0].text() + ")";
            break;
    }
    return Concept(std::move(n));
}

Concept Concept::top() {
    static const Concept t = make(Kind::Top, {}, {});
    return t;
}

Concept Concept::bot() {
    static const Concept b = make(Kind::Bot, {}, {});
    return b;
}

Concept Concept::name(std::string id) { return make(Kind::Name, std::move(id), {}); }
Concept Concept::negation(Concept c) { return make(Kind::Not, {}, {std::move(c)}); }
Concept Concept::conj(Concept l, Concept r) {
    return make(Kind::And, {}, {std::move(l), std::move(r)});
}
Concept Concept::disj(Concept l, Concept r) {
    return make(Kind::Or, {}, {std::move(l), std::move(r)});
}
Concept Concept::exists(std::string role, Concept filler) {
    return make(Kind::Exists, std::move(role), {std::move(filler)});
}
Concept Concept::forall(std::string role, Concept filler) {
    return make(Kind::Forall, std::move(role), {std::move(filler)});
}

Concept canonical(const Concept& c) {
    switch (c.kind()) {
        case Kind::Top:
        case Kind::Bot:
        case Kind::Name: return c;
        case Kind::Not: {
            auto inner = canonical(c.operand());
            return inner == c.operand() ? c : Concept::negation(std::move(inner));
        }
        case Kind::And:
        case Kind::Or: {
            auto l = canonical(c.left());
            auto r = canonical(c.right());
            if (r < l) std::swap(l, r);
            if (l == c.left() && r == c.right()) return c;
            return c.is(Kind::And) ? Concept::conj(std::move(l), std::move(r))
                                   : Concept::disj(std::move(l), std::move(r));
        }
        case Kind::Exists:
        case Kind::Forall: {
            auto f = canonical(c.filler());
            if (f == c.filler()) return c;
            return c.is(Kind::Exists) ? Concept::exists(c.id(), std::move(f))
                                      : Concept::forall(c.id(), std::move(f));
        }
    }
    return c;
}

CanonicalKey canonical_key(const Concept& c) { return CanonicalKey(canonical(c).text()); }

std::string print_concept(const Concept& c) { return c.text(); }

bool is_identifier(std::string_view s) noexcept {
    if (s.empty() || !std::isalpha(static_cast<unsigned char>(s[0]))) return false;
    return std::all_of(s.begin() + 1, s.end(), [](char ch) {
        return std::isalnum(static_cast<unsigned char>(ch)) || ch == '_' || ch == '-';
    });
}

namespace {

bool is_keyword(std::string_view s) {
    return s == "top" || s == "bot" || s == "not" || s == "and" || s == "or" || s == "some" ||
           s == "all";
}

void check_new_name(const std::string& n) {
    if (!is_identifier(n) || is_keyword(n))
        throw std::invalid_argument("invalid identifier '" + n + "'");
}

}  // namespace

void Signature::add_concept(const std::string& n) {
    check_new_name(n);
    if (has_role(n)) throw std::invalid_argument("'" + n + "' is already a role name");
    concept_names.insert(n);
}

void Signature::add_role(const std::string& n) {
    check_new_name(n);
    if (has_concept(n)) throw std::invalid_argument("'" + n + "' is already a concept name");
    role_names.insert(n);
}

namespace {

class Parser {
public:
    Parser(std::string_view text, Signature* sig, bool lenient)
        : s_(text), sig_(sig), lenient_(lenient) {}

    Concept parse_all() {
        auto c = parse();
        skip_ws();
        if (pos_ != s_.size()) throw ParseError("trailing input", pos_);
        return c;
    }

private:
    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    std::string_view word() {
        skip_ws();
        std::size_t start = pos_;
        while (pos_ < s_.size()) {
            char ch = s_[pos_];
            if (std::isspace(static_cast<unsigned char>(ch)) || ch == '(' || ch == ')') break;
            ++pos_;
        }
        if (start == pos_) throw ParseError("expected identifier", start);
        return s_.substr(start, pos_ - start);
    }

    std::string role() {
        std::size_t at = (skip_ws(), pos_);
        std::string r(word());
        if (!is_identifier(r) || is_keyword(r)) throw ParseError("bad role name '" + r + "'", at);
        if (!sig_->has_role(r)) {
            if (!lenient_) throw UndeclaredIdentifier(r, true);
            sig_->add_role(r);
        }
        return r;
    }

    void expect(char ch) {
        skip_ws();
        if (pos_ >= s_.size() || s_[pos_] != ch)
            throw ParseError(std::string("expected '") + ch + "'", pos_);
        ++pos_;
    }

    Concept parse() {
        skip_ws();
        if (pos_ >= s_.size()) throw ParseError("unexpected end of input", pos_);
        if (s_[pos_] == ')') throw ParseError("unexpected ')'", pos_);
        if (s_[pos_] != '(') {
            std::size_t at = pos_;
            std::string w(word());
            if (w == "top") return Concept::top();
            if (w == "bot") return Concept::bot();
            if (!is_identifier(w) || is_keyword(w)) throw ParseError("bad concept '" + w + "'", at);
            if (!sig_->has_concept(w)) {
                if (!lenient_) throw UndeclaredIdentifier(w, false);
                sig_->add_concept(w);
            }
            return Concept::name(std::move(w));
        }
        ++pos_;
        std::size_t at = (skip_ws(), pos_);
        std::string_view op = word();
        Concept result = Concept::top();
        if (op == "not") {
            result = Concept::negation(parse());
        } else if (op == "and" || op == "or") {
            auto l = parse();
            auto r = parse();
            result = op == "and" ? Concept::conj(std::move(l), std::move(r))
                                 : Concept::disj(std::move(l), std::move(r));
        } else if (op == "some" || op == "all") {
            auto r = role();
            auto f = parse();
            result = op == "some" ? Concept::exists(std::move(r), std::move(f))
                                  : Concept::forall(std::move(r), std::move(f));
        } else {
            throw ParseError("unknown connective '" + std::string(op) + "'", at);
        }
        expect(')');
        return result;
    }

    std::string_view s_;
    std::size_t pos_ = 0;
    Signature* sig_;
    bool lenient_;
};

}  // namespace

Concept parse_concept(std::string_view text, const Signature& sig) {
    Signature copy = sig;
    return Parser(text, &copy, false).parse_all();
}

Concept parse_concept_lenient(std::string_view text, Signature& sig) {
    return Parser(text, &sig, true).parse_all();
}

void collect_signature(const Concept& c, Signature& sig) {
    switch (c.kind()) {
        case Kind::Top:
        case Kind::Bot: return;
        case Kind::Name: sig.add_concept(c.id()); return;
        case Kind::Not: collect_signature(c.operand(), sig); return;
        case Kind::And:
        case Kind::Or:
            collect_signature(c.left(), sig);
            collect_signature(c.right(), sig);
            return;
        case Kind::Exists:
        case Kind::Forall:
            sig.add_role(c.id());
            collect_signature(c.filler(), sig);
            return;
    }
}

bool well_formed(const Concept& c, const Signature& sig) {
    switch (c.kind()) {
        case Kind::Top:
        case Kind::Bot: return true;
        case Kind::Name: return sig.has_concept(c.id());
        case Kind::Not: return well_formed(c.operand(), sig);
        case Kind::And:
        case Kind::Or: return well_formed(c.left(), sig) && well_formed(c.right(), sig);
        case Kind::Exists:
        case Kind::Forall: return sig.has_role(c.id()) && well_formed(c.filler(), sig);
    }
    return false;
}

}  // namespace alc
