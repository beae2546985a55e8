#pragma once

#include <compare>
#include <cstddef>
#include <functional>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace alc {

enum class Kind { Top, Bot, Name, Not, And, Or, Exists, Forall };

std::string_view kind_name(Kind k) noexcept;

/// Immutable ALC concept expression.
///
/// Every node caches its fully parenthesized printed form. Printing is
/// injective, so structural equality and ordering are decided on that text.
class Concept {
public:
    static Concept top();
    static Concept bot();
    static Concept name(std::string id);
    static Concept negation(Concept c);
    static Concept conj(Concept l, Concept r);
    static Concept disj(Concept l, Concept r);
    static Concept exists(std::string role, Concept filler);
    static Concept forall(std::string role, Concept filler);

    Kind kind() const noexcept { return node_->kind; }

    /// Concept name for Name, role name for Exists/Forall.
    const std::string& id() const noexcept { return node_->id; }

    /// Operand of Not, left operand of And/Or, filler of Exists/Forall.
    const Concept& left() const { return node_->children.at(0); }
    const Concept& right() const { return node_->children.at(1); }
    const Concept& operand() const { return left(); }
    const Concept& filler() const { return left(); }

    const std::string& text() const noexcept { return node_->text; }
    std::size_t size() const noexcept { return node_->size; }
    std::size_t depth() const noexcept { return node_->depth; }

    bool is(Kind k) const noexcept { return kind() == k; }
    bool is_atomic() const noexcept {
        return kind() == Kind::Top || kind() == Kind::Bot || kind() == Kind::Name;
    }

    friend bool operator==(const Concept& a, const Concept& b) noexcept {
        return a.node_ == b.node_ || a.text() == b.text();
    }
    friend std::strong_ordering operator<=>(const Concept& a, const Concept& b) noexcept {
        return a.text() <=> b.text();
    }

private:
    struct Node {
        Kind kind;
        std::string id;
        std::vector<Concept> children;
        std::string text;
        std::size_t size = 1;
        std::size_t depth = 0;
    };

    explicit Concept(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
    static Concept make(Kind k, std::string id, std::vector<Concept> children);

    std::shared_ptr<const Node> node_;
};

/// Total-order key identifying a concept up to commutativity of And/Or.
class CanonicalKey {
public:
    CanonicalKey() = default;
    explicit CanonicalKey(std::string s) : text_(std::move(s)) {}
    const std::string& str() const noexcept { return text_; }
    friend bool operator==(const CanonicalKey&, const CanonicalKey&) = default;
    friend auto operator<=>(const CanonicalKey&, const CanonicalKey&) = default;

private:
    std::string text_;
};

/// Swaps And/Or operands into ascending printed order, recursively.
/// No flattening, no idempotence collapsing.
Concept canonical(const Concept& c);
CanonicalKey canonical_key(const Concept& c);

/// Fully parenthesized prefix form; inverse of parse_concept.
std::string print_concept(const Concept& c);

struct Signature {
    std::set<std::string> concept_names;
    std::set<std::string> role_names;

    bool has_concept(const std::string& n) const { return concept_names.count(n) != 0; }
    bool has_role(const std::string& n) const { return role_names.count(n) != 0; }

    /// Throws std::invalid_argument on a malformed identifier or a name that is
    /// declared as both a concept and a role.
    void add_concept(const std::string& n);
    void add_role(const std::string& n);

    friend bool operator==(const Signature&, const Signature&) = default;
};

bool is_identifier(std::string_view s) noexcept;

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& msg, std::size_t pos)
        : std::runtime_error(msg + " at offset " + std::to_string(pos)), pos_(pos) {}
    std::size_t position() const noexcept { return pos_; }

private:
    std::size_t pos_;
};

class UndeclaredIdentifier : public std::runtime_error {
public:
    UndeclaredIdentifier(std::string ident, bool is_role)
        : std::runtime_error(std::string("undeclared ") + (is_role ? "role" : "concept name") +
                             " '" + ident + "'"),
          ident_(std::move(ident)) {}
    const std::string& identifier() const noexcept { return ident_; }

private:
    std::string ident_;
};

Concept parse_concept(std::string_view text, const Signature& sig);

/// Parses without a declared signature and records every identifier it meets
/// into `sig` (concepts vs. roles by position).
Concept parse_concept_lenient(std::string_view text, Signature& sig);

/// Adds every concept and role name occurring in `c` to `sig`.
void collect_signature(const Concept& c, Signature& sig);

/// True iff every name in `c` is declared in `sig`.
bool well_formed(const Concept& c, const Signature& sig);

}  // namespace alc

template <>
struct std::hash<alc::Concept> {
    std::size_t operator()(const alc::Concept& c) const noexcept {
        return std::hash<std::string>{}(c.text());
    }
};

template <>
struct std::hash<alc::CanonicalKey> {
    std::size_t operator()(const alc::CanonicalKey& k) const noexcept {
        return std::hash<std::string>{}(k.str());
    }
};
