#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "alc/concept.hpp"

namespace alc {

struct GCI {
    Concept lhs;
    Concept rhs;

    /// The concept (not lhs) or rhs that the axiom contributes as an object.
    Concept as_disjunction() const { return Concept::disj(Concept::negation(lhs), rhs); }

    friend bool operator==(const GCI&, const GCI&) = default;
};

/// A TBox: ordered, duplicate-free list of GCIs over a signature.
class Ontology {
public:
    Ontology() = default;
    explicit Ontology(Signature sig) : sig_(std::move(sig)) {}

    const Signature& signature() const noexcept { return sig_; }
    Signature& signature() noexcept { return sig_; }
    const std::vector<GCI>& axioms() const noexcept { return axioms_; }
    bool empty() const noexcept { return axioms_.empty(); }

    /// Appends unless an identical axiom is present. Returns false on duplicate.
    /// Throws UndeclaredIdentifier if either side leaves the signature.
    bool add(GCI g);

    /// Stable 64-bit FNV-1a hash over the printed axioms, as 16 hex digits.
    std::string hash() const;

    std::string to_text() const;

private:
    Signature sig_;
    std::vector<GCI> axioms_;
};

/// Parses the line-oriented ontology format:
///
///     # comment
///     concepts: A B C
///     roles: R S
///     (and A B) => C
///
/// Without a `concepts:`/`roles:` declaration, names are declared on first use.
Ontology parse_ontology(std::string_view text);
Ontology load_ontology(const std::string& path);

}  // namespace alc
