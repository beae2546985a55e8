#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "alc/concept.hpp"
#include "alc/ontology.hpp"

namespace alc {

/// Subset of a finite domain {0..n-1}, n <= 64, as a bitmask.
using Subset = std::uint64_t;

inline constexpr int kMaxDomainSize = 64;

inline Subset full_subset(int n) { return n >= 64 ? ~Subset{0} : (Subset{1} << n) - 1; }

std::vector<int> members(Subset s);

/// A finite interpretation. Names absent from the maps have empty extensions.
struct Interpretation {
    int domain_size = 1;
    std::map<std::string, Subset> concept_ext;
    std::map<std::string, std::set<std::pair<int, int>>> role_ext;

    /// Throws std::invalid_argument if the domain is empty/oversized or an
    /// extension mentions an element outside it.
    void validate() const;

    /// Copy with one extra element that belongs to no extension.
    Interpretation padded() const;

    friend bool operator==(const Interpretation&, const Interpretation&) = default;
};

/// Extension of `c` in `i`. Names not mentioned by `i` denote the empty set;
/// pass a signature to reject names outside it instead.
Subset eval_concept(const Concept& c, const Interpretation& i);
Subset eval_concept(const Concept& c, const Interpretation& i, const Signature& sig);

bool satisfies(const Ontology& o, const Interpretation& i);

struct ModelSearchConfig {
    /// Upper bound on candidate interpretations enumerated at a single size.
    std::uint64_t max_candidates = std::uint64_t{1} << 24;
};

/// Exhaustive search over all interpretations with domain sizes 1..max_size,
/// ascending, returning the first model of `o` in which `c` is non-empty.
/// Only names that occur in `c` or `o` are enumerated. Throws BudgetExceeded
/// when a size's candidate space exceeds the configured cap.
std::optional<Interpretation> find_model(const Concept& c, const Ontology& o, int max_size,
                                         const ModelSearchConfig& cfg = {});

/// Same, restricted to exactly `size` elements.
std::optional<Interpretation> find_model_of_size(const Concept& c, const Ontology& o, int size,
                                                 const ModelSearchConfig& cfg = {});

/// {"domain_size":n,"concepts":{name:[ids]},"roles":{name:[[i,j],...]}}
std::string witness_json(const Interpretation& i);
Interpretation witness_from_json(const std::string& text);

}  // namespace alc
