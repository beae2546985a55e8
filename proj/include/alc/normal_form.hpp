#pragma once

#include <vector>

#include "alc/concept.hpp"
#include "alc/ontology.hpp"

namespace alc {

/// Negation normal form: negation only directly above concept names.
Concept nnf(const Concept& c);

bool is_nnf(const Concept& c);

/// canonical(nnf(c)), the form used for tableau labels.
Concept canonical_nnf(const Concept& c);

/// Subconcept closure of `c0` and the axioms of `o`, every member in
/// canonical NNF, in deterministic insertion order (depth-first preorder over
/// the seeds c0, then each axiom's (not E) or F in axiom order).
std::vector<Concept> sub_closure(const Concept& c0, const Ontology& o);

/// The axioms as canonical NNF disjunctions, in axiom order.
std::vector<Concept> compiled_axioms(const Ontology& o);

}  // namespace alc
