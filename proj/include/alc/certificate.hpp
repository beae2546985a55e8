#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "alc/category.hpp"
#include "alc/concept.hpp"
#include "alc/ontology.hpp"
#include "alc/tableau.hpp"

namespace alc {

/// One arrow of a derivation. Objects are named by the keys used in the
/// category module; role objects in `objects` carry a "role:" prefix.
struct CertStep {
    enum class Sort { Concept, Role };

    std::vector<std::string> objects;  // objects first mentioned by this step
    std::string src, dst;
    Sort sort = Sort::Concept;
    std::string rule;
    std::vector<int> premises;  // indices of earlier steps

    friend bool operator==(const CertStep&, const CertStep&) = default;
};

struct Certificate {
    Concept c0 = Concept::bot();
    std::string ontology_hash;
    std::vector<CertStep> steps;

    /// Concept objects the steps introduce (dom/cod objects excluded).
    std::vector<Concept> introduced_objects() const;
};

/// The meta-tree has a clash-free leaf.
class NoCertificate : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The meta-tree was built with a rule order extraction does not support.
class CertificateRefused : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Derivation of c0 -> bot from a meta-tree whose leaves are all clashed.
/// The meta-tree must come from the standard rule order.
Certificate extract_certificate(const MetaTree& mt, const Concept& c0, const Ontology& o);

struct CheckResult {
    bool ok = false;
    int failed_step = -1;  // -1: certificate-level problem (hash, final arrow)
    std::string reason;
};

/// Replays every step against its rule. Shares no rule code with saturation.
CheckResult check_certificate(const Certificate& cert, const Concept& c0, const Ontology& o);

std::string certificate_json(const Certificate& cert);
/// Throws std::invalid_argument on malformed input.
Certificate certificate_from_json(const std::string& text);

/// The category verdict with the certificate's objects added to the universe.
bool guided_cat_unsat(const Certificate& cert, const Concept& c0, const Ontology& o,
                      CategoryConfig cfg = {});

}  // namespace alc
