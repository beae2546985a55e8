#include "alc/set_oracle.hpp"

#include <array>
#include <bit>
#include <json.hpp>
#include <stdexcept>

#include "alc/budget.hpp"

namespace alc {

std::vector<int> members(Subset s) {
    std::vector<int> out;
    while (s) {
        out.push_back(std::countr_zero(s));
        s &= s - 1;
    }
    return out;
}

void Interpretation::validate() const {
    if (domain_size < 1 || domain_size > kMaxDomainSize)
        throw std::invalid_argument("domain size must be in [1, 64]");
    const Subset dom = full_subset(domain_size);
    for (const auto& [name, ext] : concept_ext)
        if (ext & ~dom) throw std::invalid_argument("extension of '" + name + "' out of bounds");
    for (const auto& [name, pairs] : role_ext)
        for (auto [a, b] : pairs)
            if (a < 0 || b < 0 || a >= domain_size || b >= domain_size)
                throw std::invalid_argument("extension of role '" + name + "' out of bounds");
}

Interpretation Interpretation::padded() const {
    Interpretation out = *this;
    out.domain_size += 1;
    return out;
}

namespace {

Subset eval_rec(const Concept& c, const Interpretation& i, const Signature* sig) {
    const Subset dom = full_subset(i.domain_size);
    switch (c.kind()) {
        case Kind::Top: return dom;
        case Kind::Bot: return 0;
        case Kind::Name: {
            if (sig && !sig->has_concept(c.id())) throw UndeclaredIdentifier(c.id(), false);
            auto it = i.concept_ext.find(c.id());
            return it == i.concept_ext.end() ? 0 : it->second;
        }
        case Kind::Not: return dom & ~eval_rec(c.operand(), i, sig);
        case Kind::And: return eval_rec(c.left(), i, sig) & eval_rec(c.right(), i, sig);
        case Kind::Or: return eval_rec(c.left(), i, sig) | eval_rec(c.right(), i, sig);
        case Kind::Exists:
        case Kind::Forall: {
            if (sig && !sig->has_role(c.id())) throw UndeclaredIdentifier(c.id(), true);
            Subset f = eval_rec(c.filler(), i, sig);
            Subset result = 0;
            auto it = i.role_ext.find(c.id());
            if (c.is(Kind::Exists)) {
                if (it != i.role_ext.end())
                    for (auto [a, b] : it->second)
                        if (f >> b & 1) result |= Subset{1} << a;
                return result;
            }
            result = dom;
            if (it != i.role_ext.end())
                for (auto [a, b] : it->second)
                    if (!(f >> b & 1)) result &= ~(Subset{1} << a);
            return result;
        }
    }
    return 0;
}

/// Concept compiled to postfix over bitmask registers for the enumeration loop.
class Program {
public:
    enum class Op : std::uint8_t { Top, Bot, Name, Not, And, Or, Exists, Forall };
    struct Instr {
        Op op;
        int arg;  // name slot or role slot
    };

    Program(const Concept& c, const std::vector<std::string>& names,
            const std::vector<std::string>& roles) {
        emit(c, names, roles);
    }

    Subset run(Subset dom, const Subset* concept_ext, const Subset* role_succ, int n) const {
        std::array<Subset, 256> stack{};
        int sp = 0;
        for (const auto& in : code_) {
            switch (in.op) {
                case Op::Top: stack[sp++] = dom; break;
                case Op::Bot: stack[sp++] = 0; break;
                case Op::Name: stack[sp++] = concept_ext[in.arg]; break;
                case Op::Not: stack[sp - 1] = dom & ~stack[sp - 1]; break;
                case Op::And: --sp; stack[sp - 1] &= stack[sp]; break;
                case Op::Or: --sp; stack[sp - 1] |= stack[sp]; break;
                case Op::Exists: {
                    Subset f = stack[sp - 1], r = 0;
                    const Subset* succ = role_succ + in.arg * n;
                    for (int x = 0; x < n; ++x)
                        if (succ[x] & f) r |= Subset{1} << x;
                    stack[sp - 1] = r;
                    break;
                }
                case Op::Forall: {
                    Subset f = stack[sp - 1], r = 0;
                    const Subset* succ = role_succ + in.arg * n;
                    for (int x = 0; x < n; ++x)
                        if (!(succ[x] & ~f)) r |= Subset{1} << x;
                    stack[sp - 1] = r;
                    break;
                }
            }
        }
        return stack[0];
    }

    std::size_t max_stack() const { return max_depth_; }

private:
    static int slot(const std::vector<std::string>& v, const std::string& s) {
        for (std::size_t k = 0; k < v.size(); ++k)
            if (v[k] == s) return static_cast<int>(k);
        throw std::logic_error("unknown slot " + s);
    }

    void emit(const Concept& c, const std::vector<std::string>& names,
              const std::vector<std::string>& roles) {
        switch (c.kind()) {
            case Kind::Top: push({Op::Top, 0}); return;
            case Kind::Bot: push({Op::Bot, 0}); return;
            case Kind::Name: push({Op::Name, slot(names, c.id())}); return;
            case Kind::Not:
                emit(c.operand(), names, roles);
                code_.push_back({Op::Not, 0});
                return;
            case Kind::And:
            case Kind::Or:
                emit(c.left(), names, roles);
                emit(c.right(), names, roles);
                code_.push_back({c.is(Kind::And) ? Op::And : Op::Or, 0});
                --depth_;
                return;
            case Kind::Exists:
            case Kind::Forall:
                emit(c.filler(), names, roles);
                code_.push_back({c.is(Kind::Exists) ? Op::Exists : Op::Forall, slot(roles, c.id())});
                return;
        }
    }

    void push(Instr in) {
        code_.push_back(in);
        if (++depth_ > max_depth_) max_depth_ = depth_;
    }

    std::vector<Instr> code_;
    std::size_t depth_ = 0;
    std::size_t max_depth_ = 0;
};

}  // namespace

Subset eval_concept(const Concept& c, const Interpretation& i) { return eval_rec(c, i, nullptr); }

Subset eval_concept(const Concept& c, const Interpretation& i, const Signature& sig) {
    return eval_rec(c, i, &sig);
}

bool satisfies(const Ontology& o, const Interpretation& i) {
    for (const auto& g : o.axioms())
        if (eval_concept(g.lhs, i) & ~eval_concept(g.rhs, i)) return false;
    return true;
}

std::optional<Interpretation> find_model_of_size(const Concept& c, const Ontology& o, int n,
                                                 const ModelSearchConfig& cfg) {
    if (n < 1 || n > 8) throw std::invalid_argument("model search supports sizes 1..8");
    Signature used;
    collect_signature(c, used);
    for (const auto& g : o.axioms()) {
        collect_signature(g.lhs, used);
        collect_signature(g.rhs, used);
    }
    std::vector<std::string> names(used.concept_names.begin(), used.concept_names.end());
    std::vector<std::string> roles(used.role_names.begin(), used.role_names.end());

    const std::size_t bits = names.size() * n + roles.size() * n * n;
    if (bits >= 64 || (std::uint64_t{1} << bits) > cfg.max_candidates)
        throw BudgetExceeded("model search: " + std::to_string(bits) + " extension bits at size " +
                             std::to_string(n) + " exceed the candidate cap");

    Program goal(c, names, roles);
    std::vector<std::pair<Program, Program>> axioms;
    for (const auto& g : o.axioms()) axioms.emplace_back(Program(g.lhs, names, roles),
                                                         Program(g.rhs, names, roles));
    auto too_deep = [](const Program& p) { return p.max_stack() > 256; };
    if (too_deep(goal)) throw BudgetExceeded("model search: concept too deep");
    for (const auto& [l, r] : axioms)
        if (too_deep(l) || too_deep(r)) throw BudgetExceeded("model search: axiom too deep");

    const Subset dom = full_subset(n);
    const Subset row = full_subset(n);
    std::vector<Subset> cext(names.size());
    std::vector<Subset> succ(roles.size() * n);
    const std::uint64_t total = std::uint64_t{1} << bits;
    for (std::uint64_t k = 0; k < total; ++k) {
        std::uint64_t rest = k;
        for (auto& e : cext) {
            e = rest & row;
            rest >>= n;
        }
        for (auto& s : succ) {
            s = rest & row;
            rest >>= n;
        }
        if (!goal.run(dom, cext.data(), succ.data(), n)) continue;
        bool ok = true;
        for (const auto& [l, r] : axioms) {
            if (l.run(dom, cext.data(), succ.data(), n) & ~r.run(dom, cext.data(), succ.data(), n)) {
                ok = false;
                break;
            }
        }
        if (!ok) continue;
        Interpretation out;
        out.domain_size = n;
        for (std::size_t a = 0; a < names.size(); ++a) out.concept_ext[names[a]] = cext[a];
        for (std::size_t r = 0; r < roles.size(); ++r) {
            auto& pairs = out.role_ext[roles[r]];
            for (int x = 0; x < n; ++x)
                for (int y : members(succ[r * n + x])) pairs.emplace(x, y);
        }
        return out;
    }
    return std::nullopt;
}

std::optional<Interpretation> find_model(const Concept& c, const Ontology& o, int max_size,
                                         const ModelSearchConfig& cfg) {
    if (max_size < 1) throw std::invalid_argument("max_size must be at least 1");
    for (int n = 1; n <= max_size; ++n)
        if (auto m = find_model_of_size(c, o, n, cfg)) return m;
    return std::nullopt;
}

std::string witness_json(const Interpretation& i) {
    nlohmann::ordered_json j;
    j["domain_size"] = i.domain_size;
    j["concepts"] = nlohmann::ordered_json::object();
    for (const auto& [name, ext] : i.concept_ext) j["concepts"][name] = members(ext);
    j["roles"] = nlohmann::ordered_json::object();
    for (const auto& [name, pairs] : i.role_ext) {
        auto arr = nlohmann::ordered_json::array();
        for (auto [a, b] : pairs) arr.push_back({a, b});
        j["roles"][name] = arr;
    }
    return j.dump();
}

Interpretation witness_from_json(const std::string& text) {
    auto j = nlohmann::json::parse(text);
    Interpretation out;
    out.domain_size = j.at("domain_size").get<int>();
    for (auto& [name, ids] : j.at("concepts").items()) {
        Subset s = 0;
        for (int id : ids.get<std::vector<int>>()) s |= Subset{1} << id;
        out.concept_ext[name] = s;
    }
    for (auto& [name, pairs] : j.at("roles").items()) {
        auto& dst = out.role_ext[name];
        for (auto& p : pairs) dst.emplace(p.at(0).get<int>(), p.at(1).get<int>());
    }
    out.validate();
    return out;
}

}  // namespace alc
