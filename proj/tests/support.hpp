#pragma once

#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "alc/concept.hpp"
#include "alc/set_oracle.hpp"

namespace alc_test {

using alc::Concept;
using alc::Kind;

inline Concept random_concept(std::mt19937_64& rng, int depth, int names = 2, int roles = 1) {
    static const char* ns[] = {"A", "B", "C"};
    static const char* rs[] = {"R", "S"};
    int k = static_cast<int>(rng() % (depth <= 0 ? 3 : 9));
    switch (k) {
        case 0: return Concept::name(ns[rng() % names]);
        case 1: return rng() % 2 ? Concept::top() : Concept::bot();
        case 2: return Concept::negation(Concept::name(ns[rng() % names]));
        case 3: return Concept::negation(random_concept(rng, depth - 1, names, roles));
        case 4:
        case 5: {
            Concept l = random_concept(rng, depth - 1, names, roles);
            return Concept::conj(l, random_concept(rng, depth - 1, names, roles));
        }
        case 6: {
            Concept l = random_concept(rng, depth - 1, names, roles);
            return Concept::disj(l, random_concept(rng, depth - 1, names, roles));
        }
        case 7: return Concept::exists(rs[rng() % roles], random_concept(rng, depth - 1, names, roles));
        default: return Concept::forall(rs[rng() % roles], random_concept(rng, depth - 1, names, roles));
    }
}

// Set semantics written out directly over std::set, independent of the library.
struct World {
    int n;
    std::map<std::string, std::set<int>> c;
    std::map<std::string, std::set<std::pair<int, int>>> r;
};

inline std::set<int> ev(const Concept& x, const World& w) {
    std::set<int> all;
    for (int i = 0; i < w.n; ++i) all.insert(i);
    switch (x.kind()) {
        case Kind::Top: return all;
        case Kind::Bot: return {};
        case Kind::Name: {
            auto it = w.c.find(x.id());
            return it == w.c.end() ? std::set<int>{} : it->second;
        }
        case Kind::Not: {
            std::set<int> in = ev(x.operand(), w), out;
            for (int i : all)
                if (!in.count(i)) out.insert(i);
            return out;
        }
        case Kind::And: {
            std::set<int> a = ev(x.left(), w), b = ev(x.right(), w), out;
            for (int i : a)
                if (b.count(i)) out.insert(i);
            return out;
        }
        case Kind::Or: {
            std::set<int> a = ev(x.left(), w), b = ev(x.right(), w);
            a.insert(b.begin(), b.end());
            return a;
        }
        case Kind::Exists:
        case Kind::Forall: {
            std::set<int> f = ev(x.filler(), w), out;
            auto it = w.r.find(x.id());
            for (int i : all) {
                bool some = false, every = true;
                if (it != w.r.end())
                    for (auto [a, b] : it->second)
                        if (a == i) {
                            some = some || f.count(b);
                            every = every && f.count(b);
                        }
                if (x.is(Kind::Exists) ? some : every) out.insert(i);
            }
            return out;
        }
    }
    return {};
}

// Every interpretation of A, B, R over 1 or 2 elements.
inline std::vector<World> tiny_worlds() {
    std::vector<World> out;
    for (int n = 1; n <= 2; ++n) {
        const int pairs = n * n;
        for (int a = 0; a < (1 << n); ++a)
            for (int b = 0; b < (1 << n); ++b)
                for (int r = 0; r < (1 << pairs); ++r) {
                    World w{n, {}, {}};
                    for (int i = 0; i < n; ++i) {
                        if (a >> i & 1) w.c["A"].insert(i);
                        if (b >> i & 1) w.c["B"].insert(i);
                    }
                    for (int p = 0; p < pairs; ++p)
                        if (r >> p & 1) w.r["R"].insert({p / n, p % n});
                    out.push_back(w);
                }
    }
    return out;
}

inline alc::Interpretation to_interpretation(const World& w) {
    alc::Interpretation in;
    in.domain_size = w.n;
    for (const auto& [name, ext] : w.c)
        for (int e : ext) in.concept_ext[name] |= alc::Subset{1} << e;
    for (const auto& [name, ext] : w.r) in.role_ext[name] = ext;
    return in;
}

inline World from_interpretation(const alc::Interpretation& in) {
    World w{in.domain_size, {}, {}};
    for (const auto& [name, ext] : in.concept_ext)
        for (int e : alc::members(ext)) w.c[name].insert(e);
    for (const auto& [name, ext] : in.role_ext) w.r[name] = ext;
    return w;
}

}  // namespace alc_test
