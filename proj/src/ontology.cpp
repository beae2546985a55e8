#include "alc/ontology.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace alc {

namespace {

void require_declared(const Concept& c, const Signature& sig) {
    switch (c.kind()) {
        case Kind::Top:
        case Kind::Bot: return;
        case Kind::Name:
            if (!sig.has_concept(c.id())) throw UndeclaredIdentifier(c.id(), false);
            return;
        case Kind::Not: require_declared(c.operand(), sig); return;
        case Kind::And:
        case Kind::Or:
            require_declared(c.left(), sig);
            require_declared(c.right(), sig);
            return;
        case Kind::Exists:
        case Kind::Forall:
            if (!sig.has_role(c.id())) throw UndeclaredIdentifier(c.id(), true);
            require_declared(c.filler(), sig);
            return;
    }
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

std::vector<std::string> split_words(std::string_view s) {
    std::vector<std::string> out;
    std::istringstream in{std::string(s)};
    std::string w;
    while (in >> w) out.push_back(w);
    return out;
}

}  // namespace

bool Ontology::add(GCI g) {
    require_declared(g.lhs, sig_);
    require_declared(g.rhs, sig_);
    if (std::find(axioms_.begin(), axioms_.end(), g) != axioms_.end()) return false;
    axioms_.push_back(std::move(g));
    return true;
}

std::string Ontology::hash() const {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    auto feed = [&h](std::string_view s) {
        for (unsigned char ch : s) {
            h ^= ch;
            h *= 0x100000001b3ULL;
        }
    };
    for (const auto& g : axioms_) {
        feed(g.lhs.text());
        feed(" => ");
        feed(g.rhs.text());
        feed("\n");
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string Ontology::to_text() const {
    std::string out;
    if (!sig_.concept_names.empty()) {
        out += "concepts:";
        for (const auto& n : sig_.concept_names) out += " " + n;
        out += "\n";
    }
    if (!sig_.role_names.empty()) {
        out += "roles:";
        for (const auto& n : sig_.role_names) out += " " + n;
        out += "\n";
    }
    for (const auto& g : axioms_) out += g.lhs.text() + " => " + g.rhs.text() + "\n";
    return out;
}

Ontology parse_ontology(std::string_view text) {
    Ontology onto;
    bool declared = false;
    std::size_t line_no = 0;
    std::size_t offset = 0;
    while (offset <= text.size()) {
        std::size_t end = text.find('\n', offset);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(offset, end - offset);
        std::size_t line_start = offset;
        offset = end + 1;
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.rfind("concepts:", 0) == 0) {
            declared = true;
            for (auto& w : split_words(line.substr(9))) onto.signature().add_concept(w);
            continue;
        }
        if (line.rfind("roles:", 0) == 0) {
            declared = true;
            for (auto& w : split_words(line.substr(6))) onto.signature().add_role(w);
            continue;
        }
        auto arrow = line.find("=>");
        if (arrow == std::string_view::npos)
            throw ParseError("line " + std::to_string(line_no) + ": expected '=>'",
                             line_start);
        auto parse_side = [&](std::string_view s) {
            return declared ? parse_concept(s, onto.signature())
                            : parse_concept_lenient(s, onto.signature());
        };
        GCI g{parse_side(trim(line.substr(0, arrow))), parse_side(trim(line.substr(arrow + 2)))};
        onto.add(std::move(g));
    }
    return onto;
}

Ontology load_ontology(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open ontology file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_ontology(buf.str());
}

}  // namespace alc
