#include "cdmetrics/diagram.hpp"

#include <fmt/format.h>
#include <fmt/ranges.h>

#include <optional>
#include <set>
#include <unordered_set>
#include <utility>

namespace cdm {

std::string_view to_string(RelationKind kind) {
    switch (kind) {
    case RelationKind::Association:
        return "Association";
    case RelationKind::Aggregation:
        return "Aggregation";
    case RelationKind::Dependency:
        return "Dependency";
    case RelationKind::Generalization:
        return "Generalization";
    }
    return "?";
}

bool is_identifier(std::string_view text) {
    if (text.empty()) {
        return false;
    }
    auto alpha = [](char c) { return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_'; };
    auto digit = [](char c) { return c >= '0' && c <= '9'; };
    if (!alpha(text.front())) {
        return false;
    }
    for (char c : text.substr(1)) {
        if (!alpha(c) && !digit(c)) {
            return false;
        }
    }
    return true;
}

ValidationError::ValidationError(Kind kind, std::vector<std::string> detail, std::string message)
    : Error(std::move(message)), kind_(kind), detail_(std::move(detail)) {}

UnknownClass::UnknownClass(std::string name)
    : Error(fmt::format("unknown class '{}'", name)), name_(std::move(name)) {}

std::size_t ValidatedDiagram::index_of(std::string_view name) const {
    auto it = index_.find(std::string(name));
    if (it == index_.end()) {
        throw UnknownClass(std::string(name));
    }
    return it->second;
}

namespace {

using Adjacency = std::vector<std::vector<std::size_t>>;

// Iterative three-colour DFS. Roots and successors are visited in
// declaration order so the reported cycle is deterministic.
std::optional<std::vector<std::size_t>> find_cycle(const Adjacency& edges) {
    enum class Colour { White, Grey, Black };
    std::vector<Colour> colour(edges.size(), Colour::White);
    std::vector<std::size_t> path;
    std::vector<std::size_t> cursor;

    for (std::size_t root = 0; root < edges.size(); ++root) {
        if (colour[root] != Colour::White) {
            continue;
        }
        path.assign({root});
        cursor.assign({0});
        colour[root] = Colour::Grey;
        while (!path.empty()) {
            const std::size_t node = path.back();
            std::size_t& next = cursor.back();
            if (next == edges[node].size()) {
                colour[node] = Colour::Black;
                path.pop_back();
                cursor.pop_back();
                continue;
            }
            const std::size_t succ = edges[node][next++];
            if (colour[succ] == Colour::Grey) {
                std::vector<std::size_t> cycle;
                auto it = path.begin();
                while (*it != succ) {
                    ++it;
                }
                cycle.assign(it, path.end());
                return cycle;
            }
            if (colour[succ] == Colour::White) {
                colour[succ] = Colour::Grey;
                path.push_back(succ);
                cursor.push_back(0);
            }
        }
    }
    return std::nullopt;
}

void check_members(const ClassDecl& cls, const std::vector<std::string>& members, std::string_view what) {
    std::unordered_set<std::string_view> seen;
    for (const auto& member : members) {
        if (!is_identifier(member)) {
            throw ValidationError(ValidationError::Kind::InvalidIdentifier, {member},
                                  fmt::format("class '{}': invalid {} name '{}'", cls.name, what, member));
        }
        if (!seen.insert(member).second) {
            throw ValidationError(ValidationError::Kind::DuplicateMember, {cls.name, member},
                                  fmt::format("class '{}': duplicate {} '{}'", cls.name, what, member));
        }
    }
}

} // namespace

ValidatedDiagram validate(const ClassDiagram& diagram) {
    using Kind = ValidationError::Kind;

    ValidatedDiagram out;
    out.diagram_ = diagram;

    if (!is_identifier(diagram.id)) {
        throw ValidationError(Kind::InvalidIdentifier, {diagram.id},
                              fmt::format("invalid diagram id '{}'", diagram.id));
    }

    for (std::size_t i = 0; i < diagram.classes.size(); ++i) {
        const auto& cls = diagram.classes[i];
        if (!is_identifier(cls.name)) {
            throw ValidationError(Kind::InvalidIdentifier, {cls.name},
                                  fmt::format("invalid class name '{}'", cls.name));
        }
        if (!out.index_.emplace(cls.name, i).second) {
            throw ValidationError(Kind::DuplicateClass, {cls.name},
                                  fmt::format("duplicate class '{}'", cls.name));
        }
        check_members(cls, cls.attributes, "attribute");
        check_members(cls, cls.methods, "method");
    }

    const std::size_t n = diagram.classes.size();
    out.parents_.assign(n, {});
    out.parts_.assign(n, {});
    std::set<std::pair<std::size_t, std::size_t>> gen_pairs;
    std::set<std::pair<std::size_t, std::size_t>> agg_pairs;

    for (const auto& rel : diagram.relationships) {
        std::size_t ends[2] = {};
        const std::string* names[2] = {&rel.from, &rel.to};
        for (int e = 0; e < 2; ++e) {
            auto it = out.index_.find(*names[e]);
            if (it == out.index_.end()) {
                throw ValidationError(
                    Kind::UnknownEndpoint, {*names[e]},
                    fmt::format("{} {} -> {}: unknown class '{}'", to_string(rel.kind), rel.from, rel.to, *names[e]));
            }
            ends[e] = it->second;
        }
        auto pair = std::make_pair(ends[0], ends[1]);
        if (rel.kind == RelationKind::Generalization || rel.kind == RelationKind::Aggregation) {
            auto& seen = rel.kind == RelationKind::Generalization ? gen_pairs : agg_pairs;
            if (!seen.insert(pair).second) {
                throw ValidationError(
                    Kind::DuplicateHierarchyEdge, {rel.from, rel.to},
                    fmt::format("duplicate {} edge {} -> {}", to_string(rel.kind), rel.from, rel.to));
            }
            auto& adjacency = rel.kind == RelationKind::Generalization ? out.parents_ : out.parts_;
            adjacency[ends[0]].push_back(ends[1]);
        }
    }

    auto report_cycle = [&](const Adjacency& edges, Kind kind, std::string_view label) {
        if (auto cycle = find_cycle(edges)) {
            std::vector<std::string> names;
            for (std::size_t idx : *cycle) {
                names.push_back(diagram.classes[idx].name);
            }
            std::string message =
                fmt::format("{} cycle: {} -> {}", label, fmt::join(names, " -> "), names.front());
            throw ValidationError(kind, std::move(names), std::move(message));
        }
    };
    report_cycle(out.parents_, Kind::GeneralizationCycle, "generalization");
    report_cycle(out.parts_, Kind::AggregationCycle, "aggregation");

    return out;
}

} // namespace cdm
