#pragma once

#include "cdmetrics/error.hpp"

#include <cstddef>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace cdm {

enum class RelationKind { Association, Aggregation, Dependency, Generalization };

std::string_view to_string(RelationKind kind);

struct ClassDecl {
    std::string name;
    std::vector<std::string> attributes;
    std::vector<std::string> methods;

    bool operator==(const ClassDecl&) const = default;
};

// Aggregation runs whole -> part, generalization child -> parent,
// dependency from -> to. Association order is kept but carries no meaning.
struct Relationship {
    RelationKind kind = RelationKind::Association;
    std::string from;
    std::string to;

    bool operator==(const Relationship&) const = default;
};

struct ClassDiagram {
    std::string id = "unnamed";
    std::vector<ClassDecl> classes;
    std::vector<Relationship> relationships;

    bool operator==(const ClassDiagram&) const = default;
};

bool is_identifier(std::string_view text);

class ValidationError : public Error {
public:
    enum class Kind {
        UnknownEndpoint,
        DuplicateClass,
        DuplicateMember,
        InvalidIdentifier,
        GeneralizationCycle,
        AggregationCycle,
        DuplicateHierarchyEdge,
    };

    // `detail` holds the offending names: the cycle path for cycles, the
    // (from, to) pair for duplicate edges, the single name otherwise.
    ValidationError(Kind kind, std::vector<std::string> detail, std::string message);

    Kind kind() const noexcept { return kind_; }
    const std::vector<std::string>& detail() const noexcept { return detail_; }

private:
    Kind kind_;
    std::vector<std::string> detail_;
};

class UnknownClass : public Error {
public:
    explicit UnknownClass(std::string name);
    const std::string& name() const noexcept { return name_; }

private:
    std::string name_;
};

// A diagram that satisfied every structural invariant, together with an
// index of its two hierarchy graphs. Only `validate` can construct one.
class ValidatedDiagram {
public:
    const ClassDiagram& diagram() const noexcept { return diagram_; }
    std::size_t class_count() const noexcept { return diagram_.classes.size(); }

    // Index of a class in declaration order; throws UnknownClass.
    std::size_t index_of(std::string_view name) const;

    // child -> parents, by class index.
    const std::vector<std::vector<std::size_t>>& parents() const noexcept { return parents_; }
    // whole -> parts, by class index.
    const std::vector<std::vector<std::size_t>>& parts() const noexcept { return parts_; }

    bool operator==(const ValidatedDiagram& other) const { return diagram_ == other.diagram_; }

private:
    friend ValidatedDiagram validate(const ClassDiagram& diagram);
    ValidatedDiagram() = default;

    ClassDiagram diagram_;
    std::unordered_map<std::string, std::size_t> index_;
    std::vector<std::vector<std::size_t>> parents_;
    std::vector<std::vector<std::size_t>> parts_;
};

// Checks every ClassDiagram invariant and returns the indexed diagram.
// Never reorders classes or relationships. Throws ValidationError.
ValidatedDiagram validate(const ClassDiagram& diagram);

} // namespace cdm
