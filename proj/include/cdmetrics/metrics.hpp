#pragma once

#include "cdmetrics/diagram.hpp"

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>

namespace cdm {

// The eleven class-diagram size and structure metrics.
enum class Metric : std::uint8_t {
    NC,      // classes
    NA,      // attributes
    NM,      // methods
    NAssoc,  // associations
    NAgg,    // aggregation whole-part pairs
    NDep,    // dependencies
    NGen,    // generalization parent-child pairs
    NAggH,   // aggregation hierarchies
    NGenH,   // generalization hierarchies
    MaxHAgg, // longest whole -> part chain
    MaxDIT,  // longest child -> parent chain
};

inline constexpr std::size_t kMetricCount = 11;

inline constexpr std::array<Metric, kMetricCount> kAllMetrics{
    Metric::NC,   Metric::NA,    Metric::NM,    Metric::NAssoc,  Metric::NAgg,  Metric::NDep,
    Metric::NGen, Metric::NAggH, Metric::NGenH, Metric::MaxHAgg, Metric::MaxDIT,
};

std::string_view metric_name(Metric metric);
std::optional<Metric> metric_from_name(std::string_view name);

struct MetricsVector {
    std::array<std::int64_t, kMetricCount> values{};

    std::int64_t operator[](Metric m) const { return values[static_cast<std::size_t>(m)]; }
    std::int64_t& operator[](Metric m) { return values[static_cast<std::size_t>(m)]; }

    bool operator==(const MetricsVector&) const = default;
};

enum class HierarchyKind { Aggregation, Generalization };

MetricsVector compute_metrics(const ValidatedDiagram& diagram);

// Longest child -> parent path, in edges, from `name` to a parentless class.
std::int64_t dit(const ValidatedDiagram& diagram, std::string_view name);

// Longest whole -> part path, in edges, from `name` to a class with no parts.
std::int64_t hagg(const ValidatedDiagram& diagram, std::string_view name);

// Weakly connected components of the `kind` subgraph that hold at least one edge.
std::int64_t count_hierarchies(const ValidatedDiagram& diagram, HierarchyKind kind);

} // namespace cdm
