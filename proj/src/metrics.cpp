#include "cdmetrics/metrics.hpp"

#include <algorithm>
#include <numeric>
#include <vector>

namespace cdm {

namespace {

constexpr std::array<std::string_view, kMetricCount> kNames{
    "NC", "NA", "NM", "NAssoc", "NAgg", "NDep", "NGen", "NAggH", "NGenH", "MaxHAgg", "MaxDIT",
};

using Adjacency = std::vector<std::vector<std::size_t>>;

const Adjacency& edges_of(const ValidatedDiagram& diagram, HierarchyKind kind) {
    return kind == HierarchyKind::Generalization ? diagram.parents() : diagram.parts();
}

// Longest outgoing path length for every node of an acyclic graph,
// memoized over an explicit post-order walk.
std::vector<std::int64_t> longest_paths(const Adjacency& edges) {
    constexpr std::int64_t kUnknown = -1;
    std::vector<std::int64_t> depth(edges.size(), kUnknown);
    std::vector<std::size_t> stack;
    for (std::size_t root = 0; root < edges.size(); ++root) {
        if (depth[root] != kUnknown) {
            continue;
        }
        stack.push_back(root);
        while (!stack.empty()) {
            const std::size_t node = stack.back();
            bool pending = false;
            for (std::size_t succ : edges[node]) {
                if (depth[succ] == kUnknown) {
                    stack.push_back(succ);
                    pending = true;
                }
            }
            if (pending) {
                continue;
            }
            stack.pop_back();
            if (depth[node] != kUnknown) {
                continue;
            }
            std::int64_t best = 0;
            for (std::size_t succ : edges[node]) {
                best = std::max(best, depth[succ] + 1);
            }
            depth[node] = best;
        }
    }
    return depth;
}

class DisjointSets {
public:
    explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }

    std::size_t find(std::size_t x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }

    void unite(std::size_t a, std::size_t b) { parent_[find(a)] = find(b); }

private:
    std::vector<std::size_t> parent_;
};

} // namespace

std::string_view metric_name(Metric metric) {
    return kNames[static_cast<std::size_t>(metric)];
}

std::optional<Metric> metric_from_name(std::string_view name) {
    for (Metric m : kAllMetrics) {
        if (metric_name(m) == name) {
            return m;
        }
    }
    return std::nullopt;
}

std::int64_t dit(const ValidatedDiagram& diagram, std::string_view name) {
    return longest_paths(diagram.parents())[diagram.index_of(name)];
}

std::int64_t hagg(const ValidatedDiagram& diagram, std::string_view name) {
    return longest_paths(diagram.parts())[diagram.index_of(name)];
}

std::int64_t count_hierarchies(const ValidatedDiagram& diagram, HierarchyKind kind) {
    const Adjacency& edges = edges_of(diagram, kind);
    DisjointSets sets(edges.size());
    std::vector<bool> touched(edges.size(), false);
    for (std::size_t from = 0; from < edges.size(); ++from) {
        for (std::size_t to : edges[from]) {
            sets.unite(from, to);
            touched[from] = touched[to] = true;
        }
    }
    std::vector<bool> counted(edges.size(), false);
    std::int64_t components = 0;
    for (std::size_t node = 0; node < edges.size(); ++node) {
        if (!touched[node]) {
            continue;
        }
        const std::size_t root = sets.find(node);
        if (!counted[root]) {
            counted[root] = true;
            ++components;
        }
    }
    return components;
}

MetricsVector compute_metrics(const ValidatedDiagram& diagram) {
    MetricsVector mv;
    const ClassDiagram& d = diagram.diagram();

    mv[Metric::NC] = static_cast<std::int64_t>(d.classes.size());
    for (const auto& cls : d.classes) {
        mv[Metric::NA] += static_cast<std::int64_t>(cls.attributes.size());
        mv[Metric::NM] += static_cast<std::int64_t>(cls.methods.size());
    }
    for (const auto& rel : d.relationships) {
        switch (rel.kind) {
        case RelationKind::Association:
            ++mv[Metric::NAssoc];
            break;
        case RelationKind::Aggregation:
            ++mv[Metric::NAgg];
            break;
        case RelationKind::Dependency:
            ++mv[Metric::NDep];
            break;
        case RelationKind::Generalization:
            ++mv[Metric::NGen];
            break;
        }
    }

    mv[Metric::NAggH] = count_hierarchies(diagram, HierarchyKind::Aggregation);
    mv[Metric::NGenH] = count_hierarchies(diagram, HierarchyKind::Generalization);

    auto max_of = [](const std::vector<std::int64_t>& v) {
        return v.empty() ? std::int64_t{0} : *std::max_element(v.begin(), v.end());
    };
    mv[Metric::MaxHAgg] = max_of(longest_paths(diagram.parts()));
    mv[Metric::MaxDIT] = max_of(longest_paths(diagram.parents()));
    return mv;
}

} // namespace cdm
