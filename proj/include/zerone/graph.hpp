// Recursive symmetric graphs: duplicate-and-link construction, copy-swap
// automorphisms, their lifts to edge-index maps, and random-subgraph
// property estimation.
#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "zerone/common.hpp"
#include "zerone/mc.hpp"
#include "zerone/sym.hpp"

namespace zerone::graph {

// Member order carries the total order used for canonical edge ids:
// copy_word lexicographic, then origin level, then local label.
struct VertexId {
    std::string copy_word;  // duplication choices, oldest level first
    int origin_level = 0;   // 0 = base graph, m >= 1 = born in L_m
    int local = 0;

    auto operator<=>(const VertexId&) const = default;

    // Letter chosen at duplication level j (origin_level < j <= build level).
    char letter_at_level(int j) const {
        return copy_word[static_cast<std::size_t>(j - origin_level - 1)];
    }
};

std::string to_string(const VertexId& v);

// Requests the request graph can't serve without rebuilding deeper.
class depth_error : public validation_error {
public:
    explicit depth_error(const std::string& what) : validation_error(what) {}
};

struct FiniteGraph {
    std::vector<VertexId> vertices;                          // sorted by VertexId order
    std::vector<std::pair<std::size_t, std::size_t>> edges;  // canonical (lo, hi), sorted

    std::size_t vertex_count() const { return vertices.size(); }
    std::size_t edge_count() const { return edges.size(); }
    std::optional<std::size_t> vertex_index(const VertexId& v) const;
    std::optional<std::size_t> edge_index(std::size_t u, std::size_t v) const;
    bool has_edge(std::size_t u, std::size_t v) const { return edge_index(u, v).has_value(); }

    // Build level n, derived from origin_level + word length (uniform over
    // all vertices by construction).
    int build_level() const;
};

void validate(const FiniteGraph& g);

// Local graph on vertices 0..n-1 (used for G0 and each L_m).
struct SmallGraph {
    int n = 0;
    std::vector<std::pair<int, int>> edges;
};

void validate(const SmallGraph& g);

// (level, local) names the class of a vertex across all of its copies.
struct ClassRef {
    int level = 0;
    int local = 0;
    auto operator<=>(const ClassRef&) const = default;
};

struct LevelSpec {
    SmallGraph l_graph;
    std::vector<bool> attach;  // per L vertex; empty + spec seed -> drawn at build
    std::vector<std::pair<ClassRef, ClassRef>> cross_pairs;
    int random_cross = 0;  // extra seeded cross-pair draws
};

struct ConstructionSpec {
    SmallGraph g0;
    std::vector<LevelSpec> levels;
    std::optional<std::uint64_t> seed;
};

void validate(const ConstructionSpec& spec);

// Build G_n. Every arbitrary choice is either explicit in the spec or drawn
// from the spec seed, so (spec, n) fully determines the graph. Cross-pair
// generators are closed over copy classes so that every level's copy swap is
// an automorphism (the inverse-limit extension needs exactly this).
FiniteGraph build(const ConstructionSpec& spec, int n);

using VertexPerm = std::vector<std::size_t>;

bool is_automorphism(const FiniteGraph& g, const VertexPerm& perm);

// Exchange the two copies of G_m inside the distinguished G_{m+1} (the
// all-'a' chain); everything else is fixed. Requires m < build level.
VertexPerm swap_automorphism(const FiniteGraph& g, int m);

// Smallest m whose copy swap moves all of A off itself, if any.
std::optional<int> smallest_swap_level(const FiniteGraph& g, const std::vector<std::size_t>& A);

// swap_automorphism at the smallest viable level; throws depth_error when A
// spans both copies at every built level or touches top-level L vertices.
VertexPerm disjoint_automorphism_for(const FiniteGraph& g, const std::vector<std::size_t>& A);

// pi(uv) = theta(u)theta(v) over canonical edge indices.
sym::PositionalMap edge_map_of(const FiniteGraph& g, const VertexPerm& theta);

// Independent Bernoulli(p) keep decision per edge, keyed by edge index.
std::vector<bool> sample_subgraph(const FiniteGraph& g, double p, std::uint64_t seed,
                                  std::uint64_t sample_index = 0);

// Predicate over (graph, edge keep mask); must be isomorphism-invariant by
// caller contract.
using Property = std::function<bool(const FiniteGraph&, const std::vector<bool>&)>;

// Built-ins: true, has-edge, has-triangle, connected, has-isolated-vertex,
// min-degree>=K.
Property named_property(const std::string& name);
std::vector<std::string> property_names();

mc::McReport estimate_property(const FiniteGraph& g, double p, const Property& property,
                               const mc::McConfig& cfg);
mc::McReport estimate_property_serial(const FiniteGraph& g, double p, const Property& property,
                                      const mc::McConfig& cfg);

}  // namespace zerone::graph
