// Positional maps on the index set, cylinder events on finite windows,
// exhaustive symmetry checks, and the dispersiveness (disjoint-map) search.
//
// Pullback convention, fixed once: (a^pi)_k = a_{pi(k)}. The result at k
// reads the source at pi(k). The inverse convention is a classic bug source;
// every operation here follows this one.
#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "zerone/common.hpp"
#include "zerone/info.hpp"

namespace zerone::sym {

using Index = std::int64_t;

// Countable index set: all of Z, or an explicit finite id list.
struct IndexSet {
    enum class Kind { integers, labeled_finite };
    Kind kind = Kind::integers;
    std::vector<Index> ids;  // labeled_finite only
};

void validate(const IndexSet& s);

// A map pi: Gamma -> Gamma stored symbolically; evaluation is lazy on the
// indices a window actually touches.
struct PositionalMap {
    enum class Kind { shift, finitary, composition };

    Kind kind = Kind::shift;
    Index shift_by = 0;
    std::map<Index, Index> table;      // finitary: identity off the support
    std::vector<PositionalMap> parts;  // composition: parts[0] after parts[1] after ...

    Index operator()(Index k) const;

    static PositionalMap shift(Index k);
    static PositionalMap finitary(std::map<Index, Index> t);
    static PositionalMap identity() { return shift(0); }
};

void validate(const PositionalMap& m);

// (f . g)(k) = f(g(k)). Shift runs merge and finitary tables fuse; anything
// else stays a composition node.
PositionalMap compose(const PositionalMap& f, const PositionalMap& g);

// Finite configuration: symbol indices on an ordered window.
struct Assignment {
    std::vector<Index> window;
    std::vector<int> values;

    int value_at(Index k) const;  // coverage_error when k is off-window
};

// Event determined by the coordinates in a finite window; membership table
// stored as a bitset over mixed-radix configuration codes (first window
// index most significant).
struct CylinderEvent {
    std::vector<Index> window;
    info::Alphabet alphabet;
    std::vector<std::uint64_t> bits;

    std::uint64_t table_size() const;
    bool test(std::uint64_t config_index) const;
    void set(std::uint64_t config_index, bool value);
    bool contains(std::span<const int> config) const;

    static CylinderEvent from_predicate(std::vector<Index> window, info::Alphabet alphabet,
                                        const std::function<bool(std::span<const int>)>& pred);
};

void validate(const CylinderEvent& e);

// result_k = config_{pi(k)} for each k in target.
Assignment apply_map(const Assignment& config, const PositionalMap& map,
                     const std::vector<Index>& target);

bool is_injective_on(const PositionalMap& map, const std::vector<Index>& window);

// Exhaustive check over all configurations of W union pi(W); budgeted.
bool is_positional_symmetry(const CylinderEvent& event, const PositionalMap& map,
                            int workers = 1);
bool is_positional_symmetry_serial(const CylinderEvent& event, const PositionalMap& map);

// Breadth-first search over semigroup words (length first, then generator
// order) for the first pi with pi(J) disjoint from J.
std::optional<PositionalMap> find_disjoint_map(const std::vector<PositionalMap>& generators,
                                               const std::vector<Index>& J, int max_depth);

// true iff pi(J) and J share no index.
bool maps_disjointly(const PositionalMap& map, const std::vector<Index>& J);

}  // namespace zerone::sym
