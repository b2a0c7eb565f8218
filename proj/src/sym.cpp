#include "zerone/sym.hpp"

#include <algorithm>
#include <set>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace zerone::sym {

void validate(const IndexSet& s) {
    if (s.kind == IndexSet::Kind::labeled_finite) {
        std::set<Index> seen;
        for (Index id : s.ids)
            if (!seen.insert(id).second)
                throw validation_error("index set id " + std::to_string(id) + " repeats");
    } else if (!s.ids.empty()) {
        throw validation_error("integer index set carries no explicit id list");
    }
}

Index PositionalMap::operator()(Index k) const {
    switch (kind) {
        case Kind::shift:
            return k + shift_by;
        case Kind::finitary: {
            auto it = table.find(k);
            return it == table.end() ? k : it->second;
        }
        case Kind::composition: {
            // parts[0] . parts[1] . ... : innermost applies first.
            Index v = k;
            for (auto it = parts.rbegin(); it != parts.rend(); ++it) v = (*it)(v);
            return v;
        }
    }
    return k;
}

PositionalMap PositionalMap::shift(Index k) {
    PositionalMap m;
    m.kind = Kind::shift;
    m.shift_by = k;
    return m;
}

PositionalMap PositionalMap::finitary(std::map<Index, Index> t) {
    // Identity entries are redundant; drop them so equal maps share one form.
    for (auto it = t.begin(); it != t.end();) {
        if (it->first == it->second)
            it = t.erase(it);
        else
            ++it;
    }
    PositionalMap m;
    m.kind = Kind::finitary;
    m.table = std::move(t);
    return m;
}

void validate(const PositionalMap& m) {
    if (m.kind == PositionalMap::Kind::composition) {
        if (m.parts.empty()) throw validation_error("composition of zero maps");
        for (const auto& p : m.parts) validate(p);
    }
}

namespace {

std::optional<PositionalMap> merge_pair(const PositionalMap& f, const PositionalMap& g) {
    using Kind = PositionalMap::Kind;
    if (f.kind == Kind::shift && g.kind == Kind::shift)
        return PositionalMap::shift(f.shift_by + g.shift_by);
    if (f.kind == Kind::finitary && g.kind == Kind::finitary) {
        // (f.g) differs from identity only on supp(f) union supp(g).
        std::map<Index, Index> fused;
        std::set<Index> support;
        for (const auto& [k, _] : f.table) support.insert(k);
        for (const auto& [k, _] : g.table) support.insert(k);
        for (Index k : support) {
            const Index v = f(g(k));
            if (v != k) fused[k] = v;
        }
        return PositionalMap::finitary(std::move(fused));
    }
    return std::nullopt;
}

void flatten_into(const PositionalMap& m, std::vector<PositionalMap>& out) {
    if (m.kind == PositionalMap::Kind::composition) {
        for (const auto& p : m.parts) flatten_into(p, out);
    } else {
        out.push_back(m);
    }
}

}  // namespace

namespace {

bool is_identity_part(const PositionalMap& m) {
    return (m.kind == PositionalMap::Kind::shift && m.shift_by == 0) ||
           (m.kind == PositionalMap::Kind::finitary && m.table.empty());
}

}  // namespace

PositionalMap compose(const PositionalMap& f, const PositionalMap& g) {
    validate(f);
    validate(g);
    std::vector<PositionalMap> chain;
    flatten_into(f, chain);
    flatten_into(g, chain);

    std::vector<PositionalMap> reduced;
    for (auto& part : chain) {
        if (is_identity_part(part)) continue;  // identity units drop out
        if (!reduced.empty()) {
            if (auto merged = merge_pair(reduced.back(), part)) {
                if (is_identity_part(*merged))
                    reduced.pop_back();
                else
                    reduced.back() = std::move(*merged);
                continue;
            }
        }
        reduced.push_back(std::move(part));
    }
    if (reduced.empty()) return PositionalMap::identity();
    if (reduced.size() == 1) return reduced.front();
    PositionalMap m;
    m.kind = PositionalMap::Kind::composition;
    m.parts = std::move(reduced);
    return m;
}

int Assignment::value_at(Index k) const {
    for (std::size_t i = 0; i < window.size(); ++i)
        if (window[i] == k) return values[i];
    throw coverage_error("assignment does not cover index " + std::to_string(k));
}

std::uint64_t CylinderEvent::table_size() const {
    RadixCodec codec{std::vector<std::size_t>(window.size(), alphabet.size())};
    return codec.total();
}

bool CylinderEvent::test(std::uint64_t i) const {
    return (bits[i >> 6] >> (i & 63)) & 1u;
}

void CylinderEvent::set(std::uint64_t i, bool value) {
    if (value)
        bits[i >> 6] |= std::uint64_t{1} << (i & 63);
    else
        bits[i >> 6] &= ~(std::uint64_t{1} << (i & 63));
}

bool CylinderEvent::contains(std::span<const int> config) const {
    RadixCodec codec{std::vector<std::size_t>(window.size(), alphabet.size())};
    return test(codec.encode(config));
}

CylinderEvent CylinderEvent::from_predicate(
    std::vector<Index> window, info::Alphabet alphabet,
    const std::function<bool(std::span<const int>)>& pred) {
    CylinderEvent e;
    e.window = std::move(window);
    e.alphabet = std::move(alphabet);
    RadixCodec codec{std::vector<std::size_t>(e.window.size(), e.alphabet.size())};
    check_budget(codec.total(), "cylinder event table");
    e.bits.assign((codec.total() + 63) / 64, 0);
    std::vector<int> digits(e.window.size());
    for (std::uint64_t i = 0; i < codec.total(); ++i) {
        codec.decode(i, digits);
        if (pred(digits)) e.set(i, true);
    }
    return e;
}

void validate(const CylinderEvent& e) {
    info::validate(e.alphabet);
    std::set<Index> seen;
    for (Index k : e.window)
        if (!seen.insert(k).second)
            throw validation_error("event window index " + std::to_string(k) + " repeats");
    const std::uint64_t n = e.table_size();
    if (e.bits.size() != (n + 63) / 64)
        throw validation_error("event bitset has " + std::to_string(e.bits.size() * 64) +
                               " slots for a table of size " + std::to_string(n));
}

Assignment apply_map(const Assignment& config, const PositionalMap& map,
                     const std::vector<Index>& target) {
    validate(map);
    std::vector<Index> missing;
    Assignment out;
    out.window = target;
    out.values.reserve(target.size());
    for (Index k : target) {
        const Index src = map(k);
        bool found = false;
        for (std::size_t i = 0; i < config.window.size(); ++i) {
            if (config.window[i] == src) {
                out.values.push_back(config.values[i]);
                found = true;
                break;
            }
        }
        if (!found) missing.push_back(src);
    }
    if (!missing.empty()) {
        std::string list;
        for (Index k : missing) {
            if (!list.empty()) list += ", ";
            list += std::to_string(k);
        }
        throw coverage_error("map image not covered by source window; missing indices: " + list);
    }
    return out;
}

bool is_injective_on(const PositionalMap& map, const std::vector<Index>& window) {
    validate(map);
    std::set<Index> images;
    for (Index k : window)
        if (!images.insert(map(k)).second) return false;
    return true;
}

namespace {

struct SymmetrySweep {
    std::vector<Index> domain;           // W union pi(W), sorted
    std::vector<std::size_t> event_pos;  // position of each W index in domain
    std::vector<std::size_t> pull_pos;   // position of pi(k) in domain, per W index
    RadixCodec domain_codec;
    RadixCodec event_codec;
};

SymmetrySweep prepare_sweep(const CylinderEvent& event, const PositionalMap& map) {
    validate(event);
    validate(map);
    std::set<Index> all(event.window.begin(), event.window.end());
    for (Index k : event.window) all.insert(map(k));

    SymmetrySweep s;
    s.domain.assign(all.begin(), all.end());
    s.domain_codec = RadixCodec{std::vector<std::size_t>(s.domain.size(), event.alphabet.size())};
    s.event_codec = RadixCodec{std::vector<std::size_t>(event.window.size(), event.alphabet.size())};
    check_budget(s.domain_codec.total(), "is_positional_symmetry sweep");

    auto pos_of = [&](Index k) {
        return static_cast<std::size_t>(
            std::lower_bound(s.domain.begin(), s.domain.end(), k) - s.domain.begin());
    };
    for (Index k : event.window) {
        s.event_pos.push_back(pos_of(k));
        s.pull_pos.push_back(pos_of(map(k)));
    }
    return s;
}

bool sweep_config(const CylinderEvent& event, const SymmetrySweep& s, std::uint64_t idx,
                  std::vector<int>& domain_digits, std::vector<int>& window_digits) {
    s.domain_codec.decode(idx, domain_digits);
    for (std::size_t i = 0; i < s.event_pos.size(); ++i)
        window_digits[i] = domain_digits[s.event_pos[i]];
    const bool direct = event.test(s.event_codec.encode(window_digits));
    for (std::size_t i = 0; i < s.pull_pos.size(); ++i)
        window_digits[i] = domain_digits[s.pull_pos[i]];
    const bool pulled = event.test(s.event_codec.encode(window_digits));
    return direct == pulled;
}

}  // namespace

bool is_positional_symmetry_serial(const CylinderEvent& event, const PositionalMap& map) {
    const SymmetrySweep s = prepare_sweep(event, map);
    std::vector<int> domain_digits(s.domain.size());
    std::vector<int> window_digits(event.window.size());
    for (std::uint64_t idx = 0; idx < s.domain_codec.total(); ++idx)
        if (!sweep_config(event, s, idx, domain_digits, window_digits)) return false;
    return true;
}

bool is_positional_symmetry(const CylinderEvent& event, const PositionalMap& map, int workers) {
    const SymmetrySweep s = prepare_sweep(event, map);
    const std::int64_t total = static_cast<std::int64_t>(s.domain_codec.total());
    bool ok = true;
#ifdef _OPENMP
#pragma omp parallel num_threads(workers > 0 ? workers : 1)
    {
        std::vector<int> domain_digits(s.domain.size());
        std::vector<int> window_digits(event.window.size());
        bool local = true;
#pragma omp for schedule(static)
        for (std::int64_t idx = 0; idx < total; ++idx) {
            if (local &&
                !sweep_config(event, s, static_cast<std::uint64_t>(idx), domain_digits,
                              window_digits))
                local = false;
        }
#pragma omp critical
        ok = ok && local;
    }
#else
    (void)workers;
    std::vector<int> domain_digits(s.domain.size());
    std::vector<int> window_digits(event.window.size());
    for (std::int64_t idx = 0; idx < total; ++idx)
        if (!sweep_config(event, s, static_cast<std::uint64_t>(idx), domain_digits,
                          window_digits)) {
            ok = false;
            break;
        }
#endif
    return ok;
}

bool maps_disjointly(const PositionalMap& map, const std::vector<Index>& J) {
    std::set<Index> j_set(J.begin(), J.end());
    for (Index k : J)
        if (j_set.count(map(k))) return false;
    return true;
}

std::optional<PositionalMap> find_disjoint_map(const std::vector<PositionalMap>& generators,
                                               const std::vector<Index>& J, int max_depth) {
    if (max_depth < 1) throw validation_error("find_disjoint_map needs max_depth >= 1");
    for (const auto& g : generators) validate(g);
    if (generators.empty()) return std::nullopt;

    // Frontier-by-frontier enumeration; within a length, words are ordered
    // lexicographically by generator index, so the first hit is deterministic.
    std::vector<PositionalMap> frontier{PositionalMap::identity()};
    for (int depth = 1; depth <= max_depth; ++depth) {
        std::vector<PositionalMap> next;
        next.reserve(frontier.size() * generators.size());
        for (const auto& word : frontier) {
            for (const auto& g : generators) {
                PositionalMap candidate = compose(word, g);
                if (maps_disjointly(candidate, J)) return candidate;
                next.push_back(std::move(candidate));
            }
        }
        frontier = std::move(next);
    }
    return std::nullopt;
}

}  // namespace zerone::sym
