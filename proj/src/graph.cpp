#include "zerone/graph.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

namespace zerone::graph {

std::string to_string(const VertexId& v) {
    std::string s = "v";
    s += v.copy_word;
    s += '_';
    s += v.origin_level == 0 ? "g0" : "l" + std::to_string(v.origin_level);
    s += '_';
    s += std::to_string(v.local);
    return s;
}

std::optional<std::size_t> FiniteGraph::vertex_index(const VertexId& v) const {
    auto it = std::lower_bound(vertices.begin(), vertices.end(), v);
    if (it == vertices.end() || !(*it == v)) return std::nullopt;
    return static_cast<std::size_t>(it - vertices.begin());
}

std::optional<std::size_t> FiniteGraph::edge_index(std::size_t u, std::size_t v) const {
    const auto e = std::minmax(u, v);
    const std::pair<std::size_t, std::size_t> key{e.first, e.second};
    auto it = std::lower_bound(edges.begin(), edges.end(), key);
    if (it == edges.end() || *it != key) return std::nullopt;
    return static_cast<std::size_t>(it - edges.begin());
}

int FiniteGraph::build_level() const {
    if (vertices.empty()) return 0;
    const auto& v = vertices.front();
    return v.origin_level + static_cast<int>(v.copy_word.size());
}

void validate(const FiniteGraph& g) {
    if (!std::is_sorted(g.vertices.begin(), g.vertices.end()))
        throw validation_error("graph vertices must be sorted");
    if (std::adjacent_find(g.vertices.begin(), g.vertices.end()) != g.vertices.end())
        throw validation_error("graph vertex ids repeat");
    const int n = g.build_level();
    for (const auto& v : g.vertices)
        if (v.origin_level + static_cast<int>(v.copy_word.size()) != n)
            throw validation_error("vertex " + to_string(v) + " is not from a level-" +
                                   std::to_string(n) + " build");
    for (const auto& [u, v] : g.edges) {
        if (u >= v) throw validation_error("edge endpoints must be canonically ordered");
        if (v >= g.vertices.size()) throw validation_error("edge references a missing vertex");
    }
    if (!std::is_sorted(g.edges.begin(), g.edges.end()))
        throw validation_error("graph edges must be sorted");
}

void validate(const SmallGraph& g) {
    if (g.n < 0) throw validation_error("local graph size must be >= 0");
    std::set<std::pair<int, int>> seen;
    for (auto [u, v] : g.edges) {
        if (u == v) throw validation_error("local graph has a loop");
        if (u < 0 || v < 0 || u >= g.n || v >= g.n)
            throw validation_error("local graph edge endpoint out of range");
        if (!seen.insert(std::minmax(u, v)).second)
            throw validation_error("local graph edge repeats");
    }
}

void validate(const ConstructionSpec& spec) {
    validate(spec.g0);
    for (std::size_t j = 0; j < spec.levels.size(); ++j) {
        const LevelSpec& lvl = spec.levels[j];
        validate(lvl.l_graph);
        if (!lvl.attach.empty() &&
            lvl.attach.size() != static_cast<std::size_t>(lvl.l_graph.n))
            throw validation_error("level " + std::to_string(j + 1) + " attach list has " +
                                   std::to_string(lvl.attach.size()) + " entries for " +
                                   std::to_string(lvl.l_graph.n) + " vertices");
        if (lvl.attach.empty() && lvl.l_graph.n > 0 && !spec.seed)
            throw validation_error("level " + std::to_string(j + 1) +
                                   " needs an attach list or a spec seed");
        if (lvl.random_cross < 0) throw validation_error("random_cross must be >= 0");
        if (lvl.random_cross > 0 && !spec.seed)
            throw validation_error("random cross pairs need a spec seed");
        for (const auto& [a, b] : lvl.cross_pairs) {
            for (const ClassRef& c : {a, b}) {
                if (c.level < 0 || c.level > static_cast<int>(j))
                    throw validation_error("cross pair references level " +
                                           std::to_string(c.level) + " at build level " +
                                           std::to_string(j + 1));
                const int size = c.level == 0 ? spec.g0.n
                                              : spec.levels[static_cast<std::size_t>(c.level - 1)]
                                                    .l_graph.n;
                if (c.local < 0 || c.local >= size)
                    throw validation_error("cross pair local id out of range");
            }
        }
    }
}

namespace {

struct Builder {
    std::vector<VertexId> verts;
    std::set<std::pair<std::size_t, std::size_t>> edges;

    void add_edge(std::size_t u, std::size_t v) {
        if (u == v) return;
        edges.insert(std::minmax(u, v));
    }
};

std::vector<ClassRef> classes_below(const ConstructionSpec& spec, int level) {
    std::vector<ClassRef> out;
    for (int l = 0; l < spec.g0.n; ++l) out.push_back({0, l});
    for (int m = 1; m < level; ++m)
        for (int l = 0; l < spec.levels[static_cast<std::size_t>(m - 1)].l_graph.n; ++l)
            out.push_back({m, l});
    return out;
}

}  // namespace

FiniteGraph build(const ConstructionSpec& spec, int n) {
    validate(spec);
    if (n < 0 || static_cast<std::size_t>(n) > spec.levels.size())
        throw validation_error("build level " + std::to_string(n) + " outside the spec's " +
                               std::to_string(spec.levels.size()) + " levels");

    Builder b;
    for (int i = 0; i < spec.g0.n; ++i) b.verts.push_back({"", 0, i});
    for (auto [u, v] : spec.g0.edges)
        b.add_edge(static_cast<std::size_t>(u), static_cast<std::size_t>(v));

    for (int j = 1; j <= n; ++j) {
        const LevelSpec& lvl = spec.levels[static_cast<std::size_t>(j - 1)];
        const std::size_t old_count = b.verts.size();

        check_budget((2 * old_count + static_cast<std::size_t>(lvl.l_graph.n)) +
                         4 * b.edges.size(),
                     "graph build level " + std::to_string(j));

        // Duplicate: old index i becomes a-copy 2i and b-copy 2i+1.
        std::vector<VertexId> next;
        next.reserve(2 * old_count + static_cast<std::size_t>(lvl.l_graph.n));
        for (const auto& v : b.verts) {
            VertexId a = v, bb = v;
            a.copy_word += 'a';
            bb.copy_word += 'b';
            next.push_back(std::move(a));
            next.push_back(std::move(bb));
        }
        std::set<std::pair<std::size_t, std::size_t>> next_edges;
        for (const auto& [u, v] : b.edges) {
            next_edges.insert(std::minmax(2 * u, 2 * v));
            next_edges.insert(std::minmax(2 * u + 1, 2 * v + 1));
        }

        // L_j vertices and their internal edges.
        const std::size_t l_base = next.size();
        for (int i = 0; i < lvl.l_graph.n; ++i) next.push_back({"", j, i});
        for (auto [u, v] : lvl.l_graph.edges)
            next_edges.insert(std::minmax(l_base + static_cast<std::size_t>(u),
                                          l_base + static_cast<std::size_t>(v)));

        // All-or-none attachment of each L_j vertex to both copies.
        for (int i = 0; i < lvl.l_graph.n; ++i) {
            const bool attach = lvl.attach.empty()
                                    ? rng::bernoulli(0.5, *spec.seed,
                                                     static_cast<std::uint64_t>(j),
                                                     static_cast<std::uint64_t>(i))
                                    : lvl.attach[static_cast<std::size_t>(i)];
            if (!attach) continue;
            for (std::size_t u = 0; u < 2 * old_count; ++u)
                next_edges.insert(std::minmax(l_base + static_cast<std::size_t>(i), u));
        }

        // Cross edges between the two copies. Each generator (cu, cv) is
        // closed over copy classes: every copy of cu's class on the a-side
        // links to every copy of cv's class on the b-side, plus the
        // symmetric mates. This keeps every lower-level swap an automorphism.
        std::vector<std::pair<ClassRef, ClassRef>> pairs = lvl.cross_pairs;
        if (lvl.random_cross > 0) {
            const std::vector<ClassRef> pool = classes_below(spec, j);
            if (!pool.empty()) {
                for (int k = 0; k < lvl.random_cross; ++k) {
                    const auto pick = [&](std::uint64_t slot) {
                        return pool[rng::below(pool.size(), *spec.seed,
                                               0xc0ULL + static_cast<std::uint64_t>(j), slot)];
                    };
                    pairs.emplace_back(pick(2 * static_cast<std::uint64_t>(k)),
                                       pick(2 * static_cast<std::uint64_t>(k) + 1));
                }
            }
        }
        for (const auto& [cu, cv] : pairs) {
            std::vector<std::size_t> us, vs;
            for (std::size_t i = 0; i < old_count; ++i) {
                if (b.verts[i].origin_level == cu.level && b.verts[i].local == cu.local)
                    us.push_back(i);
                if (b.verts[i].origin_level == cv.level && b.verts[i].local == cv.local)
                    vs.push_back(i);
            }
            for (std::size_t u : us)
                for (std::size_t v : vs) {
                    next_edges.insert(std::minmax(2 * u, 2 * v + 1));      // u^a -- v^b
                    next_edges.insert(std::minmax(2 * v, 2 * u + 1));      // v^a -- u^b
                }
        }

        b.verts = std::move(next);
        b.edges = std::move(next_edges);
    }

    // Canonical form: vertices sorted by id, edges remapped and sorted.
    std::vector<std::size_t> order(b.verts.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t x, std::size_t y) { return b.verts[x] < b.verts[y]; });
    std::vector<std::size_t> rank(order.size());
    for (std::size_t i = 0; i < order.size(); ++i) rank[order[i]] = i;

    FiniteGraph g;
    g.vertices.reserve(b.verts.size());
    for (std::size_t i : order) g.vertices.push_back(b.verts[i]);
    g.edges.reserve(b.edges.size());
    for (const auto& [u, v] : b.edges) g.edges.push_back(std::minmax(rank[u], rank[v]));
    std::sort(g.edges.begin(), g.edges.end());
    validate(g);
    return g;
}

bool is_automorphism(const FiniteGraph& g, const VertexPerm& perm) {
    if (perm.size() != g.vertex_count()) return false;
    std::vector<bool> hit(perm.size(), false);
    for (std::size_t t : perm) {
        if (t >= perm.size() || hit[t]) return false;
        hit[t] = true;
    }
    for (const auto& [u, v] : g.edges)
        if (!g.has_edge(perm[u], perm[v])) return false;
    return true;
}

namespace {

// A vertex sits inside the distinguished G_{m+1} iff every duplication
// letter above level m+1 is 'a'.
bool in_distinguished_copy(const VertexId& v, int m, int n) {
    for (int j = m + 2; j <= n; ++j) {
        if (j <= v.origin_level) continue;
        if (v.letter_at_level(j) != 'a') return false;
    }
    return true;
}

}  // namespace

VertexPerm swap_automorphism(const FiniteGraph& g, int m) {
    validate(g);
    const int n = g.build_level();
    if (m < 0 || m >= n)
        throw validation_error("swap level m must satisfy 0 <= m < build level " +
                               std::to_string(n));
    VertexPerm perm(g.vertex_count());
    for (std::size_t i = 0; i < g.vertex_count(); ++i) {
        const VertexId& v = g.vertices[i];
        if (v.origin_level <= m && in_distinguished_copy(v, m, n)) {
            VertexId target = v;
            const std::size_t pos = static_cast<std::size_t>(m - v.origin_level);
            target.copy_word[pos] = target.copy_word[pos] == 'a' ? 'b' : 'a';
            const auto idx = g.vertex_index(target);
            if (!idx)
                throw validation_error("swap image of " + to_string(v) + " is missing");
            perm[i] = *idx;
        } else {
            perm[i] = i;
        }
    }
    return perm;
}

std::optional<int> smallest_swap_level(const FiniteGraph& g,
                                       const std::vector<std::size_t>& A) {
    validate(g);
    if (A.empty()) throw validation_error("vertex set A must be non-empty");
    const int n = g.build_level();
    for (std::size_t i : A)
        if (i >= g.vertex_count()) throw validation_error("vertex index out of range in A");

    for (int m = 0; m < n; ++m) {
        bool ok = true;
        char letter = 0;
        for (std::size_t i : A) {
            const VertexId& v = g.vertices[i];
            if (v.origin_level > m || !in_distinguished_copy(v, m, n)) {
                ok = false;
                break;
            }
            const char c = v.letter_at_level(m + 1);
            if (letter == 0)
                letter = c;
            else if (letter != c) {
                ok = false;
                break;
            }
        }
        if (ok) return m;
    }
    return std::nullopt;
}

VertexPerm disjoint_automorphism_for(const FiniteGraph& g, const std::vector<std::size_t>& A) {
    const auto m = smallest_swap_level(g, A);
    if (!m)
        throw depth_error(
            "A spans both copies at every built level (or touches top-level L vertices); "
            "rebuild with more levels to separate it");
    VertexPerm theta = swap_automorphism(g, *m);
    for (std::size_t i : A)
        if (std::find(A.begin(), A.end(), theta[i]) != A.end())
            throw std::logic_error("copy swap failed to move A off itself");
    return theta;
}

sym::PositionalMap edge_map_of(const FiniteGraph& g, const VertexPerm& theta) {
    if (!is_automorphism(g, theta))
        throw validation_error("edge_map_of needs a graph automorphism");
    std::map<sym::Index, sym::Index> table;
    for (std::size_t e = 0; e < g.edge_count(); ++e) {
        const auto& [u, v] = g.edges[e];
        const auto image = g.edge_index(theta[u], theta[v]);
        if (!image) throw std::logic_error("automorphism image edge is missing");
        if (*image != e)
            table[static_cast<sym::Index>(e)] = static_cast<sym::Index>(*image);
    }
    return sym::PositionalMap::finitary(std::move(table));
}

std::vector<bool> sample_subgraph(const FiniteGraph& g, double p, std::uint64_t seed,
                                  std::uint64_t sample_index) {
    if (!(p >= 0.0 && p <= 1.0)) throw validation_error("edge probability p must lie in [0,1]");
    std::vector<bool> keep(g.edge_count());
    for (std::size_t e = 0; e < g.edge_count(); ++e)
        keep[e] = rng::bernoulli(p, seed, sample_index, e);
    return keep;
}

namespace {

bool kept_has_triangle(const FiniteGraph& g, const std::vector<bool>& keep) {
    const std::size_t n = g.vertex_count();
    std::vector<std::vector<std::size_t>> adj(n);
    for (std::size_t e = 0; e < g.edge_count(); ++e) {
        if (!keep[e]) continue;
        adj[g.edges[e].first].push_back(g.edges[e].second);
        adj[g.edges[e].second].push_back(g.edges[e].first);
    }
    for (auto& list : adj) std::sort(list.begin(), list.end());
    for (std::size_t e = 0; e < g.edge_count(); ++e) {
        if (!keep[e]) continue;
        const auto& [u, v] = g.edges[e];
        const auto& au = adj[u];
        const auto& av = adj[v];
        std::size_t i = 0, j = 0;
        while (i < au.size() && j < av.size()) {
            if (au[i] == av[j]) return true;
            if (au[i] < av[j])
                ++i;
            else
                ++j;
        }
    }
    return false;
}

struct UnionFind {
    std::vector<std::size_t> parent;
    explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    std::size_t find(std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    void unite(std::size_t a, std::size_t b) { parent[find(a)] = find(b); }
};

std::vector<std::size_t> kept_degrees(const FiniteGraph& g, const std::vector<bool>& keep) {
    std::vector<std::size_t> deg(g.vertex_count(), 0);
    for (std::size_t e = 0; e < g.edge_count(); ++e) {
        if (!keep[e]) continue;
        ++deg[g.edges[e].first];
        ++deg[g.edges[e].second];
    }
    return deg;
}

}  // namespace

std::vector<std::string> property_names() {
    return {"true",      "has-edge",           "has-triangle",
            "connected", "has-isolated-vertex", "min-degree>=K"};
}

Property named_property(const std::string& name) {
    if (name == "true") return [](const FiniteGraph&, const std::vector<bool>&) { return true; };
    if (name == "has-edge")
        return [](const FiniteGraph&, const std::vector<bool>& keep) {
            return std::find(keep.begin(), keep.end(), true) != keep.end();
        };
    if (name == "has-triangle")
        return [](const FiniteGraph& g, const std::vector<bool>& keep) {
            return kept_has_triangle(g, keep);
        };
    if (name == "connected")
        return [](const FiniteGraph& g, const std::vector<bool>& keep) {
            if (g.vertex_count() <= 1) return true;
            UnionFind uf(g.vertex_count());
            for (std::size_t e = 0; e < g.edge_count(); ++e)
                if (keep[e]) uf.unite(g.edges[e].first, g.edges[e].second);
            const std::size_t root = uf.find(0);
            for (std::size_t v = 1; v < g.vertex_count(); ++v)
                if (uf.find(v) != root) return false;
            return true;
        };
    if (name == "has-isolated-vertex")
        return [](const FiniteGraph& g, const std::vector<bool>& keep) {
            const auto deg = kept_degrees(g, keep);
            return std::find(deg.begin(), deg.end(), std::size_t{0}) != deg.end();
        };
    constexpr const char* kMinDeg = "min-degree>=";
    if (name.rfind(kMinDeg, 0) == 0) {
        const std::string arg = name.substr(std::string(kMinDeg).size());
        std::size_t pos = 0;
        int k = 0;
        try {
            k = std::stoi(arg, &pos);
        } catch (const std::exception&) {
            pos = 0;
        }
        if (pos != arg.size() || k < 0)
            throw validation_error("bad min-degree>=K threshold '" + arg + "'");
        return [k](const FiniteGraph& g, const std::vector<bool>& keep) {
            const auto deg = kept_degrees(g, keep);
            for (std::size_t d : deg)
                if (d < static_cast<std::size_t>(k)) return false;
            return true;
        };
    }
    std::string known;
    for (const auto& p : property_names()) {
        if (!known.empty()) known += ", ";
        known += p;
    }
    throw validation_error("unknown property '" + name + "'; built-ins: " + known);
}

namespace {

mc::McReport finish_estimate(const FiniteGraph& g, const mc::McConfig& cfg,
                             std::uint64_t hits) {
    mc::McReport rep = mc::report_from_counts(hits, cfg.samples, cfg.seed);
    rep.meta["level"] = std::to_string(g.build_level());
    rep.meta["edges"] = std::to_string(g.edge_count());
    return rep;
}

}  // namespace

mc::McReport estimate_property(const FiniteGraph& g, double p, const Property& property,
                               const mc::McConfig& cfg) {
    mc::validate(cfg);
    validate(g);
    const auto counts = mc::tally(cfg.samples, 1, cfg.workers,
                                  [&](std::uint64_t s, std::vector<std::uint64_t>& c) {
                                      if (property(g, sample_subgraph(g, p, cfg.seed, s))) ++c[0];
                                  });
    return finish_estimate(g, cfg, counts[0]);
}

mc::McReport estimate_property_serial(const FiniteGraph& g, double p, const Property& property,
                                      const mc::McConfig& cfg) {
    mc::validate(cfg);
    validate(g);
    const auto counts = mc::tally_serial(cfg.samples, 1,
                                         [&](std::uint64_t s, std::vector<std::uint64_t>& c) {
                                             if (property(g, sample_subgraph(g, p, cfg.seed, s)))
                                                 ++c[0];
                                         });
    return finish_estimate(g, cfg, counts[0]);
}

}  // namespace zerone::graph
