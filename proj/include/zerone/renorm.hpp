// Block renormalization on Z: local rules, finite-window evolution and
// traces, block-exchange symmetries, induced single-site dynamics, and the
// stabilization Monte Carlo probe.
#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "zerone/common.hpp"
#include "zerone/info.hpp"
#include "zerone/mc.hpp"
#include "zerone/sym.hpp"

namespace zerone::renorm {

// T(a)_k = phi(a_{(2l+1)k-l-r}, ..., a_{(2l+1)k+l+r}). Block size 2l+1,
// interaction range r; the map is simple when r = 0.
struct LocalRule {
    info::Alphabet alphabet;
    int ell = 0;
    int range = 0;
    std::vector<int> table;  // |M|^(2l+2r+1) entries, leftmost argument most significant

    int block_size() const { return 2 * ell + 1; }
    int width() const { return 2 * ell + 2 * range + 1; }
    bool simple() const { return range == 0; }
    int apply(std::span<const int> args) const;
    RadixCodec codec() const;
};

void validate(const LocalRule& rule);

LocalRule majority_rule();

// Configuration on the centered interval [-radius, radius]; values[i] holds
// position i - radius.
struct LevelConfig {
    std::int64_t radius = 0;
    std::vector<int> values;

    int at(std::int64_t pos) const { return values[static_cast<std::size_t>(pos + radius)]; }
};

void validate(const LevelConfig& config, const LocalRule& rule);

struct TraceResult {
    int levels = 0;
    std::vector<int> values;  // a^0_0 .. a^n_0
    std::int64_t window_radius_used = 0;
};

// Indices of the level-0 sites that determine a^n_k, for simple rules: the
// interval of radius (b^n - 1)/2 centered at b^n * k.
struct BlockSpec {
    int level = 0;
    std::int64_t position = 0;
    std::int64_t center = 0;
    std::int64_t radius = 0;

    std::int64_t lo() const { return center - radius; }
    std::int64_t hi() const { return center + radius; }
};

BlockSpec block(const LocalRule& rule, int level, std::int64_t position);

// S_n with S_0 = 0, S_{m+1} = b*S_m + l + r: the input radius that
// determines a^n_0.
std::int64_t required_radius(const LocalRule& rule, int n);

// Per-level assignments; level 0 equals the input, each next level holds
// exactly the positions computable from the window.
std::vector<LevelConfig> evolve(const LevelConfig& config, const LocalRule& rule, int levels);

TraceResult trace_at_zero(const LevelConfig& config, const LocalRule& rule, int n);

// Order-preserving translation B^n_0 <-> B^n_1, identity elsewhere.
// Requires a simple rule.
sym::PositionalMap block_exchange(int n, const LocalRule& rule);

// Distribution of phi(Z_1,...,Z_b) with Z_i i.i.d. ~ d. Simple rules only.
info::Dist pushforward(const LocalRule& rule, const info::Dist& d);

// Orbit p0, f(p0), ..., f^n(p0) of the induced Bernoulli-parameter map for
// binary simple rules (f = probability the rule outputs symbol 1).
std::vector<double> iterate_dynamics(const LocalRule& rule, double p0, int n);

enum class Stability { attracting, repelling, marginal };

struct FixedPoint {
    double p = 0.0;
    Stability stability = Stability::marginal;
    double derivative = 0.0;
};

struct FixedPointScan {
    std::vector<FixedPoint> points;
    bool degenerate = false;  // f(p) = p identically (every p fixed)
};

// Sign-scan on a 1e-4 grid plus bisection to 1e-12; stability from a central
// finite difference with h = 1e-6.
FixedPointScan fixed_points(const LocalRule& rule);

struct StabilizationReport {
    mc::McReport ones;   // P(a^n_0 = 1 for all m <= n <= depth)
    mc::McReport zeros;  // same for symbol 0
    double union_lower_one = 0.0;
    double union_lower_zero = 0.0;
    double product_ref_one = 0.0;
    double product_ref_zero = 0.0;
    mc::McConfig config;
};

// Monte Carlo estimate of the truncated stabilization events over i.i.d.
// Bernoulli(p) windows. The limiting event quantifies "exists m, for all n",
// which cannot be sampled directly, so the truncation (m, depth) always
// rides along in the report.
StabilizationReport stabilization_probe(const LocalRule& rule, const mc::McConfig& cfg);
StabilizationReport stabilization_probe_serial(const LocalRule& rule, const mc::McConfig& cfg);

// First argument permutation sigma (lexicographic order) with
// phi(a_sigma(1..w)) = phi(a) everywhere and sigma moving the central
// argument, or nullopt. Positions are 0-based.
std::optional<std::vector<int>> central_moving_symmetry(const LocalRule& rule);

}  // namespace zerone::renorm
