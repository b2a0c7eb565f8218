#include "zerone/renorm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace zerone::renorm {

namespace {

void require_simple(const LocalRule& rule, const char* op) {
    if (!rule.simple())
        throw validation_error(std::string(op) +
                               " is unsupported for interaction range r > 0 (blocks overlap)");
}

void require_binary(const LocalRule& rule, const char* op) {
    if (rule.alphabet.size() != 2)
        throw validation_error(std::string(op) + " needs a binary alphabet, got size " +
                               std::to_string(rule.alphabet.size()));
}

std::int64_t checked_pow(std::int64_t base, int exp, const char* what) {
    std::int64_t v = 1;
    for (int i = 0; i < exp; ++i) {
        if (v > std::numeric_limits<std::int64_t>::max() / base)
            throw budget_error(std::string(what) + ": b^n overflows a 64-bit radius");
        v *= base;
    }
    return v;
}

// P(phi(Z_1..Z_b) = 1) for i.i.d. Bernoulli(p) arguments, as a plain
// polynomial evaluation; also valid just outside [0,1] for finite
// differences at the endpoints.
double output_one_probability(const LocalRule& rule, double p) {
    const int w = rule.width();
    double total = 0.0;
    for (std::uint64_t idx = 0; idx < rule.table.size(); ++idx) {
        if (rule.table[idx] != 1) continue;
        int ones = 0;
        std::uint64_t v = idx;
        for (int i = 0; i < w; ++i) {
            ones += static_cast<int>(v & 1);
            v >>= 1;
        }
        total += std::pow(p, ones) * std::pow(1.0 - p, w - ones);
    }
    return total;
}

}  // namespace

int LocalRule::apply(std::span<const int> args) const {
    RadixCodec c = codec();
    return table[c.encode(args)];
}

RadixCodec LocalRule::codec() const {
    return RadixCodec{std::vector<std::size_t>(static_cast<std::size_t>(width()),
                                               alphabet.size())};
}

void validate(const LocalRule& rule) {
    info::validate(rule.alphabet);
    if (rule.ell < 0 || rule.range < 0)
        throw validation_error("rule parameters l and r must be >= 0");
    const RadixCodec c = rule.codec();
    if (rule.table.size() != c.total())
        throw validation_error("rule table has " + std::to_string(rule.table.size()) +
                               " entries; a total table over " + std::to_string(rule.width()) +
                               " arguments needs " + std::to_string(c.total()));
    for (int v : rule.table)
        if (v < 0 || static_cast<std::size_t>(v) >= rule.alphabet.size())
            throw validation_error("rule table entry out of alphabet range");
}

LocalRule majority_rule() {
    LocalRule rule;
    rule.alphabet.symbols = {"0", "1"};
    rule.ell = 1;
    rule.range = 0;
    rule.table.resize(8);
    for (std::uint64_t idx = 0; idx < 8; ++idx) {
        const int ones = static_cast<int>((idx & 1) + ((idx >> 1) & 1) + ((idx >> 2) & 1));
        rule.table[idx] = ones >= 2 ? 1 : 0;
    }
    return rule;
}

void validate(const LevelConfig& config, const LocalRule& rule) {
    if (config.radius < 0) throw validation_error("window radius must be >= 0");
    if (config.values.size() != static_cast<std::size_t>(2 * config.radius + 1))
        throw validation_error("window holds " + std::to_string(config.values.size()) +
                               " values for radius " + std::to_string(config.radius));
    for (int v : config.values)
        if (v < 0 || static_cast<std::size_t>(v) >= rule.alphabet.size())
            throw validation_error("window value out of alphabet range");
}

std::int64_t required_radius(const LocalRule& rule, int n) {
    validate(rule);
    if (n < 0) throw validation_error("level must be >= 0");
    const std::int64_t b = rule.block_size();
    const std::int64_t step = rule.ell + rule.range;
    std::int64_t s = 0;
    for (int i = 0; i < n; ++i) {
        if (s > (std::numeric_limits<std::int64_t>::max() - step) / b)
            throw budget_error("required_radius overflows a 64-bit integer at level " +
                               std::to_string(i + 1));
        s = b * s + step;
    }
    return s;
}

BlockSpec block(const LocalRule& rule, int level, std::int64_t position) {
    require_simple(rule, "block");
    BlockSpec spec;
    spec.level = level;
    spec.position = position;
    const std::int64_t bn = checked_pow(rule.block_size(), level, "block");
    spec.center = bn * position;
    spec.radius = required_radius(rule, level);  // (b^n - 1)/2 for r = 0
    return spec;
}

std::vector<LevelConfig> evolve(const LevelConfig& config, const LocalRule& rule, int levels) {
    validate(rule);
    validate(config, rule);
    if (levels < 0) throw validation_error("levels must be >= 0");
    const std::int64_t need = required_radius(rule, levels);
    if (config.radius < need)
        throw coverage_error("window radius " + std::to_string(config.radius) +
                             " cannot determine level " + std::to_string(levels) +
                             "; required radius is " + std::to_string(need));

    const std::int64_t b = rule.block_size();
    const std::int64_t reach = rule.ell + rule.range;
    std::vector<LevelConfig> out;
    out.reserve(static_cast<std::size_t>(levels) + 1);
    out.push_back(config);
    std::vector<int> args(static_cast<std::size_t>(rule.width()));
    for (int lvl = 1; lvl <= levels; ++lvl) {
        const LevelConfig& prev = out.back();
        LevelConfig next;
        next.radius = (prev.radius - reach) / b;
        next.values.resize(static_cast<std::size_t>(2 * next.radius + 1));
        for (std::int64_t k = -next.radius; k <= next.radius; ++k) {
            for (std::int64_t i = 0; i < rule.width(); ++i)
                args[static_cast<std::size_t>(i)] = prev.at(b * k - reach + i);
            next.values[static_cast<std::size_t>(k + next.radius)] = rule.apply(args);
        }
        out.push_back(std::move(next));
    }
    return out;
}

TraceResult trace_at_zero(const LevelConfig& config, const LocalRule& rule, int n) {
    const std::vector<LevelConfig> levels = evolve(config, rule, n);
    TraceResult t;
    t.levels = n;
    t.window_radius_used = config.radius;
    t.values.reserve(levels.size());
    for (const auto& lvl : levels) t.values.push_back(lvl.at(0));
    return t;
}

sym::PositionalMap block_exchange(int n, const LocalRule& rule) {
    require_simple(rule, "block_exchange");
    if (n < 0) throw validation_error("block level must be >= 0");
    const BlockSpec b0 = block(rule, n, 0);
    const BlockSpec b1 = block(rule, n, 1);
    const std::int64_t offset = b1.center - b0.center;  // b^n
    std::map<sym::Index, sym::Index> table;
    for (std::int64_t i = b0.lo(); i <= b0.hi(); ++i) {
        table[i] = i + offset;
        table[i + offset] = i;
    }
    return sym::PositionalMap::finitary(std::move(table));
}

info::Dist pushforward(const LocalRule& rule, const info::Dist& d) {
    validate(rule);
    require_simple(rule, "pushforward");
    info::validate(d);
    if (!(d.alphabet == rule.alphabet))
        throw validation_error("pushforward distribution alphabet differs from the rule's");

    info::Dist out{rule.alphabet, std::vector<double>(rule.alphabet.size(), 0.0)};
    const RadixCodec c = rule.codec();
    std::vector<int> digits(static_cast<std::size_t>(rule.width()));
    for (std::uint64_t idx = 0; idx < c.total(); ++idx) {
        c.decode(idx, digits);
        double p = 1.0;
        for (int v : digits) p *= d.probs[static_cast<std::size_t>(v)];
        out.probs[static_cast<std::size_t>(rule.table[idx])] += p;
    }
    return out;
}

std::vector<double> iterate_dynamics(const LocalRule& rule, double p0, int n) {
    validate(rule);
    require_simple(rule, "iterate_dynamics");
    require_binary(rule, "iterate_dynamics");
    if (!(p0 >= 0.0 && p0 <= 1.0)) throw validation_error("p0 must lie in [0,1]");
    if (n < 0) throw validation_error("iteration count must be >= 0");
    std::vector<double> orbit;
    orbit.reserve(static_cast<std::size_t>(n) + 1);
    orbit.push_back(p0);
    for (int i = 0; i < n; ++i) orbit.push_back(output_one_probability(rule, orbit.back()));
    return orbit;
}

FixedPointScan fixed_points(const LocalRule& rule) {
    validate(rule);
    require_simple(rule, "fixed_points");
    require_binary(rule, "fixed_points");

    constexpr double kGrid = 1e-4;
    constexpr double kRootTol = 1e-12;
    constexpr double kDiffStep = 1e-6;
    constexpr double kMarginalBand = 1e-6;

    auto h = [&](double p) { return output_one_probability(rule, p) - p; };

    const int n_steps = static_cast<int>(std::lround(1.0 / kGrid));
    FixedPointScan scan;
    scan.degenerate = true;
    std::vector<double> roots;

    double prev = h(0.0);
    if (std::abs(prev) > kRootTol) scan.degenerate = false;
    if (std::abs(prev) <= kRootTol) roots.push_back(0.0);
    for (int i = 1; i <= n_steps; ++i) {
        const double p = static_cast<double>(i) * kGrid;
        const double cur = h(p);
        if (std::abs(cur) > kRootTol) scan.degenerate = false;
        if (std::abs(cur) <= kRootTol) {
            roots.push_back(p);
        } else if (prev * cur < 0.0) {
            double lo = p - kGrid, hi = p;
            double hlo = prev;
            while (hi - lo > kRootTol) {
                const double mid = 0.5 * (lo + hi);
                const double hm = h(mid);
                if (hm == 0.0) {
                    lo = hi = mid;
                    break;
                }
                if (hlo * hm < 0.0) {
                    hi = mid;
                } else {
                    lo = mid;
                    hlo = hm;
                }
            }
            roots.push_back(0.5 * (lo + hi));
        }
        prev = cur;
    }

    if (scan.degenerate) return scan;

    std::sort(roots.begin(), roots.end());
    for (double r : roots) {
        if (!scan.points.empty() && std::abs(r - scan.points.back().p) < 1e-7) continue;
        FixedPoint fp;
        fp.p = r;
        fp.derivative = (output_one_probability(rule, r + kDiffStep) -
                         output_one_probability(rule, r - kDiffStep)) /
                        (2.0 * kDiffStep);
        const double mag = std::abs(fp.derivative);
        if (mag < 1.0 - kMarginalBand)
            fp.stability = Stability::attracting;
        else if (mag > 1.0 + kMarginalBand)
            fp.stability = Stability::repelling;
        else
            fp.stability = Stability::marginal;
        scan.points.push_back(fp);
    }
    return scan;
}

namespace {

// Shared by the parallel and serial probes: one sample's window draw,
// evolution, and stabilization counters.
struct StabilizationKernel {
    const LocalRule& rule;
    mc::McConfig cfg;
    std::int64_t radius;

    void operator()(std::uint64_t sample, std::vector<std::uint64_t>& counters) const {
        LevelConfig window;
        window.radius = radius;
        window.values.resize(static_cast<std::size_t>(2 * radius + 1));
        for (std::int64_t i = -radius; i <= radius; ++i)
            window.values[static_cast<std::size_t>(i + radius)] =
                rng::bernoulli(cfg.p, cfg.seed, sample, static_cast<std::uint64_t>(i)) ? 1 : 0;
        const std::vector<LevelConfig> levels = evolve(window, rule, cfg.depth);
        bool all_one = true, all_zero = true;
        for (int n = cfg.stabilize_from; n <= cfg.depth; ++n) {
            const int v = levels[static_cast<std::size_t>(n)].at(0);
            all_one = all_one && v == 1;
            all_zero = all_zero && v == 0;
        }
        if (all_one) ++counters[0];
        if (all_zero) ++counters[1];
    }
};

StabilizationReport finish_stabilization(const LocalRule& rule, const mc::McConfig& cfg,
                                         const std::vector<std::uint64_t>& counts) {
    StabilizationReport rep;
    rep.config = cfg;
    rep.ones = mc::report_from_counts(counts[0], cfg.samples, cfg.seed);
    rep.zeros = mc::report_from_counts(counts[1], cfg.samples, cfg.seed);
    rep.ones.meta["symbol"] = "1";
    rep.zeros.meta["symbol"] = "0";
    rep.ones.meta["from"] = std::to_string(cfg.stabilize_from);
    rep.zeros.meta["from"] = std::to_string(cfg.stabilize_from);
    rep.ones.meta["depth"] = std::to_string(cfg.depth);
    rep.zeros.meta["depth"] = std::to_string(cfg.depth);

    const std::vector<double> orbit = iterate_dynamics(rule, cfg.p, cfg.depth);
    double miss_one = 0.0, miss_zero = 0.0, prod_one = 1.0, prod_zero = 1.0;
    for (int n = cfg.stabilize_from; n <= cfg.depth; ++n) {
        const double q = orbit[static_cast<std::size_t>(n)];
        miss_one += 1.0 - q;
        miss_zero += q;
        prod_one *= q;
        prod_zero *= 1.0 - q;
    }
    rep.union_lower_one = 1.0 - miss_one;
    rep.union_lower_zero = 1.0 - miss_zero;
    rep.product_ref_one = prod_one;
    rep.product_ref_zero = prod_zero;
    return rep;
}

StabilizationKernel make_kernel(const LocalRule& rule, const mc::McConfig& cfg) {
    validate(rule);
    require_binary(rule, "stabilization_probe");
    mc::validate(cfg);
    const std::int64_t radius = required_radius(rule, cfg.depth);
    check_budget(static_cast<std::uint64_t>(2 * radius + 1), "stabilization window");
    return StabilizationKernel{rule, cfg, radius};
}

}  // namespace

StabilizationReport stabilization_probe(const LocalRule& rule, const mc::McConfig& cfg) {
    const StabilizationKernel kernel = make_kernel(rule, cfg);
    const auto counts = mc::tally(cfg.samples, 2, cfg.workers, kernel);
    return finish_stabilization(rule, cfg, counts);
}

StabilizationReport stabilization_probe_serial(const LocalRule& rule, const mc::McConfig& cfg) {
    const StabilizationKernel kernel = make_kernel(rule, cfg);
    const auto counts = mc::tally_serial(cfg.samples, 2, kernel);
    return finish_stabilization(rule, cfg, counts);
}

std::optional<std::vector<int>> central_moving_symmetry(const LocalRule& rule) {
    validate(rule);
    if (rule.width() > 5)
        throw budget_error("central_moving_symmetry caps the argument count at 5 (w! search), got " +
                           std::to_string(rule.width()));
    if (rule.alphabet.size() > 4)
        throw budget_error("central_moving_symmetry caps the alphabet size at 4, got " +
                           std::to_string(rule.alphabet.size()));

    const int w = rule.width();
    const int centre = rule.ell + rule.range;
    const RadixCodec c = rule.codec();
    std::vector<int> sigma(static_cast<std::size_t>(w));
    std::iota(sigma.begin(), sigma.end(), 0);
    std::vector<int> digits(static_cast<std::size_t>(w));
    std::vector<int> permuted(static_cast<std::size_t>(w));
    do {
        if (sigma[static_cast<std::size_t>(centre)] == centre) continue;
        bool invariant = true;
        for (std::uint64_t idx = 0; idx < c.total() && invariant; ++idx) {
            c.decode(idx, digits);
            for (int i = 0; i < w; ++i)
                permuted[static_cast<std::size_t>(i)] =
                    digits[static_cast<std::size_t>(sigma[static_cast<std::size_t>(i)])];
            invariant = rule.table[c.encode(permuted)] == rule.table[idx];
        }
        if (invariant) return sigma;
    } while (std::next_permutation(sigma.begin(), sigma.end()));
    return std::nullopt;
}

}  // namespace zerone::renorm
