#include "zerone/probe.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <set>

namespace zerone::probe {

void validate(const WindowEvent& e) {
    info::validate(e.alphabet);
    if (e.window.empty()) throw validation_error("window event needs a non-empty window");
    std::set<sym::Index> seen;
    for (sym::Index k : e.window)
        if (!seen.insert(k).second)
            throw validation_error("window index " + std::to_string(k) + " repeats");
    if (!e.member) throw validation_error("window event has no membership function");
}

sym::CylinderEvent materialize(const WindowEvent& e) {
    validate(e);
    return sym::CylinderEvent::from_predicate(e.window, e.alphabet, e.member);
}

void validate(const Sampler& s) { info::validate(s.site_dist); }

int Sampler::value_at(std::uint64_t seed, std::uint64_t sample, sym::Index site) const {
    const std::uint64_t key = kind == Kind::copy ? 0 : static_cast<std::uint64_t>(site);
    const double u = rng::unit(seed, sample, key);
    double cum = 0.0;
    for (std::size_t i = 0; i + 1 < site_dist.probs.size(); ++i) {
        cum += site_dist.probs[i];
        if (u < cum) return static_cast<int>(i);
    }
    return static_cast<int>(site_dist.probs.size()) - 1;
}

namespace {

bool window_hit(const WindowEvent& e, const Sampler& sampler, std::uint64_t seed,
                std::uint64_t sample, std::vector<int>& scratch) {
    scratch.resize(e.window.size());
    for (std::size_t i = 0; i < e.window.size(); ++i)
        scratch[i] = sampler.value_at(seed, sample, e.window[i]);
    return e.member(scratch);
}

bool cylinder_hit(const sym::CylinderEvent& e, const Sampler& sampler, std::uint64_t seed,
                  std::uint64_t sample, std::vector<int>& scratch) {
    scratch.resize(e.window.size());
    for (std::size_t i = 0; i < e.window.size(); ++i)
        scratch[i] = sampler.value_at(seed, sample, e.window[i]);
    return e.contains(scratch);
}

template <class RunLevel>
std::vector<mc::McReport> curve_impl(const EventFamily& family, const Sampler& sampler,
                                     std::uint64_t seed, int levels, std::uint64_t samples,
                                     RunLevel&& run_level) {
    validate(sampler);
    if (levels < 0) throw validation_error("levels must be >= 0");
    if (samples < 1) throw validation_error("samples must be >= 1");

    std::vector<mc::McReport> out;
    std::size_t prev_window = 0;
    bool monotone = true;
    double prev_d = 1.0;
    for (int n = 0; n <= levels; ++n) {
        const WindowEvent e = family.generator(n);
        validate(e);
        if (e.window.size() < prev_window)
            throw validation_error("event family windows must be non-decreasing in the level");
        prev_window = e.window.size();
        if (!(e.alphabet == sampler.site_dist.alphabet))
            throw validation_error("event alphabet differs from the sampler's");

        const std::uint64_t hits = run_level(e);
        mc::McReport rep = mc::report_from_counts(hits, samples, seed);
        const double d = std::min(rep.estimate, 1.0 - rep.estimate);
        if (n > 0 && d > prev_d + 1e-12) monotone = false;
        prev_d = d;
        rep.meta["level"] = std::to_string(n);
        rep.meta["d_n_monotone_prefix"] = monotone ? "true" : "false";
        out.push_back(std::move(rep));
    }
    return out;
}

}  // namespace

std::vector<mc::McReport> event_probability_curve(const EventFamily& family,
                                                  const Sampler& sampler, std::uint64_t seed,
                                                  int levels, std::uint64_t samples,
                                                  int workers) {
    return curve_impl(family, sampler, seed, levels, samples, [&](const WindowEvent& e) {
        return mc::tally(samples, 1, workers,
                         [&](std::uint64_t s, std::vector<std::uint64_t>& c) {
                             std::vector<int> scratch;
                             if (window_hit(e, sampler, seed, s, scratch)) ++c[0];
                         })[0];
    });
}

std::vector<mc::McReport> event_probability_curve_serial(const EventFamily& family,
                                                         const Sampler& sampler,
                                                         std::uint64_t seed, int levels,
                                                         std::uint64_t samples) {
    return curve_impl(family, sampler, seed, levels, samples, [&](const WindowEvent& e) {
        std::vector<int> scratch;
        return mc::tally_serial(samples, 1, [&](std::uint64_t s, std::vector<std::uint64_t>& c) {
            if (window_hit(e, sampler, seed, s, scratch)) ++c[0];
        })[0];
    });
}

double empirical_mi(std::span<const std::pair<int, int>> pairs) {
    if (pairs.size() < 2)
        throw validation_error("empirical_mi needs at least 2 samples, got " +
                               std::to_string(pairs.size()));
    std::array<std::array<std::uint64_t, 2>, 2> counts{{{0, 0}, {0, 0}}};
    for (const auto& [y, z] : pairs) {
        if ((y != 0 && y != 1) || (z != 0 && z != 1))
            throw validation_error("empirical_mi pairs must be indicator bits");
        ++counts[static_cast<std::size_t>(y)][static_cast<std::size_t>(z)];
    }
    const double n = static_cast<double>(pairs.size());
    info::JointDist j;
    j.coords = {info::Alphabet{{"0", "1"}}, info::Alphabet{{"0", "1"}}};
    j.probs = {static_cast<double>(counts[0][0]) / n, static_cast<double>(counts[0][1]) / n,
               static_cast<double>(counts[1][0]) / n, static_cast<double>(counts[1][1]) / n};
    return info::mutual_information(j, 2.0);
}

namespace {

std::size_t mixing_validate(const Sampler& sampler, const sym::CylinderEvent& v,
                            const std::vector<sym::Index>& k_window,
                            const std::vector<sym::CylinderEvent>& w_family,
                            std::uint64_t samples) {
    validate(sampler);
    sym::validate(v);
    if (samples < 1) throw validation_error("samples must be >= 1");
    const std::set<sym::Index> k_set(k_window.begin(), k_window.end());
    for (std::size_t i = 0; i < w_family.size(); ++i) {
        sym::validate(w_family[i]);
        for (sym::Index idx : w_family[i].window)
            if (k_set.count(idx))
                throw validation_error("W event " + std::to_string(i) +
                                       " touches the K window at index " + std::to_string(idx));
    }
    return w_family.size();
}

double mixing_from_counts(const std::vector<std::uint64_t>& counts, std::uint64_t samples,
                          std::size_t n_w) {
    if (n_w == 0) return 0.0;  // vacuous supremum
    const double n = static_cast<double>(samples);
    const double pv = static_cast<double>(counts[0]) / n;
    double best = 0.0;
    for (std::size_t i = 0; i < n_w; ++i) {
        const double pw = static_cast<double>(counts[1 + 2 * i]) / n;
        const double pvw = static_cast<double>(counts[2 + 2 * i]) / n;
        best = std::max(best, std::abs(pvw - pv * pw));
    }
    return best;
}

struct MixingKernel {
    const Sampler& sampler;
    const sym::CylinderEvent& v;
    const std::vector<sym::CylinderEvent>& w_family;
    std::uint64_t seed;

    void operator()(std::uint64_t s, std::vector<std::uint64_t>& c) const {
        std::vector<int> scratch;
        const bool hit_v = cylinder_hit(v, sampler, seed, s, scratch);
        if (hit_v) ++c[0];
        for (std::size_t i = 0; i < w_family.size(); ++i) {
            const bool hit_w = cylinder_hit(w_family[i], sampler, seed, s, scratch);
            if (hit_w) ++c[1 + 2 * i];
            if (hit_v && hit_w) ++c[2 + 2 * i];
        }
    }
};

}  // namespace

double mixing_probe(const Sampler& sampler, const sym::CylinderEvent& v,
                    const std::vector<sym::Index>& k_window,
                    const std::vector<sym::CylinderEvent>& w_family, std::uint64_t samples,
                    std::uint64_t seed, int workers) {
    const std::size_t n_w = mixing_validate(sampler, v, k_window, w_family, samples);
    const MixingKernel kernel{sampler, v, w_family, seed};
    const auto counts = mc::tally(samples, 1 + 2 * n_w, workers, kernel);
    return mixing_from_counts(counts, samples, n_w);
}

double mixing_probe_serial(const Sampler& sampler, const sym::CylinderEvent& v,
                           const std::vector<sym::Index>& k_window,
                           const std::vector<sym::CylinderEvent>& w_family,
                           std::uint64_t samples, std::uint64_t seed) {
    const std::size_t n_w = mixing_validate(sampler, v, k_window, w_family, samples);
    const MixingKernel kernel{sampler, v, w_family, seed};
    const auto counts = mc::tally_serial(samples, 1 + 2 * n_w, kernel);
    return mixing_from_counts(counts, samples, n_w);
}

EventFamily stabilized_by_family(const renorm::LocalRule& rule, int depth, int symbol) {
    renorm::validate(rule);
    if (depth < 0) throw validation_error("depth must be >= 0");
    if (symbol < 0 || static_cast<std::size_t>(symbol) >= rule.alphabet.size())
        throw validation_error("stabilization symbol out of alphabet range");

    EventFamily family;
    family.description = "trace equals symbol " + std::to_string(symbol) +
                         " from level n through depth " + std::to_string(depth);
    family.generator = [rule, depth, symbol](int n) {
        if (n < 0 || n > depth)
            throw validation_error("stabilized-by level outside [0, depth]");
        const std::int64_t radius = renorm::required_radius(rule, depth);
        WindowEvent e;
        for (std::int64_t i = -radius; i <= radius; ++i) e.window.push_back(i);
        e.alphabet = rule.alphabet;
        e.member = [rule, depth, symbol, n, radius](std::span<const int> config) {
            renorm::LevelConfig c;
            c.radius = radius;
            c.values.assign(config.begin(), config.end());
            const auto levels = renorm::evolve(c, rule, depth);
            for (int k = n; k <= depth; ++k)
                if (levels[static_cast<std::size_t>(k)].at(0) != symbol) return false;
            return true;
        };
        return e;
    };
    return family;
}

EventFamily constant_site_family(sym::Index site, int symbol, info::Alphabet alphabet) {
    info::validate(alphabet);
    EventFamily family;
    family.description = "a_" + std::to_string(site) + " equals symbol " +
                         std::to_string(symbol) + " at every level";
    family.generator = [site, symbol, alphabet](int) {
        WindowEvent e;
        e.window = {site};
        e.alphabet = alphabet;
        e.member = [symbol](std::span<const int> config) { return config[0] == symbol; };
        return e;
    };
    return family;
}

EventFamily full_family(info::Alphabet alphabet) {
    info::validate(alphabet);
    EventFamily family;
    family.description = "full space at every level";
    family.generator = [alphabet](int) {
        WindowEvent e;
        e.window = {0};
        e.alphabet = alphabet;
        e.member = [](std::span<const int>) { return true; };
        return e;
    };
    return family;
}

}  // namespace zerone::probe
