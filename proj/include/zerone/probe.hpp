// Empirical diagnostics for zero-one behaviour at finite size:
// event-probability curves over growing windows, the plug-in mutual
// information of sampled indicator pairs, and a finite-window mixing probe.
#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "zerone/common.hpp"
#include "zerone/info.hpp"
#include "zerone/mc.hpp"
#include "zerone/renorm.hpp"
#include "zerone/sym.hpp"

namespace zerone::probe {

// Cylinder event kept lazy: only membership evaluation, so windows can be
// far larger than the bitset form allows (sampling needs no enumeration).
struct WindowEvent {
    std::vector<sym::Index> window;
    info::Alphabet alphabet;
    std::function<bool(std::span<const int>)> member;
};

void validate(const WindowEvent& e);

// Materialize as a bitset event (budget applies) for exhaustive machinery.
sym::CylinderEvent materialize(const WindowEvent& e);

// Level-indexed cylinder events with non-decreasing windows.
struct EventFamily {
    std::function<WindowEvent(int)> generator;
    std::string description;
};

// Site process used by the probes. iid draws each site from site_dist
// independently; copy draws one symbol per sample and repeats it everywhere.
struct Sampler {
    enum class Kind { iid, copy };
    Kind kind = Kind::iid;
    info::Dist site_dist;

    int value_at(std::uint64_t seed, std::uint64_t sample, sym::Index site) const;
};

void validate(const Sampler& s);

// Per-level estimate of P(config in E_n). The zero-one diagnostic
// d_n = min(estimate, 1 - estimate) goes into the meta; its monotonicity is
// reported, never assumed.
std::vector<mc::McReport> event_probability_curve(const EventFamily& family,
                                                  const Sampler& sampler, std::uint64_t seed,
                                                  int levels, std::uint64_t samples,
                                                  int workers = 1);
std::vector<mc::McReport> event_probability_curve_serial(const EventFamily& family,
                                                         const Sampler& sampler,
                                                         std::uint64_t seed, int levels,
                                                         std::uint64_t samples);

// Plug-in mutual information (bits) of the empirical 2x2 joint of (y, z)
// indicator pairs. Needs at least two samples.
double empirical_mi(std::span<const std::pair<int, int>> pairs);

// Empirical max over the W family of |P(V and W) - P(V)P(W)|: a lower bound
// on the Kolmogorov-mixing supremum over all events outside K, and labeled
// as such by callers. Every W must be determined outside the K window.
double mixing_probe(const Sampler& sampler, const sym::CylinderEvent& v,
                    const std::vector<sym::Index>& k_window,
                    const std::vector<sym::CylinderEvent>& w_family, std::uint64_t samples,
                    std::uint64_t seed, int workers = 1);
double mixing_probe_serial(const Sampler& sampler, const sym::CylinderEvent& v,
                           const std::vector<sym::Index>& k_window,
                           const std::vector<sym::CylinderEvent>& w_family,
                           std::uint64_t samples, std::uint64_t seed);

// Built-in families.
//
// stabilized_by_family(rule, depth, symbol): level n maps to the event
// "a^k_0 = symbol for every k in [n, depth]" on the depth window, so the
// estimate climbs toward f^n(p) as n approaches depth.
EventFamily stabilized_by_family(const renorm::LocalRule& rule, int depth, int symbol);
// Event "a_site = symbol" at every level (negative control; not symmetric).
EventFamily constant_site_family(sym::Index site, int symbol, info::Alphabet alphabet);
// Full space at every level.
EventFamily full_family(info::Alphabet alphabet);

}  // namespace zerone::probe
