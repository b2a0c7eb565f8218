// Monte Carlo plumbing. Kernels accumulate integer counters per sample and
// the merge is a commutative sum, so any worker count produces bit-identical
// results for a fixed (seed, samples). A serial tally is kept as the
// reference implementation for tests and the benchmark.
#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "zerone/common.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace zerone::mc {

struct McConfig {
    double p = 0.5;
    int depth = 0;
    int stabilize_from = 0;
    std::uint64_t samples = 1;
    std::uint64_t seed = 0;
    int workers = 1;
};

void validate(const McConfig& cfg);

struct McReport {
    double estimate = 0.0;
    double ci_low = 0.0;
    double ci_high = 1.0;
    std::uint64_t samples = 0;
    std::uint64_t seed = 0;
    std::map<std::string, std::string> meta;
};

McReport report_from_counts(std::uint64_t hits, std::uint64_t samples, std::uint64_t seed);

// fn(sample_index, counters) bumps integer counters for one sample.
template <class PerSample>
std::vector<std::uint64_t> tally_serial(std::uint64_t samples, std::size_t n_counters,
                                        PerSample&& fn) {
    std::vector<std::uint64_t> counters(n_counters, 0);
    for (std::uint64_t s = 0; s < samples; ++s) fn(s, counters);
    return counters;
}

template <class PerSample>
std::vector<std::uint64_t> tally(std::uint64_t samples, std::size_t n_counters, int workers,
                                 PerSample&& fn) {
#ifdef _OPENMP
    std::vector<std::uint64_t> counters(n_counters, 0);
    const std::int64_t n = static_cast<std::int64_t>(samples);
#pragma omp parallel num_threads(workers > 0 ? workers : 1)
    {
        std::vector<std::uint64_t> local(n_counters, 0);
#pragma omp for schedule(static)
        for (std::int64_t s = 0; s < n; ++s) fn(static_cast<std::uint64_t>(s), local);
#pragma omp critical
        for (std::size_t i = 0; i < n_counters; ++i) counters[i] += local[i];
    }
    return counters;
#else
    (void)workers;
    return tally_serial(samples, n_counters, fn);
#endif
}

}  // namespace zerone::mc
