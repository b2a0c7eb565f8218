#include "zerone/mc.hpp"

namespace zerone::mc {

void validate(const McConfig& cfg) {
    if (!(cfg.p >= 0.0 && cfg.p <= 1.0))
        throw validation_error("Monte Carlo parameter p must lie in [0,1]");
    if (cfg.depth < 0) throw validation_error("depth must be >= 0");
    if (cfg.stabilize_from < 0 || cfg.stabilize_from > cfg.depth)
        throw validation_error("stabilize_from must satisfy 0 <= m <= depth");
    if (cfg.samples < 1) throw validation_error("samples must be >= 1");
}

McReport report_from_counts(std::uint64_t hits, std::uint64_t samples, std::uint64_t seed) {
    McReport r;
    r.samples = samples;
    r.seed = seed;
    r.estimate = samples ? static_cast<double>(hits) / static_cast<double>(samples) : 0.0;
    const WilsonInterval w = wilson95(hits, samples);
    r.ci_low = w.low;
    r.ci_high = w.high;
    return r;
}

}  // namespace zerone::mc
