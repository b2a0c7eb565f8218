// Shared infrastructure: error taxonomy, enumeration budgets, the
// counter-based RNG contract, Wilson intervals, and mixed-radix codecs.
#pragma once

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace zerone {

// Exit-code taxonomy: validation -> 2, budget -> 3 (see cli).
class validation_error : public std::runtime_error {
public:
    explicit validation_error(const std::string& what) : std::runtime_error(what) {}
};

// A window or map does not cover the indices an operation needs.
class coverage_error : public validation_error {
public:
    explicit coverage_error(const std::string& what) : validation_error(what) {}
};

class budget_error : public std::runtime_error {
public:
    explicit budget_error(const std::string& what) : std::runtime_error(what) {}
};

// Enumeration budget in table cells. ZERONE_BUDGET overrides the default.
inline std::uint64_t enumeration_budget() {
    static const std::uint64_t kDefault = std::uint64_t{1} << 24;
    if (const char* env = std::getenv("ZERONE_BUDGET")) {
        char* end = nullptr;
        unsigned long long v = std::strtoull(env, &end, 10);
        if (end && *end == '\0' && v > 0) return v;
    }
    return kDefault;
}

inline void check_budget(std::uint64_t cells, const std::string& what) {
    const std::uint64_t limit = enumeration_budget();
    if (cells > limit) {
        throw budget_error(what + ": " + std::to_string(cells) +
                           " cells exceed the enumeration budget of " +
                           std::to_string(limit) + " (override with ZERONE_BUDGET)");
    }
}

namespace rng {

inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// The one RNG used everywhere: a pure function of (seed, sample, site).
// Worker count and evaluation order cannot affect any draw.
inline std::uint64_t at(std::uint64_t seed, std::uint64_t sample, std::uint64_t site) {
    std::uint64_t h = mix64(seed);
    h = mix64(h ^ (sample * 0xd6e8feb86659fd93ULL));
    h = mix64(h ^ (site * 0xa3b195354a39b70dULL));
    return h;
}

// Uniform in [0, 1), 53-bit mantissa.
inline double unit(std::uint64_t seed, std::uint64_t sample, std::uint64_t site) {
    return static_cast<double>(at(seed, sample, site) >> 11) * 0x1.0p-53;
}

inline bool bernoulli(double p, std::uint64_t seed, std::uint64_t sample, std::uint64_t site) {
    return unit(seed, sample, site) < p;
}

// Uniform integer in [0, n). Fixed-point multiply keeps it branch-free and
// platform-stable; fine for test-data generation.
inline std::uint64_t below(std::uint64_t n, std::uint64_t seed, std::uint64_t sample,
                           std::uint64_t site) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(at(seed, sample, site)) * n) >> 64);
}

}  // namespace rng

struct WilsonInterval {
    double low = 0.0;
    double high = 1.0;
};

// Wilson score interval at 95%; valid near 0/1 where zero-one behaviour lives.
inline WilsonInterval wilson95(std::uint64_t successes, std::uint64_t n) {
    if (n == 0) return {0.0, 1.0};
    constexpr double z = 1.959963984540054;
    const double nn = static_cast<double>(n);
    const double phat = static_cast<double>(successes) / nn;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / nn;
    const double centre = (phat + z2 / (2.0 * nn)) / denom;
    const double hw = (z / denom) * std::sqrt(phat * (1.0 - phat) / nn + z2 / (4.0 * nn * nn));
    return {std::max(0.0, centre - hw), std::min(1.0, centre + hw)};
}

// Mixed-radix codec over per-position sizes; the first position is the most
// significant digit (pinned so golden files are bit-exact).
class RadixCodec {
public:
    RadixCodec() = default;
    explicit RadixCodec(std::vector<std::size_t> sizes) : sizes_(std::move(sizes)) {
        total_ = 1;
        for (std::size_t s : sizes_) {
            if (s == 0) throw validation_error("radix position with zero size");
            if (total_ > (std::uint64_t{1} << 62) / s)
                throw budget_error("mixed-radix table size overflows 64 bits");
            total_ *= s;
        }
    }

    std::size_t positions() const { return sizes_.size(); }
    std::uint64_t total() const { return total_; }
    std::size_t size_at(std::size_t i) const { return sizes_[i]; }

    std::uint64_t encode(std::span<const int> digits) const {
        std::uint64_t idx = 0;
        for (std::size_t i = 0; i < sizes_.size(); ++i)
            idx = idx * sizes_[i] + static_cast<std::uint64_t>(digits[i]);
        return idx;
    }

    void decode(std::uint64_t idx, std::span<int> digits) const {
        for (std::size_t i = sizes_.size(); i-- > 0;) {
            digits[i] = static_cast<int>(idx % sizes_[i]);
            idx /= sizes_[i];
        }
    }

private:
    std::vector<std::size_t> sizes_;
    std::uint64_t total_ = 1;
};

}  // namespace zerone
