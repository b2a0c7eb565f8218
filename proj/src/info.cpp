#include "zerone/info.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace zerone::info {

namespace {

constexpr double kSumTolerance = 1e-12;
constexpr double kMiClamp = 1e-9;

double check_base(double base) {
    if (!(base > 1.0)) throw validation_error("log base must be > 1");
    return std::log(base);
}

double entropy_of_probs(const std::vector<double>& probs, double log_base) {
    double h = 0.0;
    for (double p : probs) {
        if (p > 0.0) h -= p * std::log(p);
    }
    return h / log_base;
}

}  // namespace

void validate(const Alphabet& a) {
    if (a.symbols.empty()) throw validation_error("alphabet must have at least one symbol");
    std::set<std::string> seen;
    for (const auto& s : a.symbols) {
        if (!seen.insert(s).second)
            throw validation_error("alphabet symbol '" + s + "' repeats");
    }
}

void validate(const Dist& d) {
    validate(d.alphabet);
    if (d.probs.size() != d.alphabet.size())
        throw validation_error("distribution has " + std::to_string(d.probs.size()) +
                               " probabilities for " + std::to_string(d.alphabet.size()) +
                               " symbols");
    double sum = 0.0;
    for (double p : d.probs) {
        if (!(p >= 0.0)) throw validation_error("negative probability in distribution");
        sum += p;
    }
    if (std::abs(sum - 1.0) > kSumTolerance)
        throw validation_error("distribution sums to " + std::to_string(sum) + ", not 1");
}

RadixCodec JointDist::codec() const {
    std::vector<std::size_t> sizes;
    sizes.reserve(coords.size());
    for (const auto& a : coords) sizes.push_back(a.size());
    return RadixCodec(sizes);
}

void validate(const JointDist& j) {
    if (j.coords.empty()) throw validation_error("joint distribution needs at least one coordinate");
    for (const auto& a : j.coords) validate(a);
    const RadixCodec codec = j.codec();
    if (j.probs.size() != codec.total())
        throw validation_error("joint table has " + std::to_string(j.probs.size()) +
                               " cells, expected " + std::to_string(codec.total()));
    double sum = 0.0;
    for (double p : j.probs) {
        if (!(p >= 0.0)) throw validation_error("negative probability in joint distribution");
        sum += p;
    }
    if (std::abs(sum - 1.0) > kSumTolerance)
        throw validation_error("joint distribution sums to " + std::to_string(sum) + ", not 1");
}

double entropy(const Dist& d, double base) {
    validate(d);
    return entropy_of_probs(d.probs, check_base(base));
}

double joint_entropy(const JointDist& j, double base) {
    validate(j);
    return entropy_of_probs(j.probs, check_base(base));
}

Dist marginal(const JointDist& j, std::size_t coord) {
    validate(j);
    if (coord >= j.arity()) throw validation_error("marginal coordinate out of range");
    const RadixCodec codec = j.codec();
    Dist out{j.coords[coord], std::vector<double>(j.coords[coord].size(), 0.0)};
    std::vector<int> digits(j.arity());
    for (std::uint64_t idx = 0; idx < codec.total(); ++idx) {
        codec.decode(idx, digits);
        out.probs[static_cast<std::size_t>(digits[coord])] += j.probs[idx];
    }
    return out;
}

double mutual_information(const JointDist& j, double base) {
    validate(j);
    if (j.arity() != 2)
        throw validation_error("mutual_information needs exactly 2 coordinates, got " +
                               std::to_string(j.arity()));
    const double log_base = check_base(base);
    const std::size_t nx = j.coords[0].size();
    const std::size_t ny = j.coords[1].size();
    std::vector<double> px(nx, 0.0), py(ny, 0.0);
    for (std::size_t x = 0; x < nx; ++x)
        for (std::size_t y = 0; y < ny; ++y) {
            const double p = j.probs[x * ny + y];
            px[x] += p;
            py[y] += p;
        }
    const double mi = entropy_of_probs(px, log_base) + entropy_of_probs(py, log_base) -
                      entropy_of_probs(j.probs, log_base);
    if (mi < -kMiClamp)
        throw std::logic_error("mutual information " + std::to_string(mi) +
                               " below the -1e-9 clamp band");
    return mi < 0.0 ? 0.0 : mi;
}

JointDist group(const JointDist& j, const std::vector<std::vector<std::size_t>>& partition) {
    validate(j);
    if (partition.empty()) throw validation_error("group needs at least one block");
    std::set<std::size_t> used;
    for (const auto& block : partition) {
        if (block.empty()) throw validation_error("group block is empty");
        for (std::size_t c : block) {
            if (c >= j.arity())
                throw validation_error("group block index " + std::to_string(c) + " out of range");
            if (!used.insert(c).second)
                throw validation_error("group blocks overlap at coordinate " + std::to_string(c));
        }
    }

    JointDist out;
    std::vector<RadixCodec> block_codecs;
    for (const auto& block : partition) {
        Alphabet prod;
        std::vector<std::size_t> sizes;
        for (std::size_t c : block) sizes.push_back(j.coords[c].size());
        RadixCodec bc{sizes};
        prod.symbols.reserve(bc.total());
        std::vector<int> digits(block.size());
        for (std::uint64_t v = 0; v < bc.total(); ++v) {
            bc.decode(v, digits);
            std::string label;
            for (std::size_t i = 0; i < block.size(); ++i) {
                if (i) label += ',';
                label += j.coords[block[i]].symbols[static_cast<std::size_t>(digits[i])];
            }
            prod.symbols.push_back(std::move(label));
        }
        out.coords.push_back(std::move(prod));
        block_codecs.push_back(std::move(bc));
    }

    std::vector<std::size_t> out_sizes;
    for (const auto& a : out.coords) out_sizes.push_back(a.size());
    const RadixCodec out_codec{out_sizes};
    check_budget(out_codec.total(), "group");
    out.probs.assign(out_codec.total(), 0.0);

    const RadixCodec codec = j.codec();
    std::vector<int> digits(j.arity());
    std::vector<int> block_digits;
    std::vector<int> out_digits(partition.size());
    for (std::uint64_t idx = 0; idx < codec.total(); ++idx) {
        const double p = j.probs[idx];
        if (p == 0.0) continue;
        codec.decode(idx, digits);
        for (std::size_t b = 0; b < partition.size(); ++b) {
            block_digits.clear();
            for (std::size_t c : partition[b]) block_digits.push_back(digits[c]);
            out_digits[b] = static_cast<int>(block_codecs[b].encode(block_digits));
        }
        out.probs[out_codec.encode(out_digits)] += p;
    }
    return out;
}

double tv_distance(const Dist& p, const Dist& q) {
    validate(p);
    validate(q);
    if (!(p.alphabet == q.alphabet))
        throw validation_error("tv_distance requires matching alphabets");
    double l1 = 0.0;
    for (std::size_t i = 0; i < p.probs.size(); ++i) l1 += std::abs(p.probs[i] - q.probs[i]);
    return 0.5 * l1;
}

namespace {

// For a fixed A, the maximizing B collects the positive (or negative)
// deltas, so the inner supremum is exact in O(|Y|).
double best_over_b(const std::vector<double>& joint, const std::vector<double>& px,
                   const std::vector<double>& py, std::size_t nx, std::size_t ny,
                   std::uint64_t mask_a) {
    double pa = 0.0;
    for (std::size_t x = 0; x < nx; ++x)
        if (mask_a & (std::uint64_t{1} << x)) pa += px[x];
    double pos = 0.0, neg = 0.0;
    for (std::size_t y = 0; y < ny; ++y) {
        double pay = 0.0;
        for (std::size_t x = 0; x < nx; ++x)
            if (mask_a & (std::uint64_t{1} << x)) pay += joint[x * ny + y];
        const double delta = pay - pa * py[y];
        if (delta > 0.0)
            pos += delta;
        else
            neg -= delta;
    }
    return std::max(pos, neg);
}

void supdep_prepare(const JointDist& j, std::vector<double>& px, std::vector<double>& py) {
    validate(j);
    if (j.arity() != 2)
        throw validation_error("sup_dependence needs exactly 2 coordinates, got " +
                               std::to_string(j.arity()));
    for (std::size_t c = 0; c < 2; ++c) {
        if (j.coords[c].size() > kSupDependenceMaxAlphabet)
            throw budget_error(
                "sup_dependence coordinate " + std::to_string(c) + " has alphabet size " +
                std::to_string(j.coords[c].size()) +
                "; the exhaustive 2^|X|*2^|Y| subset enumeration is capped at alphabet size 16");
    }
    const std::size_t nx = j.coords[0].size();
    const std::size_t ny = j.coords[1].size();
    px.assign(nx, 0.0);
    py.assign(ny, 0.0);
    for (std::size_t x = 0; x < nx; ++x)
        for (std::size_t y = 0; y < ny; ++y) {
            px[x] += j.probs[x * ny + y];
            py[y] += j.probs[x * ny + y];
        }
}

}  // namespace

double sup_dependence_serial(const JointDist& j) {
    std::vector<double> px, py;
    supdep_prepare(j, px, py);
    const std::size_t nx = j.coords[0].size();
    const std::size_t ny = j.coords[1].size();
    double best = 0.0;
    for (std::uint64_t a = 1; a + 1 < (std::uint64_t{1} << nx); ++a)
        best = std::max(best, best_over_b(j.probs, px, py, nx, ny, a));
    return best;
}

double sup_dependence(const JointDist& j, int workers) {
    std::vector<double> px, py;
    supdep_prepare(j, px, py);
    const std::size_t nx = j.coords[0].size();
    const std::size_t ny = j.coords[1].size();
    const std::int64_t n_masks = static_cast<std::int64_t>(std::uint64_t{1} << nx);
    double best = 0.0;
#ifdef _OPENMP
#pragma omp parallel for schedule(static) reduction(max : best) \
    num_threads(workers > 0 ? workers : 1)
#endif
    for (std::int64_t a = 1; a < n_masks - 1; ++a)
        best = std::max(best,
                        best_over_b(j.probs, px, py, nx, ny, static_cast<std::uint64_t>(a)));
    (void)workers;
    return best;
}

InfoReport oconnell_report(const JointDist& j, std::size_t v_coord, double base) {
    validate(j);
    if (j.arity() < 2)
        throw validation_error("oconnell_report needs a V and at least one W coordinate");
    if (v_coord >= j.arity()) throw validation_error("v_coord out of range");

    std::vector<std::size_t> w_coords;
    for (std::size_t c = 0; c < j.arity(); ++c)
        if (c != v_coord) w_coords.push_back(c);

    InfoReport report;
    report.entropy = entropy(marginal(j, v_coord), base);

    for (std::size_t w : w_coords)
        report.mi_terms.push_back(mutual_information(group(j, {{v_coord}, {w}}), base));

    report.gamma_star = 0.0;
    std::vector<std::size_t> prefix;
    for (std::size_t i = 0; i < w_coords.size(); ++i) {
        if (i >= 1) {
            const double g = mutual_information(group(j, {{w_coords[i]}, prefix}), base);
            report.gamma_star = std::max(report.gamma_star, g);
        }
        prefix.push_back(w_coords[i]);
    }

    report.gap = report.entropy;
    for (double t : report.mi_terms) report.gap -= t;
    return report;
}

JointDist product_dist(const std::vector<Dist>& ms) {
    if (ms.empty()) throw validation_error("product_dist needs at least one factor");
    JointDist out;
    std::vector<std::size_t> sizes;
    for (const auto& d : ms) {
        validate(d);
        out.coords.push_back(d.alphabet);
        sizes.push_back(d.alphabet.size());
    }
    const RadixCodec codec{sizes};
    check_budget(codec.total(), "product_dist");
    out.probs.assign(codec.total(), 0.0);
    std::vector<int> digits(ms.size());
    for (std::uint64_t idx = 0; idx < codec.total(); ++idx) {
        codec.decode(idx, digits);
        double p = 1.0;
        for (std::size_t c = 0; c < ms.size(); ++c)
            p *= ms[c].probs[static_cast<std::size_t>(digits[c])];
        out.probs[idx] = p;
    }
    return out;
}

}  // namespace zerone::info
