// Exact information-theoretic computations on finite discrete distributions:
// entropy, mutual information, total variation, the dependence coefficient,
// and the O'Connell inequality report (exact and almost-independent forms).
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "zerone/common.hpp"

namespace zerone::info {

struct Alphabet {
    std::vector<std::string> symbols;

    std::size_t size() const { return symbols.size(); }
    bool operator==(const Alphabet&) const = default;
};

// Throws validation_error when labels are empty or repeat.
void validate(const Alphabet& a);

// Finite discrete distribution over an alphabet.
struct Dist {
    Alphabet alphabet;
    std::vector<double> probs;
};

// probs >= 0, sum within 1e-12 of 1, one prob per symbol.
void validate(const Dist& d);

// Joint distribution over n >= 1 coordinates, stored densely in mixed-radix
// order (first coordinate most significant).
struct JointDist {
    std::vector<Alphabet> coords;
    std::vector<double> probs;

    std::size_t arity() const { return coords.size(); }
    RadixCodec codec() const;
};

void validate(const JointDist& j);

struct InfoReport {
    double entropy = 0.0;             // H(V) in the report base
    std::vector<double> mi_terms;     // I(V:W_i), declared order
    double gap = 0.0;                 // H(V) - sum mi_terms
    double gamma_star = 0.0;          // max_i I(W_i : (W_1..W_{i-1}))
};

// Shannon entropy, -sum p log_base p with 0 log 0 = 0. base must be > 1.
double entropy(const Dist& d, double base = 2.0);

// Entropy of the full joint (helper shared by the MI routines).
double joint_entropy(const JointDist& j, double base = 2.0);

// Marginal of one coordinate.
Dist marginal(const JointDist& j, std::size_t coord);

// I(X:Y) = H(X) + H(Y) - H(X,Y) for a 2-coordinate joint. Values within
// 1e-9 below zero clamp to 0; anything more negative signals a broken input
// and throws std::logic_error.
double mutual_information(const JointDist& j, double base = 2.0);

// Regroup coordinates into blocks (tuple-valued coordinates), marginalizing
// every coordinate not mentioned. Blocks must be disjoint.
JointDist group(const JointDist& j, const std::vector<std::vector<std::size_t>>& partition);

// Total variation distance, sup_A |p(A) - q(A)| = half the L1 distance.
double tv_distance(const Dist& p, const Dist& q);

// max over subset pairs (A,B) of |P(AxB) - P(A)P(B)| for a 2-coordinate
// joint. Exact; rejects alphabets larger than 16 per coordinate because the
// definition quantifies over arbitrary subsets.
double sup_dependence(const JointDist& j, int workers = 1);
double sup_dependence_serial(const JointDist& j);

// H(V) vs sum_i I(V:W_i) where V is the designated coordinate and the W's
// are the remaining coordinates in declared order.
InfoReport oconnell_report(const JointDist& j, std::size_t v_coord, double base = 2.0);

// Product of independent marginals as one joint.
JointDist product_dist(const std::vector<Dist>& ms);

inline constexpr std::size_t kSupDependenceMaxAlphabet = 16;

}  // namespace zerone::info
