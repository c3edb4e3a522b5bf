#ifndef SPSLAB_PIT_HPP
#define SPSLAB_PIT_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "spslab/circuit.hpp"

namespace spslab {

/// Rank bound for simple minimal identities: 3k^2 over the rationals,
/// ceil(3k^2 lg(2d)) over other fields.
struct RankBound {
    int k = 0;
    int d = 0;
    FieldSpec field;
    long value = 0;
};
RankBound rank_bound(int k, int d, const FieldSpec& field);

/// A hitting set for SigmaPiSigma(k,d,n) circuits: the Vandermonde-power
/// substitution x_i <- sum_{j<=m} alpha^{ij} y_j composed with the grid
/// {0..d}^m, over alpha in {1..2nd(R+1)+1}, with m = min(n, R+1).
struct HittingSet {
    int k = 0, d = 0, n = 0;
    FieldSpec field;
    long rank_bound_value = 0;   // R (0 for the k=1 special case)
    int subst_vars = 0;          // m
    long alpha_count = 0;        // |A|
    std::size_t bit_bound = 0;   // max coordinate bit-length
    std::vector<std::vector<Scalar>> points;
};
/// rank_bound_override, when >= 0, replaces the theorem bound R; intended
/// for validating larger k over small prime fields where the full |A| would
/// not fit (test-only knob).
HittingSet hitting_set(int k, int d, int n, const FieldSpec& field,
                       std::size_t point_cap = caps::kHittingPoints,
                       long rank_bound_override = -1);

using PointOracle = std::function<Scalar(const std::vector<Scalar>&)>;

struct BlackboxResult {
    bool zero = true;
    std::optional<std::vector<Scalar>> witness;  // first nonzero point
    bool empty_warning = false;                  // vacuous ZERO on an empty set
};
BlackboxResult blackbox_test(const PointOracle& oracle, const HittingSet& h);

struct RandomTestResult {
    bool probably_zero = true;
    std::optional<std::vector<Scalar>> witness;
    long sample_space = 0;        // per-coordinate sample count S
    bool degenerate_bound = false;  // F_p with p <= d: error bound is useless
};
/// Seeded random evaluation at `trials` points with coordinates from
/// {0..max(2d,100)} (all of F_p over prime fields); per-trial error <= d/S.
RandomTestResult schwartz_zippel_test(const SPSCircuit& c, int trials, std::uint64_t seed);

}  // namespace spslab

#endif
