#ifndef SPSLAB_NUCLEUS_HPP
#define SPSLAB_NUCLEUS_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "spslab/ideal.hpp"

namespace spslab {

/// An ordered node sequence: node j is an element of
/// nodes_of(T_{sources[j]}, radspan(base + nodes[0..j-1])).
struct Path {
    TermIdeal base;
    std::vector<MultTerm> nodes;
    std::vector<int> sources;  // 0-based term indices
    Subspace cumulative;       // radspan of base plus all nodes

    explicit Path(TermIdeal b) : base(std::move(b)), cumulative(base.radspan()) {}

    TermIdeal ideal() const { return base.with_all(nodes); }
    int length() const { return static_cast<int>(nodes.size()); }
};

/// Depth-first stream of all paths through the nodes of the prefix terms,
/// in node list order at each level.
class PathEnumerator {
public:
    PathEnumerator(const SPSCircuit& c, std::vector<int> prefix, TermIdeal base);
    std::optional<Path> next();

private:
    const SPSCircuit& circuit_;
    std::vector<int> prefix_;
    TermIdeal base_;
    struct Level {
        NodeSet options;
        std::size_t chosen;  // index into options of the current node
    };
    std::vector<Level> levels_;
    std::vector<Subspace> spans_;  // spans_[j]: radspan before level j
    bool started_ = false;
    bool done_ = false;

    bool descend();
    bool advance();
    Path emit() const;
};

std::vector<Path> all_paths(const SPSCircuit& c, const std::vector<int>& prefix,
                            const TermIdeal& base, std::size_t limit = 1 << 20);

/// C_{[i]'} = alpha * T_{i+1} != 0 modulo the path ideal: a sound witness
/// that the circuit is not zero modulo the path base.
struct Certificate {
    int prefix_len = 0;  // i
    Path path;
    Scalar alpha;        // nonzero
    int survivor = 0;    // 0-based index of T_{i+1}; always prefix_len
};

bool verify_certificate(const SPSCircuit& c, const Certificate& cert);
std::optional<Certificate> find_certificate(const SPSCircuit& c, const TermIdeal& base);

struct IdentityVerdict {
    bool is_zero = false;
    std::optional<Certificate> certificate;
};
IdentityVerdict path_identity_test(const SPSCircuit& c);

/// A subspace matching between two form lists: pairs (index in L(g),
/// index in L(h)) with the unique scale c such that h-form - c*(g-form)
/// lies in the stored subspace.
struct Matching {
    std::vector<std::pair<int, int>> pairs;
    std::vector<Scalar> scales;
    Subspace space;
};
struct MatchingPair {
    Matching in_space;    // forms inside the subspace (scales fixed at one)
    Matching complement;  // forms outside, matched classwise
};

std::optional<MatchingPair> compute_matching(const MultTerm& g, const MultTerm& h,
                                             const Subspace& u);
bool verify_matching(const MultTerm& g, const MultTerm& h, const Subspace& u,
                     const MatchingPair& m);
Scalar scaling_factor(const Matching& m);

enum class NucleusStage { MatNucleus, Nucleus };

struct NucleusReport {
    NucleusStage stage = NucleusStage::MatNucleus;
    Subspace k_space;
    std::vector<MatchingPair> matchings;  // T_1 matched to each T_i
    std::vector<MultTerm> k_terms;        // K_i = M(L_K(T_i)), coefficient one
    std::vector<Scalar> alphas;           // nucleus identity coefficients
    std::vector<int> indep;               // independent set (Nucleus stage)
};

/// Iterative matching construction for a minimal identity: rank(K) < k^2
/// and T_1 is K-matched to every term.
NucleusReport build_mat_nucleus(const SPSCircuit& c);

/// Extends the mat-nucleus until the nucleus terms over the independent set
/// are linearly independent; rank(K) < 2k^2.
NucleusReport build_nucleus(const SPSCircuit& c, const std::vector<int>& indep);
NucleusReport build_nucleus(const SPSCircuit& c);  // greedy-first independent set

/// The identity sum_i alpha_i K_i induced by the matchings.
SPSCircuit nucleus_identity(const SPSCircuit& c, const NucleusReport& report);

/// For every proper subset {s_1 < ... < s_r} with 1 < r < k, checks
/// K_{s_r} not in <K_{s_1},...,K_{s_{r-1}}>.
bool verify_clm_kmin(const SPSCircuit& c, const NucleusReport& report,
                     int fanin_cap = caps::kSubsetFanin);

/// A fixed decomposition L(R) = F*y0 + U + K together with an invertible
/// coordinate change fixing K under which every non-K form of the circuit
/// has a nonzero y0 coefficient.
struct MonicFrame {
    Transform tau;
    FormVec y0;
    Subspace u_space;
    Subspace k_space;
};
MonicFrame make_monic(const SPSCircuit& c, const Subspace& k, std::uint64_t seed);

}  // namespace spslab

#endif
