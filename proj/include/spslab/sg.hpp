#ifndef SPSLAB_SG_HPP
#define SPSLAB_SG_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "spslab/nucleus.hpp"

namespace spslab {

/// A multiple-free set of nonzero vectors: no two are scalar multiples
/// (checked at construction).
struct SGConfig {
    FieldSpec field;
    int nvars = 0;
    std::vector<FormVec> vectors;

    SGConfig(const FieldSpec& f, int n, std::vector<FormVec> vecs);
    int rank() const;
};

struct SGResult {
    bool closed = false;
    std::vector<FormVec> witness;  // k independent vectors spanning no other point
};

/// Closed iff every k linearly independent vectors of S span at least k+1
/// vectors of S. The witness (when not closed) is the first violating
/// subset in lexicographic order over the sorted normalized vectors.
SGResult is_sg_closed(const SGConfig& s, int k, std::size_t cap = caps::kSgSubsets);
SGResult sg_operator(const SGConfig& s, int k, std::size_t cap = caps::kSgSubsets);

/// The greedy disjoint-support procedure: returns the first selected vector,
/// whose support over the given basis has size at least rank/(k-1).
FormVec heavy_vector(const SGConfig& s, int k, const std::vector<FormVec>& basis_vectors);

/// The two skew lines over Q: six vectors of rank 4, SG_3-closed.
SGConfig gen_skew_lines();

/// The F_p construction: S1 = {e_1..e_{k-1}, (k-1)^{-1} sum e_i} and S2 =
/// all nonzero vectors on the r tail coordinates, all extended by a final
/// coordinate 1. Size k + p^r - 1, rank k + r.
struct FpConfigParts {
    SGConfig all;
    SGConfig s1;
    SGConfig s2;
};
FpConfigParts gen_fp_config_parts(int k, int r, std::uint64_t p);
SGConfig gen_fp_config(int k, int r, std::uint64_t p);

/// Truncation: for a form with decomposition alpha*y0 + u + v (v in K,
/// alpha nonzero), the coordinate vector of y0 + alpha^{-1} u over the
/// basis (y0, U-rows), of length 1 + rank(U).
FormVec trun(const FormVec& ell, const MonicFrame& frame);
/// Truncation of a list, deduplicated to a set (first-occurrence order).
std::vector<FormVec> trun_set(const std::vector<FormVec>& forms, const MonicFrame& frame);

// ---------------------------------------------------------------------------
// Partitions, chains, and the unbroken-chain search.

using Partition = std::vector<std::vector<int>>;  // disjoint classes covering 0..k-1

struct PartitionCollection {
    int universe = 0;
    std::vector<Partition> partitions;
};

struct Chain {
    std::vector<std::vector<int>> sets;
    std::vector<int> source_partitions;  // distinct indices into the collection
};

bool partition_is_trivial(const Partition& p);
/// Some class meets S properly (nonempty, not all of S).
bool partition_splits(const Partition& p, const std::vector<int>& s);
void validate_partition(int universe, const Partition& p);

/// Definitional re-check: sets come from the claimed distinct partitions,
/// the complement of their union is nonempty and preserved by each source.
bool chain_is_unbroken(const PartitionCollection& pc, const Chain& chain);

/// The constructive search: merge-and-recurse while the splitting property
/// fails, then the phase/round labelling; the result is re-verified, with an
/// exhaustive fallback for universes of size <= 8.
std::optional<Chain> find_unbroken_chain(const PartitionCollection& pc);
std::optional<Chain> exhaustive_unbroken_chain(const PartitionCollection& pc);

// ---------------------------------------------------------------------------
// Families and the split lemma.

struct FamilyEntry {
    FormVec rep;                // normalized first-occurrence class representative
    std::vector<MultTerm> fam;  // one entry per term (coefficient one)
    Partition part;             // similarity partition of term indices
};
struct FamilyTable {
    std::vector<FamilyEntry> entries;
};
FamilyTable family_table(const SPSCircuit& c, const Subspace& k_space);

/// Checks the split property for explicitly given tuple partitions: for
/// every nonempty index set I and class choices with nonempty complement S,
/// some chosen partition splits S.
struct SplitViolation {
    std::vector<int> tuple_indices;
    std::vector<int> class_choices;
    std::vector<int> complement;
};
std::optional<SplitViolation> split_lemma_violation(const std::vector<Partition>& parts, int k,
                                                    std::size_t cap = caps::kSgSubsets);

struct SplitLemmaReport {
    bool vacuous = false;  // SG operator returned Closed (or k < 3)
    bool holds = true;
    std::optional<SplitViolation> violation;
};
SplitLemmaReport verify_split_lemma(const SPSCircuit& c, const NucleusReport& report,
                                    const MonicFrame& frame);

// ---------------------------------------------------------------------------
// Rank-bound verification and growth monitoring.

/// SG_k(F,d): 2(k-1) over the rationals, 9k*ceil(lg max(d,2)) otherwise.
long sg_rank_bound(const FieldSpec& field, int k, int d);

struct BoundRow {
    std::string name;
    std::string bound;
    long measured = 0;
    bool pass = false;
};
struct RankBoundReport {
    int fanin = 0;
    int ind_fanin = 0;
    int degree = 0;
    int rank = 0;
    int nucleus_rank = 0;
    int non_nucleus_rank = 0;
    std::vector<BoundRow> rows;
    bool all_pass = true;
};
RankBoundReport verify_rank_bounds(const SPSCircuit& c);

struct GrowthReport {
    std::size_t size = 0;
    int rank = 0;
    int k = 0;
    bool closed = false;           // SG_k closure status of the input
    bool below_threshold = false;  // rank < 9k: trivially consistent regime
    bool satisfied = true;         // |S| >= 2^(rank/9k) when applicable
};
GrowthReport sg_growth_check(const SGConfig& s, int k);

}  // namespace spslab

#endif
