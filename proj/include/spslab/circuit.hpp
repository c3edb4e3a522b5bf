#ifndef SPSLAB_CIRCUIT_HPP
#define SPSLAB_CIRCUIT_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "spslab/poly.hpp"

namespace spslab {

/// A multiplication term c * prod(forms), c nonzero, every form nonzero,
/// repetitions allowed. An empty form list is the constant term c.
struct MultTerm {
    Scalar coeff;
    std::vector<FormVec> forms;

    MultTerm() = default;
    MultTerm(Scalar c, std::vector<FormVec> fs);

    int degree() const { return static_cast<int>(forms.size()); }
    Poly expand(int nvars, std::size_t cap = caps::kExpandMonomials) const;
    Scalar eval(const std::vector<Scalar>& point) const;

    /// Exact list equality (coeff and the ordered form list).
    bool operator==(const MultTerm& o) const {
        return coeff == o.coeff && forms == o.forms;
    }
};

/// Similarity of multiplication terms as polynomials: equal degree and equal
/// multisets of normalized forms.
bool terms_similar(const MultTerm& a, const MultTerm& b);

/// A SigmaPiSigma(k,d,n) circuit: a sum of k multiplication terms.
struct SPSCircuit {
    FieldSpec field;
    int nvars = 0;
    std::vector<MultTerm> terms;

    SPSCircuit() : field(FieldSpec::rational()) {}
    SPSCircuit(const FieldSpec& f, int n, std::vector<MultTerm> t);

    int fanin() const { return static_cast<int>(terms.size()); }
    /// Common degree of a homogeneous circuit; max term degree otherwise.
    int degree() const;
    bool is_homogeneous_degrees() const;

    std::vector<FormVec> all_forms() const;
    SPSCircuit subcircuit(const std::vector<int>& indices) const;
};

Scalar evaluate(const SPSCircuit& c, const std::vector<Scalar>& point);
Poly expand(const SPSCircuit& c, std::size_t cap = caps::kExpandMonomials);

/// Equalizes term degrees by padding with powers of one variable. If
/// constant_var >= 0 that variable (the parser's constant slot) is reused,
/// otherwise a fresh variable is appended when padding is needed. An
/// already homogeneous circuit is returned unchanged.
SPSCircuit homogenize(const SPSCircuit& c, int constant_var = -1);

struct GcdSimple {
    MultTerm gcd;      // monic: coefficient one
    SPSCircuit simple; // scalars absorbed into the terms
};
GcdSimple gcd_and_simple(const SPSCircuit& c);
bool is_simple(const SPSCircuit& c);
int circuit_rank(const SPSCircuit& c);

enum class ZeroBackend { Expand, EvalGrid };

/// Reduced-echelon basis of { beta : sum beta_i T_i = 0 }.
std::vector<std::vector<Scalar>> term_dependencies(const SPSCircuit& c,
                                                   ZeroBackend backend = ZeroBackend::Expand);
int independent_fanin(const SPSCircuit& c);
/// Greedy-first maximal linearly independent term subset (0-based indices).
std::vector<int> greedy_independent_terms(const SPSCircuit& c);

bool is_minimal(const SPSCircuit& c, int fanin_cap = caps::kSubsetFanin);
/// The first (in subset order) nonempty proper subset whose terms sum to
/// zero, if any.
std::optional<std::vector<int>> vanishing_proper_subset(const SPSCircuit& c,
                                                        int fanin_cap = caps::kSubsetFanin);

struct CircuitProfile {
    bool is_zero = false;
    bool is_simple = false;
    std::optional<bool> is_minimal;
    int rank = 0;
    std::optional<int> ind_fanin;
    int degree = 0;
    int fanin = 0;
    int nvars = 0;
};
CircuitProfile profile(const SPSCircuit& c, bool with_exponential_checks);

/// sum_i lambda_i (x + a_i y)^(k-2): a simple, minimal, rank-2 identity;
/// lambda is the Vandermonde nullspace vector scaled so lambda_k = 1.
SPSCircuit gen_interpolation_identity(int k, const FieldSpec& field);

/// Seeded random homogeneous circuit with k terms of degree d in n
/// variables; reproducible across platforms.
SPSCircuit gen_random_circuit(int k, int d, int n, const FieldSpec& field, std::uint64_t seed);

/// For a minimal identity and a maximal independent term set, the
/// strongly minimal identities D_i = sum_{j in N_i} alpha_{i,j} T_j + T_i
/// for each term i outside the basis.
struct StrongDecomposition {
    int term;                   // index i outside the basis
    std::vector<int> support;   // N_i (indices into the basis set)
    std::vector<Scalar> alphas; // aligned with support
    SPSCircuit identity;        // D_i
};
std::vector<StrongDecomposition> decompose_strongly_minimal(const SPSCircuit& c,
                                                            const std::vector<int>& basis_set);

MultTerm apply(const Transform& t, const MultTerm& term);
SPSCircuit apply(const Transform& t, const SPSCircuit& c);

}  // namespace spslab

#endif
