#ifndef SPSLAB_LINALG_HPP
#define SPSLAB_LINALG_HPP

#include <optional>
#include <string>
#include <vector>

#include "spslab/scalar.hpp"

namespace spslab {

/// A linear form sum a_i x_i, stored as its coefficient vector.
/// The zero vector is representable; operations that need nonzero forms
/// check explicitly.
struct FormVec {
    FieldSpec field;
    std::vector<Scalar> coeffs;

    FormVec() : field(FieldSpec::rational()) {}
    FormVec(const FieldSpec& f, int nvars)
        : field(f), coeffs(static_cast<std::size_t>(nvars), Scalar::zero(f)) {}
    FormVec(const FieldSpec& f, std::vector<Scalar> c) : field(f), coeffs(std::move(c)) {}

    static FormVec unit(const FieldSpec& f, int nvars, int i);
    static FormVec from_ints(const FieldSpec& f, const std::vector<long>& v);

    int dim() const { return static_cast<int>(coeffs.size()); }
    bool is_zero() const;

    FormVec operator+(const FormVec& o) const;
    FormVec operator-(const FormVec& o) const;
    FormVec scaled(const Scalar& c) const;
    FormVec operator-() const { return scaled(-Scalar::one(field)); }

    /// First nonzero coefficient scaled to one; canonical representative of
    /// the similarity class. Zero vector normalizes to itself.
    FormVec normalized() const;
    /// First nonzero coefficient (throws on zero vector).
    Scalar leading() const;

    bool operator==(const FormVec& o) const;
    bool operator!=(const FormVec& o) const { return !(*this == o); }
    int cmp(const FormVec& o) const;
    bool operator<(const FormVec& o) const { return cmp(o) < 0; }

    std::string str() const;  // "[c1,c2,...]", canonical scalars, no spaces
};

/// A linear subspace of forms, kept as a reduced row-echelon basis with
/// leftmost pivots and deterministic row order (pivot column ascending).
class Subspace {
public:
    Subspace() : field_(FieldSpec::rational()), nvars_(0) {}
    Subspace(const FieldSpec& f, int nvars) : field_(f), nvars_(nvars) {}

    static Subspace zero(const FieldSpec& f, int nvars) { return Subspace(f, nvars); }
    static Subspace span_of(const FieldSpec& f, int nvars, const std::vector<FormVec>& vecs);

    const FieldSpec& field() const { return field_; }
    int nvars() const { return nvars_; }
    int rank() const { return static_cast<int>(rows_.size()); }
    const std::vector<FormVec>& basis() const { return rows_; }
    const std::vector<int>& pivots() const { return pivots_; }

    /// Inserts a vector, restoring reduced echelon form. Returns true if the
    /// rank grew.
    bool insert(const FormVec& v);

    /// Residual of v after elimination against the basis.
    FormVec reduce(const FormVec& v) const;
    bool contains(const FormVec& v) const { return reduce(v).is_zero(); }

    /// Coordinates of v over the echelon basis rows, if v lies in the span.
    std::optional<std::vector<Scalar>> in_span(const FormVec& v) const;

    Subspace joined(const Subspace& o) const;
    bool operator==(const Subspace& o) const;

private:
    FieldSpec field_;
    int nvars_;
    std::vector<FormVec> rows_;
    std::vector<int> pivots_;

    void check_dim(const FormVec& v) const;
};

/// Dimension of the span; 0 for empty or all-zero input.
int rank_of(const FieldSpec& f, int nvars, const std::vector<FormVec>& vecs);

/// rank(S union basis(K)) - rank(K): the rank of S viewed in the quotient
/// space modulo K.
int quotient_rank(const std::vector<FormVec>& s, const Subspace& k);

/// An invertible change of coordinates on the space of forms. The matrix
/// acts on coefficient row-vectors from the right; the inverse is cached
/// and checked at construction.
class Transform {
public:
    Transform(const FieldSpec& f, std::vector<std::vector<Scalar>> matrix);

    const FieldSpec& field() const { return field_; }
    int dim() const { return static_cast<int>(mat_.size()); }

    FormVec apply(const FormVec& v) const;
    FormVec apply_inverse(const FormVec& v) const;

    static Transform identity(const FieldSpec& f, int nvars);

private:
    FieldSpec field_;
    std::vector<std::vector<Scalar>> mat_;
    std::vector<std::vector<Scalar>> inv_;

    static FormVec mul(const FieldSpec& f, const FormVec& v,
                       const std::vector<std::vector<Scalar>>& m);
};

/// Invertible map sending S onto sp(x_1..x_r), r = rank(S), and `extra`
/// (which must lie outside S) to x_n.
Transform coordinate_transform(const Subspace& s,
                               const std::optional<FormVec>& extra = std::nullopt);

struct OrthoDecomposition {
    Scalar alpha;
    FormVec u;
    FormVec v;
};

/// Unique expression ell = alpha*y0 + u + v with u in U and v in K, under
/// the checked hypotheses y0 not in U+K and U cap K = {0}.
OrthoDecomposition orthogonal_decompose(const FormVec& ell, const FormVec& y0,
                                        const Subspace& u_space, const Subspace& k_space);

/// Solves M x = rhs for dense square/rectangular M (columns as given).
/// Returns a particular solution, or nullopt when inconsistent.
std::optional<std::vector<Scalar>> solve_dense(const FieldSpec& f,
                                               const std::vector<std::vector<Scalar>>& columns,
                                               const std::vector<Scalar>& rhs);

/// Reduced-echelon nullspace basis of the matrix whose columns are given.
std::vector<std::vector<Scalar>> nullspace_of_columns(
    const FieldSpec& f, const std::vector<std::vector<Scalar>>& columns);

}  // namespace spslab

#endif
