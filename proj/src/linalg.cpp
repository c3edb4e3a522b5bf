#include "spslab/linalg.hpp"

#include <algorithm>
#include <sstream>

#include "spslab/errors.hpp"

namespace spslab {

FormVec FormVec::unit(const FieldSpec& f, int nvars, int i) {
    FormVec v(f, nvars);
    v.coeffs.at(static_cast<std::size_t>(i)) = Scalar::one(f);
    return v;
}

FormVec FormVec::from_ints(const FieldSpec& f, const std::vector<long>& ints) {
    FormVec v(f, static_cast<int>(ints.size()));
    for (std::size_t i = 0; i < ints.size(); ++i) v.coeffs[i] = Scalar::from_int(f, ints[i]);
    return v;
}

bool FormVec::is_zero() const {
    for (const auto& c : coeffs)
        if (!c.is_zero()) return false;
    return true;
}

FormVec FormVec::operator+(const FormVec& o) const {
    if (dim() != o.dim()) throw input_error("form dimension mismatch");
    FormVec r(field, coeffs);
    for (int i = 0; i < dim(); ++i) r.coeffs[i] += o.coeffs[i];
    return r;
}

FormVec FormVec::operator-(const FormVec& o) const {
    if (dim() != o.dim()) throw input_error("form dimension mismatch");
    FormVec r(field, coeffs);
    for (int i = 0; i < dim(); ++i) r.coeffs[i] -= o.coeffs[i];
    return r;
}

FormVec FormVec::scaled(const Scalar& c) const {
    FormVec r(field, coeffs);
    for (auto& x : r.coeffs) x *= c;
    return r;
}

Scalar FormVec::leading() const {
    for (const auto& c : coeffs)
        if (!c.is_zero()) return c;
    throw input_error("leading coefficient of the zero form");
}

FormVec FormVec::normalized() const {
    if (is_zero()) return *this;
    return scaled(leading().inverse());
}

bool FormVec::operator==(const FormVec& o) const {
    return field == o.field && coeffs == o.coeffs;
}

int FormVec::cmp(const FormVec& o) const {
    if (dim() != o.dim()) return dim() < o.dim() ? -1 : 1;
    for (int i = 0; i < dim(); ++i) {
        int c = coeffs[i].cmp(o.coeffs[i]);
        if (c != 0) return c;
    }
    return 0;
}

std::string FormVec::str() const {
    std::ostringstream os;
    os << '[';
    for (int i = 0; i < dim(); ++i) {
        if (i) os << ',';
        os << coeffs[i].str();
    }
    os << ']';
    return os.str();
}

void Subspace::check_dim(const FormVec& v) const {
    if (v.dim() != nvars_) throw input_error("form dimension mismatch with subspace");
}

FormVec Subspace::reduce(const FormVec& v) const {
    check_dim(v);
    FormVec r = v;
    for (std::size_t i = 0; i < rows_.size(); ++i) {
        const Scalar& c = r.coeffs[static_cast<std::size_t>(pivots_[i])];
        if (!c.is_zero()) r = r - rows_[i].scaled(c);
    }
    return r;
}

bool Subspace::insert(const FormVec& v) {
    FormVec r = reduce(v);
    if (r.is_zero()) return false;
    int piv = 0;
    while (r.coeffs[static_cast<std::size_t>(piv)].is_zero()) ++piv;
    r = r.scaled(r.coeffs[static_cast<std::size_t>(piv)].inverse());
    // Eliminate the new pivot from existing rows, then insert in pivot order.
    for (auto& row : rows_) {
        const Scalar& c = row.coeffs[static_cast<std::size_t>(piv)];
        if (!c.is_zero()) row = row - r.scaled(c);
    }
    auto pos = std::lower_bound(pivots_.begin(), pivots_.end(), piv);
    std::size_t idx = static_cast<std::size_t>(pos - pivots_.begin());
    pivots_.insert(pos, piv);
    rows_.insert(rows_.begin() + static_cast<std::ptrdiff_t>(idx), r);
    return true;
}

Subspace Subspace::span_of(const FieldSpec& f, int nvars, const std::vector<FormVec>& vecs) {
    Subspace s(f, nvars);
    for (const auto& v : vecs) s.insert(v);
    return s;
}

std::optional<std::vector<Scalar>> Subspace::in_span(const FormVec& v) const {
    check_dim(v);
    std::vector<Scalar> coords(rows_.size(), Scalar::zero(field_));
    FormVec r = v;
    for (std::size_t i = 0; i < rows_.size(); ++i) {
        const Scalar c = r.coeffs[static_cast<std::size_t>(pivots_[i])];
        if (!c.is_zero()) {
            coords[i] = c;
            r = r - rows_[i].scaled(c);
        }
    }
    if (!r.is_zero()) return std::nullopt;
    return coords;
}

Subspace Subspace::joined(const Subspace& o) const {
    Subspace s = *this;
    for (const auto& row : o.rows_) s.insert(row);
    return s;
}

bool Subspace::operator==(const Subspace& o) const {
    // Reduced echelon bases are canonical.
    return field_ == o.field_ && nvars_ == o.nvars_ && pivots_ == o.pivots_ && rows_ == o.rows_;
}

int rank_of(const FieldSpec& f, int nvars, const std::vector<FormVec>& vecs) {
    for (const auto& v : vecs)
        if (v.dim() != nvars) throw input_error("rank_of: form dimension mismatch");
    return Subspace::span_of(f, nvars, vecs).rank();
}

int quotient_rank(const std::vector<FormVec>& s, const Subspace& k) {
    Subspace joined = k;
    for (const auto& v : s) joined.insert(v);
    return joined.rank() - k.rank();
}

namespace {

// Gauss-Jordan inverse; throws input_error when singular.
std::vector<std::vector<Scalar>> invert(const FieldSpec& f,
                                        std::vector<std::vector<Scalar>> m) {
    const std::size_t n = m.size();
    std::vector<std::vector<Scalar>> inv(n, std::vector<Scalar>(n, Scalar::zero(f)));
    for (std::size_t i = 0; i < n; ++i) inv[i][i] = Scalar::one(f);
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        while (piv < n && m[piv][col].is_zero()) ++piv;
        if (piv == n) throw input_error("matrix is singular");
        std::swap(m[piv], m[col]);
        std::swap(inv[piv], inv[col]);
        Scalar d = m[col][col].inverse();
        for (std::size_t j = 0; j < n; ++j) {
            m[col][j] *= d;
            inv[col][j] *= d;
        }
        for (std::size_t row = 0; row < n; ++row) {
            if (row == col || m[row][col].is_zero()) continue;
            Scalar c = m[row][col];
            for (std::size_t j = 0; j < n; ++j) {
                m[row][j] -= c * m[col][j];
                inv[row][j] -= c * inv[col][j];
            }
        }
    }
    return inv;
}

}  // namespace

Transform::Transform(const FieldSpec& f, std::vector<std::vector<Scalar>> matrix)
    : field_(f), mat_(std::move(matrix)) {
    inv_ = invert(f, mat_);
    // matrix * inverse = identity, checked at construction.
    const std::size_t n = mat_.size();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            Scalar s = Scalar::zero(f);
            for (std::size_t t = 0; t < n; ++t) s += mat_[i][t] * inv_[t][j];
            Scalar expect = i == j ? Scalar::one(f) : Scalar::zero(f);
            if (s != expect) throw structural_error("transform inverse check failed");
        }
    }
}

Transform Transform::identity(const FieldSpec& f, int nvars) {
    std::vector<std::vector<Scalar>> m(static_cast<std::size_t>(nvars),
                                       std::vector<Scalar>(static_cast<std::size_t>(nvars),
                                                           Scalar::zero(f)));
    for (int i = 0; i < nvars; ++i) m[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] =
        Scalar::one(f);
    return Transform(f, std::move(m));
}

FormVec Transform::mul(const FieldSpec& f, const FormVec& v,
                       const std::vector<std::vector<Scalar>>& m) {
    const std::size_t n = m.size();
    if (v.coeffs.size() != n) throw input_error("transform dimension mismatch");
    FormVec r(f, static_cast<int>(n));
    for (std::size_t j = 0; j < n; ++j) {
        Scalar s = Scalar::zero(f);
        for (std::size_t i = 0; i < n; ++i) {
            if (!v.coeffs[i].is_zero()) s += v.coeffs[i] * m[i][j];
        }
        r.coeffs[j] = s;
    }
    return r;
}

FormVec Transform::apply(const FormVec& v) const { return mul(field_, v, mat_); }
FormVec Transform::apply_inverse(const FormVec& v) const { return mul(field_, v, inv_); }

Transform coordinate_transform(const Subspace& s, const std::optional<FormVec>& extra) {
    const FieldSpec& f = s.field();
    const int n = s.nvars();
    if (extra && s.contains(*extra))
        throw precondition_error("coordinate_transform: extra form lies in the subspace");

    // Rows of B: the subspace basis, then completing unit vectors, then
    // extra last. The transform is v |-> v B^{-1}.
    std::vector<FormVec> rows = s.basis();
    Subspace cur = s;
    if (extra) cur.insert(*extra);
    std::vector<FormVec> middle;
    for (int j = 0; j < n && cur.rank() < n; ++j) {
        FormVec e = FormVec::unit(f, n, j);
        if (cur.insert(e)) middle.push_back(e);
    }
    rows.insert(rows.end(), middle.begin(), middle.end());
    if (extra) rows.push_back(*extra);

    std::vector<std::vector<Scalar>> b;
    b.reserve(rows.size());
    for (const auto& r : rows) b.push_back(r.coeffs);
    std::vector<std::vector<Scalar>> binv = invert(f, b);
    return Transform(f, std::move(binv));
}

OrthoDecomposition orthogonal_decompose(const FormVec& ell, const FormVec& y0,
                                        const Subspace& u_space, const Subspace& k_space) {
    const FieldSpec& f = ell.field;
    const int n = ell.dim();
    // Hypotheses: y0 not in U+K, U cap K = {0}.
    Subspace uk = u_space.joined(k_space);
    if (uk.rank() != u_space.rank() + k_space.rank())
        throw structural_error("orthogonal_decompose: U and K intersect nontrivially");
    if (uk.contains(y0))
        throw structural_error("orthogonal_decompose: y0 lies in U+K");

    std::vector<std::vector<Scalar>> columns;
    columns.push_back(y0.coeffs);
    for (const auto& r : u_space.basis()) columns.push_back(r.coeffs);
    for (const auto& r : k_space.basis()) columns.push_back(r.coeffs);
    auto sol = solve_dense(f, columns, ell.coeffs);
    if (!sol)
        throw structural_error("orthogonal_decompose: form outside F*y0 + U + K");
    OrthoDecomposition d{(*sol)[0], FormVec(f, n), FormVec(f, n)};
    std::size_t idx = 1;
    for (const auto& r : u_space.basis()) d.u = d.u + r.scaled((*sol)[idx++]);
    for (const auto& r : k_space.basis()) d.v = d.v + r.scaled((*sol)[idx++]);
    return d;
}

std::optional<std::vector<Scalar>> solve_dense(const FieldSpec& f,
                                               const std::vector<std::vector<Scalar>>& columns,
                                               const std::vector<Scalar>& rhs) {
    const std::size_t cols = columns.size();
    const std::size_t rows = rhs.size();
    for (const auto& c : columns)
        if (c.size() != rows) throw input_error("solve_dense: ragged columns");

    // Augmented elimination over [A | rhs].
    std::vector<std::vector<Scalar>> a(rows, std::vector<Scalar>(cols + 1, Scalar::zero(f)));
    for (std::size_t j = 0; j < cols; ++j)
        for (std::size_t i = 0; i < rows; ++i) a[i][j] = columns[j][i];
    for (std::size_t i = 0; i < rows; ++i) a[i][cols] = rhs[i];

    std::vector<int> pivot_col_of_row;
    std::size_t row = 0;
    for (std::size_t col = 0; col < cols && row < rows; ++col) {
        std::size_t piv = row;
        while (piv < rows && a[piv][col].is_zero()) ++piv;
        if (piv == rows) continue;
        std::swap(a[piv], a[row]);
        Scalar d = a[row][col].inverse();
        for (std::size_t j = col; j <= cols; ++j) a[row][j] *= d;
        for (std::size_t r2 = 0; r2 < rows; ++r2) {
            if (r2 == row || a[r2][col].is_zero()) continue;
            Scalar c = a[r2][col];
            for (std::size_t j = col; j <= cols; ++j) a[r2][j] -= c * a[row][j];
        }
        pivot_col_of_row.push_back(static_cast<int>(col));
        ++row;
    }
    for (std::size_t r2 = row; r2 < rows; ++r2)
        if (!a[r2][cols].is_zero()) return std::nullopt;

    std::vector<Scalar> x(cols, Scalar::zero(f));
    for (std::size_t i = 0; i < pivot_col_of_row.size(); ++i)
        x[static_cast<std::size_t>(pivot_col_of_row[i])] = a[i][cols];
    return x;
}

std::vector<std::vector<Scalar>> nullspace_of_columns(
    const FieldSpec& f, const std::vector<std::vector<Scalar>>& columns) {
    const std::size_t cols = columns.size();
    std::size_t rows = 0;
    for (const auto& c : columns) rows = std::max(rows, c.size());
    for (const auto& c : columns)
        if (c.size() != rows) throw input_error("nullspace: ragged columns");

    std::vector<std::vector<Scalar>> a(rows, std::vector<Scalar>(cols, Scalar::zero(f)));
    for (std::size_t j = 0; j < cols; ++j)
        for (std::size_t i = 0; i < rows; ++i) a[i][j] = columns[j][i];

    std::vector<int> pivot_of_col(cols, -1);
    std::size_t row = 0;
    for (std::size_t col = 0; col < cols && row < rows; ++col) {
        std::size_t piv = row;
        while (piv < rows && a[piv][col].is_zero()) ++piv;
        if (piv == rows) continue;
        std::swap(a[piv], a[row]);
        Scalar d = a[row][col].inverse();
        for (std::size_t j = col; j < cols; ++j) a[row][j] *= d;
        for (std::size_t r2 = 0; r2 < rows; ++r2) {
            if (r2 == row || a[r2][col].is_zero()) continue;
            Scalar c = a[r2][col];
            for (std::size_t j = col; j < cols; ++j) a[r2][j] -= c * a[row][j];
        }
        pivot_of_col[col] = static_cast<int>(row);
        ++row;
    }

    std::vector<std::vector<Scalar>> basis;
    for (std::size_t col = 0; col < cols; ++col) {
        if (pivot_of_col[col] != -1) continue;
        std::vector<Scalar> v(cols, Scalar::zero(f));
        v[col] = Scalar::one(f);
        for (std::size_t j = 0; j < cols; ++j) {
            if (pivot_of_col[j] != -1)
                v[j] = -a[static_cast<std::size_t>(pivot_of_col[j])][col];
        }
        basis.push_back(std::move(v));
    }
    return basis;
}

}  // namespace spslab
