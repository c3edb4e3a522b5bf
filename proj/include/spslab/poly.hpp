#ifndef SPSLAB_POLY_HPP
#define SPSLAB_POLY_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "spslab/linalg.hpp"

namespace spslab {

namespace caps {
/// Default cap on sparse expansion size (monomial count).
inline constexpr std::size_t kExpandMonomials = 1'000'000;
/// Cap on the row count of a degree-slice linear system.
inline constexpr std::size_t kSliceRows = 200'000;
/// Fanin cap for exponential subset checks.
inline constexpr int kSubsetFanin = 12;
/// Cap on enumerated k-subsets in Sylvester-Gallai closure checks.
inline constexpr std::size_t kSgSubsets = 2'000'000;
/// Cap on emitted hitting-set points.
inline constexpr std::size_t kHittingPoints = 10'000'000;
}  // namespace caps

/// Exponent vector; index i is the exponent of x_{i+1}.
using Monomial = std::vector<std::uint8_t>;

int monomial_degree(const Monomial& m);

/// All monomials of the given total degree over the indicated variables
/// (deterministic lexicographic-by-construction order).
std::vector<Monomial> monomials_of_degree(int nvars, int degree,
                                          const std::vector<int>& support);

/// A sparse multivariate polynomial: exact map monomial -> nonzero Scalar.
class Poly {
public:
    Poly() : field_(FieldSpec::rational()), nvars_(0) {}
    Poly(const FieldSpec& f, int nvars) : field_(f), nvars_(nvars) {}

    static Poly constant(const FieldSpec& f, int nvars, const Scalar& c);
    static Poly from_form(const FormVec& v);

    const FieldSpec& field() const { return field_; }
    int nvars() const { return nvars_; }
    const std::map<Monomial, Scalar>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }

    /// Total degree; -1 for the zero polynomial.
    int degree() const;
    bool is_homogeneous() const;

    void add_term(const Monomial& m, const Scalar& c);

    Poly operator+(const Poly& o) const;
    Poly operator-(const Poly& o) const;
    Poly scaled(const Scalar& c) const;
    Poly mul_form(const FormVec& v, std::size_t cap = caps::kExpandMonomials) const;
    Poly mul(const Poly& o, std::size_t cap = caps::kExpandMonomials) const;

    Scalar eval(const std::vector<Scalar>& point) const;

    bool operator==(const Poly& o) const {
        return field_ == o.field_ && nvars_ == o.nvars_ && terms_ == o.terms_;
    }

    /// Coefficient column over a fixed monomial index (absent monomials are
    /// zero).
    std::vector<Scalar> coefficient_vector(const std::vector<Monomial>& index) const;

    /// Variables with a nonzero exponent somewhere.
    std::vector<int> support() const;

    std::string str() const;

private:
    FieldSpec field_;
    int nvars_;
    std::map<Monomial, Scalar> terms_;
};

}  // namespace spslab

#endif
