#ifndef SPSLAB_SCALAR_HPP
#define SPSLAB_SCALAR_HPP

#include <cstdint>
#include <string>

#include <gmpxx.h>

#include "spslab/errors.hpp"

namespace spslab {

enum class FieldKind { Rational, Prime };

/// The base field: the rationals, or F_p for a prime p.
struct FieldSpec {
    FieldKind kind = FieldKind::Rational;
    std::uint64_t modulus = 0;  // set iff kind == Prime

    static FieldSpec rational() { return FieldSpec{FieldKind::Rational, 0}; }

    /// Verifies primality by trial division. p is bounded at desk scale.
    static FieldSpec prime(std::uint64_t p);

    bool is_prime_field() const { return kind == FieldKind::Prime; }
    std::uint64_t size_or_zero() const { return is_prime_field() ? modulus : 0; }

    bool operator==(const FieldSpec& o) const {
        return kind == o.kind && modulus == o.modulus;
    }
    bool operator!=(const FieldSpec& o) const { return !(*this == o); }

    std::string str() const;
};

/// An exact field element. Rationals are kept in lowest terms with a
/// positive denominator (mpq canonical form); prime-field elements are the
/// least non-negative residue.
class Scalar {
public:
    Scalar() : field_(FieldSpec::rational()), q_(0) {}

    static Scalar zero(const FieldSpec& f) { return from_int(f, 0); }
    static Scalar one(const FieldSpec& f) { return from_int(f, 1); }
    static Scalar from_int(const FieldSpec& f, long v);
    static Scalar from_mpq(const FieldSpec& f, const mpq_class& q);
    static Scalar residue(const FieldSpec& f, std::uint64_t r);

    /// Accepts "p/q" or an integer literal; reduces into the field.
    static Scalar parse(const FieldSpec& f, const std::string& text);

    const FieldSpec& field() const { return field_; }
    bool is_zero() const;
    bool is_one() const;

    Scalar operator+(const Scalar& o) const;
    Scalar operator-(const Scalar& o) const;
    Scalar operator-() const;
    Scalar operator*(const Scalar& o) const;
    Scalar operator/(const Scalar& o) const;  // throws input_error on 0
    Scalar inverse() const;

    Scalar& operator+=(const Scalar& o) { return *this = *this + o; }
    Scalar& operator-=(const Scalar& o) { return *this = *this - o; }
    Scalar& operator*=(const Scalar& o) { return *this = *this * o; }

    bool operator==(const Scalar& o) const;
    bool operator!=(const Scalar& o) const { return !(*this == o); }

    /// Total order used only for deterministic sorting/keys.
    int cmp(const Scalar& o) const;
    bool operator<(const Scalar& o) const { return cmp(o) < 0; }

    /// Rational value (rational fields only).
    const mpq_class& rational_value() const { return q_; }
    /// Residue value (prime fields only).
    std::uint64_t residue_value() const { return r_; }

    /// Canonical text: integer, or "p/q" with q > 1; residues print as
    /// the least non-negative integer.
    std::string str() const;

private:
    FieldSpec field_;
    mpq_class q_;
    std::uint64_t r_ = 0;

    void check_same_field(const Scalar& o) const;
};

}  // namespace spslab

#endif
