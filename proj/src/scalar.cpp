#include "spslab/scalar.hpp"

#include <sstream>

namespace spslab {

namespace {

constexpr std::uint64_t kMaxModulus = (1ull << 31);

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % p);
}

std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t p) {
    std::uint64_t r = 1 % p;
    a %= p;
    while (e) {
        if (e & 1) r = mulmod(r, a, p);
        a = mulmod(a, a, p);
        e >>= 1;
    }
    return r;
}

}  // namespace

FieldSpec FieldSpec::prime(std::uint64_t p) {
    if (p < 2) throw input_error("field modulus must be a prime >= 2");
    if (p > kMaxModulus) throw input_error("field modulus exceeds desk-scale bound 2^31");
    for (std::uint64_t d = 2; d * d <= p; ++d) {
        if (p % d == 0) throw input_error("field modulus " + std::to_string(p) + " is not prime");
    }
    return FieldSpec{FieldKind::Prime, p};
}

std::string FieldSpec::str() const {
    return is_prime_field() ? "prime " + std::to_string(modulus) : "rational";
}

Scalar Scalar::from_int(const FieldSpec& f, long v) {
    Scalar s;
    s.field_ = f;
    if (f.is_prime_field()) {
        long long m = static_cast<long long>(f.modulus);
        long long r = static_cast<long long>(v) % m;
        if (r < 0) r += m;
        s.r_ = static_cast<std::uint64_t>(r);
        s.q_ = 0;
    } else {
        s.q_ = v;
    }
    return s;
}

Scalar Scalar::from_mpq(const FieldSpec& f, const mpq_class& q) {
    if (f.is_prime_field()) {
        // Reduce num/den mod p; the denominator must be invertible.
        mpz_class p(static_cast<unsigned long>(f.modulus));
        mpz_class num = q.get_num() % p;
        if (num < 0) num += p;
        mpz_class den = q.get_den() % p;
        if (den == 0) throw input_error("denominator divisible by field characteristic");
        std::uint64_t n = num.get_ui();
        std::uint64_t d = den.get_ui();
        std::uint64_t inv = powmod(d, f.modulus - 2, f.modulus);
        return residue(f, mulmod(n, inv, f.modulus));
    }
    Scalar s;
    s.field_ = f;
    s.q_ = q;
    s.q_.canonicalize();
    return s;
}

Scalar Scalar::residue(const FieldSpec& f, std::uint64_t r) {
    if (!f.is_prime_field()) throw input_error("residue constructor requires a prime field");
    Scalar s;
    s.field_ = f;
    s.r_ = r % f.modulus;
    return s;
}

Scalar Scalar::parse(const FieldSpec& f, const std::string& text) {
    if (text.empty()) throw input_error("empty scalar literal");
    std::size_t slash = text.find('/');
    try {
        if (slash == std::string::npos) {
            mpz_class n(text);
            return from_mpq(f, mpq_class(n));
        }
        mpz_class n(text.substr(0, slash));
        mpz_class d(text.substr(slash + 1));
        if (d == 0) throw input_error("zero denominator in scalar literal '" + text + "'");
        mpq_class q(n, d);
        q.canonicalize();
        return from_mpq(f, q);
    } catch (const std::invalid_argument&) {
        throw input_error("bad scalar literal '" + text + "'");
    }
}

bool Scalar::is_zero() const {
    return field_.is_prime_field() ? r_ == 0 : q_ == 0;
}

bool Scalar::is_one() const {
    return field_.is_prime_field() ? r_ == 1 % field_.modulus : q_ == 1;
}

void Scalar::check_same_field(const Scalar& o) const {
    if (field_ != o.field_) throw input_error("scalar field mismatch");
}

Scalar Scalar::operator+(const Scalar& o) const {
    check_same_field(o);
    if (field_.is_prime_field()) return residue(field_, (r_ + o.r_) % field_.modulus);
    Scalar s;
    s.field_ = field_;
    s.q_ = q_ + o.q_;
    return s;
}

Scalar Scalar::operator-(const Scalar& o) const {
    check_same_field(o);
    if (field_.is_prime_field())
        return residue(field_, (r_ + field_.modulus - o.r_) % field_.modulus);
    Scalar s;
    s.field_ = field_;
    s.q_ = q_ - o.q_;
    return s;
}

Scalar Scalar::operator-() const {
    if (field_.is_prime_field()) return residue(field_, (field_.modulus - r_) % field_.modulus);
    Scalar s;
    s.field_ = field_;
    s.q_ = -q_;
    return s;
}

Scalar Scalar::operator*(const Scalar& o) const {
    check_same_field(o);
    if (field_.is_prime_field()) return residue(field_, mulmod(r_, o.r_, field_.modulus));
    Scalar s;
    s.field_ = field_;
    s.q_ = q_ * o.q_;
    return s;
}

Scalar Scalar::inverse() const {
    if (is_zero()) throw input_error("division by zero");
    if (field_.is_prime_field())
        return residue(field_, powmod(r_, field_.modulus - 2, field_.modulus));
    Scalar s;
    s.field_ = field_;
    s.q_ = 1 / q_;
    return s;
}

Scalar Scalar::operator/(const Scalar& o) const {
    return *this * o.inverse();
}

bool Scalar::operator==(const Scalar& o) const {
    if (field_ != o.field_) return false;
    return field_.is_prime_field() ? r_ == o.r_ : q_ == o.q_;
}

int Scalar::cmp(const Scalar& o) const {
    check_same_field(o);
    if (field_.is_prime_field()) return r_ < o.r_ ? -1 : (r_ > o.r_ ? 1 : 0);
    return ::cmp(q_, o.q_);
}

std::string Scalar::str() const {
    if (field_.is_prime_field()) return std::to_string(r_);
    std::ostringstream os;
    os << q_;
    return os.str();
}

}  // namespace spslab
