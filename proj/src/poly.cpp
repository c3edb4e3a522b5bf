#include "spslab/poly.hpp"

#include <sstream>

#include "spslab/errors.hpp"

namespace spslab {

int monomial_degree(const Monomial& m) {
    int d = 0;
    for (auto e : m) d += e;
    return d;
}

namespace {

void enumerate_rec(int degree, const std::vector<int>& support, std::size_t idx,
                   Monomial& cur, std::vector<Monomial>& out) {
    if (idx + 1 == support.size()) {
        cur[static_cast<std::size_t>(support[idx])] = static_cast<std::uint8_t>(degree);
        out.push_back(cur);
        cur[static_cast<std::size_t>(support[idx])] = 0;
        return;
    }
    for (int e = degree; e >= 0; --e) {
        cur[static_cast<std::size_t>(support[idx])] = static_cast<std::uint8_t>(e);
        enumerate_rec(degree - e, support, idx + 1, cur, out);
    }
    cur[static_cast<std::size_t>(support[idx])] = 0;
}

}  // namespace

std::vector<Monomial> monomials_of_degree(int nvars, int degree,
                                          const std::vector<int>& support) {
    std::vector<Monomial> out;
    if (degree < 0) return out;
    Monomial cur(static_cast<std::size_t>(nvars), 0);
    if (support.empty()) {
        if (degree == 0) out.push_back(cur);
        return out;
    }
    if (degree > 255) throw resource_error("monomial degree exceeds representation bound");
    // count = C(degree + s - 1, s - 1), guarded before materializing
    {
        const std::size_t s = support.size();
        double count = 1;
        for (std::size_t i = 1; i < s; ++i)
            count *= static_cast<double>(degree + i) / static_cast<double>(i);
        if (count > static_cast<double>(caps::kSliceRows))
            throw resource_error("monomial enumeration exceeds cap");
    }
    enumerate_rec(degree, support, 0, cur, out);
    return out;
}

Poly Poly::constant(const FieldSpec& f, int nvars, const Scalar& c) {
    Poly p(f, nvars);
    if (!c.is_zero()) p.terms_.emplace(Monomial(static_cast<std::size_t>(nvars), 0), c);
    return p;
}

Poly Poly::from_form(const FormVec& v) {
    Poly p(v.field, v.dim());
    for (int i = 0; i < v.dim(); ++i) {
        if (v.coeffs[static_cast<std::size_t>(i)].is_zero()) continue;
        Monomial m(static_cast<std::size_t>(v.dim()), 0);
        m[static_cast<std::size_t>(i)] = 1;
        p.terms_.emplace(std::move(m), v.coeffs[static_cast<std::size_t>(i)]);
    }
    return p;
}

int Poly::degree() const {
    int d = -1;
    for (const auto& [m, c] : terms_) d = std::max(d, monomial_degree(m));
    return d;
}

bool Poly::is_homogeneous() const {
    int d = -2;
    for (const auto& [m, c] : terms_) {
        int md = monomial_degree(m);
        if (d == -2) d = md;
        else if (d != md) return false;
    }
    return true;
}

void Poly::add_term(const Monomial& m, const Scalar& c) {
    if (c.is_zero()) return;
    auto it = terms_.find(m);
    if (it == terms_.end()) {
        terms_.emplace(m, c);
        return;
    }
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
}

Poly Poly::operator+(const Poly& o) const {
    if (field_ != o.field_ || nvars_ != o.nvars_) throw input_error("poly ring mismatch");
    Poly r = *this;
    for (const auto& [m, c] : o.terms_) r.add_term(m, c);
    return r;
}

Poly Poly::operator-(const Poly& o) const {
    if (field_ != o.field_ || nvars_ != o.nvars_) throw input_error("poly ring mismatch");
    Poly r = *this;
    for (const auto& [m, c] : o.terms_) r.add_term(m, -c);
    return r;
}

Poly Poly::scaled(const Scalar& c) const {
    Poly r(field_, nvars_);
    if (c.is_zero()) return r;
    for (const auto& [m, coef] : terms_) r.terms_.emplace(m, coef * c);
    return r;
}

Poly Poly::mul_form(const FormVec& v, std::size_t cap) const {
    if (v.dim() != nvars_) throw input_error("poly/form dimension mismatch");
    Poly r(field_, nvars_);
    for (int i = 0; i < nvars_; ++i) {
        const Scalar& ci = v.coeffs[static_cast<std::size_t>(i)];
        if (ci.is_zero()) continue;
        for (const auto& [m, c] : terms_) {
            Monomial m2 = m;
            if (m2[static_cast<std::size_t>(i)] == 255)
                throw resource_error("monomial degree exceeds representation bound");
            ++m2[static_cast<std::size_t>(i)];
            r.add_term(m2, c * ci);
            if (r.terms_.size() > cap) throw resource_error("expansion exceeds monomial cap");
        }
    }
    return r;
}

Poly Poly::mul(const Poly& o, std::size_t cap) const {
    if (field_ != o.field_ || nvars_ != o.nvars_) throw input_error("poly ring mismatch");
    Poly r(field_, nvars_);
    for (const auto& [m1, c1] : terms_) {
        for (const auto& [m2, c2] : o.terms_) {
            Monomial m = m1;
            for (std::size_t i = 0; i < m.size(); ++i) {
                int e = m[i] + m2[i];
                if (e > 255) throw resource_error("monomial degree exceeds representation bound");
                m[i] = static_cast<std::uint8_t>(e);
            }
            r.add_term(m, c1 * c2);
            if (r.terms_.size() > cap) throw resource_error("expansion exceeds monomial cap");
        }
    }
    return r;
}

Scalar Poly::eval(const std::vector<Scalar>& point) const {
    if (static_cast<int>(point.size()) != nvars_)
        throw input_error("evaluation point length mismatch");
    Scalar acc = Scalar::zero(field_);
    for (const auto& [m, c] : terms_) {
        Scalar t = c;
        for (std::size_t i = 0; i < m.size(); ++i) {
            for (int e = 0; e < m[i]; ++e) t *= point[i];
        }
        acc += t;
    }
    return acc;
}

std::vector<Scalar> Poly::coefficient_vector(const std::vector<Monomial>& index) const {
    std::vector<Scalar> v;
    v.reserve(index.size());
    for (const auto& m : index) {
        auto it = terms_.find(m);
        v.push_back(it == terms_.end() ? Scalar::zero(field_) : it->second);
    }
    return v;
}

std::vector<int> Poly::support() const {
    std::vector<bool> seen(static_cast<std::size_t>(nvars_), false);
    for (const auto& [m, c] : terms_)
        for (std::size_t i = 0; i < m.size(); ++i)
            if (m[i]) seen[i] = true;
    std::vector<int> s;
    for (int i = 0; i < nvars_; ++i)
        if (seen[static_cast<std::size_t>(i)]) s.push_back(i);
    return s;
}

std::string Poly::str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [m, c] : terms_) {
        if (!first) os << " + ";
        first = false;
        os << c.str();
        for (std::size_t i = 0; i < m.size(); ++i) {
            if (!m[i]) continue;
            os << "*x" << (i + 1);
            if (m[i] > 1) os << '^' << int(m[i]);
        }
    }
    return os.str();
}

}  // namespace spslab
