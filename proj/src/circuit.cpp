#include "spslab/circuit.hpp"

#include <algorithm>
#include <map>
#include <random>

#include "spslab/errors.hpp"

namespace spslab {

MultTerm::MultTerm(Scalar c, std::vector<FormVec> fs) : coeff(std::move(c)), forms(std::move(fs)) {
    if (coeff.is_zero()) throw input_error("multiplication term coefficient must be nonzero");
    for (const auto& f : forms)
        if (f.is_zero()) throw input_error("multiplication term contains the zero form");
}

Poly MultTerm::expand(int nvars, std::size_t cap) const {
    Poly p = Poly::constant(coeff.field(), nvars, coeff);
    for (const auto& f : forms) p = p.mul_form(f, cap);
    return p;
}

Scalar MultTerm::eval(const std::vector<Scalar>& point) const {
    Scalar acc = coeff;
    for (const auto& f : forms) {
        Scalar v = Scalar::zero(coeff.field());
        for (std::size_t i = 0; i < point.size(); ++i) v += f.coeffs.at(i) * point[i];
        acc *= v;
    }
    return acc;
}

bool terms_similar(const MultTerm& a, const MultTerm& b) {
    if (a.degree() != b.degree()) return false;
    std::vector<FormVec> na, nb;
    na.reserve(a.forms.size());
    nb.reserve(b.forms.size());
    for (const auto& f : a.forms) na.push_back(f.normalized());
    for (const auto& f : b.forms) nb.push_back(f.normalized());
    std::sort(na.begin(), na.end());
    std::sort(nb.begin(), nb.end());
    return na == nb;
}

SPSCircuit::SPSCircuit(const FieldSpec& f, int n, std::vector<MultTerm> t)
    : field(f), nvars(n), terms(std::move(t)) {
    if (terms.empty()) throw input_error("circuit needs at least one term");
    for (const auto& term : terms) {
        if (term.coeff.field() != field) throw input_error("term field mismatch");
        for (const auto& form : term.forms)
            if (form.dim() != nvars) throw input_error("form length differs from nvars");
    }
}

int SPSCircuit::degree() const {
    int d = 0;
    for (const auto& t : terms) d = std::max(d, t.degree());
    return d;
}

bool SPSCircuit::is_homogeneous_degrees() const {
    for (const auto& t : terms)
        if (t.degree() != terms.front().degree()) return false;
    return true;
}

std::vector<FormVec> SPSCircuit::all_forms() const {
    std::vector<FormVec> out;
    for (const auto& t : terms) out.insert(out.end(), t.forms.begin(), t.forms.end());
    return out;
}

SPSCircuit SPSCircuit::subcircuit(const std::vector<int>& indices) const {
    std::vector<MultTerm> sel;
    for (int i : indices) sel.push_back(terms.at(static_cast<std::size_t>(i)));
    return SPSCircuit(field, nvars, std::move(sel));
}

Scalar evaluate(const SPSCircuit& c, const std::vector<Scalar>& point) {
    if (static_cast<int>(point.size()) != c.nvars)
        throw input_error("evaluation point length mismatch");
    Scalar acc = Scalar::zero(c.field);
    for (const auto& t : c.terms) acc += t.eval(point);
    return acc;
}

Poly expand(const SPSCircuit& c, std::size_t cap) {
    Poly acc(c.field, c.nvars);
    for (const auto& t : c.terms) acc = acc + t.expand(c.nvars, cap);
    return acc;
}

SPSCircuit homogenize(const SPSCircuit& c, int constant_var) {
    if (c.is_homogeneous_degrees() && constant_var < 0) return c;
    int pad = constant_var;
    int nvars = c.nvars;
    std::vector<MultTerm> terms = c.terms;
    if (pad < 0) {
        pad = nvars;
        ++nvars;
        for (auto& t : terms)
            for (auto& f : t.forms) {
                f.coeffs.push_back(Scalar::zero(c.field));
            }
    }
    int dmax = 0;
    for (const auto& t : terms) dmax = std::max(dmax, t.degree());
    FormVec z = FormVec::unit(c.field, nvars, pad);
    for (auto& t : terms)
        while (t.degree() < dmax) t.forms.push_back(z);
    return SPSCircuit(c.field, nvars, std::move(terms));
}

GcdSimple gcd_and_simple(const SPSCircuit& c) {
    if (!c.is_homogeneous_degrees())
        throw precondition_error("gcd_and_simple requires a homogeneous circuit");
    // Multiset intersection of similarity classes across terms.
    std::map<FormVec, int> common;  // normalized form -> multiplicity
    for (const auto& f : c.terms.front().forms) ++common[f.normalized()];
    for (std::size_t i = 1; i < c.terms.size(); ++i) {
        std::map<FormVec, int> cnt;
        for (const auto& f : c.terms[i].forms) ++cnt[f.normalized()];
        for (auto it = common.begin(); it != common.end();) {
            auto jt = cnt.find(it->first);
            int m = jt == cnt.end() ? 0 : jt->second;
            it->second = std::min(it->second, m);
            if (it->second == 0) it = common.erase(it);
            else ++it;
        }
    }
    std::vector<FormVec> gcd_forms;
    for (const auto& [form, mult] : common)
        for (int i = 0; i < mult; ++i) gcd_forms.push_back(form);

    std::vector<MultTerm> sim_terms;
    for (const auto& t : c.terms) {
        std::map<FormVec, int> remove = common;
        Scalar coeff = t.coeff;
        std::vector<FormVec> rest;
        for (const auto& f : t.forms) {
            FormVec n = f.normalized();
            auto it = remove.find(n);
            if (it != remove.end() && it->second > 0) {
                --it->second;
                // The monic gcd absorbs this factor; its scalar stays in the
                // simple part.
                coeff *= f.leading();
            } else {
                rest.push_back(f);
            }
        }
        sim_terms.emplace_back(coeff, std::move(rest));
    }
    MultTerm gcd(Scalar::one(c.field), std::move(gcd_forms));
    return GcdSimple{std::move(gcd), SPSCircuit(c.field, c.nvars, std::move(sim_terms))};
}

bool is_simple(const SPSCircuit& c) { return gcd_and_simple(c).gcd.degree() == 0; }

int circuit_rank(const SPSCircuit& c) { return rank_of(c.field, c.nvars, c.all_forms()); }

namespace {

std::vector<std::vector<Scalar>> term_columns_expand(const SPSCircuit& c) {
    std::vector<Poly> polys;
    for (const auto& t : c.terms) polys.push_back(t.expand(c.nvars));
    std::map<Monomial, std::size_t> index;
    for (const auto& p : polys)
        for (const auto& [m, coef] : p.terms()) index.emplace(m, 0);
    std::vector<Monomial> rows;
    rows.reserve(index.size());
    for (const auto& [m, unused] : index) rows.push_back(m);
    std::vector<std::vector<Scalar>> cols;
    for (const auto& p : polys) cols.push_back(p.coefficient_vector(rows));
    return cols;
}

std::vector<std::vector<Scalar>> term_columns_grid(const SPSCircuit& c) {
    const int d = c.degree();
    const int n = c.nvars;
    std::size_t points = 1;
    for (int i = 0; i < n; ++i) {
        points *= static_cast<std::size_t>(d + 1);
        if (points > caps::kSliceRows) throw resource_error("evaluation grid exceeds cap");
    }
    std::vector<std::vector<Scalar>> cols(c.terms.size());
    std::vector<Scalar> point(static_cast<std::size_t>(n), Scalar::zero(c.field));
    std::vector<int> idx(static_cast<std::size_t>(n), 0);
    for (std::size_t p = 0; p < points; ++p) {
        std::size_t rem = p;
        for (int i = 0; i < n; ++i) {
            point[static_cast<std::size_t>(i)] =
                Scalar::from_int(c.field, static_cast<long>(rem % static_cast<std::size_t>(d + 1)));
            rem /= static_cast<std::size_t>(d + 1);
        }
        for (std::size_t t = 0; t < c.terms.size(); ++t)
            cols[t].push_back(c.terms[t].eval(point));
    }
    return cols;
}

}  // namespace

std::vector<std::vector<Scalar>> term_dependencies(const SPSCircuit& c, ZeroBackend backend) {
    auto cols = backend == ZeroBackend::Expand ? term_columns_expand(c) : term_columns_grid(c);
    return nullspace_of_columns(c.field, cols);
}

int independent_fanin(const SPSCircuit& c) {
    return c.fanin() - static_cast<int>(term_dependencies(c).size());
}

std::vector<int> greedy_independent_terms(const SPSCircuit& c) {
    std::vector<Poly> polys;
    for (const auto& t : c.terms) polys.push_back(t.expand(c.nvars));
    std::map<Monomial, std::size_t> index;
    for (const auto& p : polys)
        for (const auto& [m, coef] : p.terms()) index.emplace(m, 0);
    std::vector<Monomial> rows;
    for (const auto& [m, unused] : index) rows.push_back(m);

    std::vector<int> chosen;
    std::vector<std::vector<Scalar>> cols;
    for (int i = 0; i < c.fanin(); ++i) {
        cols.push_back(polys[static_cast<std::size_t>(i)].coefficient_vector(rows));
        if (nullspace_of_columns(c.field, cols).empty()) {
            chosen.push_back(i);
        } else {
            cols.pop_back();
        }
    }
    return chosen;
}

std::optional<std::vector<int>> vanishing_proper_subset(const SPSCircuit& c, int fanin_cap) {
    const int k = c.fanin();
    if (k > fanin_cap) throw resource_error("fanin exceeds subset-check cap");
    std::vector<Poly> polys;
    for (const auto& t : c.terms) polys.push_back(t.expand(c.nvars));
    for (std::uint32_t mask = 1; mask + 1 < (1u << k); ++mask) {
        Poly acc(c.field, c.nvars);
        for (int i = 0; i < k; ++i)
            if (mask & (1u << i)) acc = acc + polys[static_cast<std::size_t>(i)];
        if (acc.is_zero()) {
            std::vector<int> subset;
            for (int i = 0; i < k; ++i)
                if (mask & (1u << i)) subset.push_back(i);
            return subset;
        }
    }
    return std::nullopt;
}

bool is_minimal(const SPSCircuit& c, int fanin_cap) {
    return !vanishing_proper_subset(c, fanin_cap).has_value();
}

CircuitProfile profile(const SPSCircuit& c, bool with_exponential_checks) {
    CircuitProfile p;
    p.fanin = c.fanin();
    p.nvars = c.nvars;
    p.degree = c.degree();
    p.is_zero = expand(c).is_zero();
    p.is_simple = is_simple(c);
    p.rank = circuit_rank(c);
    if (with_exponential_checks) {
        p.is_minimal = is_minimal(c);
        p.ind_fanin = independent_fanin(c);
    }
    return p;
}

SPSCircuit gen_interpolation_identity(int k, const FieldSpec& field) {
    if (k < 3) throw input_error("interpolation identity needs k >= 3");
    if (field.is_prime_field() && field.modulus < static_cast<std::uint64_t>(k))
        throw input_error("field too small: needs k distinct elements");
    std::vector<Scalar> a;
    for (int i = 0; i < k; ++i) a.push_back(Scalar::from_int(field, i));

    std::vector<Scalar> lambda;
    for (int i = 0; i < k; ++i) {
        Scalar denom = Scalar::one(field);
        for (int j = 0; j < k; ++j) {
            if (j == i) continue;
            denom *= a[static_cast<std::size_t>(i)] - a[static_cast<std::size_t>(j)];
        }
        lambda.push_back(denom.inverse());
    }
    Scalar scale = lambda.back().inverse();
    std::vector<MultTerm> terms;
    for (int i = 0; i < k; ++i) {
        FormVec form(field, 2);
        form.coeffs[0] = Scalar::one(field);
        form.coeffs[1] = a[static_cast<std::size_t>(i)];
        std::vector<FormVec> fs(static_cast<std::size_t>(k - 2), form);
        terms.emplace_back(lambda[static_cast<std::size_t>(i)] * scale, std::move(fs));
    }
    return SPSCircuit(field, 2, std::move(terms));
}

namespace {

// Deterministic cross-platform draw in [0, bound).
long draw(std::mt19937_64& rng, long bound) {
    return static_cast<long>(rng() % static_cast<std::uint64_t>(bound));
}

}  // namespace

SPSCircuit gen_random_circuit(int k, int d, int n, const FieldSpec& field, std::uint64_t seed) {
    if (k < 1 || d < 1 || n < 1) throw input_error("random circuit needs k,d,n >= 1");
    std::mt19937_64 rng(seed);
    std::vector<MultTerm> terms;
    for (int t = 0; t < k; ++t) {
        Scalar coeff = Scalar::zero(field);
        while (coeff.is_zero()) {
            coeff = field.is_prime_field()
                        ? Scalar::from_int(field, draw(rng, static_cast<long>(field.modulus)))
                        : Scalar::from_int(field, draw(rng, 7) - 3);
        }
        std::vector<FormVec> forms;
        for (int j = 0; j < d; ++j) {
            FormVec f(field, n);
            while (f.is_zero()) {
                for (int v = 0; v < n; ++v) {
                    f.coeffs[static_cast<std::size_t>(v)] =
                        field.is_prime_field()
                            ? Scalar::from_int(field, draw(rng, static_cast<long>(field.modulus)))
                            : Scalar::from_int(field, draw(rng, 5) - 2);
                }
            }
            forms.push_back(f);
        }
        terms.emplace_back(coeff, std::move(forms));
    }
    return SPSCircuit(field, n, std::move(terms));
}

std::vector<StrongDecomposition> decompose_strongly_minimal(const SPSCircuit& c,
                                                            const std::vector<int>& basis_set) {
    Poly whole = expand(c);
    if (!whole.is_zero())
        throw precondition_error("decompose_strongly_minimal: circuit is not an identity");

    std::vector<Poly> polys;
    for (const auto& t : c.terms) polys.push_back(t.expand(c.nvars));
    std::map<Monomial, std::size_t> index;
    for (const auto& p : polys)
        for (const auto& [m, coef] : p.terms()) index.emplace(m, 0);
    std::vector<Monomial> rows;
    for (const auto& [m, unused] : index) rows.push_back(m);

    std::vector<std::vector<Scalar>> basis_cols;
    for (int j : basis_set)
        basis_cols.push_back(polys.at(static_cast<std::size_t>(j)).coefficient_vector(rows));
    if (!nullspace_of_columns(c.field, basis_cols).empty())
        throw precondition_error("decompose_strongly_minimal: basis terms are dependent");
    if (static_cast<int>(basis_set.size()) != independent_fanin(c))
        throw precondition_error("decompose_strongly_minimal: basis set is not maximal");

    std::vector<StrongDecomposition> out;
    for (int i = 0; i < c.fanin(); ++i) {
        if (std::find(basis_set.begin(), basis_set.end(), i) != basis_set.end()) continue;
        std::vector<Scalar> rhs = polys[static_cast<std::size_t>(i)].coefficient_vector(rows);
        for (auto& v : rhs) v = -v;
        auto sol = solve_dense(c.field, basis_cols, rhs);
        if (!sol)
            throw structural_error("dependent term not expressible over the basis");
        StrongDecomposition dec;
        dec.term = i;
        std::vector<MultTerm> terms;
        for (std::size_t bj = 0; bj < basis_set.size(); ++bj) {
            if ((*sol)[bj].is_zero()) continue;
            dec.support.push_back(basis_set[bj]);
            dec.alphas.push_back((*sol)[bj]);
            const MultTerm& tj = c.terms[static_cast<std::size_t>(basis_set[bj])];
            terms.emplace_back((*sol)[bj] * tj.coeff, tj.forms);
        }
        terms.push_back(c.terms[static_cast<std::size_t>(i)]);
        dec.identity = SPSCircuit(c.field, c.nvars, std::move(terms));
        if (!expand(dec.identity).is_zero())
            throw structural_error("decomposition circuit failed to vanish");
        out.push_back(std::move(dec));
    }
    return out;
}

MultTerm apply(const Transform& t, const MultTerm& term) {
    std::vector<FormVec> forms;
    forms.reserve(term.forms.size());
    for (const auto& f : term.forms) forms.push_back(t.apply(f));
    return MultTerm(term.coeff, std::move(forms));
}

SPSCircuit apply(const Transform& t, const SPSCircuit& c) {
    std::vector<MultTerm> terms;
    terms.reserve(c.terms.size());
    for (const auto& term : c.terms) terms.push_back(apply(t, term));
    return SPSCircuit(c.field, c.nvars, std::move(terms));
}

}  // namespace spslab
