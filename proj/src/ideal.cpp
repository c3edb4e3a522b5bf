#include "spslab/ideal.hpp"

#include <algorithm>
#include <map>

#include "spslab/errors.hpp"

namespace spslab {

TermIdeal::TermIdeal(const FieldSpec& f, int nvars, std::vector<MultTerm> gens)
    : field_(f), nvars_(nvars), gens_(std::move(gens)), radspan_(f, nvars) {
    for (const auto& g : gens_) {
        if (g.coeff.field() != field_) throw input_error("generator field mismatch");
        for (const auto& form : g.forms) {
            if (form.dim() != nvars_) throw input_error("generator form dimension mismatch");
            radspan_.insert(form);
        }
    }
}

TermIdeal TermIdeal::with(const MultTerm& extra) const {
    std::vector<MultTerm> gens = gens_;
    gens.push_back(extra);
    return TermIdeal(field_, nvars_, std::move(gens));
}

TermIdeal TermIdeal::with_all(const std::vector<MultTerm>& extra) const {
    std::vector<MultTerm> gens = gens_;
    gens.insert(gens.end(), extra.begin(), extra.end());
    return TermIdeal(field_, nvars_, std::move(gens));
}

Subspace radspan_of(const FieldSpec& f, int nvars, const std::vector<MultTerm>& gens) {
    return TermIdeal(f, nvars, gens).radspan();
}

NodeSet nodes_of(const MultTerm& f, const Subspace& s) {
    NodeSet out;
    std::vector<FormVec> keys;  // normalized residues; zero key = in-subspace class
    std::vector<std::vector<FormVec>> classes;
    for (const auto& form : f.forms) {
        FormVec residue = s.reduce(form);
        FormVec key = residue.is_zero() ? residue : residue.normalized();
        std::size_t idx = 0;
        while (idx < keys.size() && !(keys[idx] == key)) ++idx;
        if (idx == keys.size()) {
            keys.push_back(key);
            classes.emplace_back();
        }
        classes[idx].push_back(form);
    }
    const FieldSpec& field = f.coeff.field();
    for (std::size_t i = 0; i < keys.size(); ++i) {
        out.reps.push_back(keys[i].is_zero() ? keys[i] : classes[i].front().normalized());
        out.nodes.emplace_back(Scalar::one(field), classes[i]);
    }
    return out;
}

namespace {

// Column space of { monomial * g : total degree D } over the union support,
// kept as an echelon basis of coefficient vectors.
struct SliceSpan {
    std::vector<Monomial> rows;
    Subspace span;  // vectors of length rows.size()

    SliceSpan(const FieldSpec& field, int nvars, int degree, const std::vector<Poly>& gens,
              const std::vector<int>& support, std::size_t row_cap)
        : span(field, 0) {
        rows = monomials_of_degree(nvars, degree, support);
        if (rows.size() > row_cap) throw resource_error("slice dimension exceeds cap");
        span = Subspace(field, static_cast<int>(rows.size()));
        for (const auto& g : gens) {
            if (g.is_zero()) continue;
            int dg = g.degree();
            if (dg > degree) continue;
            for (const auto& nu : monomials_of_degree(nvars, degree - dg, support)) {
                Poly shifted(field, nvars);
                for (const auto& [m, c] : g.terms()) {
                    Monomial mm = m;
                    for (std::size_t i = 0; i < mm.size(); ++i) {
                        int e = mm[i] + nu[i];
                        if (e > 255) throw resource_error("slice monomial degree overflow");
                        mm[i] = static_cast<std::uint8_t>(e);
                    }
                    shifted.add_term(mm, c);
                }
                span.insert(FormVec(field, shifted.coefficient_vector(rows)));
            }
        }
    }

    bool contains(const Poly& h) const {
        return span.contains(FormVec(span.field(), h.coefficient_vector(rows)));
    }

    FormVec reduce(const Poly& h) const {
        return span.reduce(FormVec(span.field(), h.coefficient_vector(rows)));
    }
};

std::vector<int> union_support(const std::vector<Poly>& polys) {
    std::vector<bool> seen;
    for (const auto& p : polys) {
        if (seen.size() < static_cast<std::size_t>(p.nvars()))
            seen.resize(static_cast<std::size_t>(p.nvars()), false);
        for (int v : p.support()) seen[static_cast<std::size_t>(v)] = true;
    }
    std::vector<int> s;
    for (std::size_t i = 0; i < seen.size(); ++i)
        if (seen[i]) s.push_back(static_cast<int>(i));
    return s;
}

bool has_unit_generator(const std::vector<Poly>& gens) {
    for (const auto& g : gens)
        if (!g.is_zero() && g.degree() == 0) return true;
    return false;
}

std::vector<Poly> expand_gens(const TermIdeal& ideal) {
    std::vector<Poly> out;
    out.reserve(ideal.gens().size());
    for (const auto& g : ideal.gens()) out.push_back(g.expand(ideal.nvars()));
    return out;
}

}  // namespace

bool slice_membership(const Poly& h, const std::vector<Poly>& gens, std::size_t row_cap) {
    if (h.is_zero()) return true;
    if (!h.is_homogeneous()) throw input_error("slice membership needs a homogeneous polynomial");
    for (const auto& g : gens)
        if (!g.is_homogeneous()) throw input_error("slice membership needs homogeneous generators");
    if (gens.empty()) return false;
    if (has_unit_generator(gens)) return true;

    std::vector<Poly> all = gens;
    all.push_back(h);
    SliceSpan slice(h.field(), h.nvars(), h.degree(), gens, union_support(all), row_cap);
    return slice.contains(h);
}

bool slice_membership(const Poly& h, const TermIdeal& ideal, std::size_t row_cap) {
    return slice_membership(h, expand_gens(ideal), row_cap);
}

bool poly_in_ideal(const Poly& h, const TermIdeal& ideal) {
    if (h.is_zero()) return true;
    if (ideal.is_zero_ideal()) return false;
    // Homogeneous ideal: membership componentwise by degree.
    std::map<int, Poly> parts;
    for (const auto& [m, c] : h.terms()) {
        int d = monomial_degree(m);
        auto it = parts.find(d);
        if (it == parts.end()) it = parts.emplace(d, Poly(h.field(), h.nvars())).first;
        it->second.add_term(m, c);
    }
    std::vector<Poly> gens = expand_gens(ideal);
    for (const auto& [d, part] : parts) {
        if (!slice_membership(part, gens)) return false;
    }
    return true;
}

bool term_in_ideal(const MultTerm& t, const TermIdeal& ideal) {
    if (ideal.is_zero_ideal()) return false;  // a multiplication term is never zero
    for (const auto& g : ideal.gens())
        if (g.degree() == 0) return true;

    // T = B0 * B1 with B0 the radspan part; the B1 forms are
    // non-zerodivisors and cancel.
    std::vector<FormVec> b0;
    for (const auto& form : t.forms)
        if (ideal.radspan().contains(form)) b0.push_back(form);
    if (b0.empty() && t.degree() > 0) return false;

    Transform tau = coordinate_transform(ideal.radspan());
    std::vector<Poly> gens;
    for (const auto& g : ideal.gens()) gens.push_back(apply(tau, g).expand(ideal.nvars()));
    MultTerm confined = apply(tau, MultTerm(t.coeff, b0));
    return slice_membership(confined.expand(ideal.nvars()), gens);
}

std::optional<ComboSolution> combo_in_ideal(const std::vector<MultTerm>& terms, int fixed,
                                            const TermIdeal& ideal) {
    if (terms.empty() || fixed < 0 || fixed >= static_cast<int>(terms.size()))
        throw input_error("combo_in_ideal: bad fixed index");
    const FieldSpec& field = ideal.field();
    const int n = ideal.nvars();
    const int deg = terms.front().degree();
    for (const auto& t : terms)
        if (t.degree() != deg) throw input_error("combo_in_ideal: unequal term degrees");

    std::vector<std::vector<Scalar>> stacked(terms.size());

    if (ideal.is_zero_ideal()) {
        std::vector<Poly> polys;
        for (const auto& t : terms) polys.push_back(t.expand(n));
        std::map<Monomial, std::size_t> index;
        for (const auto& p : polys)
            for (const auto& [m, c] : p.terms()) index.emplace(m, 0);
        std::vector<Monomial> rows;
        for (const auto& [m, unused] : index) rows.push_back(m);
        for (std::size_t i = 0; i < polys.size(); ++i)
            stacked[i] = polys[i].coefficient_vector(rows);
    } else {
        if (has_unit_generator(expand_gens(ideal))) {
            // Everything lies in the unit ideal; the affine set is all of
            // { beta[fixed] = 1 }.
            ComboSolution sol;
            sol.witness.assign(terms.size(), Scalar::zero(field));
            sol.witness[static_cast<std::size_t>(fixed)] = Scalar::one(field);
            for (std::size_t i = 0; i < terms.size(); ++i) {
                if (static_cast<int>(i) == fixed) continue;
                std::vector<Scalar> dir(terms.size(), Scalar::zero(field));
                dir[i] = Scalar::one(field);
                sol.kernel.push_back(std::move(dir));
            }
            return sol;
        }
        // Confine the radical span to head coordinates, expand each term over
        // tail monomials, and require every tail coefficient (a polynomial in
        // the head variables) to lie in the matching head slice.
        Transform tau = coordinate_transform(ideal.radspan());
        const int r = ideal.radspan().rank();
        std::vector<int> head;
        for (int i = 0; i < r; ++i) head.push_back(i);

        std::vector<Poly> gens;
        for (const auto& g : ideal.gens()) gens.push_back(apply(tau, g).expand(n));

        // tail monomial -> per-term head polynomial
        std::map<Monomial, std::vector<Poly>> groups;
        for (std::size_t i = 0; i < terms.size(); ++i) {
            Poly p = apply(tau, terms[i]).expand(n);
            for (const auto& [m, c] : p.terms()) {
                Monomial tail(m.size(), 0);
                Monomial headm(m.size(), 0);
                for (std::size_t v = 0; v < m.size(); ++v) {
                    if (static_cast<int>(v) < r) headm[v] = m[v];
                    else tail[v] = m[v];
                }
                auto it = groups.find(tail);
                if (it == groups.end())
                    it = groups.emplace(tail, std::vector<Poly>(terms.size(), Poly(field, n))).first;
                it->second[i].add_term(headm, c);
            }
        }

        std::map<int, SliceSpan> slice_by_degree;
        for (const auto& [tail, headpolys] : groups) {
            int e = deg - monomial_degree(tail);
            auto it = slice_by_degree.find(e);
            if (it == slice_by_degree.end())
                it = slice_by_degree.emplace(e, SliceSpan(field, n, e, gens, head,
                                                          caps::kSliceRows)).first;
            for (std::size_t i = 0; i < terms.size(); ++i) {
                FormVec residual = it->second.reduce(headpolys[i]);
                stacked[i].insert(stacked[i].end(), residual.coeffs.begin(),
                                  residual.coeffs.end());
            }
        }
        if (groups.empty()) {
            // All terms expanded to zero cannot happen; keep the system
            // trivially solvable.
            for (auto& col : stacked) col.assign(1, Scalar::zero(field));
        }
    }

    std::vector<std::vector<Scalar>> kernel = nullspace_of_columns(field, stacked);
    std::optional<std::size_t> pivot;
    for (std::size_t i = 0; i < kernel.size(); ++i) {
        if (!kernel[i][static_cast<std::size_t>(fixed)].is_zero()) {
            pivot = i;
            break;
        }
    }
    if (!pivot) return std::nullopt;
    ComboSolution sol;
    Scalar norm = kernel[*pivot][static_cast<std::size_t>(fixed)].inverse();
    sol.witness = kernel[*pivot];
    for (auto& v : sol.witness) v *= norm;
    for (std::size_t i = 0; i < kernel.size(); ++i) {
        if (i == *pivot) continue;
        std::vector<Scalar> dir = kernel[i];
        const Scalar c = dir[static_cast<std::size_t>(fixed)];
        if (!c.is_zero()) {
            for (std::size_t j = 0; j < dir.size(); ++j) dir[j] -= c * sol.witness[j];
        }
        bool zero = true;
        for (const auto& v : dir)
            if (!v.is_zero()) zero = false;
        if (!zero) sol.kernel.push_back(std::move(dir));
    }
    return sol;
}

std::optional<Scalar> affine_membership(const Poly& h0, const Poly& h1, const TermIdeal& ideal) {
    const FieldSpec& field = ideal.field();
    if (h1.is_zero()) throw input_error("affine_membership: h1 is zero");
    if (!h0.is_zero() && h0.degree() != h1.degree())
        return poly_in_ideal(h0, ideal) ? std::optional<Scalar>(Scalar::zero(field))
                                        : std::nullopt;

    std::vector<Poly> gens = expand_gens(ideal);
    if (has_unit_generator(gens)) return Scalar::zero(field);

    std::vector<Poly> all = gens;
    all.push_back(h0);
    all.push_back(h1);
    std::vector<int> support = union_support(all);
    const int deg = h1.degree();
    SliceSpan slice(field, h1.nvars(), deg, gens, support, caps::kSliceRows);

    std::vector<std::vector<Scalar>> cols;
    cols.push_back(h1.coefficient_vector(slice.rows));
    for (const auto& row : slice.span.basis()) cols.push_back(row.coeffs);
    auto sol = solve_dense(field, cols, h0.coefficient_vector(slice.rows));
    if (!sol) return std::nullopt;
    return (*sol)[0];
}

bool crt_check(const TermIdeal& ideal, const MultTerm& z, const MultTerm& f, const MultTerm& g,
               const std::vector<Poly>& probes) {
    for (const auto& form : z.forms)
        if (!ideal.radspan().contains(form))
            throw precondition_error("crt_check: L(z) not contained in radsp(I)");
    for (const auto& form : f.forms)
        if (ideal.radspan().contains(form))
            throw precondition_error("crt_check: L(f) meets radsp(I)");
    Subspace rad_if = ideal.radspan();
    for (const auto& form : f.forms) rad_if.insert(form);
    for (const auto& form : g.forms)
        if (rad_if.contains(form))
            throw precondition_error("crt_check: L(g) meets radsp(I,f)");

    std::vector<FormVec> zfg_forms = z.forms;
    zfg_forms.insert(zfg_forms.end(), f.forms.begin(), f.forms.end());
    zfg_forms.insert(zfg_forms.end(), g.forms.begin(), g.forms.end());
    MultTerm zfg(z.coeff * f.coeff * g.coeff, std::move(zfg_forms));

    TermIdeal i_zfg = ideal.with(zfg);
    TermIdeal i_z = ideal.with(z);
    TermIdeal i_f = ideal.with(f);
    TermIdeal i_g = ideal.with(g);
    for (const auto& h : probes) {
        bool product = poly_in_ideal(h, i_zfg);
        bool meet = poly_in_ideal(h, i_z) && poly_in_ideal(h, i_f) && poly_in_ideal(h, i_g);
        if (product != meet) return false;
    }
    return true;
}

std::optional<MultTerm> node_reduction(const Poly& h, const TermIdeal& ideal, const MultTerm& f) {
    NodeSet ns = nodes_of(f, ideal.radspan());
    for (const auto& g : ns.nodes) {
        if (!poly_in_ideal(h, ideal.with(g))) return g;
    }
    if (!poly_in_ideal(h, ideal.with(f)))
        throw structural_error("node_reduction: h in <I,g> for every node yet h not in <I,f>");
    return std::nullopt;
}

bool cancel_check(const FormVec& ell, const Poly& f, const std::vector<MultTerm>& gens,
                  const Subspace& k_space) {
    const FieldSpec& field = k_space.field();
    const int n = k_space.nvars();
    if (gens.empty()) throw input_error("cancel_check: no generators");
    if (ell.is_zero()) throw input_error("cancel_check: ell must be a nonzero form");

    // Each generator must be a power of a single form modulo K; collect the
    // class forms and check independence mod K.
    std::vector<FormVec> class_forms;
    Subspace grown = k_space;
    for (const auto& gen : gens) {
        if (gen.degree() == 0)
            throw precondition_error("cancel_check: constant generator");
        FormVec first = gen.forms.front();
        FormVec key = k_space.reduce(first);
        if (key.is_zero())
            throw precondition_error("cancel_check: generator form lies in K");
        key = key.normalized();
        for (const auto& form : gen.forms) {
            FormVec res = k_space.reduce(form);
            if (res.is_zero() || !(res.normalized() == key))
                throw precondition_error("cancel_check: generator is not a power of one form mod K");
        }
        class_forms.push_back(first);
        if (!grown.insert(first))
            throw precondition_error("cancel_check: class forms dependent mod K");
    }

    // Locate s with ell in F*ell_s + K (coefficient zero admissible).
    FormVec res = k_space.reduce(ell);
    std::size_t s = 0;
    if (!res.is_zero()) {
        bool found = false;
        for (std::size_t i = 0; i < class_forms.size(); ++i) {
            FormVec ri = k_space.reduce(class_forms[i]);
            if (ri.normalized() == res.normalized()) {
                s = i;
                found = true;
                break;
            }
        }
        if (!found)
            throw precondition_error("cancel_check: ell not in F*ell_s + K for any s");
    }

    // f_s / gcd(f_s, ell): drop one occurrence of a form similar to ell.
    std::vector<MultTerm> reduced = gens;
    if (!ell.is_zero()) {
        FormVec target = ell.normalized();
        auto& forms = reduced[s].forms;
        for (std::size_t i = 0; i < forms.size(); ++i) {
            if (forms[i].normalized() == target) {
                forms.erase(forms.begin() + static_cast<std::ptrdiff_t>(i));
                break;
            }
        }
    }

    TermIdeal lhs_ideal(field, n, gens);
    TermIdeal rhs_ideal(field, n, reduced);
    bool lhs = poly_in_ideal(f.mul_form(ell), lhs_ideal);
    bool rhs;
    if (reduced[s].degree() == 0) {
        rhs = true;  // unit ideal
    } else {
        rhs = poly_in_ideal(f, rhs_ideal);
    }
    return lhs == rhs;
}

}  // namespace spslab
