#ifndef SPSLAB_IDEAL_HPP
#define SPSLAB_IDEAL_HPP

#include <optional>
#include <vector>

#include "spslab/circuit.hpp"

namespace spslab {

/// An ideal generated by multiplication terms, with its radical-span
/// (the span of all generator forms) cached at construction.
class TermIdeal {
public:
    TermIdeal(const FieldSpec& f, int nvars, std::vector<MultTerm> gens);
    static TermIdeal zero(const FieldSpec& f, int nvars) {
        return TermIdeal(f, nvars, {});
    }

    const FieldSpec& field() const { return field_; }
    int nvars() const { return nvars_; }
    const std::vector<MultTerm>& gens() const { return gens_; }
    const Subspace& radspan() const { return radspan_; }
    bool is_zero_ideal() const { return gens_.empty(); }

    TermIdeal with(const MultTerm& extra) const;
    TermIdeal with_all(const std::vector<MultTerm>& extra) const;

private:
    FieldSpec field_;
    int nvars_;
    std::vector<MultTerm> gens_;
    Subspace radspan_;
};

Subspace radspan_of(const FieldSpec& f, int nvars, const std::vector<MultTerm>& gens);

/// The partition of a term's form list into similarity classes modulo a
/// subspace. Nodes are the class products (coefficient one); the class
/// inside the subspace, when present, carries representative zero, all
/// other representatives are the first class form normalized.
struct NodeSet {
    std::vector<FormVec> reps;
    std::vector<MultTerm> nodes;
};
NodeSet nodes_of(const MultTerm& f, const Subspace& s);

/// Degree-slice membership for a homogeneous polynomial in the homogeneous
/// ideal generated by the given polynomials: h lies in the ideal iff it lies
/// in the span of { monomial * g : total degree deg(h) }.
bool slice_membership(const Poly& h, const std::vector<Poly>& gens,
                      std::size_t row_cap = caps::kSliceRows);
bool slice_membership(const Poly& h, const TermIdeal& ideal,
                      std::size_t row_cap = caps::kSliceRows);

/// Membership of an arbitrary polynomial in a term ideal (homogeneous
/// components are decided independently).
bool poly_in_ideal(const Poly& h, const TermIdeal& ideal);

/// Membership of a multiplication term: forms outside radsp(I) are cancelled
/// (non-zerodivisors), the rest is confined to rank(radsp) coordinates and
/// decided by a degree slice.
bool term_in_ideal(const MultTerm& t, const TermIdeal& ideal);

/// The affine set of coefficient vectors beta with beta[fixed] = 1 and
/// sum beta_i terms_i in the ideal: a witness plus the directions with
/// beta[fixed] = 0.
struct ComboSolution {
    std::vector<Scalar> witness;
    std::vector<std::vector<Scalar>> kernel;
};
std::optional<ComboSolution> combo_in_ideal(const std::vector<MultTerm>& terms, int fixed,
                                            const TermIdeal& ideal);

/// The alpha with h0 - alpha*h1 in the ideal, when one exists (unique when
/// h1 lies outside the ideal).
std::optional<Scalar> affine_membership(const Poly& h0, const Poly& h1, const TermIdeal& ideal);

/// Tests the ideal Chinese-remainder decomposition <I,zfg> =
/// <I,z> ^ <I,f> ^ <I,g> on the given probes, after verifying the
/// hypotheses L(z) in radsp(I), L(f) disjoint from radsp(I) and L(g)
/// disjoint from radsp(I,f). A falsifier: true means every probe agreed.
bool crt_check(const TermIdeal& ideal, const MultTerm& z, const MultTerm& f, const MultTerm& g,
               const std::vector<Poly>& probes);

/// First node g of f mod I with h outside <I,g>; absent when h lies in
/// <I,g> for every node, in which case h in <I,f> is asserted.
std::optional<MultTerm> node_reduction(const Poly& h, const TermIdeal& ideal, const MultTerm& f);

/// Tests the cancellation rule: with the generators similar to powers of
/// independent-mod-K forms and ell in F*ell_s + K,
/// ell*f in <f_1..f_m>  iff  f in <f_1,..,f_s/gcd(f_s,ell),..,f_m>.
/// Returns whether the two memberships agree.
bool cancel_check(const FormVec& ell, const Poly& f, const std::vector<MultTerm>& gens,
                  const Subspace& k_space);

}  // namespace spslab

#endif
