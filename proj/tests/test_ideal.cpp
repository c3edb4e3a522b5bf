#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "spslab/errors.hpp"
#include "spslab/ideal.hpp"

using namespace spslab;

namespace {

const FieldSpec Q = FieldSpec::rational();

FormVec fv(const std::vector<long>& v) { return FormVec::from_ints(Q, v); }
Scalar qi(long v) { return Scalar::from_int(Q, v); }
MultTerm mt(long coeff, std::vector<FormVec> forms) {
    return MultTerm(qi(coeff), std::move(forms));
}

FormVec rand_form(std::mt19937_64& rng, const FieldSpec& f, int n) {
    FormVec v(f, n);
    while (v.is_zero()) {
        for (int i = 0; i < n; ++i) {
            long c = f.is_prime_field() ? static_cast<long>(rng() % f.modulus)
                                        : static_cast<long>(rng() % 7) - 3;
            v.coeffs[static_cast<std::size_t>(i)] = Scalar::from_int(f, c);
        }
    }
    return v;
}

MultTerm rand_term(std::mt19937_64& rng, const FieldSpec& f, int n, int maxdeg) {
    int d = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(maxdeg));
    std::vector<FormVec> forms;
    for (int i = 0; i < d; ++i) forms.push_back(rand_form(rng, f, n));
    long c = f.is_prime_field() ? 1 + static_cast<long>(rng() % (f.modulus - 1))
                                : (rng() % 2 ? 1 : -1) * (1 + static_cast<long>(rng() % 3));
    return MultTerm(Scalar::from_int(f, c), std::move(forms));
}

Poly rand_homogeneous(std::mt19937_64& rng, const FieldSpec& f, int n, int deg, int nterms) {
    Poly p(f, n);
    auto mons = monomials_of_degree(n, deg, [&] {
        std::vector<int> s;
        for (int i = 0; i < n; ++i) s.push_back(i);
        return s;
    }());
    for (int t = 0; t < nterms; ++t) {
        const Monomial& m = mons[rng() % mons.size()];
        long c = f.is_prime_field() ? static_cast<long>(rng() % f.modulus)
                                    : static_cast<long>(rng() % 9) - 4;
        p.add_term(m, Scalar::from_int(f, c));
    }
    return p;
}

}  // namespace

TEST_CASE("radspan") {
    // <x1^2, x1 x2> has radical span sp(x1, x2)
    TermIdeal i1(Q, 2, {mt(1, {fv({1, 0}), fv({1, 0})}), mt(1, {fv({1, 0}), fv({0, 1})})});
    CHECK(i1.radspan().rank() == 2);

    TermIdeal i2 = TermIdeal::zero(Q, 3);
    CHECK(i2.radspan().rank() == 0);

    TermIdeal i3(Q, 2, {mt(1, {fv({1, 1}), fv({1, 1}), fv({1, 1})})});
    CHECK(i3.radspan().rank() == 1);
    CHECK(i3.radspan().contains(fv({1, 1})));
}

TEST_CASE("nodes") {
    // f = x1^2 * x2 * (x1+x2) mod sp(x1): nodes {x1^2, x2*(x1+x2)}
    Subspace s = Subspace::span_of(Q, 2, {fv({1, 0})});
    MultTerm f = mt(1, {fv({1, 0}), fv({1, 0}), fv({0, 1}), fv({1, 1})});
    NodeSet ns = nodes_of(f, s);
    REQUIRE(ns.nodes.size() == 2);
    CHECK(ns.reps[0].is_zero());           // the in-subspace class
    CHECK(ns.nodes[0].degree() == 2);      // x1^2
    CHECK(ns.reps[1] == fv({0, 1}));       // x2 normalized
    CHECK(ns.nodes[1].degree() == 2);      // x2*(x1+x2)

    // ell^d mod {0}: single node
    MultTerm g = mt(1, {fv({1, 2}), fv({1, 2}), fv({1, 2})});
    NodeSet ns2 = nodes_of(g, Subspace::zero(Q, 2));
    CHECK(ns2.nodes.size() == 1);
    CHECK(ns2.nodes[0].degree() == 3);

    // pairwise independent forms mod {0}: one node per form
    MultTerm h = mt(1, {fv({1, 0}), fv({0, 1}), fv({1, 1})});
    CHECK(nodes_of(h, Subspace::zero(Q, 2)).nodes.size() == 3);

    // product of nodes re-expands to the term (up to the coefficient)
    Poly prod = Poly::constant(Q, 2, f.coeff);
    for (const auto& node : ns.nodes)
        prod = prod.mul(node.expand(2));
    CHECK(prod == f.expand(2));

    // reps pairwise non-similar mod S, node forms inside F* rep + S
    for (std::size_t a = 0; a < ns.reps.size(); ++a) {
        for (std::size_t b = a + 1; b < ns.reps.size(); ++b) {
            FormVec ra = s.reduce(ns.reps[a]);
            FormVec rb = s.reduce(ns.reps[b]);
            bool similar = (ra.is_zero() && rb.is_zero()) ||
                           (!ra.is_zero() && !rb.is_zero() &&
                            ra.normalized() == rb.normalized());
            CHECK_FALSE(similar);
        }
        for (const auto& form : ns.nodes[a].forms) {
            FormVec res = s.reduce(form);
            if (ns.reps[a].is_zero()) CHECK(res.is_zero());
            else CHECK(res.normalized() == s.reduce(ns.reps[a]).normalized());
        }
    }
}

TEST_CASE("slice membership") {
    std::vector<Poly> gens{mt(1, {fv({1, 0}), fv({1, 0})}).expand(2),
                           mt(1, {fv({1, 0}), fv({0, 1})}).expand(2)};
    // x1 x2 + x2^2 not in <x1^2, x1 x2>
    Poly h1(Q, 2);
    h1.add_term({1, 1}, qi(1));
    h1.add_term({0, 2}, qi(1));
    CHECK_FALSE(slice_membership(h1, gens));

    // 3 x1^2 in the ideal
    Poly h2(Q, 2);
    h2.add_term({2, 0}, qi(3));
    CHECK(slice_membership(h2, gens));

    // zero polynomial in every ideal
    CHECK(slice_membership(Poly(Q, 2), gens));
}

TEST_CASE("term membership") {
    TermIdeal ideal(Q, 3,
                    {mt(1, {fv({1, 0, 0}), fv({1, 0, 0})}),
                     mt(1, {fv({1, 0, 0}), fv({0, 1, 0})})});
    // x3 * x1^2: drop x3 (non-zerodivisor), x1^2 in the slice
    CHECK(term_in_ideal(mt(1, {fv({0, 0, 1}), fv({1, 0, 0}), fv({1, 0, 0})}), ideal));
    // x2 * (x1+x2) not in the ideal
    CHECK_FALSE(term_in_ideal(mt(1, {fv({0, 1, 0}), fv({1, 1, 0})}), ideal));
    // x*y in <x>
    TermIdeal ix(Q, 2, {mt(1, {fv({1, 0})})});
    CHECK(term_in_ideal(mt(1, {fv({1, 0}), fv({0, 1})}), ix));
    // zero ideal contains no multiplication term
    CHECK_FALSE(term_in_ideal(mt(1, {fv({1, 0})}), TermIdeal::zero(Q, 2)));
}

TEST_CASE("term membership agrees with the direct slice oracle") {
    std::mt19937_64 rng(31337);
    int checked = 0;
    for (int trial = 0; trial < 300; ++trial) {
        const FieldSpec f = (trial % 2) ? FieldSpec::prime(5) : Q;
        int n = 2 + static_cast<int>(rng() % 2);
        std::vector<MultTerm> gens;
        int m = 1 + static_cast<int>(rng() % 2);
        for (int i = 0; i < m; ++i) gens.push_back(rand_term(rng, f, n, 2));
        TermIdeal ideal(f, n, gens);
        MultTerm t = rand_term(rng, f, n, 3);
        bool fast = term_in_ideal(t, ideal);
        bool direct = slice_membership(t.expand(n), ideal);
        CHECK(fast == direct);
        if (fast) ++checked;
    }
    CHECK(checked > 0);  // the sample hit both outcomes
}

TEST_CASE("non-zerodivisor cancellation property") {
    // For ell outside radsp(I): ell*g in I iff g in I.
    std::mt19937_64 rng(777);
    int positive = 0;
    for (int trial = 0; trial < 300; ++trial) {
        const FieldSpec f = (trial % 2) ? FieldSpec::prime(7) : Q;
        int n = 2 + static_cast<int>(rng() % 2);
        std::vector<MultTerm> gens{rand_term(rng, f, n, 2)};
        if (rng() % 2) gens.push_back(rand_term(rng, f, n, 2));
        TermIdeal ideal(f, n, gens);
        if (ideal.radspan().rank() == n) continue;  // no form escapes the span
        FormVec ell = rand_form(rng, f, n);
        int guard = 0;
        while (ideal.radspan().contains(ell) && guard++ < 50) ell = rand_form(rng, f, n);
        if (ideal.radspan().contains(ell)) continue;
        MultTerm g = rand_term(rng, f, n, 2);
        std::vector<FormVec> lifted{ell};
        lifted.insert(lifted.end(), g.forms.begin(), g.forms.end());
        MultTerm ellg(g.coeff, lifted);
        bool a = term_in_ideal(ellg, ideal);
        bool b = term_in_ideal(g, ideal);
        CHECK(a == b);
        if (a) ++positive;
    }
    CHECK(positive > 0);
}

TEST_CASE("homogeneous ideal degree properties") {
    std::mt19937_64 rng(555);
    int ran1 = 0, ran2 = 0;
    for (int trial = 0; trial < 250; ++trial) {
        const FieldSpec f = (trial % 2) ? FieldSpec::prime(5) : Q;
        int n = 2 + static_cast<int>(rng() % 2);
        std::vector<MultTerm> gens;
        int m = 1 + static_cast<int>(rng() % 2);
        for (int i = 0; i < m; ++i) gens.push_back(rand_term(rng, f, n, 3));
        // the last generator carries the maximal degree
        std::size_t best = 0;
        for (std::size_t i = 0; i < gens.size(); ++i)
            if (gens[i].degree() > gens[best].degree()) best = i;
        std::swap(gens[best], gens.back());
        const int dmax = gens.back().degree();
        std::vector<MultTerm> rest(gens.begin(), gens.end() - 1);
        TermIdeal full(f, n, gens);
        TermIdeal dropped = rest.empty() ? TermIdeal::zero(f, n) : TermIdeal(f, n, rest);

        // (1) deg(g) < deg(f_m): membership unchanged when f_m is dropped
        if (dmax >= 2) {
            Poly probe = rand_homogeneous(rng, f, n, dmax - 1, 3);
            if (!probe.is_zero()) {
                CHECK(poly_in_ideal(probe, full) == poly_in_ideal(probe, dropped));
                ++ran1;
            }
        }

        // (2) deg(g) = deg(f_m): g in <f_1..f_m> iff some a gives
        //     g + a f_m in <f_1..f_{m-1}>; the witness route must agree with
        //     the one-shot slice route.
        {
            Poly probe = rng() % 2 ? rand_homogeneous(rng, f, n, dmax, 3)
                                   : rand_term(rng, f, n, 1).expand(n).mul(
                                         gens.back().expand(n));
            if (probe.is_zero() || probe.degree() != dmax) continue;
            bool lhs = poly_in_ideal(probe, full);
            auto alpha = affine_membership(probe, gens.back().expand(n), dropped);
            CHECK(lhs == alpha.has_value());
            if (alpha) {
                Poly shifted = probe - gens.back().expand(n).scaled(*alpha);
                CHECK(poly_in_ideal(shifted, dropped));
            }
            if (f.is_prime_field()) {
                // third route: exhaust every a in F_p
                bool any = false;
                for (std::uint64_t a = 0; a < f.modulus; ++a) {
                    Poly shifted =
                        probe + gens.back().expand(n).scaled(Scalar::residue(f, a));
                    if (poly_in_ideal(shifted, dropped)) any = true;
                }
                CHECK(lhs == any);
            }
            ++ran2;
        }
    }
    CHECK(ran1 >= 50);
    CHECK(ran2 >= 50);
}

TEST_CASE("combo_in_ideal") {
    // the interpolation dependency over the zero ideal
    SPSCircuit c4 = gen_interpolation_identity(4, Q);
    std::vector<MultTerm> terms = c4.terms;
    auto combo = combo_in_ideal(terms, 3, TermIdeal::zero(Q, 2));
    REQUIRE(combo.has_value());
    CHECK(combo->kernel.empty());
    // beta with beta_4 = 1 and sum beta_i T_i = 0 is all-ones (the terms
    // carry the lambda coefficients already)
    for (const auto& b : combo->witness) CHECK(b == qi(1));

    // over the raw powers x^2, (x+y)^2, (x+2y)^2, (x+3y)^2 the normalized
    // dependency is the third finite difference (-1, 3, -3, 1)
    std::vector<MultTerm> raw;
    for (long a = 0; a <= 3; ++a)
        raw.push_back(mt(1, {fv({1, a}), fv({1, a})}));
    auto vand = combo_in_ideal(raw, 3, TermIdeal::zero(Q, 2));
    REQUIRE(vand.has_value());
    CHECK(vand->kernel.empty());
    CHECK(vand->witness == std::vector<Scalar>{qi(-1), qi(3), qi(-3), qi(1)});

    // terms {x*u, x*v} over <x>: the solution set is full
    TermIdeal ix(Q, 3, {mt(1, {fv({1, 0, 0})})});
    std::vector<MultTerm> pair{mt(1, {fv({1, 0, 0}), fv({0, 1, 0})}),
                               mt(1, {fv({1, 0, 0}), fv({0, 0, 1})})};
    auto full = combo_in_ideal(pair, 0, ix);
    REQUIRE(full.has_value());
    CHECK(full->kernel.size() == 1);

    // independent terms over the zero ideal: absent
    std::vector<MultTerm> indep{mt(1, {fv({1, 0, 0}), fv({1, 0, 0})}),
                                mt(1, {fv({0, 1, 0}), fv({0, 1, 0})})};
    CHECK_FALSE(combo_in_ideal(indep, 0, TermIdeal::zero(Q, 3)).has_value());
}

TEST_CASE("combo_in_ideal over the zero ideal matches term_dependencies") {
    std::mt19937_64 rng(909);
    for (int trial = 0; trial < 50; ++trial) {
        SPSCircuit c = gen_random_circuit(3, 2, 2, Q, rng());
        auto deps = term_dependencies(c);
        auto combo = combo_in_ideal(c.terms, 0, TermIdeal::zero(Q, 2));
        bool has_with_first = false;
        for (const auto& beta : deps)
            if (!beta[0].is_zero()) has_with_first = true;
        CHECK(combo.has_value() == has_with_first);
        if (combo) {
            Poly acc(Q, c.nvars);
            for (std::size_t i = 0; i < combo->witness.size(); ++i)
                acc = acc + c.terms[i].expand(c.nvars).scaled(combo->witness[i]);
            CHECK(acc.is_zero());
        }
    }
}

TEST_CASE("ideal chinese remaindering on the worked example") {
    // I=<x1>, z=x1, f=x2, g=x3
    TermIdeal ideal(Q, 3, {mt(1, {fv({1, 0, 0})})});
    MultTerm z = mt(1, {fv({1, 0, 0})});
    MultTerm f = mt(1, {fv({0, 1, 0})});
    MultTerm g = mt(1, {fv({0, 0, 1})});

    Poly probe1 = mt(1, {fv({1, 0, 0})}).expand(3);           // h = x1
    Poly probe2 = mt(1, {fv({0, 1, 0}), fv({0, 0, 1})}).expand(3);  // h = x2 x3
    CHECK(crt_check(ideal, z, f, g, {probe1, probe2}));

    // violating hypothesis: f = x1 meets radsp(I)
    CHECK_THROWS_AS(crt_check(ideal, z, mt(1, {fv({1, 0, 0})}), g, {probe1}),
                    precondition_error);
}

TEST_CASE("crt_check holds on random hypothesis-satisfying instances") {
    std::mt19937_64 rng(1234);
    int ran = 0;
    for (int trial = 0; trial < 400 && ran < 120; ++trial) {
        const FieldSpec f = (trial % 2) ? FieldSpec::prime(5) : Q;
        int n = 3 + static_cast<int>(rng() % 2);
        std::vector<MultTerm> gens{rand_term(rng, f, n, 2)};
        TermIdeal ideal(f, n, gens);
        int rk = ideal.radspan().rank();
        if (rk == 0 || rk >= n - 1) continue;

        // z: forms from the radical span
        std::vector<FormVec> zforms;
        int zdeg = 1 + static_cast<int>(rng() % 2);
        for (int i = 0; i < zdeg; ++i) {
            FormVec acc(f, n);
            for (const auto& row : ideal.radspan().basis()) {
                long c = f.is_prime_field() ? static_cast<long>(rng() % f.modulus)
                                            : static_cast<long>(rng() % 5) - 2;
                acc = acc + row.scaled(Scalar::from_int(f, c));
            }
            if (acc.is_zero()) acc = ideal.radspan().basis().front();
            zforms.push_back(acc);
        }
        MultTerm z(Scalar::one(f), zforms);

        auto sample_outside = [&](const Subspace& avoid) -> std::optional<FormVec> {
            for (int tries = 0; tries < 60; ++tries) {
                FormVec v = rand_form(rng, f, n);
                if (!avoid.contains(v)) return v;
            }
            return std::nullopt;
        };
        auto ff = sample_outside(ideal.radspan());
        if (!ff) continue;
        MultTerm fterm(Scalar::one(f), {*ff});
        Subspace rad_if = ideal.radspan();
        rad_if.insert(*ff);
        if (rad_if.rank() == n) continue;
        auto gg = sample_outside(rad_if);
        if (!gg) continue;
        MultTerm gterm(Scalar::one(f), {*gg});

        std::vector<Poly> probes;
        int total_deg = z.degree() + 2;
        probes.push_back(rand_homogeneous(rng, f, n, total_deg, 3));
        // a probe from the product ideal itself
        {
            std::vector<FormVec> all = z.forms;
            all.push_back(*ff);
            all.push_back(*gg);
            Poly member = MultTerm(Scalar::one(f), all).expand(n);
            probes.push_back(member);
        }
        CHECK(crt_check(ideal, z, fterm, gterm, probes));
        ++ran;
    }
    CHECK(ran >= 100);
}

TEST_CASE("node_reduction") {
    TermIdeal zero2 = TermIdeal::zero(Q, 2);
    // h = x2^2, f = x1*x2: reduce to node x1
    Poly h1(Q, 2);
    h1.add_term({0, 2}, qi(1));
    MultTerm f1 = mt(1, {fv({1, 0}), fv({0, 1})});
    auto g1 = node_reduction(h1, zero2, f1);
    REQUIRE(g1.has_value());
    CHECK(g1->forms == std::vector<FormVec>{fv({1, 0})});

    // h = x1 x2 = f: member of <f>, reduction absent
    CHECK_FALSE(node_reduction(f1.expand(2), zero2, f1).has_value());

    // h = x3^2, f = x1^2 (x1+x2): first node x1^2 works
    TermIdeal zero3 = TermIdeal::zero(Q, 3);
    Poly h3(Q, 3);
    h3.add_term({0, 0, 2}, qi(1));
    MultTerm f3 = mt(1, {fv({1, 0, 0}), fv({1, 0, 0}), fv({1, 1, 0})});
    auto g3 = node_reduction(h3, zero3, f3);
    REQUIRE(g3.has_value());
    CHECK(g3->degree() == 2);
    CHECK(g3->forms[0] == fv({1, 0, 0}));
}

TEST_CASE("cancel_check") {
    Subspace k0 = Subspace::zero(Q, 2);
    // f1 = x1^2, ell = x1, f = x1: both sides true
    std::vector<MultTerm> gens{mt(1, {fv({1, 0}), fv({1, 0})})};
    CHECK(cancel_check(fv({1, 0}), Poly::from_form(fv({1, 0})), gens, k0));
    // f = x2: both sides false
    CHECK(cancel_check(fv({1, 0}), Poly::from_form(fv({0, 1})), gens, k0));
    // ell outside F*ell_s + K: precondition
    CHECK_THROWS_AS(cancel_check(fv({1, 1}), Poly::from_form(fv({1, 0})), gens, k0),
                    precondition_error);
}

TEST_CASE("cancel_check on random lemma instances") {
    std::mt19937_64 rng(4242);
    int ran = 0;
    for (int trial = 0; trial < 500 && ran < 150; ++trial) {
        const FieldSpec f = (trial % 2) ? FieldSpec::prime(7) : Q;
        int n = 3;
        // K: a random line (or zero)
        Subspace k = Subspace::zero(f, n);
        if (rng() % 2) k.insert(rand_form(rng, f, n));

        int m = 1 + static_cast<int>(rng() % 2);
        std::vector<FormVec> class_forms;
        Subspace grown = k;
        bool ok = true;
        for (int i = 0; i < m; ++i) {
            FormVec ell = rand_form(rng, f, n);
            int guard = 0;
            while (!grown.insert(ell) && guard++ < 40) ell = rand_form(rng, f, n);
            if (guard >= 40) ok = false;
            class_forms.push_back(ell);
        }
        if (!ok) continue;

        std::vector<MultTerm> gens;
        for (int i = 0; i < m; ++i) {
            int e = 1 + static_cast<int>(rng() % 2);
            std::vector<FormVec> forms;
            for (int j = 0; j < e; ++j) {
                FormVec noise(f, n);
                for (const auto& row : k.basis()) {
                    long c = f.is_prime_field() ? static_cast<long>(rng() % f.modulus)
                                                : static_cast<long>(rng() % 5) - 2;
                    noise = noise + row.scaled(Scalar::from_int(f, c));
                }
                long scale = f.is_prime_field() ? 1 + static_cast<long>(rng() % (f.modulus - 1))
                                                : (rng() % 2 ? 1 : -1) * (1 + static_cast<long>(rng() % 2));
                forms.push_back(class_forms[static_cast<std::size_t>(i)]
                                    .scaled(Scalar::from_int(f, scale)) +
                                noise);
            }
            gens.emplace_back(Scalar::one(f), forms);
        }

        // ell in F*ell_s + K
        std::size_t s = rng() % gens.size();
        FormVec noise(f, n);
        for (const auto& row : k.basis()) {
            long c = f.is_prime_field() ? static_cast<long>(rng() % f.modulus)
                                        : static_cast<long>(rng() % 5) - 2;
            noise = noise + row.scaled(Scalar::from_int(f, c));
        }
        long cs = f.is_prime_field() ? static_cast<long>(rng() % f.modulus)
                                     : static_cast<long>(rng() % 5) - 2;
        FormVec ell = class_forms[s].scaled(Scalar::from_int(f, cs)) + noise;
        if (ell.is_zero()) continue;

        Poly probe = rand_homogeneous(rng, f, n, 1 + static_cast<int>(rng() % 3), 3);
        if (probe.is_zero()) continue;
        CHECK(cancel_check(ell, probe, gens, k));
        ++ran;
    }
    CHECK(ran >= 100);
}
