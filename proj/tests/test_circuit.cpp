#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "spslab/circuit.hpp"
#include "spslab/errors.hpp"

using namespace spslab;

namespace {

const FieldSpec Q = FieldSpec::rational();

FormVec fv(const std::vector<long>& v) { return FormVec::from_ints(Q, v); }
Scalar qi(long v) { return Scalar::from_int(Q, v); }

// x - 2(x+y) + (x+2y), the k=3 interpolation identity
SPSCircuit interp3() { return gen_interpolation_identity(3, Q); }

// -x^2 + 3(x+y)^2 - 3(x+2y)^2 + (x+3y)^2
SPSCircuit interp4() { return gen_interpolation_identity(4, Q); }

}  // namespace

TEST_CASE("evaluate") {
    // x*y - x*y at (3,5)
    SPSCircuit c(Q, 2,
                 {MultTerm(qi(1), {fv({1, 0}), fv({0, 1})}),
                  MultTerm(qi(-1), {fv({1, 0}), fv({0, 1})})});
    CHECK(evaluate(c, {qi(3), qi(5)}).is_zero());

    SPSCircuit c3 = interp3();
    for (long x = -3; x <= 3; ++x)
        for (long y = -3; y <= 3; ++y)
            CHECK(evaluate(c3, {qi(x), qi(y)}).is_zero());

    SPSCircuit sq(Q, 1, {MultTerm(qi(1), {fv({1}), fv({1})})});
    CHECK(evaluate(sq, {qi(2)}) == qi(4));
    CHECK_THROWS_AS(evaluate(sq, {qi(1), qi(2)}), input_error);
}

TEST_CASE("expand") {
    // (x+y)*x -> x^2 + xy
    SPSCircuit c(Q, 2, {MultTerm(qi(1), {fv({1, 1}), fv({1, 0})})});
    Poly p = expand(c);
    CHECK(p.size() == 2);
    CHECK_FALSE(p.is_zero());

    CHECK(expand(interp4()).is_zero());

    // x - x + y -> y
    SPSCircuit c2(Q, 2,
                  {MultTerm(qi(1), {fv({1, 0})}), MultTerm(qi(-1), {fv({1, 0})}),
                   MultTerm(qi(1), {fv({0, 1})})});
    Poly p2 = expand(c2);
    CHECK(p2.size() == 1);
    CHECK(p2.degree() == 1);
}

TEST_CASE("expand cap raises resource error") {
    SPSCircuit c(Q, 2, {MultTerm(qi(1), {fv({1, 1}), fv({1, 2}), fv({1, 3})})});
    CHECK_THROWS_AS(expand(c, 2), resource_error);
}

TEST_CASE("homogenize") {
    // degrees (2,1): pad with one fresh variable
    SPSCircuit c(Q, 1,
                 {MultTerm(qi(1), {fv({1}), fv({1})}), MultTerm(qi(1), {fv({1})})});
    SPSCircuit h = homogenize(c);
    CHECK(h.nvars == 2);
    CHECK(h.is_homogeneous_degrees());
    CHECK(h.degree() == 2);

    // already homogeneous: unchanged
    SPSCircuit c2 = interp3();
    SPSCircuit h2 = homogenize(c2);
    CHECK(h2.nvars == c2.nvars);
    CHECK(expand(h2) == expand(c2));

    // evaluations preserved at pad variable = 1
    for (long x = -2; x <= 2; ++x) {
        Scalar before = evaluate(c, {qi(x)});
        Scalar after = evaluate(h, {qi(x), qi(1)});
        CHECK(before == after);
    }
}

TEST_CASE("gcd and simple part") {
    // x*y + x*(x+y): gcd x
    SPSCircuit c(Q, 2,
                 {MultTerm(qi(1), {fv({1, 0}), fv({0, 1})}),
                  MultTerm(qi(1), {fv({1, 0}), fv({1, 1})})});
    auto gs = gcd_and_simple(c);
    CHECK(gs.gcd.degree() == 1);
    CHECK(gs.gcd.coeff.is_one());
    CHECK(is_simple(gs.simple));
    CHECK_FALSE(is_simple(c));

    // 2x^2y + 4x^2(y+x): monic gcd x^2, scalars stay in the simple part
    SPSCircuit c2(Q, 2,
                  {MultTerm(qi(2), {fv({1, 0}), fv({1, 0}), fv({0, 1})}),
                   MultTerm(qi(4), {fv({1, 0}), fv({1, 0}), fv({1, 1})})});
    auto gs2 = gcd_and_simple(c2);
    CHECK(gs2.gcd.degree() == 2);
    CHECK(gs2.gcd.coeff.is_one());
    // gcd * sim re-expands to the original, term by term
    for (std::size_t i = 0; i < c2.terms.size(); ++i) {
        std::vector<FormVec> joined = gs2.gcd.forms;
        const MultTerm& s = gs2.simple.terms[i];
        joined.insert(joined.end(), s.forms.begin(), s.forms.end());
        MultTerm recombined(s.coeff, joined);
        CHECK(recombined.expand(2) == c2.terms[i].expand(2));
    }

    // simple circuit: gcd degree 0
    CHECK(gcd_and_simple(interp3()).gcd.degree() == 0);
}

TEST_CASE("simplicity and rank") {
    SPSCircuit c3 = interp3();
    CHECK(is_simple(c3));
    CHECK(circuit_rank(c3) == 2);

    SPSCircuit single(Q, 2, {MultTerm(qi(1), {fv({1, 0}), fv({1, 0}), fv({1, 0})})});
    CHECK(circuit_rank(single) == 1);
}

TEST_CASE("term dependencies") {
    // {x, x+y, y}: nullspace spanned by (1,-1,1)
    SPSCircuit c(Q, 2,
                 {MultTerm(qi(1), {fv({1, 0})}), MultTerm(qi(1), {fv({1, 1})}),
                  MultTerm(qi(1), {fv({0, 1})})});
    auto ns = term_dependencies(c);
    REQUIRE(ns.size() == 1);
    Scalar lead = ns[0][0];
    CHECK(ns[0][1] == -lead);
    CHECK(ns[0][2] == lead);
    CHECK(independent_fanin(c) == 2);

    auto ns4 = term_dependencies(interp4());
    REQUIRE(ns4.size() == 1);
    CHECK(independent_fanin(interp4()) == 3);

    // {x^2, y^2}: independent
    SPSCircuit c2(Q, 2,
                  {MultTerm(qi(1), {fv({1, 0}), fv({1, 0})}),
                   MultTerm(qi(1), {fv({0, 1}), fv({0, 1})})});
    CHECK(term_dependencies(c2).empty());

    // grid backend agrees with expansion backend
    auto grid = term_dependencies(interp4(), ZeroBackend::EvalGrid);
    CHECK(grid == ns4);
}

TEST_CASE("dependency vectors re-verify by expansion") {
    std::mt19937_64 rng(101);
    for (int trial = 0; trial < 30; ++trial) {
        SPSCircuit c = gen_random_circuit(3, 2, 2, Q, rng());
        for (const auto& beta : term_dependencies(c)) {
            Poly acc(Q, c.nvars);
            for (std::size_t i = 0; i < beta.size(); ++i)
                acc = acc + c.terms[i].expand(c.nvars).scaled(beta[i]);
            CHECK(acc.is_zero());
        }
    }
}

TEST_CASE("minimality") {
    CHECK(is_minimal(interp3()));
    CHECK(is_minimal(interp4()));

    // (xy - xy) + (uv - uv): vanishing proper subset
    SPSCircuit c(Q, 4,
                 {MultTerm(qi(1), {fv({1, 0, 0, 0}), fv({0, 1, 0, 0})}),
                  MultTerm(qi(-1), {fv({1, 0, 0, 0}), fv({0, 1, 0, 0})}),
                  MultTerm(qi(1), {fv({0, 0, 1, 0}), fv({0, 0, 0, 1})}),
                  MultTerm(qi(-1), {fv({0, 0, 1, 0}), fv({0, 0, 0, 1})})});
    CHECK_FALSE(is_minimal(c));
    auto subset = vanishing_proper_subset(c);
    REQUIRE(subset.has_value());
    CHECK(subset->size() == 2);

    // proper dependency without a vanishing subset stays minimal
    SPSCircuit c2(Q, 2,
                  {MultTerm(qi(1), {fv({1, 0})}), MultTerm(qi(2), {fv({1, 0})}),
                   MultTerm(qi(1), {fv({0, 1})})});
    CHECK(is_minimal(c2));

    SPSCircuit k1(Q, 1, {MultTerm(qi(3), {fv({1})})});
    CHECK(is_minimal(k1));  // vacuous
}

TEST_CASE("interpolation identity family") {
    for (int k = 3; k <= 6; ++k) {
        SPSCircuit c = gen_interpolation_identity(k, Q);
        CHECK(c.fanin() == k);
        CHECK(c.degree() == k - 2);
        CHECK(expand(c).is_zero());
        CHECK(is_simple(c));
        CHECK(is_minimal(c));
        CHECK(circuit_rank(c) == 2);
        CHECK(independent_fanin(c) == k - 1);  // strongly minimal
    }
    // exact k=3 coefficients: x - 2(x+y) + (x+2y)
    SPSCircuit c3 = interp3();
    CHECK(c3.terms[0].coeff == qi(1));
    CHECK(c3.terms[1].coeff == qi(-2));
    CHECK(c3.terms[2].coeff == qi(1));
    // exact k=4 coefficients: (-1, 3, -3, 1)
    SPSCircuit c4 = interp4();
    CHECK(c4.terms[0].coeff == qi(-1));
    CHECK(c4.terms[1].coeff == qi(3));
    CHECK(c4.terms[2].coeff == qi(-3));
    CHECK(c4.terms[3].coeff == qi(1));

    // over F_5 (exactly 5 elements: k=5 admissible, k=6 not)
    FieldSpec f5 = FieldSpec::prime(5);
    SPSCircuit m5 = gen_interpolation_identity(4, f5);
    CHECK(expand(m5).is_zero());
    CHECK(gen_interpolation_identity(5, f5).fanin() == 5);
    CHECK_THROWS_AS(gen_interpolation_identity(6, f5), input_error);
}

TEST_CASE("random circuits are reproducible") {
    SPSCircuit a = gen_random_circuit(3, 2, 3, Q, 42);
    SPSCircuit b = gen_random_circuit(3, 2, 3, Q, 42);
    CHECK(expand(a) == expand(b));
    SPSCircuit c = gen_random_circuit(3, 2, 3, Q, 43);
    CHECK(a.is_homogeneous_degrees());
    CHECK(c.fanin() == 3);
}

TEST_CASE("strongly minimal decomposition") {
    SPSCircuit c4 = interp4();
    auto decs = decompose_strongly_minimal(c4, {0, 1, 2});
    REQUIRE(decs.size() == 1);
    CHECK(decs[0].term == 3);
    CHECK(decs[0].support == std::vector<int>{0, 1, 2});
    CHECK(expand(decs[0].identity).is_zero());
    CHECK(independent_fanin(decs[0].identity) == decs[0].identity.fanin() - 1);

    // k=3: D_3 is the circuit itself
    auto decs3 = decompose_strongly_minimal(interp3(), {0, 1});
    REQUIRE(decs3.size() == 1);
    CHECK(expand(decs3[0].identity).is_zero());
    CHECK(decs3[0].identity.fanin() == 3);

    // non-identity input rejected
    SPSCircuit nz(Q, 2,
                  {MultTerm(qi(1), {fv({1, 0})}), MultTerm(qi(1), {fv({0, 1})})});
    CHECK_THROWS_AS(decompose_strongly_minimal(nz, {0}), precondition_error);
}

TEST_CASE("profile") {
    CircuitProfile p = profile(interp4(), true);
    CHECK(p.is_zero);
    CHECK(p.is_simple);
    CHECK(p.rank == 2);
    CHECK(p.is_minimal.value());
    CHECK(p.ind_fanin.value() == 3);
    CHECK(p.degree == 2);
    CHECK(p.fanin == 4);

    CircuitProfile q = profile(interp4(), false);
    CHECK_FALSE(q.is_minimal.has_value());
    CHECK_FALSE(q.ind_fanin.has_value());
}

TEST_CASE("zero-test backends agree on random circuits") {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 100; ++trial) {
        SPSCircuit c = gen_random_circuit(2 + static_cast<int>(rng() % 3),
                                          1 + static_cast<int>(rng() % 3),
                                          2 + static_cast<int>(rng() % 2), Q, rng());
        bool exact = expand(c).is_zero();
        // randomized cross-check at 100 seeded points
        bool sampled = true;
        std::mt19937_64 prng(999);
        for (int t = 0; t < 100 && sampled; ++t) {
            std::vector<Scalar> pt;
            for (int i = 0; i < c.nvars; ++i)
                pt.push_back(qi(static_cast<long>(prng() % 201) - 100));
            if (!evaluate(c, pt).is_zero()) sampled = false;
        }
        CHECK(exact == sampled);
    }
}
