
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>
#include <sstream>

#include "spslab/errors.hpp"
#include "spslab/io.hpp"

using namespace spslab;

namespace {

const FieldSpec Q = FieldSpec::rational();

SPSCircuit parse_str(const std::string& text) {
    std::istringstream in(text);
    return parse_circuit(in).circuit;
}

}  // namespace

TEST_CASE("circuit round trip is canonical") {
    SPSCircuit c = gen_interpolation_identity(4, Q);
    std::string text = serialize_circuit(c);
    SPSCircuit back = parse_str(text);
    CHECK(back.field == c.field);
    CHECK(back.nvars == c.nvars);
    REQUIRE(back.fanin() == c.fanin());
    for (int i = 0; i < c.fanin(); ++i)
        CHECK(back.terms[static_cast<std::size_t>(i)] == c.terms[static_cast<std::size_t>(i)]);
    CHECK(serialize_circuit(back) == text);
}

TEST_CASE("round trip across fields and multiplicities") {
    for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
        for (const FieldSpec& f : {Q, FieldSpec::prime(7)}) {
            SPSCircuit c = gen_random_circuit(3, 3, 2, f, seed);
            std::string text = serialize_circuit(c);
            SPSCircuit back = parse_str(text);
            CHECK(serialize_circuit(back) == text);
            CHECK(expand(back) == expand(c));
        }
    }
}

TEST_CASE("parsing the documented grammar") {
    SPSCircuit c = parse_str(
        "# comment line\n"
        "field rational\n"
        "nvars 2\n"
        "term 1: [1,0]\n"
        "term -2: [1,1]   # inline comment\n"
        "term 1/1: [1,2]\n");
    CHECK(c.fanin() == 3);
    CHECK(c.nvars == 2);
    CHECK(expand(c).is_zero());  // it is the k=3 interpolation identity

    SPSCircuit p = parse_str(
        "field prime 5\n"
        "nvars 2\n"
        "term 3: [1,2]^2 [0,1]\n");
    CHECK(p.terms[0].degree() == 3);
    CHECK(p.terms[0].forms[0] == p.terms[0].forms[1]);
}

TEST_CASE("parse errors carry line numbers") {
    auto fails_with = [](const std::string& text, const std::string& needle) {
        std::istringstream in(text);
        try {
            parse_circuit(in);
            FAIL_CHECK("expected a parse error for: " << text);
        } catch (const input_error& e) {
            CHECK_MESSAGE(std::string(e.what()).find(needle) != std::string::npos,
                          "message was: " << e.what());
        }
    };
    fails_with("field risible\nnvars 2\n", "line 1");
    fails_with("field rational\nnvars 0\n", "line 2");
    fails_with("field rational\nnvars 2\nterm 1: [1,0,0]\n", "line 3");
    fails_with("field rational\nnvars 2\nterm 1: [1,0\n", "line 3");
    fails_with("field rational\nnvars 2\nterm 0: [1,0]\n", "nonzero");
    fails_with("field prime 6\nnvars 2\n", "prime");
}

TEST_CASE("affine constant slots homogenize") {
    std::istringstream in(
        "field rational\n"
        "nvars 1\n"
        "term 1: [1|1]\n"   // x + 1
        "term -1: [1|0]\n"  // x
        );
    ParsedCircuit pc = parse_circuit(in);
    CHECK(pc.constant_var == 1);
    CHECK(pc.circuit.nvars == 2);
    SPSCircuit h = homogenize(pc.circuit, pc.constant_var);
    CHECK(h.is_homogeneous_degrees());
    // (x + z) - x = z: evaluating at z = 1 gives the affine value 1
    CHECK(evaluate(h, {Scalar::from_int(Q, 9), Scalar::one(Q)}) == Scalar::one(Q));
}

TEST_CASE("sg config round trip") {
    SGConfig s = gen_skew_lines();
    std::string text = serialize_sgconfig(s);
    std::istringstream in(text);
    SGConfig back = parse_sgconfig(in);
    CHECK(back.vectors == s.vectors);
    CHECK(serialize_sgconfig(back) == text);
}

TEST_CASE("hitting set text export") {
    HittingSet h = hitting_set(1, 1, 1, Q);
    std::string text = serialize_hitting_set_text(h);
    CHECK(text.find("point [") == 0);
}

TEST_CASE("slice diagnostic dump") {
    TermIdeal ideal(Q, 2,
                    {MultTerm(Scalar::one(Q),
                              {FormVec::from_ints(Q, {1, 0}), FormVec::from_ints(Q, {1, 0})}),
                     MultTerm(Scalar::one(Q),
                              {FormVec::from_ints(Q, {1, 0}), FormVec::from_ints(Q, {0, 1})})});
    Poly h(Q, 2);
    h.add_term({2, 0}, Scalar::from_int(Q, 3));
    nlohmann::json d = slice_diagnostic(h, ideal);
    CHECK(d["schema"] == "sps-lab/1");
    CHECK(d["member"] == true);
    CHECK(d["rows"].size() == 3);     // x^2, xy, y^2
    CHECK(d["columns"].size() == 2);  // one shift each at degree 2
}

namespace {

void validate_against_schema(const nlohmann::json& report, const nlohmann::json& schema) {
    REQUIRE(report.contains("schema"));
    CHECK(report["schema"] == schema["schema_id"]);
    REQUIRE(report.contains("type"));
    std::string type = report["type"];
    REQUIRE_MESSAGE(schema["types"].contains(type), "unknown report type " << type);
    for (const auto& key : schema["types"][type])
        CHECK_MESSAGE(report.contains(key.get<std::string>()),
                      type << " report misses key " << key);
}

}  // namespace

TEST_CASE("reports validate against the shipped schema") {
    std::ifstream schema_in(std::string(SPSLAB_SOURCE_DIR) + "/docs/schema.json");
    REQUIRE(schema_in.good());
    nlohmann::json schema = nlohmann::json::parse(schema_in);

    SPSCircuit c = gen_interpolation_identity(3, Q);
    validate_against_schema(to_json(build_nucleus(c)), schema);
    validate_against_schema(to_json(verify_rank_bounds(c)), schema);
    validate_against_schema(to_json(sg_growth_check(gen_skew_lines(), 3)), schema);
    validate_against_schema(to_json(hitting_set(1, 1, 1, Q)), schema);
    validate_against_schema(to_json(profile(c, true)), schema);
    auto v = path_identity_test(SPSCircuit(
        Q, 2, {MultTerm(Scalar::one(Q), {FormVec::from_ints(Q, {1, 0})}),
               MultTerm(Scalar::one(Q), {FormVec::from_ints(Q, {0, 1})})}));
    validate_against_schema(to_json(*v.certificate), schema);
    TermIdeal ideal(Q, 2, {MultTerm(Scalar::one(Q), {FormVec::from_ints(Q, {1, 0})})});
    Poly h = Poly::from_form(FormVec::from_ints(Q, {1, 0}));
    validate_against_schema(slice_diagnostic(h, ideal), schema);
}

TEST_CASE("json reports carry the schema id") {
    SPSCircuit c = gen_interpolation_identity(3, Q);
    NucleusReport rep = build_nucleus(c);
    nlohmann::json j = to_json(rep);
    CHECK(j["schema"] == "sps-lab/1");
    CHECK(j["type"] == "nucleus-report");
    CHECK(j["K"]["rank"] == rep.k_space.rank());
    CHECK(j["alphas"].size() == 3);

    nlohmann::json jr = to_json(verify_rank_bounds(c));
    CHECK(jr["schema"] == "sps-lab/1");
    CHECK(jr["all_pass"] == true);

    auto verdict = path_identity_test(SPSCircuit(
        Q, 2, {MultTerm(Scalar::one(Q), {FormVec::from_ints(Q, {1, 0})}),
               MultTerm(Scalar::one(Q), {FormVec::from_ints(Q, {0, 1})})}));
    REQUIRE(verdict.certificate.has_value());
    nlohmann::json jc = to_json(*verdict.certificate);
    CHECK(jc["schema"] == "sps-lab/1");
    CHECK(jc["survivor"] == 2);  // 1-based in reports

    nlohmann::json jh = to_json(hitting_set(1, 1, 1, Q));
    CHECK(jh["constants"] == "artifact-defined");
}
