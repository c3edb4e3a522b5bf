#include "spslab/io.hpp"

#include <fstream>
#include <sstream>

#include "spslab/errors.hpp"

namespace spslab {

namespace {

struct LineReader {
    std::istream& in;
    int lineno = 0;
    std::string line;

    explicit LineReader(std::istream& s) : in(s) {}

    // Next content line with comments stripped; false at end of input.
    bool next() {
        while (std::getline(in, line)) {
            ++lineno;
            auto hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            while (!line.empty() && (line.back() == ' ' || line.back() == '\t' ||
                                     line.back() == '\r'))
                line.pop_back();
            std::size_t start = line.find_first_not_of(" \t");
            if (start == std::string::npos) continue;
            line.erase(0, start);
            return true;
        }
        return false;
    }

    [[noreturn]] void fail(const std::string& msg, std::size_t column = 0) const {
        std::ostringstream os;
        os << "line " << lineno;
        if (column) os << ", column " << column;
        os << ": " << msg;
        throw input_error(os.str());
    }
};

FieldSpec parse_field_line(LineReader& r) {
    if (!r.next()) throw input_error("empty input: expected a field line");
    std::istringstream ls(r.line);
    std::string kw, kind;
    ls >> kw >> kind;
    if (kw != "field") r.fail("expected 'field rational' or 'field prime <p>'");
    if (kind == "rational") return FieldSpec::rational();
    if (kind == "prime") {
        std::uint64_t p = 0;
        if (!(ls >> p)) r.fail("expected a prime modulus");
        try {
            return FieldSpec::prime(p);
        } catch (const input_error& e) {
            r.fail(e.what());
        }
    }
    r.fail("unknown field kind '" + kind + "'");
}

int parse_nvars_line(LineReader& r) {
    if (!r.next()) throw input_error("unexpected end of input: expected 'nvars <n>'");
    std::istringstream ls(r.line);
    std::string kw;
    int n = 0;
    ls >> kw >> n;
    if (kw != "nvars" || n < 1) r.fail("expected 'nvars <n>' with n >= 1");
    return n;
}

// Parses "[c1,c2,...]" or "[c1,...|c0]" starting at pos; advances pos past
// the bracket. Returns coefficients plus the optional constant slot.
std::pair<std::vector<std::string>, std::string> parse_bracket(LineReader& r, std::size_t& pos) {
    if (pos >= r.line.size() || r.line[pos] != '[') r.fail("expected '['", pos + 1);
    std::size_t end = r.line.find(']', pos);
    if (end == std::string::npos) r.fail("unterminated '['", pos + 1);
    std::string body = r.line.substr(pos + 1, end - pos - 1);
    pos = end + 1;
    std::string constant;
    auto bar = body.find('|');
    if (bar != std::string::npos) {
        constant = body.substr(bar + 1);
        body.erase(bar);
    }
    std::vector<std::string> parts;
    std::string cur;
    for (char ch : body) {
        if (ch == ',') {
            parts.push_back(cur);
            cur.clear();
        } else if (ch != ' ') {
            cur += ch;
        }
    }
    parts.push_back(cur);
    return {parts, constant};
}

}  // namespace

ParsedCircuit parse_circuit(std::istream& in) {
    LineReader r(in);
    FieldSpec field = parse_field_line(r);
    int n = parse_nvars_line(r);

    struct RawForm {
        std::vector<std::string> coeffs;
        std::string constant;
        int mult;
    };
    struct RawTerm {
        std::string coeff;
        std::vector<RawForm> forms;
        int lineno;
    };
    std::vector<RawTerm> raw;
    bool any_constant = false;

    while (r.next()) {
        std::istringstream ls(r.line);
        std::string kw;
        ls >> kw;
        if (kw != "term") r.fail("expected 'term <coeff>: ...'");
        RawTerm rt;
        rt.lineno = r.lineno;
        std::string rest = r.line.substr(4);
        auto colon = rest.find(':');
        if (colon == std::string::npos) r.fail("missing ':' after the term coefficient");
        rt.coeff = rest.substr(0, colon);
        rt.coeff.erase(0, rt.coeff.find_first_not_of(" \t"));
        rt.coeff.erase(rt.coeff.find_last_not_of(" \t") + 1);
        if (rt.coeff.empty()) r.fail("missing term coefficient");

        std::size_t pos = 4 + colon + 1;
        while (pos < r.line.size()) {
            while (pos < r.line.size() && r.line[pos] == ' ') ++pos;
            if (pos >= r.line.size()) break;
            auto [coeffs, constant] = parse_bracket(r, pos);
            int mult = 1;
            if (pos < r.line.size() && r.line[pos] == '^') {
                std::size_t start = ++pos;
                while (pos < r.line.size() && std::isdigit(r.line[pos])) ++pos;
                if (pos == start) r.fail("expected an exponent after '^'", pos);
                mult = std::stoi(r.line.substr(start, pos - start));
                if (mult < 1) r.fail("multiplicity must be >= 1", start);
            }
            if (static_cast<int>(coeffs.size()) != n)
                r.fail("form has " + std::to_string(coeffs.size()) + " coefficients, expected " +
                       std::to_string(n));
            if (!constant.empty()) any_constant = true;
            rt.forms.push_back(RawForm{std::move(coeffs), std::move(constant), mult});
        }
        if (rt.forms.empty()) r.fail("term has no forms");
        raw.push_back(std::move(rt));
    }
    if (raw.empty()) throw input_error("no terms in circuit file");

    ParsedCircuit out;
    int total_vars = any_constant ? n + 1 : n;
    out.constant_var = any_constant ? n : -1;
    std::vector<MultTerm> terms;
    for (const auto& rt : raw) {
        Scalar coeff = Scalar::parse(field, rt.coeff);
        if (coeff.is_zero())
            throw input_error("line " + std::to_string(rt.lineno) +
                              ": term coefficient must be nonzero");
        std::vector<FormVec> forms;
        for (const auto& rf : rt.forms) {
            FormVec v(field, total_vars);
            for (int i = 0; i < n; ++i)
                v.coeffs[static_cast<std::size_t>(i)] =
                    Scalar::parse(field, rf.coeffs[static_cast<std::size_t>(i)]);
            if (any_constant) {
                Scalar c0 = rf.constant.empty() ? Scalar::zero(field)
                                                : Scalar::parse(field, rf.constant);
                v.coeffs[static_cast<std::size_t>(n)] = c0;
            }
            if (v.is_zero())
                throw input_error("line " + std::to_string(rt.lineno) + ": zero form");
            for (int e = 0; e < rf.mult; ++e) forms.push_back(v);
        }
        terms.emplace_back(coeff, std::move(forms));
    }
    out.circuit = SPSCircuit(field, total_vars, std::move(terms));
    return out;
}

ParsedCircuit parse_circuit_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw input_error("cannot open '" + path + "'");
    return parse_circuit(in);
}

std::string serialize_circuit(const SPSCircuit& c) {
    std::ostringstream os;
    os << "field " << c.field.str() << "\n";
    os << "nvars " << c.nvars << "\n";
    for (const auto& t : c.terms) {
        os << "term " << t.coeff.str() << ":";
        std::size_t i = 0;
        while (i < t.forms.size()) {
            std::size_t j = i;
            while (j < t.forms.size() && t.forms[j] == t.forms[i]) ++j;
            os << ' ' << t.forms[i].str();
            if (j - i > 1) os << '^' << (j - i);
            i = j;
        }
        os << "\n";
    }
    return os.str();
}

SGConfig parse_sgconfig(std::istream& in) {
    LineReader r(in);
    FieldSpec field = parse_field_line(r);
    int n = parse_nvars_line(r);
    std::vector<FormVec> vecs;
    while (r.next()) {
        std::istringstream ls(r.line);
        std::string kw;
        ls >> kw;
        if (kw != "vec") r.fail("expected 'vec [c1,...,cn]'");
        std::size_t pos = r.line.find('[');
        if (pos == std::string::npos) r.fail("expected '['");
        auto [coeffs, constant] = parse_bracket(r, pos);
        if (!constant.empty()) r.fail("constant slot not allowed in a vector");
        if (static_cast<int>(coeffs.size()) != n) r.fail("vector length mismatch");
        FormVec v(field, n);
        for (int i = 0; i < n; ++i)
            v.coeffs[static_cast<std::size_t>(i)] =
                Scalar::parse(field, coeffs[static_cast<std::size_t>(i)]);
        vecs.push_back(std::move(v));
    }
    return SGConfig(field, n, std::move(vecs));
}

SGConfig parse_sgconfig_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw input_error("cannot open '" + path + "'");
    return parse_sgconfig(in);
}

std::string serialize_sgconfig(const SGConfig& s) {
    std::ostringstream os;
    os << "field " << s.field.str() << "\n";
    os << "nvars " << s.nvars << "\n";
    for (const auto& v : s.vectors) os << "vec " << v.str() << "\n";
    return os.str();
}

std::string serialize_hitting_set_text(const HittingSet& h) {
    std::ostringstream os;
    for (const auto& p : h.points) {
        os << "point [";
        for (std::size_t i = 0; i < p.size(); ++i) {
            if (i) os << ',';
            os << p[i].str();
        }
        os << "]\n";
    }
    return os.str();
}

nlohmann::json to_json(const FormVec& v) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& c : v.coeffs) arr.push_back(c.str());
    return arr;
}

nlohmann::json slice_diagnostic(const Poly& h, const TermIdeal& ideal) {
    nlohmann::json out{{"schema", kSchemaId}, {"type", "slice-diagnostic"}};
    if (!h.is_homogeneous()) throw input_error("slice diagnostic needs a homogeneous polynomial");
    const int deg = h.is_zero() ? 0 : h.degree();
    std::vector<int> support;
    for (int i = 0; i < ideal.nvars(); ++i) support.push_back(i);
    std::vector<Monomial> rows = monomials_of_degree(ideal.nvars(), deg, support);
    nlohmann::json row_index = nlohmann::json::array();
    for (const auto& m : rows) {
        nlohmann::json mj = nlohmann::json::array();
        for (auto e : m) mj.push_back(int(e));
        row_index.push_back(mj);
    }
    out["degree"] = deg;
    out["rows"] = row_index;
    nlohmann::json cols = nlohmann::json::array();
    for (std::size_t gi = 0; gi < ideal.gens().size(); ++gi) {
        Poly g = ideal.gens()[gi].expand(ideal.nvars());
        if (g.degree() > deg) continue;
        for (const auto& nu : monomials_of_degree(ideal.nvars(), deg - g.degree(), support)) {
            Poly shifted(g.field(), g.nvars());
            for (const auto& [m, c] : g.terms()) {
                Monomial mm = m;
                for (std::size_t i = 0; i < mm.size(); ++i)
                    mm[i] = static_cast<std::uint8_t>(mm[i] + nu[i]);
                shifted.add_term(mm, c);
            }
            nlohmann::json col = nlohmann::json::array();
            for (const auto& c : shifted.coefficient_vector(rows)) col.push_back(c.str());
            cols.push_back({{"generator", gi}, {"column", col}});
        }
    }
    out["columns"] = cols;
    nlohmann::json target = nlohmann::json::array();
    for (const auto& c : h.coefficient_vector(rows)) target.push_back(c.str());
    out["target"] = target;
    out["member"] = poly_in_ideal(h, ideal);
    return out;
}

nlohmann::json to_json(const Subspace& s) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : s.basis()) rows.push_back(to_json(r));
    return {{"rank", s.rank()}, {"basis", rows}};
}

nlohmann::json to_json(const MultTerm& t) {
    nlohmann::json forms = nlohmann::json::array();
    std::size_t i = 0;
    while (i < t.forms.size()) {
        std::size_t j = i;
        while (j < t.forms.size() && t.forms[j] == t.forms[i]) ++j;
        forms.push_back({{"form", to_json(t.forms[i])}, {"multiplicity", j - i}});
        i = j;
    }
    return {{"coeff", t.coeff.str()}, {"forms", forms}};
}

nlohmann::json to_json(const Certificate& cert) {
    nlohmann::json nodes = nlohmann::json::array();
    for (const auto& node : cert.path.nodes) nodes.push_back(to_json(node));
    nlohmann::json sources = nlohmann::json::array();  // 1-based, like survivor
    for (int s : cert.path.sources) sources.push_back(s + 1);
    return {{"schema", kSchemaId},
            {"type", "certificate"},
            {"prefix_len", cert.prefix_len},
            {"survivor", cert.survivor + 1},
            {"alpha", cert.alpha.str()},
            {"path", {{"nodes", nodes}, {"sources", sources}}}};
}

namespace {
nlohmann::json matching_to_json(const Matching& m) {
    nlohmann::json pairs = nlohmann::json::array();
    for (std::size_t i = 0; i < m.pairs.size(); ++i)
        pairs.push_back({{"left", m.pairs[i].first},
                         {"right", m.pairs[i].second},
                         {"scale", m.scales[i].str()}});
    return pairs;
}
}  // namespace

nlohmann::json to_json(const MatchingPair& m) {
    return {{"in_space", matching_to_json(m.in_space)},
            {"complement", matching_to_json(m.complement)}};
}

nlohmann::json to_json(const NucleusReport& rep) {
    nlohmann::json matchings = nlohmann::json::array();
    for (const auto& m : rep.matchings) matchings.push_back(to_json(m));
    nlohmann::json kterms = nlohmann::json::array();
    for (const auto& t : rep.k_terms) kterms.push_back(to_json(t));
    nlohmann::json alphas = nlohmann::json::array();
    for (const auto& a : rep.alphas) alphas.push_back(a.str());
    return {{"schema", kSchemaId},
            {"type", "nucleus-report"},
            {"stage", rep.stage == NucleusStage::MatNucleus ? "mat-nucleus" : "nucleus"},
            {"K", to_json(rep.k_space)},
            {"matchings", matchings},
            {"nucleus_terms", kterms},
            {"alphas", alphas},
            {"independent_set", rep.indep}};
}

nlohmann::json to_json(const RankBoundReport& rep) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : rep.rows)
        rows.push_back({{"name", row.name},
                        {"bound", row.bound},
                        {"measured", row.measured},
                        {"pass", row.pass}});
    return {{"schema", kSchemaId},
            {"type", "rank-bounds"},
            {"fanin", rep.fanin},
            {"ind_fanin", rep.ind_fanin},
            {"degree", rep.degree},
            {"rank", rep.rank},
            {"nucleus_rank", rep.nucleus_rank},
            {"non_nucleus_rank", rep.non_nucleus_rank},
            {"rows", rows},
            {"all_pass", rep.all_pass}};
}

nlohmann::json to_json(const GrowthReport& rep) {
    return {{"schema", kSchemaId},
            {"type", "sg-growth"},
            {"size", rep.size},
            {"rank", rep.rank},
            {"k", rep.k},
            {"closed", rep.closed},
            {"below_threshold", rep.below_threshold},
            {"satisfied", rep.satisfied}};
}

nlohmann::json to_json(const HittingSet& h) {
    nlohmann::json points = nlohmann::json::array();
    for (const auto& p : h.points) {
        nlohmann::json pt = nlohmann::json::array();
        for (const auto& c : p) pt.push_back(c.str());
        points.push_back(pt);
    }
    return {{"schema", kSchemaId},
            {"type", "hitting-set"},
            {"k", h.k},
            {"d", h.d},
            {"n", h.n},
            {"field", h.field.str()},
            {"rank_bound", h.rank_bound_value},
            {"substitution_vars", h.subst_vars},
            {"alpha_count", h.alpha_count},
            {"bit_bound", h.bit_bound},
            {"constants", "artifact-defined"},
            {"points", points}};
}

nlohmann::json to_json(const CircuitProfile& p) {
    nlohmann::json j{{"schema", kSchemaId}, {"type", "profile"},
                     {"is_zero", p.is_zero},   {"is_simple", p.is_simple},
                     {"rank", p.rank},         {"degree", p.degree},
                     {"fanin", p.fanin},       {"nvars", p.nvars}};
    if (p.is_minimal) j["is_minimal"] = *p.is_minimal;
    if (p.ind_fanin) j["ind_fanin"] = *p.ind_fanin;
    return j;
}

}  // namespace spslab
