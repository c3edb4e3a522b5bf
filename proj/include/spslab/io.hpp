#ifndef SPSLAB_IO_HPP
#define SPSLAB_IO_HPP

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "spslab/nucleus.hpp"
#include "spslab/pit.hpp"
#include "spslab/sg.hpp"

namespace spslab {

inline constexpr const char* kSchemaId = "sps-lab/1";

/// Circuit text format, one item per line, '#' comments:
///   field rational | field prime <p>
///   nvars <n>
///   term <coeff>: [c1,...,cn](^e)? ...
/// An affine input may write a constant slot as [c1,...,cn|c0]; the parser
/// then appends one variable holding the constant slot and reports it in
/// constant_var (homogenize() turns it into the pad variable).
struct ParsedCircuit {
    SPSCircuit circuit;
    int constant_var = -1;

    ParsedCircuit() : circuit() {}
};
ParsedCircuit parse_circuit(std::istream& in);
ParsedCircuit parse_circuit_file(const std::string& path);
std::string serialize_circuit(const SPSCircuit& c);

/// SG config format: field / nvars lines, then one `vec [c1,...,cn]` per line.
SGConfig parse_sgconfig(std::istream& in);
SGConfig parse_sgconfig_file(const std::string& path);
std::string serialize_sgconfig(const SGConfig& s);

/// Hitting set, one `point [a1,...,an]` per line.
std::string serialize_hitting_set_text(const HittingSet& h);

nlohmann::json to_json(const FormVec& v);
nlohmann::json to_json(const Subspace& s);

/// Diagnostic dump of the degree-slice linear system deciding h's
/// membership: the monomial row index, one column per (generator, shift
/// monomial), and h's coefficient vector.
nlohmann::json slice_diagnostic(const Poly& h, const TermIdeal& ideal);
nlohmann::json to_json(const MultTerm& t);
nlohmann::json to_json(const Certificate& cert);
nlohmann::json to_json(const MatchingPair& m);
nlohmann::json to_json(const NucleusReport& rep);
nlohmann::json to_json(const RankBoundReport& rep);
nlohmann::json to_json(const GrowthReport& rep);
nlohmann::json to_json(const HittingSet& h);
nlohmann::json to_json(const CircuitProfile& p);

}  // namespace spslab

#endif
