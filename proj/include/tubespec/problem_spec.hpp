#ifndef TUBESPEC_PROBLEM_SPEC_HPP
#define TUBESPEC_PROBLEM_SPEC_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "tubespec/curve.hpp"
#include "tubespec/torus.hpp"
#include "tubespec/tube.hpp"
#include "tubespec/verification.hpp"

namespace tubespec {

/// Parses a problem-spec document. The schema is strict: unknown keys are
/// rejected anywhere in the tree, all lengths must be positive.
TubeProblem problem_from_json(const nlohmann::json& j);

/// Parse with position-aware errors ("line L, column C") on malformed JSON.
nlohmann::json parse_json_text(const std::string& text);
nlohmann::json parse_json_file(const std::string& path);

CrossSection cross_section_from_json(const nlohmann::json& j);
nlohmann::json cross_section_to_json(const CrossSection& cs);

/// Inline cross-section syntax for the command line:
///   interval:<width> | square:<side> | rect:<w2>,<w3> | disk:<radius>
CrossSection parse_cs_inline(const std::string& text);

nlohmann::json refined_result_to_json(const RefinedEigenResult& r);
nlohmann::json bound_report_to_json(const BoundReport& rep);
nlohmann::json validity_report_to_json(const ValidityReport& rep);

void write_sweep_csv(std::ostream& out, const SweepResult& sweep);
SweepResult read_sweep_csv(std::istream& in);

void write_embedding_csv(std::ostream& out, const std::vector<FrenetState>& states);

}  // namespace tubespec

#endif
