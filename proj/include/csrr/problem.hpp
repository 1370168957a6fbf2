#ifndef CSRR_PROBLEM_HPP
#define CSRR_PROBLEM_HPP

#include <optional>
#include <string>

#include <json.hpp>

#include "csrr/logconn.hpp"
#include "csrr/numeric_oracle.hpp"
#include "csrr/report.hpp"
#include "csrr/rr_engine.hpp"

namespace csrr {

using Json = nlohmann::ordered_json;

// Parsed problem document: a connection block and/or a pushforward block,
// plus the numeric configuration.
struct ProblemFile {
    std::optional<LogConnection> connection;
    std::optional<FiniteAlgebra> pushforward;
    NumericConfig numeric;
};

// Parse and validate; schema violations are collected and reported
// together in the InputError.
ProblemFile parse_problem(const std::string& text);
ProblemFile parse_problem_json(const Json& doc);

// Canonical serialization of forms and matrices: a form is a list of
// {"coeff": <canonical expression>, "gens": [generator names]} terms.
Json form_to_json(const Form& f);
Form form_from_json(const Json& j, const GenUniversePtr& g);
Json matform_to_json(const MatForm& m);
MatForm matform_from_json(const Json& j, const GenUniversePtr& g);

Json csclass_to_json(const CsClass& c);

Json report_to_json(const Report& r);
Json reports_to_json(const std::vector<Report>& reports);

} // namespace csrr

#endif
