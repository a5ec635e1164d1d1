#pragma once

#include "bce/consistency.hpp"
#include "bce/extensions.hpp"
#include "bce/geometry.hpp"
#include "bce/problem.hpp"
#include "bce/rationalizer.hpp"
#include "bce/support_tests.hpp"

#include <json.hpp>

#include <string>

namespace bce::io {

using nlohmann::json;

// {"states": [...], "actions": [...], "utility": [[row per action]]}; cells
// are integers, "p/q" strings, or decimal strings.
DecisionProblem parse_problem(const json& doc);

// {"<label>": "p/q", ...}; missing labels carry weight zero, the total must
// be exactly 1.
Distribution parse_distribution(const json& doc, const std::vector<std::string>& domain);

// {"posteriors": [{"<state>": "p/q", ...}, ...], "weights": ["p/q", ...]}
PosteriorDistribution parse_tau(const json& doc, const std::vector<std::string>& states);

// problem fields plus {"theta": [...], "mode": "shift|ratio|table", ...}
ProblemFamily parse_family(const json& doc);

// {"states": [...], "players": [{"actions": [...], "payoff": [[...]]}, ...]}
RingGame parse_ring(const json& doc);

// {"states": [...], "players": [{"actions": [...], "utility": [[...]]}, ...]}
PrivateGame parse_private_game(const json& doc);

json load_file(const std::string& path);

Rat parse_cell(const json& cell);

json rat_json(const Rat& value);
json vector_json(const RatVector& v);
json matrix_json(const RatMatrix& m);
json decimal_json(const RatVector& v);

json verdict_json(const Verdict& verdict, const Distribution& prior,
                  const Distribution& marginal);
json test_verdict_json(const TestVerdict& verdict);
json testfn_json(const TestFunction& fn);
json hpolytope_json(const HPolytope& h);
json vpolytope_json(const VPolytope& v);

}  // namespace bce::io
