#ifndef BLACKWELL_SERIALIZE_HPP
#define BLACKWELL_SERIALIZE_HPP

#include <cstddef>
#include <string>

#include "blackwell/auditor.hpp"
#include "json.hpp"

namespace blackwell {

using Json = nlohmann::json;

// Every *_from_json throws ParseError on a malformed document and keeps the
// library's own errors (InvalidArgument, DimensionMismatch, ...) for well-formed but invalid values.

Json to_json(const Belief& x);
Belief belief_from_json(const Json& j);

/// {"likelihoods": [[...]], "signals": [...]}
Json to_json(const Experiment& e);
Experiment experiment_from_json(const Json& j);

/// {"support": [[...]], "probs": [...]}
Json to_json(const PosteriorDistribution& rho);
PosteriorDistribution posterior_from_json(const Json& j);

/// {"payoff": [[...]], "actions": [...]}
Json to_json(const DecisionProblem& p);
DecisionProblem problem_from_json(const Json& j);

/// {"policy": ..., "tie_tol": ..., "pins": [{"center", "radius", "action"}]}
Json to_json(const Selector& s);
Selector selector_from_json(const Json& j);

WelfareMode mode_from_string(const std::string& s);

/// {"family": ..., "states": n, ...parameters}
Json to_json(const Distortion& d);
Distortion distortion_from_json(const Json& j);

/// Accepts inline JSON, a path to a JSON file or a CSV table (nodes then images per row),
/// a shorthand (bayes, grether(a,b), shrinkage(l), occ-coarse(a,b,u,v), trivial(x1,...),
/// occ-stubborn-a, occ-stubborn-b), and checks the rule has n states.
Distortion parse_rule(const std::string& spec, std::size_t n);

Json to_json(const ViolationCertificate& c);
ViolationCertificate certificate_from_json(const Json& j);

/// {"verdict", "certificate"?, "checker_verdicts", "error_census", "budget_used"}
Json to_json(const AuditReport& r, const Belief& prior);

}  // namespace blackwell

#endif  // BLACKWELL_SERIALIZE_HPP
