#include "blackwell/serialize.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>

#include "blackwell/errors.hpp"
#include "blackwell/examples.hpp"

namespace blackwell {

namespace {

[[noreturn]] void parse_fail(const std::string& what) { throw Error(ErrorCode::ParseError, what); }

/// Runs f, turning JSON access failures into ParseError.
template <class F>
auto guarded(const char* what, F&& f) {
  try {
    return f();
  } catch (const nlohmann::json::exception& e) {
    parse_fail(std::string(what) + ": " + e.what());
  }
}

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) parse_fail(std::string("missing field \"") + key + "\"");
  return j.at(key);
}

double number(const Json& j, const char* key) {
  const Json& v = field(j, key);
  if (!v.is_number()) parse_fail(std::string("field \"") + key + "\" must be a number");
  return v.get<double>();
}

std::size_t count(const Json& j, const char* key) {
  const Json& v = field(j, key);
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0))
    parse_fail(std::string("field \"") + key + "\" must be a non-negative integer");
  return v.get<std::size_t>();
}

Matrix matrix(const Json& j) {
  if (!j.is_array()) parse_fail("expected an array of rows");
  Matrix m;
  for (const auto& row : j) {
    if (!row.is_array()) parse_fail("expected a row array");
    std::vector<double> r;
    for (const auto& v : row) {
      if (!v.is_number()) parse_fail("matrix entries must be numbers");
      r.push_back(v.get<double>());
    }
    m.push_back(std::move(r));
  }
  return m;
}

std::vector<std::string> labels(const Json& j, const char* key) {
  if (!j.contains(key)) return {};
  return j.at(key).get<std::vector<std::string>>();
}

Json to_json(const Face& f) { return f.support(); }

Json to_json(const Refutation& r) {
  return Json{{"node", to_json(r.node)}, {"condition", r.condition}, {"detail", r.detail}};
}

std::vector<double> parse_numbers(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto b = item.find_first_not_of(" \t"), e = item.find_last_not_of(" \t");
    if (b == std::string::npos) parse_fail("empty argument in \"" + text + "\"");
    double v = 0.0;
    const char* first = item.data() + b;
    const char* last = item.data() + e + 1;
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last) parse_fail("not a number: \"" + item + "\"");
    out.push_back(v);
  }
  return out;
}

Distortion shorthand_rule(const std::string& spec, std::size_t n) {
  static const std::regex form(R"(^\s*([a-z0-9-]+)\s*(?:\((.*)\))?\s*$)");
  std::smatch m;
  if (!std::regex_match(spec, m, form)) parse_fail("unrecognised rule \"" + spec + "\"");
  const std::string name = m[1];
  const bool has_args = m[2].matched;
  const std::vector<double> args = has_args ? parse_numbers(m[2]) : std::vector<double>{};
  auto arity = [&](std::size_t k) {
    if (args.size() != k) parse_fail(name + " takes " + std::to_string(k) + " argument(s)");
  };
  if (name == "bayes") {
    arity(0);
    return Distortion::bayes(n);
  }
  if (name == "grether") {
    arity(2);
    return Distortion::grether(n, args[0], args[1]);
  }
  if (name == "shrinkage") {
    arity(1);
    return Distortion::shrinkage(n, args[0]);
  }
  if (name == "occ-coarse") {
    arity(4);
    return Distortion::occasionally_coarse(args[0], args[1], args[2], args[3]);
  }
  if (name == "trivial") {
    std::vector<double> x = args;
    if (x.size() + 1 == n) {
      double rest = 1.0;
      for (double v : x) rest -= v;
      x.push_back(rest);
    }
    if (x.size() != n) parse_fail("trivial takes n or n-1 coordinates");
    return Distortion::trivial(Belief(std::move(x)));
  }
  if (name == "occ-stubborn-a") {
    arity(0);
    return stubborn_example_a();
  }
  if (name == "occ-stubborn-b") {
    arity(0);
    return stubborn_example_b();
  }
  parse_fail("unknown rule \"" + name + "\"");
}

}  // namespace

Json to_json(const Belief& x) { return x.coords(); }

Belief belief_from_json(const Json& j) {
  return guarded("belief", [&] {
    if (!j.is_array()) parse_fail("belief must be an array of numbers");
    std::vector<double> v;
    for (const auto& c : j) {
      if (!c.is_number()) parse_fail("belief coordinates must be numbers");
      v.push_back(c.get<double>());
    }
    return Belief(std::move(v));
  });
}

Json to_json(const Experiment& e) { return Json{{"likelihoods", e.likelihoods()}, {"signals", e.signal_labels()}}; }

Experiment experiment_from_json(const Json& j) {
  return guarded("experiment", [&] { return Experiment(matrix(field(j, "likelihoods")), labels(j, "signals")); });
}

Json to_json(const PosteriorDistribution& rho) {
  Json support = Json::array();
  for (const auto& x : rho.support()) support.push_back(to_json(x));
  return Json{{"support", support}, {"probs", rho.probs()}};
}

PosteriorDistribution posterior_from_json(const Json& j) {
  return guarded("posterior distribution", [&] {
    std::vector<Belief> support;
    for (const auto& x : field(j, "support")) support.push_back(belief_from_json(x));
    return PosteriorDistribution(std::move(support), field(j, "probs").get<std::vector<double>>());
  });
}

Json to_json(const DecisionProblem& p) { return Json{{"payoff", p.payoff()}, {"actions", p.action_labels()}}; }

DecisionProblem problem_from_json(const Json& j) {
  return guarded("decision problem", [&] { return DecisionProblem(matrix(field(j, "payoff")), labels(j, "actions")); });
}

Json to_json(const Selector& s) {
  Json pins = Json::array();
  for (const auto& p : s.pins)
    pins.push_back(Json{{"center", to_json(p.center)}, {"radius", p.radius}, {"action", p.action}});
  return Json{{"policy", to_string(s.policy)}, {"tie_tol", s.tie_tol}, {"pins", pins}};
}

Selector selector_from_json(const Json& j) {
  return guarded("selector", [&] {
    Selector s;
    const std::string policy = field(j, "policy").get<std::string>();
    if (policy == "lexicographic-first")
      s.policy = SelectorPolicy::LexicographicFirst;
    else if (policy == "lexicographic-last")
      s.policy = SelectorPolicy::LexicographicLast;
    else if (policy == "pinned")
      s.policy = SelectorPolicy::Pinned;
    else
      parse_fail("unknown selector policy \"" + policy + "\"");
    if (j.contains("tie_tol")) s.tie_tol = number(j, "tie_tol");
    if (j.contains("pins"))
      for (const auto& p : j.at("pins"))
        s.pins.push_back(Pin{belief_from_json(field(p, "center")), number(p, "radius"), count(p, "action")});
    return s;
  });
}

WelfareMode mode_from_string(const std::string& s) {
  if (s == "single") return WelfareMode::SingleMistake;
  if (s == "double") return WelfareMode::DoubleMistake;
  parse_fail("mode must be \"single\" or \"double\", got \"" + s + "\"");
}

Json to_json(const Distortion& d) {
  Json j{{"family", to_string(d.family())}, {"states", d.states()}};
  std::visit(
      [&](const auto& r) {
        using R = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<R, TrivialRule>) {
          j["x_star"] = to_json(r.x_star);
        } else if constexpr (std::is_same_v<R, CoarseRule>) {
          j["a"] = r.a, j["b"] = r.b, j["u"] = r.u, j["v"] = r.v;
        } else if constexpr (std::is_same_v<R, StubbornRule>) {
          j["x_star"] = r.spec.x_star ? to_json(*r.spec.x_star) : Json(nullptr);
          Json faces = Json::array();
          for (const auto& f : r.spec.correct_faces) faces.push_back(to_json(f));
          j["correct_faces"] = faces;
          j["edge_case"] = r.spec.edge_case ? Json{{"edge", to_json(r.spec.edge_case->edge)},
                                                   {"special_vertex", r.spec.edge_case->special_vertex}}
                                            : Json(nullptr);
          Json images = Json::array();
          for (const auto& [v, img] : r.spec.vertex_images) images.push_back(Json{{"vertex", v}, {"image", to_json(img)}});
          j["vertex_images"] = images;
          j["validated"] = r.validated;
        } else if constexpr (std::is_same_v<R, GretherRule>) {
          j["alpha"] = r.alpha, j["beta"] = r.beta;
        } else if constexpr (std::is_same_v<R, ShrinkageRule>) {
          j["lambda"] = r.lambda;
        } else if constexpr (std::is_same_v<R, std::shared_ptr<const TabulatedRule>>) {
          Json nodes = Json::array(), images = Json::array();
          for (const auto& x : r->nodes()) nodes.push_back(to_json(x));
          for (const auto& x : r->images()) images.push_back(to_json(x));
          j["nodes"] = nodes;
          j["images"] = images;
        }
      },
      d.rule());
  return j;
}

Distortion distortion_from_json(const Json& j) {
  return guarded("rule", [&]() -> Distortion {
    const std::string family = field(j, "family").get<std::string>();
    auto states = [&] { return count(j, "states"); };
    if (family == "bayes") return Distortion::bayes(states());
    if (family == "trivial") return Distortion::trivial(belief_from_json(field(j, "x_star")));
    if (family == "occ-coarse")
      return Distortion::occasionally_coarse(number(j, "a"), number(j, "b"), number(j, "u"), number(j, "v"));
    if (family == "grether") return Distortion::grether(states(), number(j, "alpha"), number(j, "beta"));
    if (family == "shrinkage") return Distortion::shrinkage(states(), number(j, "lambda"));
    if (family == "occ-stubborn") {
      StubbornSpec s;
      if (j.contains("x_star") && !j.at("x_star").is_null()) s.x_star = belief_from_json(j.at("x_star"));
      if (j.contains("correct_faces"))
        for (const auto& f : j.at("correct_faces")) s.correct_faces.emplace_back(f.get<std::vector<std::size_t>>());
      if (j.contains("edge_case") && !j.at("edge_case").is_null()) {
        const Json& e = j.at("edge_case");
        s.edge_case = EdgeCase{Face(field(e, "edge").get<std::vector<std::size_t>>()), count(e, "special_vertex")};
      }
      if (j.contains("vertex_images"))
        for (const auto& v : j.at("vertex_images")) s.vertex_images.emplace(count(v, "vertex"), belief_from_json(field(v, "image")));
      const bool validated = !j.contains("validated") || j.at("validated").get<bool>();
      return validated ? Distortion::occasionally_stubborn(states(), std::move(s))
                       : Distortion::stubborn_form(states(), std::move(s));
    }
    if (family == "tabulated") {
      std::vector<Belief> nodes, images;
      for (const auto& x : field(j, "nodes")) nodes.push_back(belief_from_json(x));
      for (const auto& x : field(j, "images")) images.push_back(belief_from_json(x));
      return Distortion::tabulated(TabulatedRule(std::move(nodes), std::move(images)));
    }
    parse_fail("unknown rule family \"" + family + "\"");
  });
}

Distortion parse_rule(const std::string& spec, std::size_t n) {
  auto checked = [n](Distortion d) {
    if (d.states() != n)
      throw Error(ErrorCode::WrongDimension,
                  "rule has " + std::to_string(d.states()) + " states, expected " + std::to_string(n));
    return d;
  };
  auto from_json_text = [&](const std::string& text) {
    Json j;
    try {
      j = Json::parse(text);
    } catch (const nlohmann::json::exception& e) {
      parse_fail(std::string("rule is not valid JSON: ") + e.what());
    }
    if (j.is_object() && !j.contains("states")) j["states"] = n;
    return checked(distortion_from_json(j));
  };

  const auto start = spec.find_first_not_of(" \t\r\n");
  if (start == std::string::npos) parse_fail("empty rule");
  if (spec[start] == '{') return from_json_text(spec);

  std::error_code ec;
  const std::filesystem::path path(spec);
  if (std::filesystem::is_regular_file(path, ec)) {
    std::ifstream in(path);
    if (!in) parse_fail("cannot read " + spec);
    if (path.extension() == ".csv") return checked(Distortion::tabulated(TabulatedRule::from_csv(in, n)));
    std::stringstream buffer;
    buffer << in.rdbuf();
    return from_json_text(buffer.str());
  }
  return checked(shorthand_rule(spec, n));
}

Json to_json(const ViolationCertificate& c) {
  Json held = Json::array(), held_prime = Json::array();
  for (const auto& x : c.held_pi) held.push_back(to_json(x));
  for (const auto& x : c.held_pi_prime) held_prime.push_back(to_json(x));
  return Json{{"prior", to_json(c.prior)},       {"pi", to_json(c.pi)},
              {"pi_prime", to_json(c.pi_prime)}, {"problem", to_json(c.problem)},
              {"selector", to_json(c.selector)}, {"mode", to_string(c.mode)},
              {"gap", c.gap},                    {"recipe", c.recipe},
              {"seed", c.seed},                  {"rule", to_json(c.rule)},
              {"held_pi", held},                 {"held_pi_prime", held_prime}};
}

ViolationCertificate certificate_from_json(const Json& j) {
  return guarded("certificate", [&] {
    auto beliefs = [&](const char* key) {
      std::vector<Belief> out;
      for (const auto& x : field(j, key)) out.push_back(belief_from_json(x));
      return out;
    };
    const Json& seed = field(j, "seed");
    if (!seed.is_number_integer()) parse_fail("field \"seed\" must be an integer");
    return ViolationCertificate{belief_from_json(field(j, "prior")),
                                experiment_from_json(field(j, "pi")),
                                experiment_from_json(field(j, "pi_prime")),
                                problem_from_json(field(j, "problem")),
                                selector_from_json(field(j, "selector")),
                                mode_from_string(field(j, "mode").get<std::string>()),
                                number(j, "gap"),
                                field(j, "recipe").get<std::string>(),
                                seed.get<std::uint64_t>(),
                                distortion_from_json(field(j, "rule")),
                                beliefs("held_pi"),
                                beliefs("held_pi_prime")};
  });
}

Json to_json(const AuditReport& r, const Belief& prior) {
  Json checkers = Json::object();
  if (r.coarse) {
    const auto& v = *r.coarse;
    Json c{{"holds", v.holds}, {"a", v.a}, {"b", v.b}, {"u", v.u}, {"v", v.v}, {"step", v.step}};
    c["summary"] = v.holds ? "occasionally coarse, a=" + format_number(v.a) + ", b=" + format_number(v.b)
                           : "not occasionally coarse";
    if (v.refutation) c["refutation"] = to_json(*v.refutation);
    checkers["occasionally_coarse"] = c;
  }
  if (r.stubborn) {
    const auto& v = *r.stubborn;
    Json s{{"holds", v.holds}, {"x_star", v.x_star ? to_json(*v.x_star) : Json(nullptr)}};
    s["summary"] = v.holds ? "occasionally stubborn" : "not occasionally stubborn";
    if (v.refutation) s["refutation"] = to_json(*v.refutation);
    checkers["occasionally_stubborn"] = s;
  }
  checkers["trivial_on_interior"] = r.trivial_on_interior;
  checkers["affine"] = r.affine;
  Json j{{"verdict", r.certificate ? "violation" : "pass"},
         {"prior", to_json(prior)},
         {"checker_verdicts", checkers},
         {"error_census",
          {{"points", r.census.points},
           {"none", r.census.none},
           {"expansive", r.census.expansive},
           {"contractive", r.census.contractive}}},
         {"budget_used", r.budget_used}};
  if (r.certificate) j["certificate"] = to_json(*r.certificate);
  return j;
}

}  // namespace blackwell
