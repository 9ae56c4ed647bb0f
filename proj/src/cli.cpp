#include "blackwell/cli.hpp"

#include <CLI11.hpp>
#include <fstream>
#include <sstream>

#include "blackwell/auditor.hpp"
#include "blackwell/errors.hpp"
#include "blackwell/examples.hpp"
#include "blackwell/sampling.hpp"
#include "blackwell/serialize.hpp"

namespace blackwell::cli {

namespace {

Belief parse_prior(const std::string& text, std::size_t n) {
  std::vector<double> x;
  if (!text.empty() && text.front() == '[') {
    try {
      x = Json::parse(text).get<std::vector<double>>();
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::ParseError, std::string("prior: ") + e.what());
    }
  } else {
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
      try {
        std::size_t used = 0;
        x.push_back(std::stod(item, &used));
        if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
      } catch (const std::logic_error&) {
        throw Error(ErrorCode::ParseError, "prior coordinate is not a number: \"" + item + "\"");
      }
    }
  }
  if (x.size() + 1 == n) {
    double rest = 1.0;
    for (double v : x) rest -= v;
    x.push_back(rest);
  }
  if (x.size() != n) throw Error(ErrorCode::WrongDimension, "prior needs " + std::to_string(n) + " coordinates");
  Belief mu(std::move(x));
  if (!mu.interior()) throw Error(ErrorCode::PriorNotInterior, "prior must put positive mass on every state");
  return mu;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

void validate(const RunConfig& c) {
  if (c.states < 2) throw Error(ErrorCode::InvalidArgument, "--states must be at least 2");
  if (c.grid < 11) throw Error(ErrorCode::InvalidArgument, "--grid must be at least 11");
  if (!(c.tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "--tol must be positive");
  mode_from_string(c.mode);
}

std::filesystem::path certificate_path(const std::filesystem::path& report) {
  auto p = report;
  p.replace_filename(report.stem().string() + ".certificate.json");
  return p;
}

void write_csv(const std::filesystem::path& path, const std::string& header,
               const std::vector<std::vector<double>>& rows) {
  std::string text = header + "\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) text += (i ? "," : "") + format_number(row[i]);
    text += "\n";
  }
  write_atomically(path, text);
}

}  // namespace

void write_atomically(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw Error(ErrorCode::InvalidArgument, "cannot write " + tmp.string());
    f << content;
    if (!f.flush()) throw Error(ErrorCode::InvalidArgument, "cannot write " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

std::vector<Belief> resolve_priors(const RunConfig& config) {
  const std::size_t n = config.states;
  if (config.prior == "uniform") return {Belief::uniform(n)};
  if (config.prior.rfind("sweep:", 0) == 0) {
    std::size_t k = 0;
    try {
      std::size_t used = 0;
      k = std::stoul(config.prior.substr(6), &used);
      if (used != config.prior.size() - 6) throw std::invalid_argument("trailing");
    } catch (const std::logic_error&) {
      throw Error(ErrorCode::ParseError, "sweep needs a count, as in sweep:5");
    }
    if (k == 0) throw Error(ErrorCode::InvalidArgument, "sweep needs at least one prior");
    Rng rng(config.seed);
    std::vector<Belief> out;
    for (std::size_t i = 0; i < k; ++i) out.push_back(rng.interior_belief(n, 0.05));
    return out;
  }
  return {parse_prior(config.prior, n)};
}

int cmd_audit(const RunConfig& config, std::ostream& out, std::ostream& err) {
  std::vector<Belief> priors;
  std::optional<Distortion> rule;
  AuditOptions options;
  try {
    validate(config);
    priors = resolve_priors(config);
    rule = parse_rule(config.rule, config.states);
    options.grid_size = config.grid;
    options.budget = config.budget;
    options.seed = config.seed;
    options.tol = config.tol;
    options.mode = mode_from_string(config.mode);
  } catch (const Error& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  }

  std::vector<Json> reports;
  std::optional<Json> first_certificate;
  for (const auto& mu : priors) {
    const AuditReport r = audit(*rule, mu, options);
    if (r.certificate && !first_certificate) first_certificate = to_json(*r.certificate);
    reports.push_back(to_json(r, mu));
  }
  Json doc = reports.size() == 1 && config.prior.rfind("sweep:", 0) != 0
                 ? reports.front()
                 : Json{{"verdict", first_certificate ? "violation" : "pass"}, {"audits", reports}};
  doc["config"] = Json{{"states", config.states}, {"rule", to_json(*rule)}, {"grid", config.grid},
                       {"budget", config.budget}, {"seed", config.seed},   {"tol", config.tol},
                       {"mode", config.mode}};
  try {
    write_atomically(config.output, dump(doc));
    if (first_certificate) write_atomically(certificate_path(config.output), dump(*first_certificate));
  } catch (const std::exception& e) {
    err << "cannot write output: " << e.what() << "\n";
    return kExitConfig;
  }
  out << (first_certificate ? "violation" : "pass") << ": report written to " << config.output.string() << "\n";
  if (first_certificate) {
    out << "certificate written to " << certificate_path(config.output).string() << " (recipe "
        << (*first_certificate)["recipe"].get<std::string>() << ", gap "
        << format_number((*first_certificate)["gap"].get<double>()) << ")\n";
    return kExitViolation;
  }
  return kExitPass;
}

int cmd_reproduce(const std::string& example_id, const std::filesystem::path& dir, const ReproduceParams& params,
                  std::ostream& out, std::ostream& err) {
  try {
    const auto path = dir / (example_id + ".csv");
    std::vector<std::vector<double>> rows;
    if (example_id == "occ-coarse-figure") {
      const std::size_t g = params.grid ? params.grid : 1000;
      const Distortion d = Distortion::occasionally_coarse(params.a, params.b, params.u, params.v);
      const DecisionProblem p = quadratic_loss_problem(g + 1, 0.3);
      const Belief mu = Belief::binary(0.5);
      for (std::size_t k = 0; k <= g; ++k) {
        const Belief x = Belief::binary(static_cast<double>(k) / static_cast<double>(g));
        rows.push_back({x.scalar(), d.evaluate(mu, x).scalar(), value_V(p, x).payoff,
                        welfare_W(p, d, mu, Selector{}, WelfareMode::SingleMistake, x)});
      }
      write_csv(path, "x,phi,V,W", rows);
    } else if (example_id == "occ-stubborn-a" || example_id == "occ-stubborn-b") {
      const Distortion d = example_id == "occ-stubborn-a" ? stubborn_example_a() : stubborn_example_b();
      const Belief mu = Belief::uniform(3);
      for_each_lattice_point(3, params.grid ? params.grid : 20, [&](const Belief& x) {
        const Belief fx = d.evaluate(mu, x);
        rows.push_back({x[0], x[1], fx[0], fx[1]});
      });
      write_csv(path, "x1,x2,phi1,phi2", rows);
    } else {
      throw Error(ErrorCode::UnknownExample, "unknown example \"" + example_id +
                                                 "\" (expected occ-coarse-figure, occ-stubborn-a or occ-stubborn-b)");
    }
    out << "wrote " << rows.size() << " rows to " << path.string() << "\n";
    return kExitPass;
  } catch (const std::exception& e) {
    err << "reproduce failed: " << e.what() << "\n";
    return kExitConfig;
  }
}

int cmd_verify(const std::filesystem::path& file, double tol, std::ostream& out, std::ostream& err) {
  std::vector<ViolationCertificate> certificates;
  try {
    std::ifstream in(file);
    if (!in) throw Error(ErrorCode::ParseError, "cannot read " + file.string());
    Json doc;
    try {
      doc = Json::parse(in);
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::ParseError, e.what());
    }
    if (doc.is_object() && doc.contains("verdict")) {
      if (doc.contains("certificate")) certificates.push_back(certificate_from_json(doc["certificate"]));
      if (doc.contains("audits"))
        for (const auto& r : doc["audits"])
          if (r.contains("certificate")) certificates.push_back(certificate_from_json(r["certificate"]));
      if (certificates.empty()) throw Error(ErrorCode::ParseError, "report holds no certificate");
    } else {
      certificates.push_back(certificate_from_json(doc));
    }
  } catch (const Error& e) {
    err << "cannot load certificate: " << e.what() << "\n";
    return kExitConfig;
  }
  int status = kExitPass;
  for (const auto& c : certificates) {
    const Verification v = verify_certificate(c, tol);
    if (v.valid) {
      out << "ok: gap " << format_number(v.recomputed_gap) << " (recipe " << c.recipe << ")\n";
    } else {
      out << "invalid: " << v.reason << "\n";
      status = kExitInvalid;
    }
  }
  return status;
}

int cmd_convexity(const RunConfig& config, const std::string& problem, std::ostream& out, std::ostream& err) {
  try {
    validate(config);
    const auto priors = resolve_priors(config);
    const Distortion d = parse_rule(config.rule, config.states);
    std::optional<DecisionProblem> p;
    if (problem.empty()) {
      if (config.states != 2) throw Error(ErrorCode::InvalidArgument, "--problem is required beyond two states");
      p = quadratic_loss_problem();
    } else if (std::filesystem::is_regular_file(problem)) {
      std::ifstream in(problem);
      p = problem_from_json(Json::parse(in));
    } else {
      p = problem_from_json(Json::parse(problem));
    }
    std::vector<ConvexityViolation> rows;
    for (const auto& mu : priors) {
      auto found = convexity_violations(*p, d, mu, Selector{}, mode_from_string(config.mode), config.grid, config.tol,
                                        config.seed);
      rows.insert(rows.end(), found.begin(), found.end());
    }
    std::ostringstream csv;
    write_convexity_csv(csv, rows);
    write_atomically(config.output, csv.str());
    out << rows.size() << " convexity violation(s) written to " << config.output.string() << "\n";
    return rows.empty() ? kExitPass : kExitViolation;
  } catch (const nlohmann::json::exception& e) {
    err << "config error: problem: " << e.what() << "\n";
  } catch (const std::exception& e) {
    err << "config error: " << e.what() << "\n";
  }
  return kExitConfig;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Audit belief-updating rules for respect of the Blackwell order", "blackwell"};
  app.require_subcommand(1);

  RunConfig audit_config;
  auto add_run_flags = [](CLI::App* cmd, RunConfig& c) {
    cmd->add_option("--states", c.states, "Number of states n (>= 2)")->capture_default_str();
    cmd->add_option("--prior", c.prior, "Prior: coordinates (n or n-1), uniform, or sweep:k")->capture_default_str();
    cmd->add_option("--rule", c.rule, "Rule: shorthand, inline JSON, JSON file or CSV table")->capture_default_str();
    cmd->add_option("--grid", c.grid, "Grid resolution (>= 11)")->capture_default_str();
    cmd->add_option("--seed", c.seed, "Seed for sampled priors and randomized search")->capture_default_str();
    cmd->add_option("--tol", c.tol, "Geometric tolerance")->capture_default_str();
    cmd->add_option("--mode", c.mode, "Welfare mode: single or double")->capture_default_str();
  };
  auto* audit_cmd = app.add_subcommand("audit", "Search for a violation certificate");
  add_run_flags(audit_cmd, audit_config);
  audit_cmd->add_option("--budget", audit_config.budget, "Candidate pairs to try")->capture_default_str();
  audit_cmd->add_option("--out", audit_config.output, "Report path")->capture_default_str();

  std::string example;
  std::filesystem::path reproduce_dir = ".";
  ReproduceParams params;
  params.grid = 0;
  auto* reproduce_cmd = app.add_subcommand("reproduce", "Write an example rule as CSV");
  reproduce_cmd->add_option("example", example, "occ-coarse-figure, occ-stubborn-a or occ-stubborn-b")->required();
  reproduce_cmd->add_option("--out", reproduce_dir, "Output directory")->capture_default_str();
  reproduce_cmd->add_option("--a", params.a)->capture_default_str();
  reproduce_cmd->add_option("--b", params.b)->capture_default_str();
  reproduce_cmd->add_option("--u", params.u)->capture_default_str();
  reproduce_cmd->add_option("--v", params.v)->capture_default_str();
  reproduce_cmd->add_option("--grid", params.grid, "Grid steps (1000 for the coarse figure, 20 for the tables)");

  std::filesystem::path verify_file;
  double verify_tol = kCertificateTolerance;
  auto* verify_cmd = app.add_subcommand("verify", "Re-check a certificate or a report");
  verify_cmd->add_option("file", verify_file, "Certificate or report JSON")->required();
  verify_cmd->add_option("--tol", verify_tol, "Required gap below zero")->capture_default_str();

  RunConfig convexity_config;
  convexity_config.output = "convexity.csv";
  convexity_config.grid = 1000;
  std::string problem;
  auto* convexity_cmd = app.add_subcommand("convexity", "List convexity violations of W as CSV");
  add_run_flags(convexity_cmd, convexity_config);
  convexity_cmd->add_option("--problem", problem, "Decision problem JSON or file (default quadratic loss, n = 2)");
  convexity_cmd->add_option("--out", convexity_config.output, "CSV path")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitPass : kExitConfig;
  }
  if (*audit_cmd) return cmd_audit(audit_config, out, err);
  if (*reproduce_cmd) return cmd_reproduce(example, reproduce_dir, params, out, err);
  if (*verify_cmd) return cmd_verify(verify_file, verify_tol, out, err);
  return cmd_convexity(convexity_config, problem, out, err);
}

}  // namespace blackwell::cli
