#include <filesystem>
#include <fstream>
#include <sstream>

#include "blackwell/cli.hpp"
#include "blackwell/serialize.hpp"
#include "doctest.h"

using namespace blackwell;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "blackwell");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct TempDir {
  std::filesystem::path path;
  TempDir() : path(std::filesystem::temp_directory_path() / "blackwell-cli-test") {
    std::filesystem::remove_all(path);
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
  std::string operator/(const std::string& name) const { return (path / name).string(); }
};

}  // namespace

TEST_CASE("audit exit codes and report files") {
  TempDir dir;
  SUBCASE("bayes over a prior sweep passes with an empty census") {
    const auto r = run_cli({"audit", "--states", "3", "--prior", "sweep:5", "--rule", "bayes", "--grid", "41",
                            "--budget", "200", "--out", dir / "bayes.json"});
    CHECK(r.code == cli::kExitPass);
    const Json report = Json::parse(slurp(dir / "bayes.json"));
    CHECK(report["verdict"] == "pass");
    REQUIRE(report["audits"].size() == 5);
    for (const auto& a : report["audits"]) {
      CHECK(a["error_census"]["expansive"] == 0);
      CHECK(a["error_census"]["contractive"] == 0);
    }
    CHECK_FALSE(std::filesystem::exists(dir / "bayes.certificate.json"));
  }
  SUBCASE("grether on three states is a violation with a verifiable certificate") {
    const auto r = run_cli({"audit", "--states", "3", "--rule", "grether(2,1)", "--out", dir / "g.json"});
    CHECK(r.code == cli::kExitViolation);
    REQUIRE(std::filesystem::exists(dir / "g.certificate.json"));
    CHECK(run_cli({"verify", dir / "g.certificate.json"}).code == cli::kExitPass);
    CHECK(run_cli({"verify", dir / "g.json"}).code == cli::kExitPass);

    const auto again = run_cli({"audit", "--states", "3", "--rule", "grether(2,1)", "--out", dir / "g2.json"});
    CHECK(again.code == cli::kExitViolation);
    CHECK(slurp(dir / "g.certificate.json") == slurp(dir / "g2.certificate.json"));
    CHECK(slurp(dir / "g.json") == slurp(dir / "g2.json"));
  }
  SUBCASE("coarse example reports its checker verdict") {
    const auto r = run_cli({"audit", "--states", "2", "--prior", "0.5", "--rule", "occ-coarse(0.3,0.7,0.2,0.8)",
                            "--budget", "500", "--out", dir / "c.json"});
    CHECK(r.code == cli::kExitPass);
    const Json report = Json::parse(slurp(dir / "c.json"));
    CHECK(report["checker_verdicts"]["occasionally_coarse"]["summary"] == "occasionally coarse, a=0.3, b=0.7");
  }
  SUBCASE("config errors") {
    CHECK(run_cli({"audit", "--states", "1", "--out", dir / "x.json"}).code == cli::kExitConfig);
    CHECK(run_cli({"audit", "--grid", "5", "--out", dir / "x.json"}).code == cli::kExitConfig);
    CHECK(run_cli({"audit", "--rule", "nonsense(1)", "--out", dir / "x.json"}).code == cli::kExitConfig);
    CHECK(run_cli({"audit", "--prior", "0.2,0.2", "--states", "2", "--out", dir / "x.json"}).code ==
          cli::kExitConfig);
    CHECK(run_cli({"audit", "--mode", "triple", "--out", dir / "x.json"}).code == cli::kExitConfig);
    CHECK(run_cli({"audit", "--states", "two"}).code == cli::kExitConfig);
    CHECK(run_cli({}).code == cli::kExitConfig);
    CHECK_FALSE(std::filesystem::exists(dir / "x.json"));
  }
}

TEST_CASE("verify rejects tampered certificates") {
  TempDir dir;
  REQUIRE(run_cli({"audit", "--states", "2", "--prior", "0.5", "--rule", "grether(2,1)", "--out", dir / "g.json"})
              .code == cli::kExitViolation);
  const Json c = Json::parse(slurp(dir / "g.certificate.json"));
  auto write = [&](const std::string& name, const Json& j) {
    std::ofstream(dir / name) << j.dump();
    return dir / name;
  };
  Json swapped = c;
  std::swap(swapped["pi"], swapped["pi_prime"]);
  std::swap(swapped["held_pi"], swapped["held_pi_prime"]);
  auto r = run_cli({"verify", write("swapped.json", swapped)});
  CHECK(r.code == cli::kExitInvalid);
  CHECK(r.out.find("dominance") != std::string::npos);

  Json forged = c;
  forged["gap"] = -1.0;
  r = run_cli({"verify", write("forged.json", forged)});
  CHECK(r.code == cli::kExitInvalid);
  CHECK(r.out.find("gap-mismatch") != std::string::npos);

  Json perturbed = c;
  perturbed["problem"]["payoff"][1][0] = perturbed["problem"]["payoff"][1][0].get<double>() + 0.05;
  CHECK(run_cli({"verify", write("perturbed.json", perturbed)}).code == cli::kExitInvalid);

  std::ofstream(dir / "junk.json") << "{\"verdict\": \"pass\"}";
  CHECK(run_cli({"verify", dir / "junk.json"}).code == cli::kExitConfig);
  CHECK(run_cli({"verify", dir / "missing.json"}).code == cli::kExitConfig);
}

TEST_CASE("reproduce writes the example tables") {
  TempDir dir;
  REQUIRE(run_cli({"reproduce", "occ-coarse-figure", "--out", dir.path.string()}).code == cli::kExitPass);
  std::istringstream coarse(slurp(dir / "occ-coarse-figure.csv"));
  std::string line;
  std::getline(coarse, line);
  CHECK(line == "x,phi,V,W");
  std::size_t rows = 0;
  bool saw_half = false;
  while (std::getline(coarse, line)) {
    ++rows;
    double x, phi, v, w;
    char c1, c2, c3;
    std::istringstream(line) >> x >> c1 >> phi >> c2 >> v >> c3 >> w;
    if (std::abs(x - 0.5) < 1e-12) {
      saw_half = true;
      CHECK(v == doctest::Approx(0.05));
      CHECK(w == doctest::Approx(0.05));
    }
  }
  CHECK(rows == 1001);
  CHECK(saw_half);

  REQUIRE(run_cli({"reproduce", "occ-stubborn-a", "--out", dir.path.string()}).code == cli::kExitPass);
  std::istringstream table(slurp(dir / "occ-stubborn-a.csv"));
  std::getline(table, line);
  CHECK(line == "x1,x2,phi1,phi2");
  while (std::getline(table, line)) {
    double x1, x2, p1, p2;
    char c;
    std::istringstream(line) >> x1 >> c >> x2 >> c >> p1 >> c >> p2;
    const double x3 = 1.0 - x1 - x2;
    if (x1 > 1e-12 && x2 > 1e-12 && x3 > 1e-12) {
      CHECK(p1 == doctest::Approx(0.2));
      CHECK(p2 == doctest::Approx(1.0 / 3.0));
    }
    if (x1 == 1.0) {
      CHECK(p1 == 1.0);
      CHECK(p2 == 0.0);
    }
  }
  CHECK(run_cli({"reproduce", "no-such-example", "--out", dir.path.string()}).code == cli::kExitConfig);
}

TEST_CASE("convexity command") {
  TempDir dir;
  CHECK(run_cli({"convexity", "--rule", "occ-coarse(0.3,0.7,0.2,0.8)", "--prior", "0.5", "--out", dir / "c.csv"})
            .code == cli::kExitPass);
  CHECK(slurp(dir / "c.csv") == "x,x_prime,lambda,lhs,rhs,gap\n");
  CHECK(run_cli({"convexity", "--rule", "grether(2,1)", "--prior", "0.5", "--out", dir / "g.csv"}).code ==
        cli::kExitViolation);
  CHECK(run_cli({"convexity", "--states", "3", "--rule", "bayes", "--out", dir / "b.csv"}).code == cli::kExitConfig);
}
