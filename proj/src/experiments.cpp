#include "blackwell/experiments.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "blackwell/errors.hpp"
#include "blackwell/geometry.hpp"
#include "blackwell/lp.hpp"

namespace blackwell {

namespace {

void require_stochastic_rows(const Matrix& m, const char* what) {
  if (m.empty() || m.front().empty()) throw Error(ErrorCode::EmptyInput, std::string(what) + " needs at least one row and column");
  const std::size_t cols = m.front().size();
  for (const auto& row : m) {
    if (row.size() != cols) throw Error(ErrorCode::DimensionMismatch, std::string(what) + " rows differ in length");
    double sum = 0.0;
    for (double v : row) {
      if (!std::isfinite(v) || v < 0.0) throw Error(ErrorCode::InvalidArgument, std::string(what) + " has a negative entry");
      sum += v;
    }
    if (std::abs(sum - 1.0) > kSumTolerance) throw Error(ErrorCode::InvalidArgument, std::string(what) + " row does not sum to 1");
  }
}

void require_interior(const Belief& prior) {
  if (!prior.interior()) throw Error(ErrorCode::PriorNotInterior, "prior must give every state positive probability");
}

}  // namespace

Experiment::Experiment(Matrix likelihoods, std::vector<std::string> signal_labels)
    : likelihoods_(std::move(likelihoods)), labels_(std::move(signal_labels)) {
  require_stochastic_rows(likelihoods_, "experiment");
  if (labels_.empty())
    for (std::size_t s = 0; s < signals(); ++s) labels_.push_back("s" + std::to_string(s + 1));
  if (labels_.size() != signals()) throw Error(ErrorCode::DimensionMismatch, "one label per signal required");
}

Experiment Experiment::uninformative(std::size_t n) { return Experiment(Matrix(n, std::vector<double>{1.0})); }

Experiment Experiment::fully_informative(std::size_t n) {
  Matrix m(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) m[i][i] = 1.0;
  return Experiment(std::move(m));
}

PosteriorDistribution::PosteriorDistribution(std::vector<Belief> support, std::vector<double> probs)
    : barycenter_(Belief::vertex(1, 0)) {
  if (support.empty()) throw Error(ErrorCode::EmptyInput, "posterior distribution needs support");
  if (support.size() != probs.size()) throw Error(ErrorCode::DimensionMismatch, "one probability per support point");
  const std::size_t n = support.front().size();
  double total = 0.0;
  for (std::size_t j = 0; j < support.size(); ++j) {
    if (support[j].size() != n) throw Error(ErrorCode::DimensionMismatch, "support beliefs of different sizes");
    if (!(probs[j] > 0.0) || !std::isfinite(probs[j])) throw Error(ErrorCode::InvalidArgument, "probabilities must be positive");
    total += probs[j];
    auto it = std::find_if(support_.begin(), support_.end(),
                           [&](const Belief& b) { return distance_inf(b, support[j]) <= kGeometryTolerance; });
    if (it == support_.end()) {
      support_.push_back(support[j]);
      probs_.push_back(probs[j]);
    } else {
      probs_[static_cast<std::size_t>(it - support_.begin())] += probs[j];
    }
  }
  if (std::abs(total - 1.0) > kSumTolerance) throw Error(ErrorCode::InvalidArgument, "probabilities do not sum to 1");
  std::vector<double> c(n, 0.0);
  for (std::size_t j = 0; j < support_.size(); ++j)
    for (std::size_t i = 0; i < n; ++i) c[i] += probs_[j] * support_[j][i];
  barycenter_ = Belief::normalized(std::move(c));
}

PosteriorDistribution PosteriorDistribution::degenerate(const Belief& x) { return PosteriorDistribution({x}, {1.0}); }

GarblingMatrix::GarblingMatrix(Matrix entries) : entries_(std::move(entries)) {
  require_stochastic_rows(entries_, "garbling");
}

GarblingMatrix GarblingMatrix::identity(std::size_t s) {
  Matrix m(s, std::vector<double>(s, 0.0));
  for (std::size_t i = 0; i < s; ++i) m[i][i] = 1.0;
  return GarblingMatrix(std::move(m));
}

PosteriorDistribution bayes(const Belief& prior, const Experiment& experiment) {
  require_interior(prior);
  const std::size_t n = prior.size();
  if (experiment.states() != n) throw Error(ErrorCode::DimensionMismatch, "experiment and prior disagree on state count");
  std::vector<Belief> support;
  std::vector<double> probs;
  double total = 0.0;
  for (std::size_t s = 0; s < experiment.signals(); ++s) {
    std::vector<double> joint(n);
    double p = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
      joint[t] = prior[t] * experiment.likelihood(t, s);
      p += joint[t];
    }
    if (!(p > 0.0)) continue;
    support.push_back(Belief::normalized(std::move(joint)));
    probs.push_back(p);
    total += p;
  }
  for (double& p : probs) p /= total;
  return PosteriorDistribution(std::move(support), std::move(probs));
}

Experiment experiment_from_posteriors(const PosteriorDistribution& rho, const Belief& prior) {
  require_interior(prior);
  if (rho.states() != prior.size()) throw Error(ErrorCode::DimensionMismatch, "posteriors and prior disagree on state count");
  if (distance_inf(rho.barycenter(), prior) > 1e-10)
    throw Error(ErrorCode::BarycenterMismatch, "posterior distribution does not average to the prior");
  const std::size_t n = prior.size();
  Matrix m(n, std::vector<double>(rho.size()));
  for (std::size_t t = 0; t < n; ++t) {
    double sum = 0.0;
    for (std::size_t j = 0; j < rho.size(); ++j) {
      m[t][j] = rho.probs()[j] * rho.support()[j][t] / prior[t];
      sum += m[t][j];
    }
    // Absorb the barycenter tolerance so every row is exactly stochastic.
    for (double& v : m[t]) v /= sum;
  }
  return Experiment(std::move(m));
}

Experiment garble(const Experiment& experiment, const GarblingMatrix& g) {
  if (g.inputs() != experiment.signals()) throw Error(ErrorCode::DimensionMismatch, "garbling rows must match signals");
  Matrix out(experiment.states(), std::vector<double>(g.outputs(), 0.0));
  for (std::size_t t = 0; t < experiment.states(); ++t) {
    for (std::size_t s = 0; s < experiment.signals(); ++s)
      for (std::size_t k = 0; k < g.outputs(); ++k) out[t][k] += experiment.likelihood(t, s) * g.entries()[s][k];
    double sum = 0.0;
    for (double v : out[t]) sum += v;
    for (double& v : out[t]) v /= sum;
  }
  return Experiment(std::move(out));
}

bool blackwell_dominates(const Experiment& pi, const Experiment& pi_prime, double tol) {
  if (pi.states() != pi_prime.states()) throw Error(ErrorCode::DimensionMismatch, "experiments disagree on state count");
  const std::size_t n = pi.states(), s = pi.signals(), sp = pi_prime.signals();
  lp::Program prog;
  std::vector<std::size_t> m(s * sp);
  for (auto& v : m) v = prog.add_variable(0.0);
  const std::size_t t = prog.add_variable(1.0);
  for (std::size_t a = 0; a < s; ++a) {
    std::vector<lp::Term> row;
    for (std::size_t b = 0; b < sp; ++b) row.push_back({m[a * sp + b], 1.0});
    prog.add_constraint(std::move(row), lp::Relation::Equal, 1.0);
  }
  for (std::size_t th = 0; th < n; ++th)
    for (std::size_t b = 0; b < sp; ++b) {
      std::vector<lp::Term> hi, lo;
      for (std::size_t a = 0; a < s; ++a) {
        hi.push_back({m[a * sp + b], pi.likelihood(th, a)});
        lo.push_back({m[a * sp + b], pi.likelihood(th, a)});
      }
      hi.push_back({t, -1.0});
      lo.push_back({t, 1.0});
      prog.add_constraint(std::move(hi), lp::Relation::LessEqual, pi_prime.likelihood(th, b));
      prog.add_constraint(std::move(lo), lp::Relation::GreaterEqual, pi_prime.likelihood(th, b));
    }
  lp::Solution sol = prog.minimize();
  return sol.optimal() && sol.objective <= tol;
}

bool is_mpc(const PosteriorDistribution& rho_prime, const PosteriorDistribution& rho, double tol) {
  if (rho.states() != rho_prime.states()) throw Error(ErrorCode::DimensionMismatch, "distributions disagree on state count");
  if (distance_inf(rho.barycenter(), rho_prime.barycenter()) > tol)
    throw Error(ErrorCode::BarycenterMismatch, "distributions have different barycenters");
  const std::size_t n = rho.states(), a = rho_prime.size(), b = rho.size();
  lp::Program prog;
  std::vector<std::size_t> g(a * b);
  for (auto& v : g) v = prog.add_variable(0.0);
  const std::size_t t = prog.add_variable(1.0);
  auto band = [&](std::vector<lp::Term> terms, double target) {
    std::vector<lp::Term> lo = terms;
    terms.push_back({t, -1.0});
    lo.push_back({t, 1.0});
    prog.add_constraint(std::move(terms), lp::Relation::LessEqual, target);
    prog.add_constraint(std::move(lo), lp::Relation::GreaterEqual, target);
  };
  for (std::size_t i = 0; i < a; ++i) {
    std::vector<lp::Term> row;
    for (std::size_t j = 0; j < b; ++j) row.push_back({g[i * b + j], 1.0});
    prog.add_constraint(std::move(row), lp::Relation::Equal, rho_prime.probs()[i]);
  }
  for (std::size_t j = 0; j < b; ++j) {
    std::vector<lp::Term> col;
    for (std::size_t i = 0; i < a; ++i) col.push_back({g[i * b + j], 1.0});
    band(std::move(col), rho.probs()[j]);
  }
  for (std::size_t i = 0; i < a; ++i)
    for (std::size_t th = 0; th < n; ++th) {
      std::vector<lp::Term> mean;
      for (std::size_t j = 0; j < b; ++j) mean.push_back({g[i * b + j], rho.support()[j][th]});
      band(std::move(mean), rho_prime.probs()[i] * rho_prime.support()[i][th]);
    }
  lp::Solution sol = prog.minimize();
  return sol.optimal() && sol.objective <= tol;
}

PosteriorDistribution bring_point_in(const PosteriorDistribution& rho, std::size_t index, double gamma,
                                     const Belief& direction_target) {
  if (index >= rho.size()) throw Error(ErrorCode::InvalidArgument, "support index out of range");
  if (!(gamma > 0.0 && gamma < 1.0)) throw Error(ErrorCode::InvalidArgument, "gamma must lie in (0,1)");
  if (!affinely_independent(rho.support())) throw Error(ErrorCode::NotAffinelyIndependent, "support is affinely dependent");
  std::vector<Belief> others;
  for (std::size_t j = 0; j < rho.size(); ++j)
    if (j != index) others.push_back(rho.support()[j]);
  if (others.empty() || !in_convex_hull(direction_target, others))
    throw Error(ErrorCode::TargetOutsideOppositeHull, "target must lie in the hull of the other support points");

  std::vector<Belief> support = rho.support();
  support[index] = mix(support[index], direction_target, gamma);
  const std::size_t n = rho.states(), k = support.size();
  Eigen::MatrixXd a(n + 1, k);
  Eigen::VectorXd rhs(n + 1);
  for (std::size_t j = 0; j < k; ++j) {
    for (std::size_t i = 0; i < n; ++i) a(i, j) = support[j][i];
    a(n, j) = 1.0;
  }
  for (std::size_t i = 0; i < n; ++i) rhs(i) = rho.barycenter()[i];
  rhs(n) = 1.0;
  Eigen::VectorXd w = a.colPivHouseholderQr().solve(rhs);
  if ((a * w - rhs).lpNorm<Eigen::Infinity>() > 1e-10)
    throw Error(ErrorCode::InfeasibleWeights, "barycenter cannot be reproduced from the moved support");
  std::vector<double> probs(k);
  for (std::size_t j = 0; j < k; ++j) {
    if (!(w(static_cast<Eigen::Index>(j)) > 1e-9))
      throw Error(ErrorCode::InfeasibleWeights, "moving the point this far leaves a non-positive weight");
    probs[j] = w(static_cast<Eigen::Index>(j));
  }
  double sum = 0.0;
  for (double p : probs) sum += p;
  for (double& p : probs) p /= sum;
  return PosteriorDistribution(std::move(support), std::move(probs));
}

}  // namespace blackwell
