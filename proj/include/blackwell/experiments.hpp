#ifndef BLACKWELL_EXPERIMENTS_HPP
#define BLACKWELL_EXPERIMENTS_HPP

#include <cstddef>
#include <string>
#include <vector>

#include "blackwell/belief.hpp"

namespace blackwell {

using Matrix = std::vector<std::vector<double>>;

/// Likelihood matrix: row theta is the signal distribution pi(. | theta).
class Experiment {
 public:
  explicit Experiment(Matrix likelihoods, std::vector<std::string> signal_labels = {});

  /// One signal that is equally likely in every state.
  static Experiment uninformative(std::size_t n);
  static Experiment fully_informative(std::size_t n);

  std::size_t states() const { return likelihoods_.size(); }
  std::size_t signals() const { return likelihoods_.front().size(); }
  double likelihood(std::size_t state, std::size_t signal) const { return likelihoods_[state][signal]; }
  const Matrix& likelihoods() const { return likelihoods_; }
  const std::vector<std::string>& signal_labels() const { return labels_; }

 private:
  Matrix likelihoods_;
  std::vector<std::string> labels_;
};

/// Finite-support distribution over posteriors with distinct support points.
class PosteriorDistribution {
 public:
  /// Points within kGeometryTolerance of an earlier point are merged into it.
  PosteriorDistribution(std::vector<Belief> support, std::vector<double> probs);

  static PosteriorDistribution degenerate(const Belief& x);

  std::size_t size() const { return support_.size(); }
  std::size_t states() const { return support_.front().size(); }
  const std::vector<Belief>& support() const { return support_; }
  const std::vector<double>& probs() const { return probs_; }
  const Belief& barycenter() const { return barycenter_; }

 private:
  std::vector<Belief> support_;
  std::vector<double> probs_;
  Belief barycenter_;
};

class GarblingMatrix {
 public:
  explicit GarblingMatrix(Matrix entries);
  static GarblingMatrix identity(std::size_t s);

  std::size_t inputs() const { return entries_.size(); }
  std::size_t outputs() const { return entries_.front().size(); }
  const Matrix& entries() const { return entries_; }

 private:
  Matrix entries_;
};

PosteriorDistribution bayes(const Belief& prior, const Experiment& experiment);

/// Inverse of bayes: one signal per support point with pi(s_j | theta) = p_j x_j(theta) / mu(theta).
Experiment experiment_from_posteriors(const PosteriorDistribution& rho, const Belief& prior);

Experiment garble(const Experiment& experiment, const GarblingMatrix& m);

/// True iff pi_prime is a garbling of pi, up to tol in every likelihood.
bool blackwell_dominates(const Experiment& pi, const Experiment& pi_prime, double tol = 1e-8);

/// True iff rho_prime is a mean-preserving contraction of rho (a dilation of rho_prime yields rho).
bool is_mpc(const PosteriorDistribution& rho_prime, const PosteriorDistribution& rho, double tol = 1e-8);

/// Moves support point `index` to gamma * x_index + (1 - gamma) * target and re-solves the
/// probabilities so the barycenter is unchanged.
PosteriorDistribution bring_point_in(const PosteriorDistribution& rho, std::size_t index, double gamma,
                                     const Belief& direction_target);

}  // namespace blackwell

#endif  // BLACKWELL_EXPERIMENTS_HPP
