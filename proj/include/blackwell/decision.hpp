#ifndef BLACKWELL_DECISION_HPP
#define BLACKWELL_DECISION_HPP

#include <cstddef>
#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "blackwell/belief.hpp"
#include "blackwell/distortions.hpp"
#include "blackwell/experiments.hpp"

namespace blackwell {

/// Finite action set with payoff row u(a, .) per action.
class DecisionProblem {
 public:
  explicit DecisionProblem(Matrix payoff, std::vector<std::string> action_labels = {});

  std::size_t actions() const { return payoff_.size(); }
  std::size_t states() const { return payoff_.front().size(); }
  const Matrix& payoff() const { return payoff_; }
  const std::vector<std::string>& action_labels() const { return labels_; }
  /// E_x u(a, theta)
  double expected(std::size_t action, const Belief& x) const;

 private:
  Matrix payoff_;
  std::vector<std::string> labels_;
};

/// Two states, actions on the grid {0, 1/(k-1), ..., 1}, u(a, theta) = -(a - theta)^2 + shift,
/// where the first belief coordinate is the probability of theta = 1.
DecisionProblem quadratic_loss_problem(std::size_t action_grid = 101, double shift = 0.3);

enum class SelectorPolicy { LexicographicFirst, LexicographicLast, Pinned };

std::string to_string(SelectorPolicy p);

/// Forces `action` whenever the held belief is within `radius` (sup norm) of `center`
/// and the action is optimal there.
struct Pin {
  Belief center;
  double radius;
  std::size_t action;
};

/// Chooses among optimal actions at the held belief; the choice depends on nothing else.
struct Selector {
  SelectorPolicy policy = SelectorPolicy::LexicographicFirst;
  double tie_tol = 1e-10;
  std::vector<Pin> pins;

  std::size_t choose(const DecisionProblem& p, const Belief& held) const;
};

enum class WelfareMode { SingleMistake, DoubleMistake };

std::string to_string(WelfareMode m);

struct Valuation {
  double payoff;
  std::vector<std::size_t> argmax;
};

Valuation value_V(const DecisionProblem& p, const Belief& x, double tie_tol = 1e-10);

double welfare_W(const DecisionProblem& p, const Distortion& d, const Belief& mu, const Selector& sel,
                 WelfareMode mode, const Belief& x);

/// Requires the barycenter of rho_b to be mu within 1e-8.
double expected_payoff(const DecisionProblem& p, const Distortion& d, const Belief& mu, const Selector& sel,
                       WelfareMode mode, const PosteriorDistribution& rho_b);

struct ConvexityViolation {
  Belief x;
  Belief x_prime;
  double lambda;
  /// W(lambda x + (1 - lambda) x')
  double lhs;
  /// lambda W(x) + (1 - lambda) W(x')
  double rhs;
  double gap;
};

/// n = 2: consecutive triples of the grid {k/g}. n >= 3: grid_size random pairs (seeded), each at
/// lambda in {0.25, 0.5, 0.75}. Reports every triple with lhs > rhs + tol.
std::vector<ConvexityViolation> convexity_violations(const DecisionProblem& p, const Distortion& d, const Belief& mu,
                                                     const Selector& sel, WelfareMode mode, std::size_t grid_size,
                                                     double tol = 1e-9, std::uint64_t seed = 0);

/// CSV with header x,x_prime,lambda,lhs,rhs,gap; beliefs are written as space-separated coordinates.
void write_convexity_csv(std::ostream& out, const std::vector<ConvexityViolation>& rows);

/// Shortest round-trip decimal form, independent of the locale.
std::string format_number(double v);

}  // namespace blackwell

#endif  // BLACKWELL_DECISION_HPP
