#include "blackwell/decision.hpp"

#include <charconv>
#include <cmath>
#include <limits>

#include "blackwell/errors.hpp"
#include "blackwell/sampling.hpp"

namespace blackwell {

DecisionProblem::DecisionProblem(Matrix payoff, std::vector<std::string> action_labels)
    : payoff_(std::move(payoff)), labels_(std::move(action_labels)) {
  if (payoff_.empty() || payoff_.front().empty()) throw Error(ErrorCode::EmptyInput, "decision problem needs an action and a state");
  for (const auto& row : payoff_) {
    if (row.size() != payoff_.front().size()) throw Error(ErrorCode::DimensionMismatch, "payoff rows differ in length");
    for (double v : row)
      if (!std::isfinite(v)) throw Error(ErrorCode::InvalidArgument, "payoffs must be finite");
  }
  if (labels_.empty())
    for (std::size_t a = 0; a < payoff_.size(); ++a) labels_.push_back("a" + std::to_string(a + 1));
  if (labels_.size() != payoff_.size()) throw Error(ErrorCode::DimensionMismatch, "one label per action required");
}

double DecisionProblem::expected(std::size_t action, const Belief& x) const {
  if (x.size() != states()) throw Error(ErrorCode::DimensionMismatch, "belief and problem disagree on state count");
  return dot(payoff_[action], x.coords());
}

DecisionProblem quadratic_loss_problem(std::size_t action_grid, double shift) {
  if (action_grid < 2) throw Error(ErrorCode::InvalidArgument, "action grid needs at least two points");
  Matrix m;
  std::vector<std::string> labels;
  for (std::size_t k = 0; k < action_grid; ++k) {
    const double a = static_cast<double>(k) / static_cast<double>(action_grid - 1);
    m.push_back({-(a - 1.0) * (a - 1.0) + shift, -a * a + shift});
    labels.push_back(format_number(a));
  }
  return DecisionProblem(std::move(m), std::move(labels));
}

std::string to_string(SelectorPolicy p) {
  switch (p) {
    case SelectorPolicy::LexicographicFirst: return "lexicographic-first";
    case SelectorPolicy::LexicographicLast: return "lexicographic-last";
    case SelectorPolicy::Pinned: return "pinned";
  }
  return "unknown";
}

std::string to_string(WelfareMode m) { return m == WelfareMode::SingleMistake ? "single" : "double"; }

Valuation value_V(const DecisionProblem& p, const Belief& x, double tie_tol) {
  Valuation v{-std::numeric_limits<double>::infinity(), {}};
  std::vector<double> vals(p.actions());
  for (std::size_t a = 0; a < p.actions(); ++a) {
    vals[a] = p.expected(a, x);
    v.payoff = std::max(v.payoff, vals[a]);
  }
  for (std::size_t a = 0; a < p.actions(); ++a)
    if (vals[a] >= v.payoff - tie_tol) v.argmax.push_back(a);
  return v;
}

std::size_t Selector::choose(const DecisionProblem& p, const Belief& held) const {
  const Valuation v = value_V(p, held, tie_tol);
  if (policy == SelectorPolicy::LexicographicLast) return v.argmax.back();
  if (policy == SelectorPolicy::Pinned)
    for (const Pin& pin : pins)
      if (pin.center.size() == held.size() && distance_inf(pin.center, held) <= pin.radius)
        for (std::size_t a : v.argmax)
          if (a == pin.action) return a;
  return v.argmax.front();
}

double welfare_W(const DecisionProblem& p, const Distortion& d, const Belief& mu, const Selector& sel,
                 WelfareMode mode, const Belief& x) {
  const Belief held = d.evaluate(mu, x);
  if (mode == WelfareMode::DoubleMistake) return value_V(p, held, sel.tie_tol).payoff;
  return p.expected(sel.choose(p, held), x);
}

double expected_payoff(const DecisionProblem& p, const Distortion& d, const Belief& mu, const Selector& sel,
                       WelfareMode mode, const PosteriorDistribution& rho_b) {
  if (distance_inf(rho_b.barycenter(), mu) > 1e-8)
    throw Error(ErrorCode::BarycenterMismatch, "posterior distribution does not average to the prior");
  double total = 0.0;
  for (std::size_t j = 0; j < rho_b.size(); ++j)
    total += rho_b.probs()[j] * welfare_W(p, d, mu, sel, mode, rho_b.support()[j]);
  return total;
}

std::vector<ConvexityViolation> convexity_violations(const DecisionProblem& p, const Distortion& d, const Belief& mu,
                                                     const Selector& sel, WelfareMode mode, std::size_t grid_size,
                                                     double tol, std::uint64_t seed) {
  std::vector<ConvexityViolation> out;
  auto W = [&](const Belief& x) { return welfare_W(p, d, mu, sel, mode, x); };
  auto test = [&](const Belief& x, const Belief& xp, double lambda) {
    const double lhs = W(mix(x, xp, lambda));
    const double rhs = lambda * W(x) + (1.0 - lambda) * W(xp);
    if (lhs > rhs + tol) out.push_back({x, xp, lambda, lhs, rhs, lhs - rhs});
  };
  if (d.states() == 2) {
    if (grid_size < 2) throw Error(ErrorCode::InvalidArgument, "grid too coarse");
    const double g = static_cast<double>(grid_size);
    std::vector<double> w(grid_size + 1);
    for (std::size_t k = 0; k <= grid_size; ++k) w[k] = W(Belief::binary(static_cast<double>(k) / g));
    for (std::size_t k = 1; k < grid_size; ++k) {
      const double rhs = 0.5 * (w[k - 1] + w[k + 1]);
      if (w[k] > rhs + tol)
        out.push_back({Belief::binary(static_cast<double>(k - 1) / g), Belief::binary(static_cast<double>(k + 1) / g),
                       0.5, w[k], rhs, w[k] - rhs});
    }
    return out;
  }
  Rng rng(seed);
  for (std::size_t i = 0; i < grid_size; ++i) {
    const Belief x = Belief::normalized(rng.simplex(d.states()));
    const Belief xp = Belief::normalized(rng.simplex(d.states()));
    for (double lambda : {0.25, 0.5, 0.75}) test(x, xp, lambda);
  }
  return out;
}

std::string format_number(double v) {
  if (v == 0.0) return "0";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) throw Error(ErrorCode::InvalidArgument, "number formatting failed");
  return std::string(buf, ptr);
}

void write_convexity_csv(std::ostream& out, const std::vector<ConvexityViolation>& rows) {
  auto belief = [](const Belief& b) {
    std::string s;
    for (std::size_t i = 0; i < b.size(); ++i) s += (i ? " " : "") + format_number(b[i]);
    return s;
  };
  out << "x,x_prime,lambda,lhs,rhs,gap\n";
  for (const auto& r : rows)
    out << belief(r.x) << ',' << belief(r.x_prime) << ',' << format_number(r.lambda) << ',' << format_number(r.lhs)
        << ',' << format_number(r.rhs) << ',' << format_number(r.gap) << '\n';
}

}  // namespace blackwell
