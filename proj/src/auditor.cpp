#include "blackwell/auditor.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

#include "blackwell/errors.hpp"
#include "blackwell/parallel.hpp"
#include "blackwell/sampling.hpp"

namespace blackwell {

DecisionProblem hyperplane_problem(const Hyperplane& h) {
  std::vector<double> active(h.normal.size());
  for (std::size_t i = 0; i < active.size(); ++i) active[i] = h.normal[i] - h.offset;
  return DecisionProblem({std::vector<double>(h.normal.size(), 0.0), std::move(active)}, {"abstain", "act"});
}

namespace {

using Candidate = std::optional<ViolationCertificate>;

/// Thrown when the whole budget is spent.
struct BudgetSpent {};
/// Thrown when a per-point share of the budget is spent.
struct ShareSpent {};

constexpr double kMinMargin = 1e-7;

Belief clamp_belief(std::vector<double> v) {
  for (double& c : v) c = std::max(c, 0.0);
  return Belief::normalized(std::move(v));
}

double norm2(const std::vector<double>& v) {
  double s = 0.0;
  for (double c : v) s += c * c;
  return std::sqrt(s);
}

std::vector<double> minus(const Belief& a, const Belief& b) {
  std::vector<double> d(a.size());
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = a[i] - b[i];
  return d;
}

/// Posterior after each signal; empty for signals of probability zero.
std::vector<std::optional<Belief>> signal_posteriors(const Belief& prior, const Experiment& e) {
  std::vector<std::optional<Belief>> out;
  for (std::size_t s = 0; s < e.signals(); ++s) {
    std::vector<double> w(prior.size());
    double total = 0.0;
    for (std::size_t t = 0; t < prior.size(); ++t) total += w[t] = prior[t] * e.likelihood(t, s);
    if (total > 0.0)
      out.emplace_back(Belief::normalized(std::move(w)));
    else
      out.emplace_back();
  }
  return out;
}

std::vector<Belief> held_beliefs(const Distortion& d, const Belief& prior, const Experiment& e) {
  std::vector<Belief> out;
  for (const auto& x : signal_posteriors(prior, e)) out.push_back(x ? d.evaluate(prior, *x) : prior);
  return out;
}

double value_of(const ViolationCertificate& c, const Experiment& e) {
  return expected_payoff(c.problem, c.rule, c.prior, c.selector, c.mode, bayes(c.prior, e));
}

/// Point where the ray from x through mu leaves the simplex.
Belief far_point(const Belief& mu, const Belief& x) {
  const auto dir = minus(x, mu);
  double t = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < dir.size(); ++i)
    if (dir[i] > 0.0) t = std::min(t, mu[i] / dir[i]);
  std::vector<double> f(dir.size());
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = mu[i] - t * dir[i];
  return clamp_belief(std::move(f));
}

/// Two-point distribution on {z, w} averaging to mu, where mu lies on the segment.
std::optional<PosteriorDistribution> two_point(const Belief& z, const Belief& w, const Belief& mu) {
  const auto zw = minus(z, w), mw = minus(mu, w);
  const double len = norm2(zw);
  if (len < 1e-12) return std::nullopt;
  const double p = dot(zw, mw) / (len * len);
  if (!(p > 1e-9 && p < 1.0 - 1e-9)) return std::nullopt;
  return PosteriorDistribution({z, w}, {p, 1.0 - p});
}

class Search {
 public:
  Search(const Distortion& d, const Belief& mu, const AuditOptions& o, std::size_t budget)
      : d_(d), mu_(mu), opt_(o), budget_(budget), share_(budget) {}

  std::size_t used() const { return used_; }
  std::size_t budget() const { return budget_; }
  const Distortion& rule() const { return d_; }
  const Belief& prior() const { return mu_; }
  const AuditOptions& options() const { return opt_; }

  void spend() {
    if (used_ >= budget_) throw BudgetSpent{};
    if (used_ >= share_) throw ShareSpent{};
    ++used_;
  }

  /// Runs f with at most `share` further units; an exhausted share ends f without a result.
  template <class F>
  Candidate with_share(std::size_t share, F&& f) {
    const std::size_t saved = share_;
    share_ = std::min(saved, used_ + share);
    try {
      Candidate c = f();
      share_ = saved;
      return c;
    } catch (ShareSpent&) {
      share_ = saved;
      return std::nullopt;
    } catch (...) {
      share_ = saved;
      throw;
    }
  }

  /// Searches two-action hyperplane problems for the pair (more informative, contraction).
  /// Active sets are the support points whose images take the second action: each active point
  /// must contribute a negative term, so images of active points are separated from the rest.
  Candidate probe(const PosteriorDistribution& more, const PosteriorDistribution& less, const std::string& recipe,
                  std::size_t max_active = 2) {
    try {
      return probe_unchecked(more, less, recipe, max_active);
    } catch (Error&) {
      return std::nullopt;
    }
  }

  /// Evaluates one problem on a posterior pair and, when the gap is negative, certifies it.
  Candidate try_problem(const PosteriorDistribution& more, const PosteriorDistribution& less, const DecisionProblem& p,
                        const std::string& recipe) {
    try {
      const double gap = expected_payoff(p, d_, mu_, opt_.selector, opt_.mode, more) -
                         expected_payoff(p, d_, mu_, opt_.selector, opt_.mode, less);
      if (!(gap <= -kCertificateTolerance)) return std::nullopt;
      return finalize(experiment_from_posteriors(more, mu_), experiment_from_posteriors(less, mu_), p, recipe);
    } catch (Error&) {
      return std::nullopt;
    }
  }

  Candidate finalize(Experiment pi, Experiment pi_prime, const DecisionProblem& p, const std::string& recipe) {
    ViolationCertificate c{mu_, std::move(pi), std::move(pi_prime), p, opt_.selector, opt_.mode, 0.0, recipe,
                           opt_.seed, d_, {}, {}};
    c.held_pi = held_beliefs(d_, mu_, c.pi);
    c.held_pi_prime = held_beliefs(d_, mu_, c.pi_prime);
    c.gap = value_of(c, c.pi) - value_of(c, c.pi_prime);
    if (!verify_certificate(c).valid) return std::nullopt;
    return c;
  }

 private:
  struct Point {
    Belief z;
    double diff;
    Belief image;
  };

  Candidate probe_unchecked(const PosteriorDistribution& more, const PosteriorDistribution& less,
                            const std::string& recipe, std::size_t max_active) {
    std::vector<Point> pts;
    auto add = [&](const Belief& z, double w) {
      for (auto& p : pts)
        if (distance_inf(p.z, z) <= kGeometryTolerance) {
          p.diff += w;
          return;
        }
      pts.push_back({z, w, d_.evaluate(mu_, z)});
    };
    for (std::size_t j = 0; j < more.size(); ++j) add(more.support()[j], more.probs()[j]);
    for (std::size_t j = 0; j < less.size(); ++j) add(less.support()[j], -less.probs()[j]);
    std::erase_if(pts, [](const Point& p) { return std::abs(p.diff) <= 1e-12; });

    const bool twice = opt_.mode == WelfareMode::DoubleMistake;
    std::vector<std::size_t> eligible;
    for (std::size_t i = 0; i < pts.size(); ++i)
      if (!twice || pts[i].diff < 0.0) eligible.push_back(i);

    auto attempt = [&](const std::vector<std::size_t>& active) -> Candidate {
      std::vector<Belief> pos, neg;
      std::vector<bool> in(pts.size(), false);
      for (std::size_t i : active) in[i] = true;
      for (std::size_t i = 0; i < pts.size(); ++i) {
        if (!in[i]) {
          neg.push_back(pts[i].image);
          continue;
        }
        pos.push_back(pts[i].image);
        if (!twice) (pts[i].diff < 0.0 ? pos : neg).push_back(pts[i].z);
      }
      if (pos.empty() || neg.empty()) return std::nullopt;
      spend();
      const auto sep = separate(pos, neg, kMinMargin);
      if (!sep) return std::nullopt;
      return try_problem(more, less, hyperplane_problem(sep->plane), recipe);
    };

    for (std::size_t a = 0; a < eligible.size(); ++a)
      if (auto c = attempt({eligible[a]})) return c;
    if (max_active >= 2)
      for (std::size_t a = 0; a < eligible.size(); ++a)
        for (std::size_t b = a + 1; b < eligible.size(); ++b)
          if (auto c = attempt({eligible[a], eligible[b]})) return c;
    return std::nullopt;
  }

  const Distortion& d_;
  const Belief& mu_;
  const AuditOptions& opt_;
  std::size_t budget_;
  std::size_t share_;
  std::size_t used_ = 0;
};

/// Affinely independent scaffold {x0, y_1..y_{n-1}} around mu: the y_j form a regular simplex of
/// radius eps centred at mu + eps * (mu - x0)/|mu - x0|, orthogonal to that direction.
std::optional<PosteriorDistribution> near_scaffold(const Belief& mu, const Belief& x0, double eps) {
  const std::size_t n = mu.size();
  const auto away = minus(mu, x0);
  const double len = norm2(away);
  if (len < 1e-9) return std::nullopt;

  Eigen::MatrixXd frame(n, 2);
  for (std::size_t i = 0; i < n; ++i) {
    frame(static_cast<Eigen::Index>(i), 0) = 1.0;
    frame(static_cast<Eigen::Index>(i), 1) = away[i] / len;
  }
  const Eigen::MatrixXd q = frame.householderQr().householderQ() * Eigen::MatrixXd::Identity(n, n);
  const std::size_t m = n - 1;
  Eigen::MatrixXd offsets = Eigen::MatrixXd::Zero(n, static_cast<Eigen::Index>(m));
  if (m >= 2) {
    const Eigen::MatrixXd q2 = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(m)).householderQr().householderQ() *
                               Eigen::MatrixXd::Identity(m, m);
    for (std::size_t j = 0; j < m; ++j) {
      Eigen::VectorXd e = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(m), -1.0 / static_cast<double>(m));
      e(static_cast<Eigen::Index>(j)) += 1.0;
      Eigen::VectorXd r = q2.rightCols(static_cast<Eigen::Index>(m - 1)).transpose() * e;
      r.normalize();
      offsets.col(static_cast<Eigen::Index>(j)) = q.rightCols(static_cast<Eigen::Index>(n - 2)) * r;
    }
  }

  for (int halvings = 0; halvings < 8; ++halvings, eps *= 0.5) {
    std::vector<Belief> support{x0};
    bool inside = true;
    for (std::size_t j = 0; j < m && inside; ++j) {
      std::vector<double> y(n);
      for (std::size_t i = 0; i < n; ++i) {
        y[i] = mu[i] + eps * away[i] / len + eps * offsets(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
        if (y[i] < 1e-12) inside = false;
      }
      if (inside) support.push_back(clamp_belief(std::move(y)));
    }
    if (!inside) continue;
    const double w = eps / (len + eps);
    std::vector<double> probs(support.size(), (1.0 - w) / static_cast<double>(m));
    probs[0] = w;
    try {
      PosteriorDistribution rho(std::move(support), std::move(probs));
      if (rho.size() == m + 1 && distance_inf(rho.barycenter(), mu) <= 1e-12) return rho;
    } catch (Error&) {
    }
  }
  return std::nullopt;
}

std::vector<PosteriorDistribution> scaffolds(const Belief& mu, const Belief& x0) {
  std::vector<PosteriorDistribution> out;
  const double diameter = std::sqrt(2.0);
  if (auto s = near_scaffold(mu, x0, 0.05 * diameter)) out.push_back(*s);
  if (auto s = two_point(x0, far_point(mu, x0), mu)) out.push_back(*s);
  if (auto s = near_scaffold(mu, x0, 0.2 * diameter)) out.push_back(*s);
  if (auto s = near_scaffold(mu, x0, 0.0125 * diameter)) out.push_back(*s);
  return out;
}

std::vector<Belief> scaffold_targets(const PosteriorDistribution& rho) {
  std::vector<Belief> others(rho.support().begin() + 1, rho.support().end());
  std::vector<double> c(rho.states(), 0.0);
  for (const auto& o : others)
    for (std::size_t i = 0; i < c.size(); ++i) c[i] += o[i] / static_cast<double>(others.size());
  std::vector<Belief> targets{clamp_belief(std::move(c))};
  if (others.size() > 1) targets.insert(targets.end(), others.begin(), others.end());
  return targets;
}

constexpr double kGammas[] = {0.75, 0.5, 0.9, 0.25};

Candidate expansive_recipes(Search& s, const Belief& x0) {
  const auto& mu = s.prior();
  const auto scaff = scaffolds(mu, x0);
  // Single hyperplane problems on one contraction first.
  for (const auto& rho : scaff)
    for (double gamma : kGammas)
      for (const auto& t : scaffold_targets(rho)) {
        try {
          const auto rho1 = bring_point_in(rho, 0, gamma, t);
          if (auto c = s.probe(rho, rho1, "claim1-hyperplane")) return c;
        } catch (Error&) {
        }
      }
  // Then a second contraction and the mixture comparison.
  for (const auto& rho : scaff)
    for (double gamma : kGammas)
      for (const auto& t : scaffold_targets(rho)) {
        try {
          const auto rho1 = bring_point_in(rho, 0, gamma, t);
          const auto rho2 = bring_point_in(rho1, 0, gamma, t);
          if (auto c = s.probe(rho1, rho2, "claim2-more-extreme")) return c;
          const double a = gamma / (1.0 + gamma), q = rho1.probs()[0];
          std::vector<Belief> support{rho.support()[0], rho2.support()[0]};
          std::vector<double> probs{a * q, (1.0 - a) * q};
          for (std::size_t j = 1; j < rho1.size(); ++j) {
            support.push_back(rho1.support()[j]);
            probs.push_back(rho1.probs()[j]);
          }
          const PosteriorDistribution dagger(std::move(support), std::move(probs));
          if (auto c = s.probe(dagger, rho1, "claim3-mixture")) return c;
        } catch (Error&) {
        }
      }
  return std::nullopt;
}

/// Splits y = gamma z + (1 - gamma) w into {z, w}, with a common remainder c completing the prior.
Candidate chord(Search& s, const Belief& z, const Belief& w, double gamma, const std::string& recipe) {
  if (distance_inf(z, w) <= 1e-9) return std::nullopt;
  const auto& mu = s.prior();
  const Belief y = mix(z, w, gamma);
  double q = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < y.size(); ++i)
    if (y[i] > 0.0) q = std::min(q, mu[i] / y[i]);
  q = std::min(0.5 * q, 0.5);
  std::vector<double> c(mu.size());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = (mu[i] - q * y[i]) / (1.0 - q);
  try {
    const Belief rest = clamp_belief(std::move(c));
    const PosteriorDistribution dagger({z, w, rest}, {gamma * q, (1.0 - gamma) * q, 1.0 - q});
    const PosteriorDistribution merged({y, rest}, {q, 1.0 - q});
    return s.probe(dagger, merged, recipe);
  } catch (Error&) {
    return std::nullopt;
  }
}

std::vector<Belief> boundary_targets(std::size_t n) {
  std::vector<Belief> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(Belief::vertex(n, i));
  for (const auto& f : all_faces(n, 2))
    if (f.support().size() == 2) out.push_back(f.centroid(n));
  return out;
}

Candidate contractive_recipes(Search& s, const Belief& x0, double lambda) {
  const auto& mu = s.prior();
  const auto& d = s.rule();
  const std::size_t n = mu.size();
  if (n >= 3)
    for (double gamma : {0.5, 0.25, 0.75})
      for (const auto& w : boundary_targets(n))
        if (auto c = chord(s, x0, w, gamma, "contagion-edge")) return c;

  const auto dir = minus(x0, mu);
  auto on_line = [&](double t) {
    std::vector<double> p(n);
    for (std::size_t i = 0; i < n; ++i) p[i] = mu[i] + t * dir[i];
    return clamp_belief(std::move(p));
  };
  auto line_coord = [&](const Belief& x) { return dot(minus(x, mu), dir) / dot(dir, dir); };
  const Belief far = far_point(mu, x0);
  const auto outer = two_point(x0, far, mu);
  if (!outer) return std::nullopt;

  for (double f1 : {0.5, 0.25, 0.75, 0.1, 0.9}) {
    const double t1 = lambda + f1 * (1.0 - lambda);
    const Belief z1 = on_line(t1);
    const auto inner = two_point(z1, far, mu);
    if (!inner) continue;
    if (auto c = s.probe(*outer, *inner, "lemma3-midpoint")) return c;
    Belief image = z1;
    try {
      image = d.evaluate(mu, z1);
    } catch (Error&) {
      continue;
    }
    if (!on_segment(z1, mu, image).on) continue;
    const double t_hat = line_coord(image);
    if (!(t_hat < t1 - 1e-9)) continue;
    const double p1 = inner->probs()[0];
    for (double f2 : {0.5, 0.25, 0.75}) {
      const double t2 = t_hat + f2 * (t1 - t_hat);
      if (t2 <= 0.0) continue;
      const double wz = p1 * (t1 - t2) / (1.0 - t2);
      try {
        const PosteriorDistribution ternary({far, on_line(t2), x0}, {1.0 - p1, p1 - wz, wz});
        if (auto c = s.probe(ternary, *inner, "lemma3-ternary")) return c;
      } catch (Error&) {
      }
    }
  }
  return std::nullopt;
}

/// Double-mistake only: a single action whose payoff is linear in the held belief exposes any
/// failure of phi to be affine along a chord.
Candidate affine_defect(Search& s, const Belief& x, const Belief& xp) {
  const auto& mu = s.prior();
  const auto& d = s.rule();
  if (distance_inf(x, xp) <= 1e-9) return std::nullopt;
  try {
    const Belief y = mix(x, xp, 0.5);
    const Belief fy = d.evaluate(mu, y), fx = d.evaluate(mu, x), fxp = d.evaluate(mu, xp);
    std::vector<double> alpha(mu.size());
    double mean = 0.0;
    for (std::size_t i = 0; i < alpha.size(); ++i) mean += alpha[i] = fy[i] - 0.5 * (fx[i] + fxp[i]);
    mean /= static_cast<double>(alpha.size());
    double top = 0.0;
    for (double& a : alpha) top = std::max(top, std::abs(a -= mean));
    if (top <= 1e-7) return std::nullopt;
    for (double& a : alpha) a /= top;
    double q = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < y.size(); ++i)
      if (y[i] > 0.0) q = std::min(q, mu[i] / y[i]);
    q = std::min(0.5 * q, 0.5);
    std::vector<double> c(mu.size());
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = (mu[i] - q * y[i]) / (1.0 - q);
    const Belief rest = clamp_belief(std::move(c));
    const PosteriorDistribution dagger({x, xp, rest}, {0.5 * q, 0.5 * q, 1.0 - q});
    const PosteriorDistribution merged({y, rest}, {q, 1.0 - q});
    s.spend();
    return s.try_problem(dagger, merged, DecisionProblem({alpha}, {"act"}), "affine-defect");
  } catch (Error&) {
    return std::nullopt;
  }
}

struct RandomTrial {
  Experiment pi;
  Experiment pi_prime;
  DecisionProblem problem;
};

RandomTrial random_trial(std::uint64_t seed, std::uint64_t index, const Belief& mu) {
  Rng rng = Rng::stream(seed, index);
  const std::size_t n = mu.size();
  const std::size_t signals = 2 + rng.index(n + 1);
  Matrix like(n);
  for (auto& row : like) {
    row = rng.simplex(signals);
    if (rng.uniform01() < 0.3) {
      const std::size_t k = rng.index(signals);
      if (row[k] < 1.0) {
        row[k] = 0.0;
        double total = 0.0;
        for (double v : row) total += v;
        for (double& v : row) v /= total;
      }
    }
  }
  std::vector<bool> used(signals, false);
  for (const auto& row : like)
    for (std::size_t s = 0; s < signals; ++s) used[s] = used[s] || row[s] > 0.0;
  Matrix kept(n);
  for (std::size_t t = 0; t < n; ++t)
    for (std::size_t s = 0; s < signals; ++s)
      if (used[s]) kept[t].push_back(like[t][s]);
  const std::size_t live = kept.front().size();
  const std::size_t outputs = 1 + rng.index(live);
  Matrix g(live);
  for (auto& row : g) {
    if (rng.uniform01() < 0.3) {
      row.assign(outputs, 0.0);
      row[rng.index(outputs)] = 1.0;
    } else {
      row = rng.simplex(outputs);
    }
  }
  Experiment pi(std::move(kept));
  Experiment pi_prime = garble(pi, GarblingMatrix(std::move(g)));

  const Belief anchor = rng.interior_belief(n);
  std::vector<double> alpha(n);
  double mean = 0.0;
  for (double& a : alpha) mean += a = rng.uniform(-1.0, 1.0);
  mean /= static_cast<double>(n);
  double top = 0.0;
  for (double& a : alpha) top = std::max(top, std::abs(a -= mean));
  if (top <= 1e-12) alpha[0] = 1.0, alpha[1] = -1.0, top = 1.0;
  for (double& a : alpha) a /= top;
  const double offset = dot(alpha, anchor.coords());
  return {std::move(pi), std::move(pi_prime), hyperplane_problem(Hyperplane(alpha, offset))};
}

Candidate random_search(Search& s) {
  const auto& opt = s.options();
  const unsigned threads = opt.threads ? opt.threads : audit_threads();
  const std::size_t batch = 256;
  for (std::uint64_t start = 0;; start += batch) {
    const std::size_t room = s.budget() - std::min(s.budget(), s.used());
    if (room == 0) return std::nullopt;
    const std::size_t count = std::min<std::size_t>(batch, room);
    std::vector<double> gaps(count, std::numeric_limits<double>::quiet_NaN());
    parallel_for(count, threads, [&](std::size_t i) {
      try {
        const auto t = random_trial(opt.seed, start + i, s.prior());
        const auto& d = s.rule();
        gaps[i] = expected_payoff(t.problem, d, s.prior(), opt.selector, opt.mode, bayes(s.prior(), t.pi)) -
                  expected_payoff(t.problem, d, s.prior(), opt.selector, opt.mode, bayes(s.prior(), t.pi_prime));
      } catch (Error&) {
      }
    });
    for (std::size_t i = 0; i < count; ++i) {
      s.spend();
      if (!(gaps[i] <= -kCertificateTolerance)) continue;
      auto t = random_trial(opt.seed, start + i, s.prior());
      try {
        if (auto c = s.finalize(std::move(t.pi), std::move(t.pi_prime), t.problem, "random-search")) return c;
      } catch (Error&) {
      }
    }
  }
}

void require_kind(const Distortion& d, const Belief& mu, const Belief& x0, ErrorKind kind, const AuditOptions& o) {
  if (d.states() != mu.size() || x0.size() != mu.size())
    throw Error(ErrorCode::DimensionMismatch, "rule, prior and point disagree on state count");
  if (!mu.interior()) throw Error(ErrorCode::PriorNotInterior, "prior must be interior");
  if (classify_error(d, mu, x0, o.tol).kind != kind)
    throw Error(ErrorCode::PreconditionViolated, "point does not carry a " + to_string(kind) + " error");
}

template <class F>
ViolationCertificate run_single(const Distortion& d, const Belief& mu, std::size_t budget, const AuditOptions& o,
                                F&& recipes) {
  Search s(d, mu, o, budget);
  Candidate c;
  try {
    c = recipes(s);
  } catch (BudgetSpent&) {
  }
  if (!c) throw Error(ErrorCode::BudgetExhausted, "no construction produced a certificate");
  return *c;
}

struct ErrorPoint {
  Belief x;
  ErrorClass cls;
  double size;
};

/// Keeps a bounded, evenly thinned subsequence of the points offered.
class Thinned {
 public:
  void offer(const ErrorPoint& p) {
    if (seen_++ % stride_ != 0) return;
    kept_.push_back(p);
    if (kept_.size() >= 2048) {
      std::vector<ErrorPoint> half;
      for (std::size_t i = 0; i < kept_.size(); i += 2) half.push_back(kept_[i]);
      kept_ = std::move(half);
      stride_ *= 2;
    }
  }
  const std::vector<ErrorPoint>& points() const { return kept_; }

 private:
  std::vector<ErrorPoint> kept_;
  std::size_t seen_ = 0, stride_ = 1;
};

void take_strided(const std::vector<ErrorPoint>& from, std::size_t count, std::vector<ErrorPoint>& into) {
  if (from.empty() || count == 0) return;
  count = std::min(count, from.size());
  for (std::size_t k = 0; k < count; ++k) into.push_back(from[(2 * k + 1) * from.size() / (2 * count)]);
}

}  // namespace

ViolationCertificate audit_expansive(const Distortion& d, const Belief& mu, const Belief& x0, std::size_t budget,
                                     const AuditOptions& options) {
  require_kind(d, mu, x0, ErrorKind::Expansive, options);
  return run_single(d, mu, budget, options, [&](Search& s) { return expansive_recipes(s, x0); });
}

ViolationCertificate audit_contractive(const Distortion& d, const Belief& mu, const Belief& x0, std::size_t budget,
                                       const AuditOptions& options) {
  require_kind(d, mu, x0, ErrorKind::Contractive, options);
  const double lambda = classify_error(d, mu, x0, options.tol).witness_lambda.value_or(0.0);
  return run_single(d, mu, budget, options, [&](Search& s) { return contractive_recipes(s, x0, lambda); });
}

AuditReport audit(const Distortion& d, const Belief& mu, const AuditOptions& options) {
  const std::size_t n = mu.size();
  if (d.states() != n) throw Error(ErrorCode::DimensionMismatch, "rule and prior disagree on state count");
  if (!mu.interior()) throw Error(ErrorCode::PriorNotInterior, "prior must be interior");
  if (options.grid_size < 1) throw Error(ErrorCode::InvalidArgument, "grid must have at least one step");

  AuditReport report;
  Thinned interior[2], boundary[2];
  std::optional<ErrorPoint> largest[2];
  for_each_lattice_point(n, options.grid_size, [&](const Belief& x) {
    ++report.census.points;
    ErrorClass cls;
    try {
      cls = classify_error(d, mu, x, options.tol);
    } catch (Error&) {
      ++report.census.none;
      return;
    }
    if (cls.kind == ErrorKind::None) {
      ++report.census.none;
      return;
    }
    const int k = cls.kind == ErrorKind::Expansive ? 0 : 1;
    ++(k == 0 ? report.census.expansive : report.census.contractive);
    ErrorPoint p{x, cls, distance_inf(d.evaluate(mu, x), x)};
    (x.interior() ? interior[k] : boundary[k]).offer(p);
    if (x.interior() && (!largest[k] || p.size > largest[k]->size)) largest[k] = p;
  });

  if (n == 2)
    report.coarse = is_occasionally_coarse(d, mu, 1000, options.tol);
  else
    report.stubborn = is_occasionally_stubborn(d, mu, 64, options.tol);
  report.trivial_on_interior = is_trivial_on_interior(d, mu, 64, options.tol);
  report.affine = is_affine(d, mu);

  std::vector<ErrorPoint> reps;
  for (int k = 0; k < 2; ++k)
    if (largest[k]) reps.push_back(*largest[k]);
  for (int k = 0; k < 2; ++k) take_strided(interior[k].points(), 6, reps);
  for (int k = 0; k < 2; ++k) take_strided(boundary[k].points(), 2, reps);

  Search s(d, mu, options, options.budget);
  auto run = [&]() -> Candidate {
    const bool twice = options.mode == WelfareMode::DoubleMistake;
    std::vector<Belief> anchors{mu};
    for (std::size_t i = 0; i < n; ++i) anchors.push_back(Belief::vertex(n, i));
    for (const auto& r : reps) anchors.push_back(r.x);
    if (twice)
      for (std::size_t a = 0; a < anchors.size(); ++a)
        for (std::size_t b = a + 1; b < anchors.size(); ++b)
          if (auto c = affine_defect(s, anchors[a], anchors[b])) return c;

    if (!reps.empty()) {
      const std::size_t share = std::max<std::size_t>(40, options.budget * 6 / (10 * reps.size()));
      for (const auto& r : reps) {
        auto c = s.with_share(share, [&] {
          return r.cls.kind == ErrorKind::Expansive ? expansive_recipes(s, r.x)
                                                    : contractive_recipes(s, r.x, r.cls.witness_lambda.value_or(0.0));
        });
        if (c) return c;
      }
    }

    const Belief at_prior = d.evaluate(mu, mu);
    if (distance_inf(at_prior, mu) > options.tol)
      for (std::size_t i = 0; i < n; ++i)
        if (auto c = chord(s, mu, Belief::vertex(n, i), 0.5, "prior-image")) return c;

    for (std::size_t i = 0; i < n; ++i) {
      const Belief e = Belief::vertex(n, i);
      if (distance_inf(d.evaluate(mu, e), e) <= options.tol) continue;
      std::vector<Belief> partners{mu};
      for (std::size_t j = 0; j < n; ++j)
        if (j != i) partners.push_back(Belief::vertex(n, j));
      std::vector<std::size_t> rest;
      for (std::size_t j = 0; j < n; ++j)
        if (j != i) rest.push_back(j);
      partners.push_back(Face(rest).centroid(n));
      for (double gamma : {0.5, 0.25, 0.75})
        for (const auto& w : partners)
          if (auto c = chord(s, e, w, gamma, "vertex-segment")) return c;
    }

    for (const auto& r : reps)
      for (const auto& w : anchors)
        if (auto c = chord(s, r.x, w, 0.5, "chord-split")) return c;

    return random_search(s);
  };
  try {
    report.certificate = run();
  } catch (BudgetSpent&) {
  }
  report.budget_used = s.used();
  return report;
}

Verification verify_certificate(const ViolationCertificate& c, double tol) {
  Verification v;
  try {
    const std::size_t n = c.prior.size();
    if (c.pi.states() != n || c.pi_prime.states() != n || c.problem.states() != n || c.rule.states() != n ||
        c.held_pi.size() != c.pi.signals() || c.held_pi_prime.size() != c.pi_prime.signals() || !c.prior.interior()) {
      v.reason = "malformed";
      return v;
    }
    if (!blackwell_dominates(c.pi, c.pi_prime, 1e-8)) {
      v.reason = "dominance";
      return v;
    }
    auto held_ok = [&](const Experiment& e, const std::vector<Belief>& held) {
      const auto post = signal_posteriors(c.prior, e);
      for (std::size_t s = 0; s < post.size(); ++s) {
        if (!post[s]) continue;
        if (held[s].size() != n || !approx_equal(c.rule.evaluate(c.prior, *post[s]), held[s], 1e-9)) return false;
      }
      return true;
    };
    if (!held_ok(c.pi, c.held_pi) || !held_ok(c.pi_prime, c.held_pi_prime)) {
      v.reason = "image-mismatch";
      return v;
    }
    v.recomputed_gap = value_of(c, c.pi) - value_of(c, c.pi_prime);
    if (std::abs(v.recomputed_gap - c.gap) > 1e-9) {
      v.reason = "gap-mismatch";
      return v;
    }
    if (!(v.recomputed_gap <= -tol)) {
      v.reason = "non-negative-gap";
      return v;
    }
    v.valid = true;
    v.reason = "ok";
  } catch (Error&) {
    v.valid = false;
    v.reason = "malformed";
  }
  return v;
}

}  // namespace blackwell
