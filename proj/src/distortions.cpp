#include "blackwell/distortions.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

#include "blackwell/errors.hpp"
#include "blackwell/geometry.hpp"
#include "blackwell/sampling.hpp"

namespace blackwell {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require_prior(const Distortion& d, const Belief& mu) {
  if (mu.size() != d.states()) throw Error(ErrorCode::DimensionMismatch, "prior and rule disagree on state count");
  if (!mu.interior()) throw Error(ErrorCode::PriorNotInterior, "prior must be interior");
}

Belief evaluate_stubborn(const StubbornSpec& s, const Belief& x) {
  const Face f = Face::of(x);
  if (f.dim() == 0) {
    auto it = s.vertex_images.find(f.support()[0]);
    return it == s.vertex_images.end() ? x : it->second;
  }
  if (!s.x_star) return x;
  if (s.edge_case && s.edge_case->edge == f) {
    const std::size_t v = s.edge_case->special_vertex;
    return x[v] > (*s.x_star)[v] ? *s.x_star : x;
  }
  for (const Face& c : s.correct_faces)
    if (c.contains(f)) return x;
  return *s.x_star;
}

void validate_stubborn(std::size_t n, const StubbornSpec& s) {
  auto fail = [](const std::string& why) { throw Error(ErrorCode::InvalidArgument, "stubborn rule: " + why); };
  for (const Face& c : s.correct_faces)
    if (c.support().back() >= n) fail("correct face outside the simplex");
  for (const auto& [i, img] : s.vertex_images) {
    if (i >= n || img.size() != n) fail("vertex image outside the simplex");
  }
  if (s.x_star && s.x_star->size() != n) fail("x* has the wrong size");
  if (!s.x_star) {
    if (!s.correct_faces.empty() || s.edge_case) fail("faces and edge cases need an x*");
    for (const auto& [i, img] : s.vertex_images)
      if (distance_inf(img, Belief::vertex(n, i)) > kGeometryTolerance) fail("vertex errors need an x*");
    return;
  }
  const Belief& xs = *s.x_star;
  for (const auto& [i, img] : s.vertex_images) {
    const Belief e = Belief::vertex(n, i);
    if (!on_segment(xs, e, img).on) fail("vertex image must lie between x* and its vertex");
    if (distance_inf(img, e) > kGeometryTolerance)
      for (const Face& c : s.correct_faces)
        if (c.contains(i)) fail("a vertex of a correct face must map to itself");
  }
  if (s.edge_case) {
    const EdgeCase& ec = *s.edge_case;
    if (ec.edge.support().size() != 2 || ec.edge.support().back() >= n) fail("edge case must name an edge");
    if (!ec.edge.contains(ec.special_vertex)) fail("special vertex must belong to the edge");
    if (!(Face::of(xs) == ec.edge)) fail("edge case requires x* in the relative interior of that edge");
    for (const Face& c : s.correct_faces)
      if (c.contains(ec.edge)) fail("edge case edge lies inside a correct face");
    // The correct half of the edge includes the opposite vertex.
    std::size_t other = ec.edge.support()[0] == ec.special_vertex ? ec.edge.support()[1] : ec.edge.support()[0];
    auto it = s.vertex_images.find(other);
    if (it != s.vertex_images.end() && distance_inf(it->second, Belief::vertex(n, other)) > kGeometryTolerance)
      fail("the correct half of the special edge must include its vertex");
  }
}

bool parse_double(std::string_view s, double& out) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

}  // namespace

std::string to_string(Family f) {
  switch (f) {
    case Family::Bayes: return "bayes";
    case Family::Trivial: return "trivial";
    case Family::OccasionallyCoarse: return "occ-coarse";
    case Family::OccasionallyStubborn: return "occ-stubborn";
    case Family::Grether: return "grether";
    case Family::Shrinkage: return "shrinkage";
    case Family::Tabulated: return "tabulated";
  }
  return "unknown";
}

std::string to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::None: return "none";
    case ErrorKind::Expansive: return "expansive";
    case ErrorKind::Contractive: return "contractive";
  }
  return "unknown";
}

TabulatedRule::TabulatedRule(std::vector<Belief> nodes, std::vector<Belief> images)
    : nodes_(std::move(nodes)), images_(std::move(images)), step_(1.0) {
  if (nodes_.empty()) throw Error(ErrorCode::EmptyInput, "table needs at least one node");
  if (nodes_.size() != images_.size()) throw Error(ErrorCode::DimensionMismatch, "one image per node");
  const std::size_t n = nodes_.front().size();
  for (std::size_t k = 0; k < nodes_.size(); ++k)
    if (nodes_[k].size() != n || images_[k].size() != n) throw Error(ErrorCode::DimensionMismatch, "table rows differ in size");
  for (const Belief& b : nodes_)
    for (double c : b.coords())
      if (c > 1e-12) step_ = std::min(step_, c);
  for (std::size_t k = 0; k < nodes_.size(); ++k) index_.emplace(key(nodes_[k]), k);
}

std::string TabulatedRule::key(const Belief& x) const {
  std::string k;
  for (double c : x.coords()) {
    k += std::to_string(std::llround(c / step_));
    k += ',';
  }
  return k;
}

const Belief& TabulatedRule::lookup(const Belief& x) const {
  if (x.size() != states()) throw Error(ErrorCode::DimensionMismatch, "belief and table disagree on state count");
  const double radius = 0.5 * step_ + 1e-12;
  auto it = index_.find(key(x));
  if (it != index_.end() && distance_inf(nodes_[it->second], x) <= radius) return images_[it->second];
  std::size_t best = 0;
  double best_d = 1e300;
  for (std::size_t k = 0; k < nodes_.size(); ++k) {
    double d = distance_inf(nodes_[k], x);
    if (d < best_d) {
      best_d = d;
      best = k;
    }
  }
  if (best_d > radius) throw Error(ErrorCode::GridMiss, "belief is farther than half a lattice step from every node");
  return images_[best];
}

TabulatedRule TabulatedRule::from_csv(std::istream& in, std::size_t n) {
  std::vector<Belief> nodes, images;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    std::vector<double> vals;
    std::stringstream ss(line);
    std::string cell;
    bool numeric = true;
    while (std::getline(ss, cell, ',')) {
      double v = 0.0;
      if (!parse_double(cell, v)) {
        numeric = false;
        break;
      }
      vals.push_back(v);
    }
    if (!numeric) {
      if (line_no == 1) continue;
      throw Error(ErrorCode::ParseError, "non-numeric table row " + std::to_string(line_no));
    }
    if (vals.size() != 2 * n)
      throw Error(ErrorCode::ParseError, "table row " + std::to_string(line_no) + " needs " + std::to_string(2 * n) + " values");
    nodes.push_back(Belief::normalized({vals.begin(), vals.begin() + static_cast<std::ptrdiff_t>(n)}));
    images.push_back(Belief::normalized({vals.begin() + static_cast<std::ptrdiff_t>(n), vals.end()}));
  }
  return TabulatedRule(std::move(nodes), std::move(images));
}

Distortion Distortion::bayes(std::size_t n) {
  if (n < 2) throw Error(ErrorCode::InvalidArgument, "need at least two states");
  return Distortion(n, BayesRule{});
}

Distortion Distortion::trivial(Belief x_star) {
  if (x_star.size() < 2) throw Error(ErrorCode::InvalidArgument, "need at least two states");
  const std::size_t n = x_star.size();
  return Distortion(n, TrivialRule{std::move(x_star)});
}

Distortion Distortion::occasionally_coarse(double a, double b, double u, double v) {
  if (!(0.0 <= a && a <= b && b <= 1.0 && 0.0 <= u && u <= a && b <= v && v <= 1.0))
    throw Error(ErrorCode::InvalidArgument, "occasionally coarse needs 0 <= u <= a <= b <= v <= 1");
  return Distortion(2, CoarseRule{a, b, u, v});
}

Distortion Distortion::occasionally_stubborn(std::size_t n, StubbornSpec spec) {
  if (n < 3) throw Error(ErrorCode::WrongDimension, "occasionally stubborn rules need n >= 3");
  validate_stubborn(n, spec);
  return Distortion(n, StubbornRule{std::move(spec), true});
}

Distortion Distortion::stubborn_form(std::size_t n, StubbornSpec spec) {
  if (n < 3) throw Error(ErrorCode::WrongDimension, "stubborn-form rules need n >= 3");
  for (const auto& [i, img] : spec.vertex_images)
    if (i >= n || img.size() != n) throw Error(ErrorCode::InvalidArgument, "vertex image outside the simplex");
  if (spec.x_star && spec.x_star->size() != n) throw Error(ErrorCode::InvalidArgument, "x* has the wrong size");
  return Distortion(n, StubbornRule{std::move(spec), false});
}

Distortion Distortion::grether(std::size_t n, double alpha, double beta) {
  if (n < 2) throw Error(ErrorCode::InvalidArgument, "need at least two states");
  if (!(alpha > 0.0 && beta > 0.0) || !std::isfinite(alpha) || !std::isfinite(beta))
    throw Error(ErrorCode::InvalidArgument, "Grether weights must be positive");
  return Distortion(n, GretherRule{alpha, beta});
}

Distortion Distortion::shrinkage(std::size_t n, double lambda) {
  if (n < 2) throw Error(ErrorCode::InvalidArgument, "need at least two states");
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw Error(ErrorCode::InvalidArgument, "shrinkage weight must lie in [0,1]");
  return Distortion(n, ShrinkageRule{lambda});
}

Distortion Distortion::tabulated(TabulatedRule table) {
  const std::size_t n = table.states();
  return Distortion(n, std::make_shared<const TabulatedRule>(std::move(table)));
}

Distortion Distortion::tabulate(const Distortion& d, const Belief& mu, std::size_t grid) {
  std::vector<Belief> nodes, images;
  for_each_lattice_point(d.states(), grid, [&](const Belief& x) {
    nodes.push_back(x);
    images.push_back(d.evaluate(mu, x));
  });
  return tabulated(TabulatedRule(std::move(nodes), std::move(images)));
}

Family Distortion::family() const {
  return std::visit(overloaded{
                        [](const BayesRule&) { return Family::Bayes; },
                        [](const TrivialRule&) { return Family::Trivial; },
                        [](const CoarseRule&) { return Family::OccasionallyCoarse; },
                        [](const StubbornRule&) { return Family::OccasionallyStubborn; },
                        [](const GretherRule&) { return Family::Grether; },
                        [](const ShrinkageRule&) { return Family::Shrinkage; },
                        [](const std::shared_ptr<const TabulatedRule>&) { return Family::Tabulated; },
                    },
                    rule_);
}

Belief Distortion::evaluate(const Belief& mu, const Belief& x) const {
  require_prior(*this, mu);
  if (x.size() != n_) throw Error(ErrorCode::DimensionMismatch, "belief and rule disagree on state count");
  return std::visit(overloaded{
                        [&](const BayesRule&) { return x; },
                        [&](const TrivialRule& r) { return r.x_star; },
                        [&](const CoarseRule& r) {
                          const double s = x.scalar();
                          double img = s;
                          if (s <= 0.0) img = r.u;
                          else if (s >= 1.0) img = r.v;
                          else if (s < r.a) img = r.a;
                          else if (s > r.b) img = r.b;
                          else return x;
                          return Belief::binary(img);
                        },
                        [&](const StubbornRule& r) { return evaluate_stubborn(r.spec, x); },
                        [&](const GretherRule& r) {
                          std::vector<double> w(n_, 0.0);
                          for (std::size_t i = 0; i < n_; ++i)
                            if (x[i] > 0.0) w[i] = std::pow(x[i] / mu[i], r.alpha) * std::pow(mu[i], r.beta);
                          return Belief::normalized(std::move(w));
                        },
                        [&](const ShrinkageRule& r) {
                          if (r.lambda == 1.0) return x;
                          return mix(x, mu, r.lambda);
                        },
                        [&](const std::shared_ptr<const TabulatedRule>& t) { return t->lookup(x); },
                    },
                    rule_);
}

Belief evaluate(const Distortion& d, const Belief& mu, const Belief& x) { return d.evaluate(mu, x); }

PosteriorDistribution pushforward(const Distortion& d, const Belief& mu, const PosteriorDistribution& rho_b) {
  std::vector<Belief> images;
  images.reserve(rho_b.size());
  for (const Belief& x : rho_b.support()) images.push_back(d.evaluate(mu, x));
  return PosteriorDistribution(std::move(images), rho_b.probs());
}

ErrorClass classify_error(const Distortion& d, const Belief& mu, const Belief& x, double tol) {
  const Belief img = d.evaluate(mu, x);
  ErrorClass c;
  if (distance_inf(img, x) <= tol) return c;
  SegmentTest s = on_segment(x, mu, img, tol);
  if (s.on) {
    c.kind = ErrorKind::Contractive;
    c.witness_lambda = s.lambda;
  } else {
    c.kind = ErrorKind::Expansive;
  }
  return c;
}

}  // namespace blackwell
