#include "blackwell/geometry.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

#include "blackwell/errors.hpp"
#include "blackwell/lp.hpp"

namespace blackwell {

namespace {

void require_same_size(const Belief& ref, const std::vector<Belief>& pts) {
  for (const Belief& b : pts)
    if (b.size() != ref.size()) throw Error(ErrorCode::DimensionMismatch, "beliefs of different sizes");
}

}  // namespace

SegmentTest on_segment(const Belief& x, const Belief& y, const Belief& z, double tol) {
  const std::size_t n = x.size();
  if (y.size() != n || z.size() != n) throw Error(ErrorCode::DimensionMismatch, "on_segment on mixed sizes");
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    num += (z[i] - y[i]) * (x[i] - y[i]);
    den += (x[i] - y[i]) * (x[i] - y[i]);
  }
  SegmentTest r;
  r.lambda = den > 0.0 ? std::clamp(num / den, 0.0, 1.0) : 1.0;
  for (std::size_t i = 0; i < n; ++i)
    r.residual = std::max(r.residual, std::abs(r.lambda * x[i] + (1.0 - r.lambda) * y[i] - z[i]));
  r.on = r.residual <= tol;
  return r;
}

std::vector<Belief> deduplicate(const std::vector<Belief>& points, double tol) {
  std::vector<Belief> out;
  for (const Belief& p : points)
    if (std::none_of(out.begin(), out.end(), [&](const Belief& q) { return distance_inf(p, q) <= tol; }))
      out.push_back(p);
  return out;
}

bool affinely_independent(const std::vector<Belief>& points, double tol) {
  if (points.empty()) throw Error(ErrorCode::EmptyInput, "affinely_independent needs at least one point");
  require_same_size(points.front(), points);
  const std::size_t n = points.front().size();
  const std::size_t k = points.size();
  if (k == 1) return true;
  if (k > n) return false;
  Eigen::MatrixXd d(n, k - 1);
  for (std::size_t j = 1; j < k; ++j)
    for (std::size_t i = 0; i < n; ++i) d(i, j - 1) = points[j][i] - points[0][i];
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(d);
  const auto& s = svd.singularValues();
  return s.size() == static_cast<Eigen::Index>(k - 1) && s(s.size() - 1) > tol;
}

double hull_distance(const Belief& p, const std::vector<Belief>& hull_points) {
  if (hull_points.empty()) throw Error(ErrorCode::EmptyInput, "hull needs at least one point");
  require_same_size(p, hull_points);
  const std::vector<Belief> hull = deduplicate(hull_points, 0.0);
  const std::size_t n = p.size();
  lp::Program prog;
  std::vector<std::size_t> w;
  for (std::size_t j = 0; j < hull.size(); ++j) w.push_back(prog.add_variable(0.0));
  const std::size_t t = prog.add_variable(1.0);
  std::vector<lp::Term> sum;
  for (std::size_t j : w) sum.push_back({j, 1.0});
  prog.add_constraint(sum, lp::Relation::Equal, 1.0);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<lp::Term> upper, lower;
    for (std::size_t j = 0; j < hull.size(); ++j) {
      upper.push_back({w[j], hull[j][i]});
      lower.push_back({w[j], hull[j][i]});
    }
    upper.push_back({t, -1.0});
    lower.push_back({t, 1.0});
    prog.add_constraint(std::move(upper), lp::Relation::LessEqual, p[i]);
    prog.add_constraint(std::move(lower), lp::Relation::GreaterEqual, p[i]);
  }
  lp::Solution sol = prog.minimize();
  if (!sol.optimal()) throw Error(ErrorCode::PreconditionViolated, "hull distance program did not solve");
  return std::max(0.0, sol.objective);
}

bool in_convex_hull(const Belief& p, const std::vector<Belief>& hull_points, double tol) {
  return hull_distance(p, hull_points) <= tol;
}

std::optional<Separation> separate(const std::vector<Belief>& positive, const std::vector<Belief>& negative,
                                   double min_margin) {
  if (positive.empty() || negative.empty()) throw Error(ErrorCode::EmptyInput, "separation needs two non-empty sets");
  const Belief& ref = positive.front();
  require_same_size(ref, positive);
  require_same_size(ref, negative);
  const std::size_t n = ref.size();
  const std::vector<Belief> pos = deduplicate(positive, 0.0);
  const std::vector<Belief> neg = deduplicate(negative, 0.0);

  // maximize delta s.t. a.p - b >= delta, a.q - b <= -delta, |a_i| <= 1, sum a = 0.
  lp::Program prog;
  std::vector<std::size_t> a(n);
  for (std::size_t i = 0; i < n; ++i) a[i] = prog.add_variable(0.0, true);
  const std::size_t b = prog.add_variable(0.0, true);
  const std::size_t delta = prog.add_variable(-1.0);
  for (const Belief& p : pos) {
    std::vector<lp::Term> row;
    for (std::size_t i = 0; i < n; ++i) row.push_back({a[i], p[i]});
    row.push_back({b, -1.0});
    row.push_back({delta, -1.0});
    prog.add_constraint(std::move(row), lp::Relation::GreaterEqual, 0.0);
  }
  for (const Belief& q : neg) {
    std::vector<lp::Term> row;
    for (std::size_t i = 0; i < n; ++i) row.push_back({a[i], q[i]});
    row.push_back({b, -1.0});
    row.push_back({delta, 1.0});
    prog.add_constraint(std::move(row), lp::Relation::LessEqual, 0.0);
  }
  std::vector<lp::Term> sum;
  for (std::size_t i = 0; i < n; ++i) {
    prog.add_constraint({{a[i], 1.0}}, lp::Relation::LessEqual, 1.0);
    prog.add_constraint({{a[i], 1.0}}, lp::Relation::GreaterEqual, -1.0);
    sum.push_back({a[i], 1.0});
  }
  prog.add_constraint(std::move(sum), lp::Relation::Equal, 0.0);
  prog.add_constraint({{delta, 1.0}}, lp::Relation::LessEqual, 2.0);

  lp::Solution sol = prog.minimize();
  if (!sol.optimal() || -sol.objective <= min_margin) return std::nullopt;

  std::vector<double> normal(n);
  double scale = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    normal[i] = sol.x[a[i]];
    scale = std::max(scale, std::abs(normal[i]));
  }
  if (scale <= 0.0) return std::nullopt;
  for (double& v : normal) v /= scale;
  // Recentre the offset between the two sets so the margin is split evenly.
  double lo = std::numeric_limits<double>::infinity(), hi = -std::numeric_limits<double>::infinity();
  for (const Belief& p : pos) lo = std::min(lo, dot(normal, p.coords()));
  for (const Belief& q : neg) hi = std::max(hi, dot(normal, q.coords()));
  const double margin = 0.5 * (lo - hi);
  if (margin <= min_margin) return std::nullopt;
  return Separation{Hyperplane(std::move(normal), 0.5 * (lo + hi)), margin};
}

Hyperplane separating_hyperplane(const Belief& p, const std::vector<Belief>& hull_points, double margin) {
  std::optional<Separation> s = separate({p}, hull_points, margin);
  if (!s) throw Error(ErrorCode::NoStrictSeparation, "point lies in the hull within tolerance");
  return s->plane;
}

}  // namespace blackwell
