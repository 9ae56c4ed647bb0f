#include "blackwell/belief.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "blackwell/errors.hpp"

namespace blackwell {

namespace {

std::string describe(const std::vector<double>& v) {
  std::ostringstream out;
  out << '(';
  for (std::size_t i = 0; i < v.size(); ++i) out << (i ? "," : "") << v[i];
  out << ')';
  return out.str();
}

}  // namespace

Belief::Belief(std::vector<double> coords) : coords_(std::move(coords)) {
  if (coords_.empty()) throw Error(ErrorCode::EmptyInput, "belief needs at least one coordinate");
  bool clamped = false;
  double sum = 0.0;
  for (double& c : coords_) {
    if (!std::isfinite(c)) throw Error(ErrorCode::InvalidArgument, "non-finite coordinate in " + describe(coords_));
    if (c < 0.0) {
      if (c < -kSumTolerance) throw Error(ErrorCode::InvalidArgument, "negative coordinate in " + describe(coords_));
      c = 0.0;
      clamped = true;
    }
    sum += c;
  }
  if (std::abs(sum - 1.0) > kSumTolerance)
    throw Error(ErrorCode::InvalidArgument, "coordinates of " + describe(coords_) + " do not sum to 1");
  if (clamped)
    for (double& c : coords_) c /= sum;
}

Belief Belief::normalized(std::vector<double> weights) {
  double sum = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw Error(ErrorCode::InvalidArgument, "weights must be finite and nonnegative");
    sum += w;
  }
  if (!(sum > 0.0)) throw Error(ErrorCode::InvalidArgument, "weights have no mass");
  for (double& w : weights) w /= sum;
  // Division can leave the sum a few ulps off; push the residual into the largest entry.
  double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  auto largest = std::max_element(weights.begin(), weights.end());
  *largest += 1.0 - total;
  return Belief(std::move(weights));
}

Belief Belief::vertex(std::size_t n, std::size_t i) {
  if (i >= n) throw Error(ErrorCode::InvalidArgument, "vertex index out of range");
  std::vector<double> c(n, 0.0);
  c[i] = 1.0;
  return Belief(std::move(c));
}

Belief Belief::uniform(std::size_t n) {
  if (n == 0) throw Error(ErrorCode::EmptyInput, "uniform belief needs n >= 1");
  return normalized(std::vector<double>(n, 1.0));
}

Belief Belief::binary(double x) {
  if (!(x >= -kSumTolerance && x <= 1.0 + kSumTolerance))
    throw Error(ErrorCode::InvalidArgument, "binary belief outside [0,1]");
  x = std::clamp(x, 0.0, 1.0);
  return Belief({x, 1.0 - x});
}

bool Belief::interior() const noexcept {
  return std::all_of(coords_.begin(), coords_.end(), [](double c) { return c > 0.0; });
}

Belief mix(const Belief& x, const Belief& y, double lambda) {
  if (x.size() != y.size()) throw Error(ErrorCode::DimensionMismatch, "mixing beliefs of different sizes");
  std::vector<double> c(x.size());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = std::max(0.0, lambda * x[i] + (1.0 - lambda) * y[i]);
  return Belief::normalized(std::move(c));
}

double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw Error(ErrorCode::DimensionMismatch, "dot product of vectors of different sizes");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double distance_inf(const Belief& a, const Belief& b) {
  if (a.size() != b.size()) throw Error(ErrorCode::DimensionMismatch, "distance between beliefs of different sizes");
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

bool approx_equal(const Belief& a, const Belief& b, double tol) { return distance_inf(a, b) <= tol; }

Face::Face(std::vector<std::size_t> support) : support_(std::move(support)) {
  if (support_.empty()) throw Error(ErrorCode::EmptyInput, "face needs a non-empty support");
  std::sort(support_.begin(), support_.end());
  support_.erase(std::unique(support_.begin(), support_.end()), support_.end());
}

Face Face::of(const Belief& x) {
  std::vector<std::size_t> s;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (x[i] > kSumTolerance) s.push_back(i);
  return Face(std::move(s));
}

bool Face::contains(std::size_t state) const {
  return std::binary_search(support_.begin(), support_.end(), state);
}

bool Face::contains(const Face& other) const {
  return std::includes(support_.begin(), support_.end(), other.support_.begin(), other.support_.end());
}

Belief Face::centroid(std::size_t n) const {
  std::vector<double> c(n, 0.0);
  for (std::size_t i : support_) {
    if (i >= n) throw Error(ErrorCode::InvalidArgument, "face vertex outside the simplex");
    c[i] = 1.0;
  }
  return Belief::normalized(std::move(c));
}

std::vector<Face> all_faces(std::size_t n, std::size_t min_size) {
  std::vector<Face> faces;
  for (std::size_t k = std::max<std::size_t>(min_size, 1); k <= n; ++k) {
    std::vector<bool> pick(n, false);
    std::fill(pick.begin(), pick.begin() + static_cast<std::ptrdiff_t>(k), true);
    do {
      std::vector<std::size_t> s;
      for (std::size_t i = 0; i < n; ++i)
        if (pick[i]) s.push_back(i);
      faces.emplace_back(std::move(s));
    } while (std::prev_permutation(pick.begin(), pick.end()));
  }
  return faces;
}

Hyperplane::Hyperplane(std::vector<double> n, double b) : normal(std::move(n)), offset(b) {
  if (normal.empty() || std::all_of(normal.begin(), normal.end(), [](double a) { return a == 0.0; }))
    throw Error(ErrorCode::InvalidArgument, "hyperplane normal must be non-zero");
  if (!std::isfinite(offset)) throw Error(ErrorCode::InvalidArgument, "hyperplane offset must be finite");
}

}  // namespace blackwell
