#ifndef BLACKWELL_BELIEF_HPP
#define BLACKWELL_BELIEF_HPP

#include <cstddef>
#include <span>
#include <vector>

namespace blackwell {

inline constexpr double kSumTolerance = 1e-12;
inline constexpr double kGeometryTolerance = 1e-9;
inline constexpr double kCertificateTolerance = 1e-6;

/// A point of the probability simplex over n states, stored in full n-coordinate form.
class Belief {
 public:
  /// Coordinates must sum to 1 within kSumTolerance. Slightly negative entries
  /// (down to -kSumTolerance) are clamped to 0 and the vector renormalized.
  explicit Belief(std::vector<double> coords);

  /// Normalizes a nonnegative weight vector with positive mass.
  static Belief normalized(std::vector<double> weights);
  static Belief vertex(std::size_t n, std::size_t i);
  static Belief uniform(std::size_t n);
  /// Two-state belief (x, 1 - x).
  static Belief binary(double x);

  std::size_t size() const noexcept { return coords_.size(); }
  double operator[](std::size_t i) const { return coords_[i]; }
  const std::vector<double>& coords() const noexcept { return coords_; }
  /// First coordinate; the scalar used for two-state problems.
  double scalar() const { return coords_[0]; }
  bool interior() const noexcept;

  friend bool operator==(const Belief&, const Belief&) = default;

 private:
  std::vector<double> coords_;
};

/// lambda * x + (1 - lambda) * y
Belief mix(const Belief& x, const Belief& y, double lambda);
double dot(std::span<const double> a, std::span<const double> b);
double distance_inf(const Belief& a, const Belief& b);
bool approx_equal(const Belief& a, const Belief& b, double tol);

/// A face of the simplex, identified by its sorted support.
class Face {
 public:
  explicit Face(std::vector<std::size_t> support);

  /// Face whose relative interior contains x: the coordinates above kSumTolerance.
  static Face of(const Belief& x);

  const std::vector<std::size_t>& support() const noexcept { return support_; }
  std::size_t dim() const noexcept { return support_.size() - 1; }
  bool contains(std::size_t state) const;
  bool contains(const Face& other) const;
  /// Centroid of the face's vertices in an n-state simplex.
  Belief centroid(std::size_t n) const;

  friend bool operator==(const Face&, const Face&) = default;
  friend auto operator<=>(const Face&, const Face&) = default;

 private:
  std::vector<std::size_t> support_;
};

/// Every face of the (n-1)-simplex with at least min_size vertices, ordered by
/// size and then lexicographically.
std::vector<Face> all_faces(std::size_t n, std::size_t min_size = 1);

/// H = {x : normal . x = offset}; the positive side is normal . x > offset.
struct Hyperplane {
  std::vector<double> normal;
  double offset = 0.0;

  Hyperplane(std::vector<double> normal, double offset);
  double evaluate(const Belief& x) const { return dot(normal, x.coords()) - offset; }
};

}  // namespace blackwell

#endif  // BLACKWELL_BELIEF_HPP
