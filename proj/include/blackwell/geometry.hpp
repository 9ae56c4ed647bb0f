#ifndef BLACKWELL_GEOMETRY_HPP
#define BLACKWELL_GEOMETRY_HPP

#include <optional>
#include <vector>

#include "blackwell/belief.hpp"

namespace blackwell {

struct SegmentTest {
  bool on = false;
  /// Least-squares parameter of z against lambda * x + (1 - lambda) * y, clamped to [0,1].
  double lambda = 0.0;
  double residual = 0.0;

  explicit operator bool() const { return on; }
};

SegmentTest on_segment(const Belief& x, const Belief& y, const Belief& z, double tol = kGeometryTolerance);

/// Duplicates (within tol) count as dependent.
bool affinely_independent(const std::vector<Belief>& points, double tol = kGeometryTolerance);

/// Smallest t such that some convex combination of the hull points is within t of p in the sup norm.
double hull_distance(const Belief& p, const std::vector<Belief>& hull_points);
bool in_convex_hull(const Belief& p, const std::vector<Belief>& hull_points, double tol = kGeometryTolerance);

struct Separation {
  Hyperplane plane;
  /// Half-gap between the two sets along the normal, with ||normal||_inf = 1.
  double margin;
};

/// Strictly separates the positive set from the negative set: normal . p >= offset + margin on
/// positives and normal . q <= offset - margin on negatives. The normal is taken orthogonal to
/// (1,...,1) so it acts only within the simplex. Returns nothing when the best margin is <= min_margin.
std::optional<Separation> separate(const std::vector<Belief>& positive, const std::vector<Belief>& negative,
                                   double min_margin = kGeometryTolerance);

/// Throws NoStrictSeparation when p is in the hull up to margin.
Hyperplane separating_hyperplane(const Belief& p, const std::vector<Belief>& hull_points,
                                 double margin = kGeometryTolerance);

/// Removes points within tol of an earlier point, keeping first occurrences.
std::vector<Belief> deduplicate(const std::vector<Belief>& points, double tol = kGeometryTolerance);

}  // namespace blackwell

#endif  // BLACKWELL_GEOMETRY_HPP
