#ifndef BLACKWELL_SAMPLING_HPP
#define BLACKWELL_SAMPLING_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "blackwell/belief.hpp"

namespace blackwell {

/// Seeded generator with platform-independent draws (the standard distributions
/// are not portable across library implementations).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  /// Independent stream derived from (seed, stream) by a splitmix64 hash.
  static Rng stream(std::uint64_t seed, std::uint64_t stream);

  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }
  /// Uniform integer in [0, bound).
  std::size_t index(std::size_t bound);
  /// Uniform point on the (n-1)-simplex.
  std::vector<double> simplex(std::size_t n);
  /// Uniform belief pushed into the interior: every coordinate >= floor.
  Belief interior_belief(std::size_t n, double floor = 1e-3);

 private:
  std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);

/// Number of points of the lattice {k/g : k in N^n, sum k = g}.
std::size_t lattice_size(std::size_t n, std::size_t g);
/// Visits every lattice point in lexicographic order of its integer counts.
void for_each_lattice_point(std::size_t n, std::size_t g, const std::function<void(const Belief&)>& visit);

/// Deterministic low-discrepancy points in the relative interior of a face,
/// seeded by the face's support so every face has its own sequence.
std::vector<Belief> face_samples(const Face& face, std::size_t n, std::size_t count);

}  // namespace blackwell

#endif  // BLACKWELL_SAMPLING_HPP
