#include "blackwell/sampling.hpp"

#include <algorithm>
#include <cmath>

#include "blackwell/errors.hpp"

namespace blackwell {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Rng Rng::stream(std::uint64_t seed, std::uint64_t stream) {
  return Rng(splitmix64(splitmix64(seed) ^ (stream * 0xd1342543de82ef95ULL + 1)));
}

std::size_t Rng::index(std::size_t bound) {
  if (bound == 0) throw Error(ErrorCode::InvalidArgument, "empty index range");
  return static_cast<std::size_t>(uniform01() * static_cast<double>(bound)) % bound;
}

std::vector<double> Rng::simplex(std::size_t n) {
  std::vector<double> e(n);
  double sum = 0.0;
  for (double& v : e) {
    v = -std::log(1.0 - uniform01());
    sum += v;
  }
  for (double& v : e) v /= sum;
  return e;
}

Belief Rng::interior_belief(std::size_t n, double floor) {
  std::vector<double> e = simplex(n);
  const double shrink = 1.0 - floor * static_cast<double>(n);
  for (double& v : e) v = floor + shrink * v;
  return Belief::normalized(std::move(e));
}

std::size_t lattice_size(std::size_t n, std::size_t g) {
  // C(g + n - 1, n - 1)
  double r = 1.0;
  for (std::size_t i = 1; i < n; ++i) r = r * static_cast<double>(g + i) / static_cast<double>(i);
  return static_cast<std::size_t>(std::llround(r));
}

void for_each_lattice_point(std::size_t n, std::size_t g, const std::function<void(const Belief&)>& visit) {
  if (n == 0 || g == 0) throw Error(ErrorCode::InvalidArgument, "lattice needs n >= 1 and g >= 1");
  std::vector<std::size_t> k(n, 0);
  std::vector<double> c(n);
  const double step = 1.0 / static_cast<double>(g);
  // Counts in lexicographic order: k[0] from 0..g, the remainder distributed recursively.
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t i, std::size_t left) {
    if (i + 1 == n) {
      k[i] = left;
      double sum = 0.0;
      for (std::size_t j = 0; j + 1 < n; ++j) {
        c[j] = static_cast<double>(k[j]) * step;
        sum += c[j];
      }
      c[n - 1] = std::max(0.0, 1.0 - sum);
      if (k[n - 1] == 0) c[n - 1] = 0.0;
      visit(Belief::normalized(c));
      return;
    }
    for (std::size_t v = 0; v <= left; ++v) {
      k[i] = v;
      rec(i + 1, left - v);
    }
  };
  rec(0, g);
}

std::vector<Belief> face_samples(const Face& face, std::size_t n, std::size_t count) {
  const std::vector<std::size_t>& s = face.support();
  const std::size_t k = s.size();
  std::vector<Belief> out;
  if (k == 1) {
    out.push_back(Belief::vertex(n, s[0]));
    return out;
  }
  // Additive recurrence with the generalized golden ratio for dimension k-1,
  // offset by a hash of the face so different faces use different sequences.
  const std::size_t d = k - 1;
  double phi = 2.0;
  for (int it = 0; it < 64; ++it) phi = std::pow(1.0 + phi, 1.0 / static_cast<double>(d + 1));
  std::vector<double> alpha(d), offset(d);
  std::uint64_t h = 0x5bd1e995ULL;
  for (std::size_t v : s) h = splitmix64(h ^ v);
  for (std::size_t j = 0; j < d; ++j) {
    alpha[j] = std::fmod(1.0 / std::pow(phi, static_cast<double>(j + 1)), 1.0);
    h = splitmix64(h);
    offset[j] = static_cast<double>(h >> 11) * 0x1.0p-53;
  }
  const Belief centre = face.centroid(n);
  for (std::size_t t = 1; t <= count; ++t) {
    // Unit cube point -> uniform simplex point via sorted spacings.
    std::vector<double> u(d);
    for (std::size_t j = 0; j < d; ++j) u[j] = std::fmod(offset[j] + static_cast<double>(t) * alpha[j], 1.0);
    std::sort(u.begin(), u.end());
    std::vector<double> c(n, 0.0);
    double prev = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
      c[s[j]] = u[j] - prev;
      prev = u[j];
    }
    c[s[d]] = 1.0 - prev;
    // Pull slightly toward the centroid to stay strictly inside the face.
    for (std::size_t j = 0; j < k; ++j) c[s[j]] = 0.96 * c[s[j]] + 0.04 * centre[s[j]];
    out.push_back(Belief::normalized(std::move(c)));
  }
  return out;
}

}  // namespace blackwell
