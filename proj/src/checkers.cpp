#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <sstream>

#include "blackwell/distortions.hpp"
#include "blackwell/errors.hpp"
#include "blackwell/geometry.hpp"
#include "blackwell/sampling.hpp"

namespace blackwell {

namespace {

std::string show(const Belief& b) {
  std::ostringstream out;
  out << '(';
  for (std::size_t i = 0; i < b.size(); ++i) out << (i ? "," : "") << b[i];
  out << ')';
  return out.str();
}

}  // namespace

CoarseVerdict is_occasionally_coarse(const Distortion& d, const Belief& mu, std::size_t grid_size, double tol) {
  if (d.states() != 2) throw Error(ErrorCode::WrongDimension, "occasionally coarse applies to two states");
  if (grid_size < 2) throw Error(ErrorCode::InvalidArgument, "grid too coarse");
  const std::size_t g = grid_size;
  const double h = 1.0 / static_cast<double>(g);
  std::vector<double> s(g + 1), f(g + 1);
  for (std::size_t k = 0; k <= g; ++k) {
    s[k] = k == g ? 1.0 : static_cast<double>(k) * h;
    f[k] = d.evaluate(mu, Belief::binary(s[k])).scalar();
  }
  CoarseVerdict v;
  v.step = h;
  v.a = std::abs(f[1] - s[1]) > tol ? f[1] : 0.0;
  v.b = std::abs(f[g - 1] - s[g - 1]) > tol ? f[g - 1] : 1.0;
  v.u = f[0];
  v.v = f[g];
  auto refute = [&](std::size_t k, int condition, const std::string& why) {
    v.holds = false;
    v.refutation = Refutation{Belief::binary(s[k]), condition, why};
    return v;
  };
  if (v.a > v.b + tol) return refute(1, 0, "lower coarse level exceeds upper coarse level");
  for (std::size_t k = 1; k < g; ++k) {
    const double x = s[k], y = f[k];
    const bool identity = std::abs(y - x) <= tol;
    if (x < v.a - tol) {
      if (std::abs(y - v.a) > tol) return refute(k, 1, "belief below a is not mapped to a");
    } else if (x > v.b + tol) {
      if (std::abs(y - v.b) > tol) return refute(k, 2, "belief above b is not mapped to b");
    } else if (!identity && !(x <= v.a + tol && std::abs(y - v.a) <= tol) &&
               !(x >= v.b - tol && std::abs(y - v.b) <= tol)) {
      return refute(k, 3, "belief in [a,b] is not mapped to itself");
    }
  }
  if (f[0] > v.a + tol) return refute(0, 4, "image of 0 exceeds a");
  if (f[g] < v.b - tol) return refute(g, 4, "image of 1 falls below b");
  v.holds = true;
  return v;
}

StubbornVerdict is_occasionally_stubborn(const Distortion& d, const Belief& mu, std::size_t samples_per_face,
                                         double tol) {
  const std::size_t n = d.states();
  if (n < 3) throw Error(ErrorCode::WrongDimension, "occasionally stubborn applies to n >= 3");
  StubbornVerdict verdict;
  auto refute = [&](const Belief& node, int item, const std::string& why) {
    verdict.holds = false;
    verdict.refutation = Refutation{node, item, why};
    return verdict;
  };

  struct Sample {
    Belief x;
    Belief image;
    bool error;
  };
  const std::vector<Face> faces = all_faces(n, 1);
  std::vector<std::vector<Sample>> samples(faces.size());
  for (std::size_t f = 0; f < faces.size(); ++f)
    for (const Belief& x : face_samples(faces[f], n, samples_per_face)) {
      Belief img = d.evaluate(mu, x);
      const bool err = distance_inf(img, x) > tol;
      samples[f].push_back({x, std::move(img), err});
    }
  auto face_errs = [&](std::size_t f) {
    return std::any_of(samples[f].begin(), samples[f].end(), [](const Sample& s) { return s.error; });
  };
  // A closed face errs when any of its sub-faces carries an erring sample.
  auto closed_errs = [&](const Face& face) {
    for (std::size_t g = 0; g < faces.size(); ++g)
      if (face.contains(faces[g]) && face_errs(g)) return true;
    return false;
  };

  bool any_error = false;
  for (std::size_t f = 0; f < faces.size(); ++f) any_error = any_error || face_errs(f);
  if (!any_error) {
    verdict.holds = true;
    return verdict;
  }
  // The whole simplex is an erring face of dimension >= 2, so its interior image fixes x*.
  const std::size_t whole = faces.size() - 1;
  const Belief x_star = samples[whole].front().image;
  verdict.x_star = x_star;

  for (std::size_t f = 0; f < faces.size(); ++f) {
    if (faces[f].dim() < 2 || !closed_errs(faces[f])) continue;
    for (const Sample& s : samples[f])
      if (distance_inf(s.image, x_star) > tol)
        return refute(s.x, 1, "interior of an erring face is not mapped to the common x* " + show(x_star));
  }

  for (std::size_t f = 0; f < faces.size(); ++f) {
    const Face& edge = faces[f];
    if (edge.dim() != 1 || !closed_errs(edge)) continue;
    auto to_star = [&](const Sample& s) { return distance_inf(s.image, x_star) <= tol; };
    if (std::all_of(samples[f].begin(), samples[f].end(), to_star)) continue;
    bool split_ok = false;
    if (Face::of(x_star) == edge) {
      for (std::size_t v : edge.support()) {
        const std::size_t far = v == edge.support()[0] ? edge.support()[1] : edge.support()[0];
        bool ok = distance_inf(d.evaluate(mu, Belief::vertex(n, far)), Belief::vertex(n, far)) <= tol;
        for (const Sample& s : samples[f]) {
          if (!ok) break;
          if (s.x[v] > x_star[v] + tol) ok = to_star(s);
          else if (s.x[v] < x_star[v] - tol) ok = !s.error;
        }
        if (ok) {
          split_ok = true;
          break;
        }
      }
    }
    if (!split_ok) {
      auto bad = std::find_if(samples[f].begin(), samples[f].end(), [&](const Sample& s) { return !to_star(s); });
      return refute(bad->x, 2, "erring edge is neither mapped to x* nor split at x*");
    }
  }

  for (std::size_t i = 0; i < n; ++i) {
    const Belief e = Belief::vertex(n, i);
    const Belief img = d.evaluate(mu, e);
    if (distance_inf(img, e) <= tol) continue;
    if (!on_segment(x_star, e, img, tol).on)
      return refute(e, 3, "vertex image " + show(img) + " is not between x* and the vertex");
  }
  verdict.holds = true;
  return verdict;
}

bool is_trivial_on_interior(const Distortion& d, const Belief& mu, std::size_t samples, double tol) {
  const std::size_t n = d.states();
  std::vector<std::size_t> all(n);
  for (std::size_t i = 0; i < n; ++i) all[i] = i;
  const std::vector<Belief> pts = face_samples(Face(all), n, std::max<std::size_t>(samples, 2));
  const Belief first = d.evaluate(mu, pts.front());
  for (const Belief& x : pts)
    if (distance_inf(d.evaluate(mu, x), first) > tol) return false;
  return true;
}

bool is_affine(const Distortion& d, const Belief& mu, double tol) {
  // On the simplex an affine map is linear in full coordinates: phi(x) = M x.
  const std::size_t n = d.states();
  Eigen::MatrixXd y(n, n), img(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    const Belief p = mix(mu, Belief::vertex(n, j), 0.5);
    const Belief q = d.evaluate(mu, p);
    for (std::size_t i = 0; i < n; ++i) {
      y(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = p[i];
      img(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = q[i];
    }
  }
  const Eigen::MatrixXd m = img * y.inverse();
  auto check = [&](const Belief& x) {
    Eigen::VectorXd v(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) v(static_cast<Eigen::Index>(i)) = x[i];
    const Eigen::VectorXd pred = m * v;
    const Belief actual = d.evaluate(mu, x);
    for (std::size_t i = 0; i < n; ++i)
      if (std::abs(pred(static_cast<Eigen::Index>(i)) - actual[i]) > tol) return false;
    return true;
  };
  for (std::size_t i = 0; i < n; ++i)
    if (!check(Belief::vertex(n, i))) return false;
  if (!check(mu)) return false;
  Rng rng(0x5eed);
  for (int k = 0; k < 100; ++k)
    if (!check(Belief::normalized(rng.simplex(n)))) return false;
  return true;
}

}  // namespace blackwell
