#ifndef BLACKWELL_DISTORTIONS_HPP
#define BLACKWELL_DISTORTIONS_HPP

#include <cstddef>
#include <istream>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

#include "blackwell/belief.hpp"
#include "blackwell/experiments.hpp"

namespace blackwell {

enum class Family { Bayes, Trivial, OccasionallyCoarse, OccasionallyStubborn, Grether, Shrinkage, Tabulated };

std::string to_string(Family f);

struct BayesRule {};

struct TrivialRule {
  Belief x_star;
};

/// Two-state rule: (0,a) -> a, [a,b] identity, (b,1) -> b, 0 -> u, 1 -> v.
/// Scalars are the first coordinate of the belief.
struct CoarseRule {
  double a, b, u, v;
};

/// An edge {i, j} whose segment from vertex `special_vertex` to x* (open) maps to x*,
/// with the rest of the edge left correct.
struct EdgeCase {
  Face edge;
  std::size_t special_vertex;
};

struct StubbornSpec {
  /// Absent only for the rule that makes no errors.
  std::optional<Belief> x_star;
  /// Closed faces on which the rule is the identity.
  std::vector<Face> correct_faces;
  std::optional<EdgeCase> edge_case;
  /// Vertices not listed map to themselves.
  std::map<std::size_t, Belief> vertex_images;
};

struct StubbornRule {
  StubbornSpec spec;
  /// False when built through Distortion::stubborn_form, which skips the structural checks.
  bool validated;
};

struct GretherRule {
  double alpha, beta;
};

struct ShrinkageRule {
  double lambda;
};

/// Lookup table on a simplex lattice, answered by the nearest node.
class TabulatedRule {
 public:
  TabulatedRule(std::vector<Belief> nodes, std::vector<Belief> images);

  /// Rows of n node coordinates followed by n image coordinates. A non-numeric first line is a header.
  static TabulatedRule from_csv(std::istream& in, std::size_t n);

  /// Nearest node within half the lattice step; throws GridMiss otherwise.
  const Belief& lookup(const Belief& x) const;

  std::size_t states() const { return nodes_.front().size(); }
  double step() const { return step_; }
  const std::vector<Belief>& nodes() const { return nodes_; }
  const std::vector<Belief>& images() const { return images_; }

 private:
  std::string key(const Belief& x) const;

  std::vector<Belief> nodes_;
  std::vector<Belief> images_;
  double step_;
  std::unordered_map<std::string, std::size_t> index_;
};

/// The map phi^mu from the Bayesian posterior to the belief the agent holds.
class Distortion {
 public:
  using Rule = std::variant<BayesRule, TrivialRule, CoarseRule, StubbornRule, GretherRule, ShrinkageRule,
                            std::shared_ptr<const TabulatedRule>>;

  static Distortion bayes(std::size_t n);
  static Distortion trivial(Belief x_star);
  static Distortion occasionally_coarse(double a, double b, double u, double v);
  /// Checks the structural conditions and throws InvalidArgument when one fails.
  static Distortion occasionally_stubborn(std::size_t n, StubbornSpec spec);
  /// Same evaluation as occasionally_stubborn without the structural checks.
  static Distortion stubborn_form(std::size_t n, StubbornSpec spec);
  static Distortion grether(std::size_t n, double alpha, double beta);
  static Distortion shrinkage(std::size_t n, double lambda);
  static Distortion tabulated(TabulatedRule table);
  /// Tabulates another rule on the lattice with step 1/grid.
  static Distortion tabulate(const Distortion& d, const Belief& mu, std::size_t grid);

  Family family() const;
  std::size_t states() const { return n_; }
  const Rule& rule() const { return rule_; }

  Belief evaluate(const Belief& mu, const Belief& x) const;

 private:
  Distortion(std::size_t n, Rule rule) : n_(n), rule_(std::move(rule)) {}

  std::size_t n_;
  Rule rule_;
};

Belief evaluate(const Distortion& d, const Belief& mu, const Belief& x);

/// Image distribution: support mapped through phi, coincident images merged.
PosteriorDistribution pushforward(const Distortion& d, const Belief& mu, const PosteriorDistribution& rho_b);

enum class ErrorKind { None, Expansive, Contractive };

std::string to_string(ErrorKind k);

struct ErrorClass {
  ErrorKind kind = ErrorKind::None;
  /// For contractive errors, phi(x) = lambda x + (1 - lambda) mu.
  std::optional<double> witness_lambda;
};

ErrorClass classify_error(const Distortion& d, const Belief& mu, const Belief& x, double tol = kGeometryTolerance);

struct Refutation {
  Belief node;
  /// Violated condition of the coarse box (1-4, 0 for a > b) or item of the stubborn box (1-3).
  int condition;
  std::string detail;
};

struct CoarseVerdict {
  bool holds = false;
  double a = 0.0, b = 1.0, u = 0.0, v = 1.0;
  /// Grid step: the resolution at which a and b are known.
  double step = 0.0;
  std::optional<Refutation> refutation;
};

struct StubbornVerdict {
  bool holds = false;
  std::optional<Belief> x_star;
  std::optional<Refutation> refutation;
};

CoarseVerdict is_occasionally_coarse(const Distortion& d, const Belief& mu, std::size_t grid_size = 1000,
                                     double tol = kGeometryTolerance);
StubbornVerdict is_occasionally_stubborn(const Distortion& d, const Belief& mu, std::size_t samples_per_face = 64,
                                         double tol = kGeometryTolerance);
bool is_trivial_on_interior(const Distortion& d, const Belief& mu, std::size_t samples = 64,
                            double tol = kGeometryTolerance);
bool is_affine(const Distortion& d, const Belief& mu, double tol = 1e-9);

}  // namespace blackwell

#endif  // BLACKWELL_DISTORTIONS_HPP
