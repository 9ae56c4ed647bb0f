#ifndef BLACKWELL_AUDITOR_HPP
#define BLACKWELL_AUDITOR_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "blackwell/decision.hpp"
#include "blackwell/distortions.hpp"
#include "blackwell/experiments.hpp"
#include "blackwell/geometry.hpp"

namespace blackwell {

/// A Blackwell-ordered pair (pi dominates pi_prime) and a problem under which the rule
/// does strictly worse with pi. Carries the rule so it can be re-checked without other state.
struct ViolationCertificate {
  Belief prior;
  Experiment pi;
  Experiment pi_prime;
  DecisionProblem problem;
  Selector selector;
  WelfareMode mode;
  /// E[W | pi] - E[W | pi_prime]
  double gap;
  std::string recipe;
  std::uint64_t seed;
  Distortion rule;
  /// Held belief per signal (the prior for signals that never occur).
  std::vector<Belief> held_pi;
  std::vector<Belief> held_pi_prime;
};

/// Actions {0, alpha.x - beta}: V(x) = max{0, alpha.x - beta}.
DecisionProblem hyperplane_problem(const Hyperplane& h);

struct AuditOptions {
  std::size_t grid_size = 201;
  std::size_t budget = 5000;
  WelfareMode mode = WelfareMode::SingleMistake;
  std::uint64_t seed = 0;
  double tol = kGeometryTolerance;
  Selector selector;
  /// 0 uses audit_threads().
  unsigned threads = 0;
};

struct ErrorCensus {
  std::size_t points = 0;
  std::size_t none = 0;
  std::size_t expansive = 0;
  std::size_t contractive = 0;
};

struct AuditReport {
  std::optional<ViolationCertificate> certificate;
  ErrorCensus census;
  std::optional<CoarseVerdict> coarse;
  std::optional<StubbornVerdict> stubborn;
  bool trivial_on_interior = false;
  bool affine = false;
  std::size_t budget_used = 0;
};

/// Requires classify_error(d, mu, x0) to be Expansive (PreconditionViolated otherwise).
/// Throws BudgetExhausted when no construction produced a certificate.
ViolationCertificate audit_expansive(const Distortion& d, const Belief& mu, const Belief& x0, std::size_t budget,
                                     const AuditOptions& options = {});
/// Requires classify_error(d, mu, x0) to be Contractive.
ViolationCertificate audit_contractive(const Distortion& d, const Belief& mu, const Belief& x0, std::size_t budget,
                                       const AuditOptions& options = {});

AuditReport audit(const Distortion& d, const Belief& mu, const AuditOptions& options = {});

struct Verification {
  bool valid = false;
  /// "ok", "dominance", "image-mismatch", "gap-mismatch", "non-negative-gap" or "malformed".
  std::string reason;
  double recomputed_gap = 0.0;
};

Verification verify_certificate(const ViolationCertificate& c, double tol = kCertificateTolerance);

}  // namespace blackwell

#endif  // BLACKWELL_AUDITOR_HPP
