#ifndef BLACKWELL_LP_HPP
#define BLACKWELL_LP_HPP

#include <cstddef>
#include <utility>
#include <vector>

namespace blackwell::lp {

enum class Relation { LessEqual, Equal, GreaterEqual };
enum class Status { Optimal, Infeasible, Unbounded, IterationLimit };

struct Term {
  std::size_t var;
  double coef;
};

struct Solution {
  Status status = Status::Infeasible;
  double objective = 0.0;
  std::vector<double> x;

  bool optimal() const { return status == Status::Optimal; }
};

/// Small dense linear program, minimized by a two-phase tableau simplex.
/// Pivoting follows Bland's rule so the result is a deterministic function of
/// the order in which variables and rows were added.
class Program {
 public:
  /// Adds a variable with the given objective coefficient. Variables are
  /// nonnegative unless `free` is set.
  std::size_t add_variable(double cost = 0.0, bool free = false);
  void add_constraint(std::vector<Term> terms, Relation rel, double rhs);
  void set_cost(std::size_t var, double cost);

  std::size_t variables() const { return costs_.size(); }
  std::size_t constraints() const { return rows_.size(); }

  Solution minimize(std::size_t max_iterations = 100000) const;

 private:
  struct Row {
    std::vector<Term> terms;
    Relation rel;
    double rhs;
  };
  std::vector<double> costs_;
  std::vector<bool> free_;
  std::vector<Row> rows_;
};

}  // namespace blackwell::lp

#endif  // BLACKWELL_LP_HPP
