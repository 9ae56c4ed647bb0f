#include "blackwell/lp.hpp"

#include <cmath>
#include <limits>

#include "blackwell/errors.hpp"

namespace blackwell::lp {

namespace {

constexpr double kPivotEps = 1e-11;
constexpr double kCostEps = 1e-11;
constexpr double kPhaseOneEps = 1e-9;

class Tableau {
 public:
  Tableau(std::size_t rows, std::size_t cols) : m_(rows), n_(cols), a_(rows * (cols + 1), 0.0), basis_(rows, 0) {}

  double& at(std::size_t r, std::size_t c) { return a_[r * (n_ + 1) + c]; }
  double at(std::size_t r, std::size_t c) const { return a_[r * (n_ + 1) + c]; }
  double& rhs(std::size_t r) { return at(r, n_); }
  std::size_t rows() const { return m_; }
  std::size_t cols() const { return n_; }
  std::vector<std::size_t>& basis() { return basis_; }

  void pivot(std::size_t r, std::size_t c, std::vector<double>& reduced, double& value) {
    double p = at(r, c);
    for (std::size_t j = 0; j <= n_; ++j) at(r, j) /= p;
    at(r, c) = 1.0;
    for (std::size_t i = 0; i < m_; ++i) {
      if (i == r) continue;
      double f = at(i, c);
      if (f == 0.0) continue;
      for (std::size_t j = 0; j <= n_; ++j) at(i, j) -= f * at(r, j);
      at(i, c) = 0.0;
    }
    double f = reduced[c];
    if (f != 0.0) {
      for (std::size_t j = 0; j < n_; ++j) reduced[j] -= f * at(r, j);
      value += f * at(r, n_);
      reduced[c] = 0.0;
    }
    basis_[r] = c;
  }

  // Reduced costs d_j = c_j - c_B^T B^{-1} A_j and objective c_B^T B^{-1} b for the current basis.
  void price(const std::vector<double>& cost, std::vector<double>& reduced, double& value) const {
    reduced = cost;
    value = 0.0;
    for (std::size_t i = 0; i < m_; ++i) {
      double cb = cost[basis_[i]];
      if (cb == 0.0) continue;
      for (std::size_t j = 0; j < n_; ++j) reduced[j] -= cb * at(i, j);
      value += cb * at(i, n_);
    }
  }

  Status run(const std::vector<double>& cost, const std::vector<bool>& allowed, std::size_t& budget) {
    std::vector<double> reduced;
    double value = 0.0;
    price(cost, reduced, value);
    while (true) {
      std::size_t enter = n_;
      for (std::size_t j = 0; j < n_; ++j)
        if (allowed[j] && reduced[j] < -kCostEps) {
          enter = j;
          break;
        }
      if (enter == n_) return Status::Optimal;
      if (budget == 0) return Status::IterationLimit;
      --budget;
      std::size_t leave = m_;
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < m_; ++i) {
        double a = at(i, enter);
        if (a <= kPivotEps) continue;
        double ratio = at(i, n_) / a;
        if (ratio < best - 1e-12) {
          best = ratio;
          leave = i;
        } else if (ratio <= best + 1e-12 && basis_[i] < basis_[leave]) {
          leave = i;
        }
      }
      if (leave == m_) return Status::Unbounded;
      pivot(leave, enter, reduced, value);
    }
  }

 private:
  std::size_t m_, n_;
  std::vector<double> a_;
  std::vector<std::size_t> basis_;
};

}  // namespace

std::size_t Program::add_variable(double cost, bool free) {
  costs_.push_back(cost);
  free_.push_back(free);
  return costs_.size() - 1;
}

void Program::set_cost(std::size_t var, double cost) {
  if (var >= costs_.size()) throw Error(ErrorCode::InvalidArgument, "unknown LP variable");
  costs_[var] = cost;
}

void Program::add_constraint(std::vector<Term> terms, Relation rel, double rhs) {
  for (const Term& t : terms)
    if (t.var >= costs_.size()) throw Error(ErrorCode::InvalidArgument, "constraint references unknown LP variable");
  if (!std::isfinite(rhs)) throw Error(ErrorCode::InvalidArgument, "non-finite LP right-hand side");
  rows_.push_back({std::move(terms), rel, rhs});
}

Solution Program::minimize(std::size_t max_iterations) const {
  const std::size_t nv = costs_.size();
  const std::size_t m = rows_.size();

  // Column layout: structural columns (free variables split into +/-), then one
  // slack per inequality, then one artificial per row that needs it.
  std::vector<std::size_t> pos(nv), neg(nv, 0);
  std::size_t cols = 0;
  for (std::size_t v = 0; v < nv; ++v) {
    pos[v] = cols++;
    if (free_[v]) neg[v] = cols++;
  }

  std::vector<Relation> rel(m);
  std::vector<double> sign(m, 1.0);
  std::vector<std::size_t> slack(m, 0), artificial(m, 0);
  std::vector<bool> has_slack(m, false), has_artificial(m, false);
  for (std::size_t i = 0; i < m; ++i) {
    rel[i] = rows_[i].rel;
    if (rows_[i].rhs < 0.0) {
      sign[i] = -1.0;
      if (rel[i] == Relation::LessEqual) rel[i] = Relation::GreaterEqual;
      else if (rel[i] == Relation::GreaterEqual) rel[i] = Relation::LessEqual;
    }
    if (rel[i] != Relation::Equal) {
      has_slack[i] = true;
      slack[i] = cols++;
    }
  }
  const std::size_t first_artificial = cols;
  for (std::size_t i = 0; i < m; ++i)
    if (rel[i] != Relation::LessEqual) {
      has_artificial[i] = true;
      artificial[i] = cols++;
    }

  Tableau t(m, cols);
  for (std::size_t i = 0; i < m; ++i) {
    for (const Term& term : rows_[i].terms) {
      t.at(i, pos[term.var]) += sign[i] * term.coef;
      if (free_[term.var]) t.at(i, neg[term.var]) -= sign[i] * term.coef;
    }
    t.rhs(i) = sign[i] * rows_[i].rhs;
    if (has_slack[i]) t.at(i, slack[i]) = rel[i] == Relation::LessEqual ? 1.0 : -1.0;
    if (has_artificial[i]) {
      t.at(i, artificial[i]) = 1.0;
      t.basis()[i] = artificial[i];
    } else {
      t.basis()[i] = slack[i];
    }
  }

  std::size_t budget = max_iterations;
  Solution sol;
  std::vector<bool> allowed(cols, true);

  if (first_artificial < cols) {
    std::vector<double> phase1(cols, 0.0);
    for (std::size_t j = first_artificial; j < cols; ++j) phase1[j] = 1.0;
    Status s = t.run(phase1, allowed, budget);
    if (s == Status::IterationLimit) {
      sol.status = s;
      return sol;
    }
    double infeasibility = 0.0;
    for (std::size_t i = 0; i < m; ++i)
      if (t.basis()[i] >= first_artificial) infeasibility += t.rhs(i);
    double scale = 1.0;
    for (const Row& r : rows_) scale = std::max(scale, std::abs(r.rhs));
    if (infeasibility > kPhaseOneEps * scale) {
      sol.status = Status::Infeasible;
      return sol;
    }
    // Drive artificials out of the basis; rows where that is impossible are redundant.
    std::vector<double> dummy(cols, 0.0);
    double dummy_value = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      if (t.basis()[i] < first_artificial) continue;
      for (std::size_t j = 0; j < first_artificial; ++j)
        if (std::abs(t.at(i, j)) > 1e-9) {
          t.pivot(i, j, dummy, dummy_value);
          break;
        }
    }
    for (std::size_t j = first_artificial; j < cols; ++j) allowed[j] = false;
  }

  std::vector<double> cost(cols, 0.0);
  for (std::size_t v = 0; v < nv; ++v) {
    cost[pos[v]] = costs_[v];
    if (free_[v]) cost[neg[v]] = -costs_[v];
  }
  Status s = t.run(cost, allowed, budget);
  sol.status = s;
  if (s != Status::Optimal) return sol;

  std::vector<double> column(cols, 0.0);
  for (std::size_t i = 0; i < m; ++i) column[t.basis()[i]] = t.rhs(i);
  sol.x.assign(nv, 0.0);
  sol.objective = 0.0;
  for (std::size_t v = 0; v < nv; ++v) {
    sol.x[v] = column[pos[v]] - (free_[v] ? column[neg[v]] : 0.0);
    sol.objective += costs_[v] * sol.x[v];
  }
  return sol;
}

}  // namespace blackwell::lp
