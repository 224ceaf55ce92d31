#include "hybridnet/lp/simplex.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <vector>

namespace hybridnet::lp {
namespace {

enum class VarState { kBasic, kAtLower, kAtUpper };

struct SparseColumn {
  std::vector<int> rows;
  std::vector<double> values;
};

// One solve of one program. Column layout: structural variables, then one
// slack per row, then artificials for rows whose slack cannot absorb the
// initial residual.
class SimplexRun {
 public:
  SimplexRun(const LinearProgram& program, const SimplexOptions& options)
      : program_(program), options_(options) {}

  SolveResult run();

 private:
  enum class PhaseOutcome { kOptimal, kUnbounded, kIterationLimit, kSingular };

  void setup();
  PhaseOutcome iterate();
  bool refactor();
  void recompute_basic_values();
  void pivot_inverse(int row, const std::vector<double>& alpha);
  void compute_alpha(int column, std::vector<double>* alpha) const;
  double reduced_cost(int column, const std::vector<double>& y) const;
  SolveResult finish(SolveStatus status);

  const LinearProgram& program_;
  const SimplexOptions& options_;

  int m_ = 0;
  int n_structural_ = 0;
  int n_total_ = 0;
  std::vector<SparseColumn> columns_;
  std::vector<double> lower_;
  std::vector<double> upper_;
  std::vector<double> cost_;
  std::vector<double> x_;
  std::vector<double> rhs_;
  std::vector<VarState> state_;
  std::vector<int> basis_;       // column in each basis row
  std::vector<double> inverse_;  // m x m, row-major
  std::vector<int> artificials_;
  long iterations_ = 0;
  long iteration_limit_ = 0;
};

void SimplexRun::setup() {
  m_ = program_.num_rows();
  n_structural_ = program_.num_variables();
  rhs_.resize(m_);

  // Structural columns with duplicate entries merged.
  std::vector<std::map<int, double>> merged(n_structural_);
  for (int i = 0; i < m_; ++i) {
    const Row& row = program_.rows()[i];
    rhs_[i] = row.rhs;
    for (const Entry& e : row.entries) merged[e.var][i] += e.coefficient;
  }
  for (int j = 0; j < n_structural_; ++j) {
    SparseColumn col;
    for (const auto& [row, value] : merged[j]) {
      if (value == 0) continue;
      col.rows.push_back(row);
      col.values.push_back(value);
    }
    columns_.push_back(std::move(col));
    const Variable& v = program_.variables()[j];
    lower_.push_back(v.lower);
    upper_.push_back(v.upper);
    cost_.push_back(v.cost);
    bool at_lower = !std::isinf(v.lower);
    x_.push_back(at_lower ? v.lower : v.upper);
    state_.push_back(at_lower ? VarState::kAtLower : VarState::kAtUpper);
  }

  // Residual of the rows with all structurals at their starting bound.
  std::vector<double> residual = rhs_;
  for (int j = 0; j < n_structural_; ++j) {
    if (x_[j] == 0) continue;
    for (std::size_t k = 0; k < columns_[j].rows.size(); ++k) {
      residual[columns_[j].rows[k]] -= columns_[j].values[k] * x_[j];
    }
  }

  basis_.assign(m_, -1);
  std::vector<double> basis_sign(m_, 1.0);
  for (int i = 0; i < m_; ++i) {
    double lo = 0, hi = 0;
    switch (program_.rows()[i].sense) {
      case RowSense::kLessEqual: lo = 0; hi = kUnbounded; break;
      case RowSense::kGreaterEqual: lo = -kUnbounded; hi = 0; break;
      case RowSense::kEqual: lo = 0; hi = 0; break;
    }
    int slack = static_cast<int>(columns_.size());
    columns_.push_back({{i}, {1.0}});
    lower_.push_back(lo);
    upper_.push_back(hi);
    cost_.push_back(0);
    if (residual[i] >= lo && residual[i] <= hi) {
      x_.push_back(residual[i]);
      state_.push_back(VarState::kBasic);
      basis_[i] = slack;
    } else {
      x_.push_back(std::isinf(lo) ? hi : lo);
      state_.push_back(std::isinf(lo) ? VarState::kAtUpper : VarState::kAtLower);
    }
  }
  for (int i = 0; i < m_; ++i) {
    if (basis_[i] != -1) continue;
    double slack_value = x_[n_structural_ + i];
    double gap = residual[i] - slack_value;
    double sign = gap >= 0 ? 1.0 : -1.0;
    int art = static_cast<int>(columns_.size());
    columns_.push_back({{i}, {sign}});
    lower_.push_back(0);
    upper_.push_back(kUnbounded);
    cost_.push_back(0);
    x_.push_back(std::abs(gap));
    state_.push_back(VarState::kBasic);
    basis_[i] = art;
    basis_sign[i] = sign;
    artificials_.push_back(art);
  }
  n_total_ = static_cast<int>(columns_.size());

  inverse_.assign(static_cast<std::size_t>(m_) * m_, 0.0);
  for (int i = 0; i < m_; ++i) inverse_[i * m_ + i] = basis_sign[i];

  iteration_limit_ = options_.max_iterations > 0
                         ? options_.max_iterations
                         : 200L * (m_ + n_total_) + 1000;
}

void SimplexRun::compute_alpha(int column, std::vector<double>* alpha) const {
  alpha->assign(m_, 0.0);
  const SparseColumn& col = columns_[column];
  for (std::size_t k = 0; k < col.rows.size(); ++k) {
    const int r = col.rows[k];
    const double a = col.values[k];
    for (int i = 0; i < m_; ++i) (*alpha)[i] += inverse_[i * m_ + r] * a;
  }
}

double SimplexRun::reduced_cost(int column, const std::vector<double>& y) const {
  const SparseColumn& col = columns_[column];
  double d = cost_[column];
  for (std::size_t k = 0; k < col.rows.size(); ++k) {
    d -= y[col.rows[k]] * col.values[k];
  }
  return d;
}

void SimplexRun::pivot_inverse(int row, const std::vector<double>& alpha) {
  double* pivot_row = &inverse_[static_cast<std::size_t>(row) * m_];
  const double inv_pivot = 1.0 / alpha[row];
  for (int k = 0; k < m_; ++k) pivot_row[k] *= inv_pivot;
  for (int i = 0; i < m_; ++i) {
    if (i == row || alpha[i] == 0) continue;
    double* target = &inverse_[static_cast<std::size_t>(i) * m_];
    const double factor = alpha[i];
    for (int k = 0; k < m_; ++k) target[k] -= factor * pivot_row[k];
  }
}

bool SimplexRun::refactor() {
  // Rebuild B^{-1} from scratch: start from the unit columns (slacks and
  // artificials) of the basis with identity placeholders in the other rows,
  // then pivot the structural columns in one at a time, each into the free
  // row with the largest entry. Bases are mostly unit columns, so this is
  // far cheaper than a dense inversion.
  std::vector<int> target = basis_;
  std::vector<int> rebuilt(m_, -1);
  inverse_.assign(static_cast<std::size_t>(m_) * m_, 0.0);
  for (int i = 0; i < m_; ++i) inverse_[static_cast<std::size_t>(i) * m_ + i] = 1.0;
  std::vector<int> structural;
  for (int column : target) {
    if (column < n_structural_) {
      structural.push_back(column);
      continue;
    }
    const int row = columns_[column].rows[0];
    if (rebuilt[row] != -1) return false;
    rebuilt[row] = column;
    inverse_[static_cast<std::size_t>(row) * m_ + row] = 1.0 / columns_[column].values[0];
  }
  std::vector<double> alpha(m_);
  for (int column : structural) {
    compute_alpha(column, &alpha);
    int row = -1;
    double best = 1e-11;
    for (int i = 0; i < m_; ++i) {
      if (rebuilt[i] == -1 && std::abs(alpha[i]) > best) {
        best = std::abs(alpha[i]);
        row = i;
      }
    }
    if (row == -1) return false;
    rebuilt[row] = column;
    pivot_inverse(row, alpha);
  }
  basis_ = std::move(rebuilt);
  return true;
}

void SimplexRun::recompute_basic_values() {
  std::vector<double> residual = rhs_;
  for (int j = 0; j < n_total_; ++j) {
    if (state_[j] == VarState::kBasic || x_[j] == 0) continue;
    const SparseColumn& col = columns_[j];
    for (std::size_t k = 0; k < col.rows.size(); ++k) {
      residual[col.rows[k]] -= col.values[k] * x_[j];
    }
  }
  for (int i = 0; i < m_; ++i) {
    double value = 0;
    const double* row = &inverse_[static_cast<std::size_t>(i) * m_];
    for (int k = 0; k < m_; ++k) value += row[k] * residual[k];
    x_[basis_[i]] = value;
  }
}

SimplexRun::PhaseOutcome SimplexRun::iterate() {
  std::vector<double> y(m_);
  std::vector<double> alpha(m_);
  int degenerate_streak = 0;
  bool bland = false;
  int since_refactor = 0;

  while (true) {
    if (iterations_ >= iteration_limit_) return PhaseOutcome::kIterationLimit;
    if (since_refactor >= options_.refactor_interval) {
      if (!refactor()) return PhaseOutcome::kSingular;
      recompute_basic_values();
      since_refactor = 0;
    }

    // Duals y = c_B^T B^{-1}.
    std::fill(y.begin(), y.end(), 0.0);
    for (int i = 0; i < m_; ++i) {
      const double cb = cost_[basis_[i]];
      if (cb == 0) continue;
      const double* row = &inverse_[static_cast<std::size_t>(i) * m_];
      for (int k = 0; k < m_; ++k) y[k] += cb * row[k];
    }

    // Pricing.
    int entering = -1;
    double entering_dir = 0;
    double best_score = 0;
    for (int j = 0; j < n_total_; ++j) {
      if (state_[j] == VarState::kBasic || lower_[j] == upper_[j]) continue;
      const double d = reduced_cost(j, y);
      double dir = 0;
      if (state_[j] == VarState::kAtLower && d < -options_.dual_tolerance) {
        dir = 1;
      } else if (state_[j] == VarState::kAtUpper &&
                 d > options_.dual_tolerance) {
        dir = -1;
      } else {
        continue;
      }
      if (bland) {
        entering = j;
        entering_dir = dir;
        break;
      }
      if (std::abs(d) > best_score) {
        best_score = std::abs(d);
        entering = j;
        entering_dir = dir;
      }
    }
    if (entering == -1) return PhaseOutcome::kOptimal;

    compute_alpha(entering, &alpha);

    // Harris two-pass ratio test. Basic variable i moves by
    // -entering_dir * t * alpha[i].
    const double tol = options_.primal_tolerance;
    double relaxed_limit = kUnbounded;
    for (int i = 0; i < m_; ++i) {
      const double rate = entering_dir * alpha[i];
      const int b = basis_[i];
      if (rate > options_.pivot_tolerance && !std::isinf(lower_[b])) {
        relaxed_limit =
            std::min(relaxed_limit, (x_[b] - (lower_[b] - tol)) / rate);
      } else if (rate < -options_.pivot_tolerance && !std::isinf(upper_[b])) {
        relaxed_limit =
            std::min(relaxed_limit, ((upper_[b] + tol) - x_[b]) / -rate);
      }
    }
    int leaving_row = -1;
    double step = kUnbounded;
    double best_pivot = 0;
    for (int i = 0; i < m_; ++i) {
      const double rate = entering_dir * alpha[i];
      const int b = basis_[i];
      double ratio;
      if (rate > options_.pivot_tolerance && !std::isinf(lower_[b])) {
        ratio = (x_[b] - lower_[b]) / rate;
      } else if (rate < -options_.pivot_tolerance && !std::isinf(upper_[b])) {
        ratio = (upper_[b] - x_[b]) / -rate;
      } else {
        continue;
      }
      ratio = std::max(ratio, 0.0);
      if (bland) {
        if (ratio < step ||
            (ratio == step && leaving_row != -1 && b < basis_[leaving_row])) {
          step = ratio;
          leaving_row = i;
        }
      } else if (ratio <= relaxed_limit && std::abs(alpha[i]) > best_pivot) {
        best_pivot = std::abs(alpha[i]);
        leaving_row = i;
        step = ratio;
      }
    }

    const double flip = upper_[entering] - lower_[entering];
    const bool bound_flip = flip <= step;
    if (bound_flip) step = flip;
    if (std::isinf(step)) return PhaseOutcome::kUnbounded;

    ++iterations_;
    if (step <= 1e-12) {
      if (++degenerate_streak > options_.degenerate_limit) bland = true;
    } else {
      degenerate_streak = 0;
      bland = false;
    }

    for (int i = 0; i < m_; ++i) {
      if (alpha[i] != 0) x_[basis_[i]] -= entering_dir * step * alpha[i];
    }
    if (bound_flip) {
      if (state_[entering] == VarState::kAtLower) {
        state_[entering] = VarState::kAtUpper;
        x_[entering] = upper_[entering];
      } else {
        state_[entering] = VarState::kAtLower;
        x_[entering] = lower_[entering];
      }
      continue;
    }

    x_[entering] += entering_dir * step;
    const int leaving = basis_[leaving_row];
    if (entering_dir * alpha[leaving_row] > 0) {
      state_[leaving] = VarState::kAtLower;
      x_[leaving] = lower_[leaving];
    } else {
      state_[leaving] = VarState::kAtUpper;
      x_[leaving] = upper_[leaving];
    }
    state_[entering] = VarState::kBasic;
    basis_[leaving_row] = entering;
    pivot_inverse(leaving_row, alpha);
    ++since_refactor;
  }
}

SolveResult SimplexRun::finish(SolveStatus status) {
  SolveResult result;
  result.status = status;
  result.iterations = iterations_;
  if (status == SolveStatus::kOptimal) {
    result.values.assign(x_.begin(), x_.begin() + n_structural_);
    // Snap values that drifted marginally past their bounds.
    for (int j = 0; j < n_structural_; ++j) {
      result.values[j] =
          std::clamp(result.values[j], lower_[j], upper_[j]);
    }
    result.objective = program_.objective(result.values);
  }
  return result;
}

SolveResult SimplexRun::run() {
  setup();

  auto outcome_status = [](PhaseOutcome outcome) {
    switch (outcome) {
      case PhaseOutcome::kUnbounded: return SolveStatus::kUnbounded;
      default: return SolveStatus::kNumericalFailure;
    }
  };

  if (!artificials_.empty()) {
    // Phase 1 prices the artificials only.
    std::fill(cost_.begin(), cost_.end(), 0.0);
    for (int a : artificials_) cost_[a] = 1;
    PhaseOutcome outcome = iterate();
    if (outcome != PhaseOutcome::kOptimal) {
      // Phase 1 is bounded below by 0, so anything else is numerical.
      return finish(SolveStatus::kNumericalFailure);
    }
    if (!refactor()) return finish(SolveStatus::kNumericalFailure);
    recompute_basic_values();
    double infeasibility = 0;
    for (int a : artificials_) infeasibility += std::max(x_[a], 0.0);
    if (infeasibility > options_.acceptance_tolerance) {
      return finish(SolveStatus::kInfeasible);
    }
    for (int a : artificials_) {
      cost_[a] = 0;
      upper_[a] = 0;
      if (state_[a] != VarState::kBasic) {
        state_[a] = VarState::kAtLower;
        x_[a] = 0;
      }
    }
  }
  for (int j = 0; j < n_structural_; ++j) {
    cost_[j] = program_.variables()[j].cost;
  }

  PhaseOutcome outcome = iterate();
  if (outcome != PhaseOutcome::kOptimal) return finish(outcome_status(outcome));
  if (!refactor()) return finish(SolveStatus::kNumericalFailure);
  recompute_basic_values();

  // A refactorization may expose drift; polish and re-check once.
  outcome = iterate();
  if (outcome != PhaseOutcome::kOptimal) return finish(outcome_status(outcome));

  SolveResult result = finish(SolveStatus::kOptimal);
  if (program_.max_violation(result.values) > options_.acceptance_tolerance) {
    result.status = SolveStatus::kNumericalFailure;
  }
  return result;
}

}  // namespace

SolveResult SimplexSolver::solve(const LinearProgram& program) const {
  SimplexRun run(program, options_);
  return run.run();
}

}  // namespace hybridnet::lp
