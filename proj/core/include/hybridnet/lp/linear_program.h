#ifndef HYBRIDNET_LP_LINEAR_PROGRAM_H
#define HYBRIDNET_LP_LINEAR_PROGRAM_H

#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

namespace hybridnet::lp {

inline constexpr double kUnbounded = std::numeric_limits<double>::infinity();

enum class RowSense { kLessEqual, kGreaterEqual, kEqual };

struct Variable {
  double lower = 0;
  double upper = kUnbounded;
  double cost = 0;
  std::string name;
};

struct Entry {
  int var = 0;
  double coefficient = 0;
};

struct Row {
  RowSense sense = RowSense::kLessEqual;
  double rhs = 0;
  std::vector<Entry> entries;
  std::string name;
};

// minimize cost^T x  subject to  rows, lower <= x <= upper.
//
// Every variable needs at least one finite bound.
class LinearProgram {
 public:
  int add_variable(double lower, double upper, double cost,
                   std::string name = {});
  int add_row(RowSense sense, double rhs, std::string name = {});
  // Appends a coefficient; duplicate (row, var) entries are summed when the
  // program is solved.
  void add_coefficient(int row, int var, double value);

  int num_variables() const { return static_cast<int>(variables_.size()); }
  int num_rows() const { return static_cast<int>(rows_.size()); }
  const std::vector<Variable>& variables() const { return variables_; }
  const std::vector<Row>& rows() const { return rows_; }
  Variable& variable(int index) { return variables_[index]; }
  const Variable& variable(int index) const { return variables_[index]; }

  // Largest violation of any row or bound by the given point.
  double max_violation(const std::vector<double>& x) const;
  double objective(const std::vector<double>& x) const;

  // Writes the program in CPLEX LP text format.
  void write_lp_format(std::ostream& out) const;

 private:
  std::vector<Variable> variables_;
  std::vector<Row> rows_;
};

enum class SolveStatus { kOptimal, kInfeasible, kUnbounded, kNumericalFailure };

const char* status_name(SolveStatus status);

struct SolveResult {
  SolveStatus status = SolveStatus::kNumericalFailure;
  double objective = 0;
  std::vector<double> values;
  long iterations = 0;
};

// Solver interface so an external LP code can be swapped in.
class Solver {
 public:
  virtual ~Solver() = default;
  virtual SolveResult solve(const LinearProgram& program) const = 0;
};

}  // namespace hybridnet::lp

#endif  // HYBRIDNET_LP_LINEAR_PROGRAM_H
