#include "hybridnet/lp/linear_program.h"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "hybridnet/error.h"

namespace hybridnet::lp {

int LinearProgram::add_variable(double lower, double upper, double cost,
                                std::string name) {
  if (std::isinf(lower) && std::isinf(upper)) {
    throw Error(ErrorCode::kInvalidArgument,
                "free variables are not supported");
  }
  if (lower > upper) {
    throw Error(ErrorCode::kInvalidArgument, "variable lower bound > upper");
  }
  variables_.push_back({lower, upper, cost, std::move(name)});
  return num_variables() - 1;
}

int LinearProgram::add_row(RowSense sense, double rhs, std::string name) {
  rows_.push_back({sense, rhs, {}, std::move(name)});
  return num_rows() - 1;
}

void LinearProgram::add_coefficient(int row, int var, double value) {
  if (value == 0) return;
  rows_[row].entries.push_back({var, value});
}

double LinearProgram::max_violation(const std::vector<double>& x) const {
  double worst = 0;
  for (int j = 0; j < num_variables(); ++j) {
    worst = std::max(worst, variables_[j].lower - x[j]);
    worst = std::max(worst, x[j] - variables_[j].upper);
  }
  for (const Row& row : rows_) {
    double activity = 0;
    for (const Entry& e : row.entries) activity += e.coefficient * x[e.var];
    double gap = activity - row.rhs;
    switch (row.sense) {
      case RowSense::kLessEqual: worst = std::max(worst, gap); break;
      case RowSense::kGreaterEqual: worst = std::max(worst, -gap); break;
      case RowSense::kEqual: worst = std::max(worst, std::abs(gap)); break;
    }
  }
  return worst;
}

double LinearProgram::objective(const std::vector<double>& x) const {
  double value = 0;
  for (int j = 0; j < num_variables(); ++j) value += variables_[j].cost * x[j];
  return value;
}

namespace {

std::string var_name(const LinearProgram& p, int j) {
  const std::string& name = p.variable(j).name;
  return name.empty() ? "x" + std::to_string(j) : name;
}

void write_term(std::ostream& out, double coefficient, const std::string& name,
                bool first) {
  if (coefficient < 0) {
    out << (first ? "-" : " - ");
  } else if (!first) {
    out << " + ";
  }
  double magnitude = std::abs(coefficient);
  if (magnitude != 1) out << magnitude << " ";
  out << name;
}

}  // namespace

void LinearProgram::write_lp_format(std::ostream& out) const {
  out.precision(17);
  out << "Minimize\n obj:";
  bool first = true;
  for (int j = 0; j < num_variables(); ++j) {
    if (variables_[j].cost == 0) continue;
    out << " ";
    write_term(out, variables_[j].cost, var_name(*this, j), first);
    first = false;
  }
  if (first) out << " 0 " << var_name(*this, 0);
  out << "\nSubject To\n";
  for (int i = 0; i < num_rows(); ++i) {
    const Row& row = rows_[i];
    out << " " << (row.name.empty() ? "r" + std::to_string(i) : row.name)
        << ":";
    bool first_term = true;
    for (const Entry& e : row.entries) {
      out << " ";
      write_term(out, e.coefficient, var_name(*this, e.var), first_term);
      first_term = false;
    }
    if (first_term) out << " 0 " << var_name(*this, 0);
    switch (row.sense) {
      case RowSense::kLessEqual: out << " <= "; break;
      case RowSense::kGreaterEqual: out << " >= "; break;
      case RowSense::kEqual: out << " = "; break;
    }
    out << row.rhs << "\n";
  }
  out << "Bounds\n";
  for (int j = 0; j < num_variables(); ++j) {
    const Variable& v = variables_[j];
    out << " ";
    if (std::isinf(v.lower)) {
      out << "-inf <= " << var_name(*this, j) << " <= " << v.upper << "\n";
    } else if (std::isinf(v.upper)) {
      out << var_name(*this, j) << " >= " << v.lower << "\n";
    } else {
      out << v.lower << " <= " << var_name(*this, j) << " <= " << v.upper
          << "\n";
    }
  }
  out << "End\n";
}

const char* status_name(SolveStatus status) {
  switch (status) {
    case SolveStatus::kOptimal: return "Optimal";
    case SolveStatus::kInfeasible: return "Infeasible";
    case SolveStatus::kUnbounded: return "Unbounded";
    case SolveStatus::kNumericalFailure: return "NumericalFailure";
  }
  return "Unknown";
}

}  // namespace hybridnet::lp
