#include "lexrouter/lp.hpp"

#include <cctype>
#include <chrono>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "simplex_internal.hpp"

namespace lexrouter {

int LinearModel::add_variable(std::string name, double lower, double upper, bool integer,
                              double obj) {
  vars.push_back({std::move(name), lower, upper, integer});
  objective.push_back(obj);
  return static_cast<int>(vars.size()) - 1;
}

int LinearModel::add_row(std::string name, RowSense row_sense, double rhs) {
  rows.push_back({std::move(name), {}, row_sense, rhs});
  return static_cast<int>(rows.size()) - 1;
}

void LinearModel::add_coeff(int row, int var, double coeff) {
  rows[row].coeffs.push_back({var, coeff});
}

bool LinearModel::has_integer_vars() const {
  for (const auto& v : vars) {
    if (v.integer) return true;
  }
  return false;
}

void LinearModel::check() const {
  if (objective.size() != vars.size()) {
    throw std::invalid_argument("objective size does not match variable count");
  }
  for (const auto& row : rows) {
    if (!std::isfinite(row.rhs)) {
      throw std::invalid_argument("row " + row.name + " has non-finite rhs");
    }
    for (const auto& [var, coef] : row.coeffs) {
      if (var < 0 || var >= static_cast<int>(vars.size())) {
        throw std::invalid_argument("row " + row.name + " references undeclared variable");
      }
      if (!std::isfinite(coef)) {
        throw std::invalid_argument("row " + row.name + " has non-finite coefficient");
      }
    }
  }
  for (const auto& [var, value] : warm_start) {
    if (var < 0 || var >= static_cast<int>(vars.size())) {
      throw std::invalid_argument("warm start references undeclared variable");
    }
    (void)value;
  }
}

const char* to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::optimal: return "optimal";
    case SolveStatus::feasible_limit: return "feasible-limit";
    case SolveStatus::infeasible: return "infeasible";
    case SolveStatus::unbounded: return "unbounded";
    case SolveStatus::error: return "error";
  }
  return "?";
}

SolveOutcome solve_lp(const LinearModel& model) {
  const auto started = std::chrono::steady_clock::now();
  model.check();

  SolveOutcome out;
  if (model.has_integer_vars()) {
    out.status = SolveStatus::error;
    out.message = "solve_lp called on a model with integer variables";
    return out;
  }

  const detail::LpResult r = detail::simplex_solve(model);
  out.status = r.status;
  out.message = r.message;
  out.primal = r.primal;
  out.objective = r.objective;
  out.bound = r.objective;
  if (r.status == SolveStatus::optimal) {
    out.duals = r.duals;
    out.reduced_costs = r.reduced;
    out.has_duals = true;
  }
  out.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return out;
}

namespace {

std::string lp_name(const std::string& given, const char* prefix, std::size_t index) {
  if (given.empty()) return std::string(prefix) + std::to_string(index);
  std::string s = given;
  for (char& c : s) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.')) c = '_';
  }
  return s;
}

void write_terms(std::ostream& out, const std::vector<std::pair<int, double>>& terms,
                 const LinearModel& model) {
  bool first = true;
  for (const auto& [var, coef] : terms) {
    if (coef == 0.0) continue;
    if (coef < 0) {
      out << (first ? "- " : " - ");
    } else if (!first) {
      out << " + ";
    }
    const double mag = std::abs(coef);
    if (mag != 1.0) out << mag << " ";
    out << lp_name(model.vars[var].name, "x", var);
    first = false;
  }
  if (first) out << "0 " << (model.vars.empty() ? "x0" : lp_name(model.vars[0].name, "x", 0));
}

}  // namespace

void write_lp_text(const LinearModel& model, std::ostream& out) {
  out << (model.sense == ObjSense::maximize ? "Maximize" : "Minimize") << "\n obj: ";
  std::vector<std::pair<int, double>> obj_terms;
  for (std::size_t j = 0; j < model.vars.size(); ++j) {
    if (model.objective[j] != 0.0) obj_terms.push_back({static_cast<int>(j), model.objective[j]});
  }
  write_terms(out, obj_terms, model);
  out << "\nSubject To\n";
  for (std::size_t i = 0; i < model.rows.size(); ++i) {
    const auto& row = model.rows[i];
    out << " " << lp_name(row.name, "r", i) << ": ";
    write_terms(out, row.coeffs, model);
    switch (row.sense) {
      case RowSense::le: out << " <= "; break;
      case RowSense::ge: out << " >= "; break;
      case RowSense::eq: out << " = "; break;
    }
    out << row.rhs << "\n";
  }
  out << "Bounds\n";
  for (std::size_t j = 0; j < model.vars.size(); ++j) {
    const auto& v = model.vars[j];
    const std::string name = lp_name(v.name, "x", j);
    if (!std::isfinite(v.lower) && !std::isfinite(v.upper)) {
      out << " " << name << " free\n";
    } else if (!std::isfinite(v.upper)) {
      out << " " << name << " >= " << v.lower << "\n";
    } else if (!std::isfinite(v.lower)) {
      out << " " << name << " <= " << v.upper << "\n";
    } else {
      out << " " << v.lower << " <= " << name << " <= " << v.upper << "\n";
    }
  }
  bool any_int = false;
  for (std::size_t j = 0; j < model.vars.size(); ++j) {
    if (model.vars[j].integer) {
      if (!any_int) {
        out << "Generals\n";
        any_int = true;
      }
      out << " " << lp_name(model.vars[j].name, "x", j) << "\n";
    }
  }
  out << "End\n";
}

}  // namespace lexrouter
