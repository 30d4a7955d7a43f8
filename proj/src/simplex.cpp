#include <algorithm>
#include <cmath>
#include <cstdint>

#include "simplex_internal.hpp"

namespace lexrouter::detail {

namespace {

constexpr double kFeasTol = 1e-7;
constexpr double kRcTol = 1e-7;
constexpr double kPivotTol = 1e-9;
constexpr double kDegenerateStep = 1e-11;

enum class VarState : std::uint8_t { basic, at_lower, at_upper, free_zero };

class Simplex {
 public:
  Simplex(const LinearModel& model, const std::vector<double>* lo_ovr,
          const std::vector<double>* hi_ovr)
      : model_(model), n_(static_cast<int>(model.vars.size())),
        m_(static_cast<int>(model.rows.size())) {
    maximize_ = model.sense == ObjSense::maximize;
    cols_.resize(n_ + m_);
    lo_.resize(n_ + m_);
    hi_.resize(n_ + m_);
    cost_.assign(n_ + m_, 0.0);
    for (int j = 0; j < n_; ++j) {
      lo_[j] = lo_ovr ? (*lo_ovr)[j] : model.vars[j].lower;
      hi_[j] = hi_ovr ? (*hi_ovr)[j] : model.vars[j].upper;
      cost_[j] = maximize_ ? model.objective[j] : -model.objective[j];
    }
    for (int i = 0; i < m_; ++i) {
      for (const auto& [var, coef] : model.rows[i].coeffs) {
        if (coef != 0.0) cols_[var].push_back({i, coef});
      }
      const int slack = n_ + i;
      cols_[slack].push_back({i, 1.0});
      switch (model.rows[i].sense) {
        case RowSense::le: lo_[slack] = 0.0; hi_[slack] = kLpInfinity; break;
        case RowSense::ge: lo_[slack] = -kLpInfinity; hi_[slack] = 0.0; break;
        case RowSense::eq: lo_[slack] = 0.0; hi_[slack] = 0.0; break;
      }
      rhs_.push_back(model.rows[i].rhs);
    }
  }

  LpResult run() {
    LpResult out;
    for (int j = 0; j < n_ + m_; ++j) {
      if (lo_[j] > hi_[j] + kFeasTol) {
        out.status = SolveStatus::infeasible;
        out.message = "contradictory bounds";
        return out;
      }
      if (lo_[j] > hi_[j]) hi_[j] = lo_[j];
    }

    init_start_point();
    if (need_phase1_) {
      phase1_ = true;
      const SolveStatus st = iterate(phase1_cost_);
      phase1_ = false;
      if (st != SolveStatus::optimal) {
        out.status = st == SolveStatus::unbounded ? SolveStatus::error : st;
        out.message = st == SolveStatus::unbounded ? "phase-1 unbounded" : message_;
        return out;
      }
      double infeasibility = 0.0;
      for (int i = 0; i < m_; ++i) {
        if (basis_[i] >= n_ + m_) infeasibility += std::abs(xb_[i]);
      }
      for (int j = n_ + m_; j < total_; ++j) {
        if (state_[j] != VarState::basic && xval_[j] != 0.0) infeasibility += std::abs(xval_[j]);
      }
      if (infeasibility > kFeasTol * 10 * (1 + rhs_scale_)) {
        out.status = SolveStatus::infeasible;
        return out;
      }
      lock_artificials();
    }

    const SolveStatus st = iterate(cost_);
    if (st != SolveStatus::optimal) {
      out.status = st;
      out.message = message_;
      return out;
    }

    out.status = SolveStatus::optimal;
    out.primal.resize(n_);
    for (int j = 0; j < n_; ++j) out.primal[j] = value_of(j);
    double obj = 0.0;
    for (int j = 0; j < n_; ++j) obj += cost_[j] * out.primal[j];
    out.objective = maximize_ ? obj : -obj;

    compute_duals(cost_);
    out.duals.resize(m_);
    out.reduced.resize(n_);
    for (int i = 0; i < m_; ++i) out.duals[i] = maximize_ ? y_[i] : -y_[i];
    for (int j = 0; j < n_; ++j) {
      const double d = state_[j] == VarState::basic ? 0.0 : reduced_cost(j, cost_);
      out.reduced[j] = maximize_ ? d : -d;
    }
    return out;
  }

 private:
  double value_of(int j) const {
    if (state_[j] == VarState::basic) return xb_[basis_row_[j]];
    return xval_[j];
  }

  void init_start_point() {
    total_ = n_ + m_;
    state_.assign(total_, VarState::at_lower);
    xval_.assign(total_, 0.0);
    for (int j = 0; j < total_; ++j) {
      if (std::isfinite(lo_[j])) {
        state_[j] = VarState::at_lower;
        xval_[j] = lo_[j];
      } else if (std::isfinite(hi_[j])) {
        state_[j] = VarState::at_upper;
        xval_[j] = hi_[j];
      } else {
        state_[j] = VarState::free_zero;
        xval_[j] = 0.0;
      }
    }

    rhs_scale_ = 0.0;
    for (double b : rhs_) rhs_scale_ = std::max(rhs_scale_, std::abs(b));

    // Residuals with every variable parked at its start value; slacks were
    // parked too, so add them back when deciding who starts basic.
    std::vector<double> residual = rhs_;
    for (int j = 0; j < n_; ++j) {
      if (xval_[j] != 0.0) {
        for (const auto& [row, coef] : cols_[j]) residual[row] -= coef * xval_[j];
      }
    }

    basis_.assign(m_, -1);
    basis_row_.assign(total_, -1);
    xb_.assign(m_, 0.0);
    need_phase1_ = false;

    for (int i = 0; i < m_; ++i) {
      const int slack = n_ + i;
      const double r = residual[i];
      if (r >= lo_[slack] - kFeasTol && r <= hi_[slack] + kFeasTol) {
        set_basic(slack, i, std::clamp(r, lo_[slack], hi_[slack]));
      } else {
        // Slack takes its nearest bound; an artificial absorbs the rest.
        const double sv = std::clamp(r, lo_[slack], hi_[slack]);
        xval_[slack] = sv;
        state_[slack] = sv == lo_[slack] ? VarState::at_lower : VarState::at_upper;
        const double leftover = r - sv;
        const int art = total_++;
        cols_.push_back({{i, leftover >= 0 ? 1.0 : -1.0}});
        lo_.push_back(0.0);
        hi_.push_back(kLpInfinity);
        cost_.push_back(0.0);
        state_.push_back(VarState::basic);
        xval_.push_back(0.0);
        basis_row_.push_back(-1);
        set_basic(art, i, std::abs(leftover));
        need_phase1_ = true;
      }
    }
    if (need_phase1_) {
      phase1_cost_.assign(total_, 0.0);
      for (int j = n_ + m_; j < total_; ++j) phase1_cost_[j] = -1.0;
    }

    binv_.assign(static_cast<std::size_t>(m_) * m_, 0.0);
    for (int i = 0; i < m_; ++i) binv_[static_cast<std::size_t>(i) * m_ + i] = 1.0;
    // Basis columns are slacks (identity) or +-1 artificials; flip rows held
    // by a -1 artificial so binv really inverts the start basis.
    for (int i = 0; i < m_; ++i) {
      const int bj = basis_[i];
      if (bj >= n_ + m_ && cols_[bj].front().second < 0) {
        for (int k = 0; k < m_; ++k) binv_[static_cast<std::size_t>(i) * m_ + k] *= -1.0;
      }
    }
  }

  void set_basic(int j, int row, double value) {
    basis_[row] = j;
    basis_row_[j] = row;
    state_[j] = VarState::basic;
    xb_[row] = value;
  }

  void compute_duals(const std::vector<double>& c) {
    y_.assign(m_, 0.0);
    for (int i = 0; i < m_; ++i) {
      const double cb = c[basis_[i]];
      if (cb == 0.0) continue;
      const double* row = binv_.data() + static_cast<std::size_t>(i) * m_;
      for (int k = 0; k < m_; ++k) y_[k] += cb * row[k];
    }
  }

  double reduced_cost(int j, const std::vector<double>& c) const {
    double d = c[j];
    for (const auto& [row, coef] : cols_[j]) d -= y_[row] * coef;
    return d;
  }

  SolveStatus iterate(const std::vector<double>& c) {
    const int max_iterations = 20000 + 200 * (n_ + m_);
    int degenerate_streak = 0;
    bool bland = false;
    int since_refactor = 0;

    for (int iter = 0; iter < max_iterations; ++iter) {
      compute_duals(c);

      int entering = -1;
      double best = kRcTol;
      int dir = +1;
      for (int j = 0; j < total_; ++j) {
        if (state_[j] == VarState::basic) continue;
        if (!phase1_ && j >= n_ + m_) continue;  // locked artificial
        if (lo_[j] == hi_[j]) continue;          // fixed
        const double d = reduced_cost(j, c);
        double score = 0.0;
        int jdir = 0;
        if (state_[j] == VarState::at_lower && d > kRcTol) {
          score = d;
          jdir = +1;
        } else if (state_[j] == VarState::at_upper && d < -kRcTol) {
          score = -d;
          jdir = -1;
        } else if (state_[j] == VarState::free_zero && std::abs(d) > kRcTol) {
          score = std::abs(d);
          jdir = d > 0 ? +1 : -1;
        }
        if (jdir == 0) continue;
        if (bland) {
          entering = j;
          dir = jdir;
          break;
        }
        if (score > best) {
          best = score;
          entering = j;
          dir = jdir;
        }
      }
      if (entering < 0) return SolveStatus::optimal;

      // Direction of basic values as the entering variable moves by +1*dir.
      std::vector<double> w(m_, 0.0);
      for (const auto& [row, coef] : cols_[entering]) {
        const double* brow = nullptr;
        for (int i = 0; i < m_; ++i) {
          brow = binv_.data() + static_cast<std::size_t>(i) * m_;
          w[i] += brow[row] * coef;
        }
      }

      double step = kLpInfinity;
      if (std::isfinite(lo_[entering]) && std::isfinite(hi_[entering])) {
        step = hi_[entering] - lo_[entering];
      }
      int leave_row = -1;
      bool leave_to_lower = true;
      for (int i = 0; i < m_; ++i) {
        const double delta = w[i] * dir;
        double candidate = kLpInfinity;
        bool to_lower = true;
        if (delta > kPivotTol) {
          if (std::isfinite(lo_[basis_[i]])) {
            candidate = (xb_[i] - lo_[basis_[i]]) / delta;
            to_lower = true;
          }
        } else if (delta < -kPivotTol) {
          if (std::isfinite(hi_[basis_[i]])) {
            candidate = (hi_[basis_[i]] - xb_[i]) / (-delta);
            to_lower = false;
          }
        } else {
          continue;
        }
        if (candidate < 0.0) candidate = 0.0;
        const bool better =
            candidate < step - 1e-12 ||
            (candidate < step + 1e-12 && leave_row >= 0 &&
             (bland ? basis_[i] < basis_[leave_row]
                    : std::abs(w[i]) > std::abs(w[leave_row])));
        if (leave_row < 0 ? candidate < step - 1e-12 : better) {
          step = candidate;
          leave_row = i;
          leave_to_lower = to_lower;
        }
      }

      if (!std::isfinite(step)) return SolveStatus::unbounded;

      if (leave_row < 0) {
        // Bound flip: the entering variable crosses to its other bound.
        for (int i = 0; i < m_; ++i) xb_[i] -= w[i] * dir * step;
        if (state_[entering] == VarState::at_lower) {
          state_[entering] = VarState::at_upper;
          xval_[entering] = hi_[entering];
        } else {
          state_[entering] = VarState::at_lower;
          xval_[entering] = lo_[entering];
        }
        continue;
      }

      // Pivot.
      const double entering_value = xval_[entering] + dir * step;
      const int leaving = basis_[leave_row];
      for (int i = 0; i < m_; ++i) {
        if (i != leave_row) xb_[i] -= w[i] * dir * step;
      }
      state_[leaving] = leave_to_lower ? VarState::at_lower : VarState::at_upper;
      xval_[leaving] = leave_to_lower ? lo_[leaving] : hi_[leaving];
      basis_row_[leaving] = -1;
      set_basic(entering, leave_row, entering_value);

      const double pivot = w[leave_row];
      double* prow = binv_.data() + static_cast<std::size_t>(leave_row) * m_;
      for (int k = 0; k < m_; ++k) prow[k] /= pivot;
      for (int i = 0; i < m_; ++i) {
        if (i == leave_row || w[i] == 0.0) continue;
        double* irow = binv_.data() + static_cast<std::size_t>(i) * m_;
        const double f = w[i];
        for (int k = 0; k < m_; ++k) irow[k] -= f * prow[k];
      }

      if (step <= kDegenerateStep) {
        if (++degenerate_streak > 2 * (n_ + m_) + 64) bland = true;
      } else {
        degenerate_streak = 0;
        bland = false;
      }
      if (++since_refactor >= 512) {
        if (!refactor()) {
          message_ = "basis refactorization failed";
          return SolveStatus::error;
        }
        since_refactor = 0;
      }
    }
    message_ = "simplex iteration limit";
    return SolveStatus::error;
  }

  bool refactor() {
    // Gauss-Jordan inverse of the basis matrix, then recompute basic values.
    std::vector<double> a(static_cast<std::size_t>(m_) * 2 * m_, 0.0);
    const int stride = 2 * m_;
    for (int i = 0; i < m_; ++i) {
      for (const auto& [row, coef] : cols_[basis_[i]]) {
        a[static_cast<std::size_t>(row) * stride + i] = coef;
      }
      a[static_cast<std::size_t>(i) * stride + m_ + i] = 1.0;
    }
    for (int col = 0; col < m_; ++col) {
      int piv = -1;
      double best = 1e-12;
      for (int r = col; r < m_; ++r) {
        const double v = std::abs(a[static_cast<std::size_t>(r) * stride + col]);
        if (v > best) {
          best = v;
          piv = r;
        }
      }
      if (piv < 0) return false;
      if (piv != col) {
        for (int k = 0; k < stride; ++k) {
          std::swap(a[static_cast<std::size_t>(piv) * stride + k],
                    a[static_cast<std::size_t>(col) * stride + k]);
        }
      }
      const double p = a[static_cast<std::size_t>(col) * stride + col];
      for (int k = 0; k < stride; ++k) a[static_cast<std::size_t>(col) * stride + k] /= p;
      for (int r = 0; r < m_; ++r) {
        if (r == col) continue;
        const double f = a[static_cast<std::size_t>(r) * stride + col];
        if (f == 0.0) continue;
        for (int k = 0; k < stride; ++k) {
          a[static_cast<std::size_t>(r) * stride + k] -=
              f * a[static_cast<std::size_t>(col) * stride + k];
        }
      }
    }
    for (int i = 0; i < m_; ++i) {
      for (int k = 0; k < m_; ++k) {
        binv_[static_cast<std::size_t>(i) * m_ + k] =
            a[static_cast<std::size_t>(i) * stride + m_ + k];
      }
    }
    std::vector<double> residual = rhs_;
    for (int j = 0; j < total_; ++j) {
      if (state_[j] == VarState::basic || xval_[j] == 0.0) continue;
      for (const auto& [row, coef] : cols_[j]) residual[row] -= coef * xval_[j];
    }
    for (int i = 0; i < m_; ++i) {
      double v = 0.0;
      const double* row = binv_.data() + static_cast<std::size_t>(i) * m_;
      for (int k = 0; k < m_; ++k) v += row[k] * residual[k];
      xb_[i] = v;
    }
    return true;
  }

  void lock_artificials() {
    for (int j = n_ + m_; j < total_; ++j) {
      lo_[j] = 0.0;
      hi_[j] = 0.0;
      if (state_[j] != VarState::basic) {
        state_[j] = VarState::at_lower;
        xval_[j] = 0.0;
      }
    }
    // Pivot zero-valued basic artificials out where a usable column exists;
    // rows with none are redundant and keep the locked artificial.
    compute_duals(cost_);
    for (int i = 0; i < m_; ++i) {
      if (basis_[i] < n_ + m_) continue;
      for (int j = 0; j < n_ + m_; ++j) {
        if (state_[j] == VarState::basic || lo_[j] == hi_[j]) continue;
        double wij = 0.0;
        const double* row = binv_.data() + static_cast<std::size_t>(i) * m_;
        for (const auto& [r, coef] : cols_[j]) wij += row[r] * coef;
        if (std::abs(wij) > 1e-7) {
          pivot_in_place(j, i, wij);
          break;
        }
      }
    }
  }

  void pivot_in_place(int entering, int leave_row, double w_r) {
    // Degenerate swap used only while cleaning phase-1 artificials: both the
    // leaving artificial and the entering variable sit at value 0.
    std::vector<double> w(m_, 0.0);
    for (const auto& [row, coef] : cols_[entering]) {
      for (int i = 0; i < m_; ++i) {
        w[i] += binv_[static_cast<std::size_t>(i) * m_ + row] * coef;
      }
    }
    const int leaving = basis_[leave_row];
    state_[leaving] = VarState::at_lower;
    xval_[leaving] = 0.0;
    basis_row_[leaving] = -1;
    const double entering_value = xval_[entering];
    set_basic(entering, leave_row, entering_value);
    double* prow = binv_.data() + static_cast<std::size_t>(leave_row) * m_;
    for (int k = 0; k < m_; ++k) prow[k] /= w_r;
    for (int i = 0; i < m_; ++i) {
      if (i == leave_row || w[i] == 0.0) continue;
      double* irow = binv_.data() + static_cast<std::size_t>(i) * m_;
      const double f = w[i];
      for (int k = 0; k < m_; ++k) irow[k] -= f * prow[k];
    }
  }

  const LinearModel& model_;
  int n_ = 0;
  int m_ = 0;
  int total_ = 0;
  bool maximize_ = true;
  bool need_phase1_ = false;
  bool phase1_ = false;
  double rhs_scale_ = 0.0;
  std::string message_;

  std::vector<std::vector<std::pair<int, double>>> cols_;
  std::vector<double> lo_, hi_, cost_, phase1_cost_, rhs_;
  std::vector<VarState> state_;
  std::vector<double> xval_;
  std::vector<int> basis_;       // variable per row
  std::vector<int> basis_row_;   // row per variable, -1 if nonbasic
  std::vector<double> xb_;       // basic values per row
  std::vector<double> binv_;     // dense m x m
  std::vector<double> y_;        // duals for the current cost vector
};

}  // namespace

LpResult simplex_solve(const LinearModel& model, const std::vector<double>* lower_override,
                       const std::vector<double>* upper_override) {
  Simplex solver(model, lower_override, upper_override);
  return solver.run();
}

}  // namespace lexrouter::detail
