#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "internal.hpp"
#include "resilience/lp.hpp"

namespace resilience::lp {

int LinearProgram::add_variable(double cost, double lo, double up,
                                bool is_integer, std::string name) {
  objective.push_back(cost);
  lower.push_back(lo);
  upper.push_back(up);
  integer.push_back(is_integer);
  names.push_back(std::move(name));
  return num_variables() - 1;
}

int LinearProgram::add_row(std::vector<double> coefficients, Relation relation,
                           double rhs, std::string name) {
  rows.push_back(Row{std::move(coefficients), relation, rhs, std::move(name)});
  return num_rows() - 1;
}

bool LinearProgram::has_integers() const {
  return std::any_of(integer.begin(), integer.end(), [](bool b) { return b; });
}

void LinearProgram::validate() const {
  const auto n = objective.size();
  if (lower.size() != n || upper.size() != n || integer.size() != n) {
    throw DimensionError("LinearProgram: bound/integrality vectors must match the objective length");
  }
  for (std::size_t j = 0; j < n; ++j) {
    if (!std::isfinite(objective[j])) {
      throw DataError("LinearProgram: non-finite objective coefficient");
    }
    if (std::isnan(lower[j]) || std::isnan(upper[j]) || lower[j] > upper[j] ||
        lower[j] == kInf || upper[j] == -kInf) {
      throw DataError("LinearProgram: invalid bounds on variable " + std::to_string(j));
    }
  }
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& row = rows[i];
    if (row.coefficients.size() > n) {
      throw DimensionError("LinearProgram: row " + std::to_string(i) +
                           " has more coefficients than variables");
    }
    if (!std::isfinite(row.rhs) ||
        !std::all_of(row.coefficients.begin(), row.coefficients.end(),
                     [](double a) { return std::isfinite(a); })) {
      throw DataError("LinearProgram: non-finite data in row " + std::to_string(i));
    }
  }
}

namespace {

enum class Column : std::uint8_t { structural, slack, artificial };

/// Dense LU with partial pivoting, used to recompute the final basic solution
/// and duals from the original data instead of the accumulated tableau.
class DenseLu {
 public:
  explicit DenseLu(std::vector<double> a, int dim) : a_(std::move(a)), n_(dim), perm_(dim) {
    std::iota(perm_.begin(), perm_.end(), 0);
    for (int k = 0; k < n_; ++k) {
      int p = k;
      for (int i = k + 1; i < n_; ++i) {
        if (std::abs(at(i, k)) > std::abs(at(p, k))) p = i;
      }
      if (std::abs(at(p, k)) < 1e-13) {
        ok_ = false;
        return;
      }
      if (p != k) {
        for (int j = 0; j < n_; ++j) std::swap(at(p, j), at(k, j));
        std::swap(perm_[p], perm_[k]);
      }
      for (int i = k + 1; i < n_; ++i) {
        double f = at(i, k) / at(k, k);
        at(i, k) = f;
        if (f == 0.0) continue;
        for (int j = k + 1; j < n_; ++j) at(i, j) -= f * at(k, j);
      }
    }
  }

  [[nodiscard]] bool ok() const { return ok_; }

  // Solves A z = b.
  [[nodiscard]] std::vector<double> solve(const std::vector<double>& b) const {
    std::vector<double> z(n_);
    for (int i = 0; i < n_; ++i) z[i] = b[perm_[i]];
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < i; ++j) z[i] -= at(i, j) * z[j];
    for (int i = n_ - 1; i >= 0; --i) {
      for (int j = i + 1; j < n_; ++j) z[i] -= at(i, j) * z[j];
      z[i] /= at(i, i);
    }
    return z;
  }

  // Solves A^T z = b.
  [[nodiscard]] std::vector<double> solve_transposed(const std::vector<double>& b) const {
    std::vector<double> w(b);
    for (int i = 0; i < n_; ++i) {
      for (int j = 0; j < i; ++j) w[i] -= at(j, i) * w[j];
      w[i] /= at(i, i);
    }
    for (int i = n_ - 1; i >= 0; --i)
      for (int j = i + 1; j < n_; ++j) w[i] -= at(j, i) * w[j];
    std::vector<double> z(n_);
    for (int i = 0; i < n_; ++i) z[perm_[i]] = w[i];
    return z;
  }

 private:
  double& at(int i, int j) { return a_[static_cast<std::size_t>(i) * n_ + j]; }
  [[nodiscard]] double at(int i, int j) const { return a_[static_cast<std::size_t>(i) * n_ + j]; }

  std::vector<double> a_;
  int n_;
  std::vector<int> perm_;
  bool ok_ = true;
};

class Simplex {
 public:
  Simplex(const LinearProgram& lp, std::span<const double> lower,
          std::span<const double> upper, const LpOptions& options)
      : lp_(lp), opt_(options), n_(lp.num_variables()), m_(lp.num_rows()) {
    build(lower, upper);
  }

  LpSolution run() {
    LpSolution sol;
    if (num_artificial_ > 0) {
      std::vector<double> phase1(cols_, 0.0);
      for (int j = first_artificial_; j < cols_; ++j) phase1[j] = 1.0;
      set_costs(phase1);
      phase_one_ = true;
      const Outcome phase1_outcome = iterate();
      phase_one_ = false;
      if (phase1_outcome != Outcome::optimal) {
        throw ConvergenceError("simplex phase 1 reported an unbounded ray");
      }
      double infeasibility = 0.0;
      for (int j = first_artificial_; j < cols_; ++j) infeasibility += value_of(j);
      if (infeasibility > 1e-7 * (1.0 + scale_)) {
        sol.status = LpStatus::infeasible;
        sol.iterations = pivots_;
        sol.nodes = 1;
        return sol;
      }
      retire_artificials();
    }

    std::vector<double> costs(cols_, 0.0);
    const double sign = lp_.sense == Sense::maximize ? -1.0 : 1.0;
    for (int j = 0; j < n_; ++j) costs[j] = sign * lp_.objective[j];
    set_costs(costs);
    const Outcome outcome = iterate();
    sol.iterations = pivots_;
    sol.nodes = 1;
    if (outcome == Outcome::unbounded) {
      sol.status = LpStatus::unbounded;
      sol.ray = ray_;
      sol.x = structural_values();
      return sol;
    }
    sol.status = LpStatus::optimal;
    finish(sol, sign);
    return sol;
  }

 private:
  enum class Outcome { optimal, unbounded };
  enum class State : std::uint8_t { basic, lower, upper, zero };

  double& t(int i, int j) { return tab_[static_cast<std::size_t>(i) * cols_ + j]; }
  [[nodiscard]] double t(int i, int j) const { return tab_[static_cast<std::size_t>(i) * cols_ + j]; }
  [[nodiscard]] double a(int i, int j) const { return a_[static_cast<std::size_t>(i) * n_ + j]; }

  [[nodiscard]] double value_of(int j) const {
    return pos_[j] >= 0 ? beta_[pos_[j]] : value_[j];
  }

  void build(std::span<const double> lower, std::span<const double> upper) {
    std::vector<double> x0(n_);
    for (int j = 0; j < n_; ++j) {
      if (std::isfinite(lower[j])) {
        x0[j] = lower[j];
      } else if (std::isfinite(upper[j])) {
        x0[j] = upper[j];
      } else {
        x0[j] = 0.0;
      }
    }

    // Rows are equilibrated to unit max-norm; duals are scaled back in finish().
    a_.assign(static_cast<std::size_t>(m_) * n_, 0.0);
    rhs_.assign(m_, 0.0);
    row_scale_.assign(m_, 1.0);
    for (int i = 0; i < m_; ++i) {
      const auto& c = lp_.rows[i].coefficients;
      double big = 0.0;
      for (double v : c) big = std::max(big, std::abs(v));
      const double r = big > 0.0 ? 1.0 / big : 1.0;
      row_scale_[i] = r;
      for (std::size_t j = 0; j < c.size(); ++j) a_[i * static_cast<std::size_t>(n_) + j] = c[j] * r;
      rhs_[i] = lp_.rows[i].rhs * r;
    }

    // Residuals decide which rows need an artificial column.
    std::vector<double> slack_value(m_), art_sign(m_, 0.0), art_value(m_, 0.0);
    std::vector<double> slack_lo(m_), slack_up(m_);
    scale_ = 0.0;
    for (int i = 0; i < m_; ++i) {
      const auto& row = lp_.rows[i];
      double act = 0.0;
      for (int j = 0; j < n_; ++j) act += a(i, j) * x0[j];
      scale_ = std::max({scale_, std::abs(rhs_[i]), std::abs(act)});
      switch (row.relation) {
        case Relation::less_equal: slack_lo[i] = 0.0; slack_up[i] = kInf; break;
        case Relation::greater_equal: slack_lo[i] = -kInf; slack_up[i] = 0.0; break;
        case Relation::equal: slack_lo[i] = 0.0; slack_up[i] = 0.0; break;
      }
      const double r = rhs_[i] - act;
      if (r >= slack_lo[i] && r <= slack_up[i]) {
        slack_value[i] = r;
      } else {
        slack_value[i] = r < slack_lo[i] ? slack_lo[i] : slack_up[i];
        const double residual = r - slack_value[i];
        art_sign[i] = residual > 0 ? 1.0 : -1.0;
        art_value[i] = std::abs(residual);
        ++num_artificial_;
      }
    }

    first_artificial_ = n_ + m_;
    cols_ = n_ + m_ + num_artificial_;
    tab_.assign(static_cast<std::size_t>(m_) * cols_, 0.0);
    lo_.assign(cols_, 0.0);
    up_.assign(cols_, 0.0);
    value_.assign(cols_, 0.0);
    state_.assign(cols_, State::lower);
    kind_.assign(cols_, Column::structural);
    pos_.assign(cols_, -1);
    basis_.assign(m_, -1);
    beta_.assign(m_, 0.0);
    art_row_.assign(cols_, -1);
    art_coef_.assign(cols_, 0.0);

    for (int j = 0; j < n_; ++j) {
      lo_[j] = lower[j];
      up_[j] = upper[j];
      value_[j] = x0[j];
      if (std::isfinite(lower[j])) {
        state_[j] = State::lower;
      } else if (std::isfinite(upper[j])) {
        state_[j] = State::upper;
      } else {
        state_[j] = State::zero;
      }
    }

    int next_art = first_artificial_;
    for (int i = 0; i < m_; ++i) {
      for (int j = 0; j < n_; ++j) t(i, j) = a(i, j);
      const int s = n_ + i;
      kind_[s] = Column::slack;
      lo_[s] = slack_lo[i];
      up_[s] = slack_up[i];
      t(i, s) = 1.0;
      if (art_sign[i] == 0.0) {
        make_basic(i, s, slack_value[i]);
      } else {
        value_[s] = slack_value[i];
        state_[s] = slack_value[i] == slack_lo[i] ? State::lower : State::upper;
        const int a = next_art++;
        kind_[a] = Column::artificial;
        lo_[a] = 0.0;
        up_[a] = kInf;
        art_row_[a] = i;
        art_coef_[a] = art_sign[i];
        t(i, a) = art_sign[i];
        // Normalize the row so the basic artificial has a unit coefficient.
        if (art_sign[i] < 0) {
          for (int j = 0; j < cols_; ++j) t(i, j) = -t(i, j);
        }
        make_basic(i, a, art_value[i]);
      }
    }
  }

  void make_basic(int row, int col, double v) {
    basis_[row] = col;
    pos_[col] = row;
    state_[col] = State::basic;
    beta_[row] = v;
  }

  void set_costs(const std::vector<double>& costs) {
    cost_ = costs;
    d_ = costs;
    rejected_.assign(cols_, 0);
    for (int i = 0; i < m_; ++i) {
      const double cb = cost_[basis_[i]];
      if (cb == 0.0) continue;
      for (int j = 0; j < cols_; ++j) d_[j] -= cb * t(i, j);
    }
    for (int i = 0; i < m_; ++i) d_[basis_[i]] = 0.0;
  }

  // Bland's rule: lowest-index improving column.
  bool choose_entering(int& entering, double& dir) const {
    for (int j = 0; j < cols_; ++j) {
      const State s = state_[j];
      if (s == State::basic || lo_[j] == up_[j] || rejected_[j]) continue;
      if ((s == State::lower || s == State::zero) && d_[j] < -opt_.optimality_tol) {
        entering = j;
        dir = 1.0;
        return true;
      }
      if ((s == State::upper || s == State::zero) && d_[j] > opt_.optimality_tol) {
        entering = j;
        dir = -1.0;
        return true;
      }
    }
    return false;
  }

  Outcome iterate() {
    bool fresh = false;  // tableau recomputed since the last pivot
    while (true) {
      if (since_reinvert_ >= std::max(50, m_)) fresh = reinvert();
      int j = -1;
      double dir = 0.0;
      if (!choose_entering(j, dir)) {
        if (fresh || !reinvert()) return Outcome::optimal;
        fresh = true;
        continue;
      }
      if (pivots_ >= opt_.max_pivots) {
        throw ConvergenceError("simplex exceeded " + std::to_string(opt_.max_pivots) +
                               " pivots (numerical stall)");
      }
      ++pivots_;

      double best = kInf;
      int leave = -1;
      bool tiny_block = false;
      ratio_test(j, dir, best, leave, tiny_block);

      const double span = up_[j] - lo_[j];
      const bool flip = std::isfinite(span) && span <= best;
      if (!flip && leave < 0 && !fresh && reinvert()) {
        fresh = true;
        --pivots_;
        continue;
      }
      if (!flip && leave < 0) {
        // A direction blocked only by sub-tolerance entries, or any ray while
        // minimizing artificials, is noise in the reduced cost: skip the column.
        if (tiny_block || phase_one_) {
          rejected_[j] = 1;
          --pivots_;
          continue;
        }
        record_ray(j, dir);
        return Outcome::unbounded;
      }
      std::fill(rejected_.begin(), rejected_.end(), 0);
      fresh = false;
      ++since_reinvert_;
      const double step = flip ? span : best;
      degenerate_run_ = step <= 1e-12 ? degenerate_run_ + 1 : 0;
      for (int i = 0; i < m_; ++i) {
        const double a = t(i, j);
        if (a != 0.0) beta_[i] -= a * dir * step;
      }
      if (flip) {
        state_[j] = dir > 0 ? State::upper : State::lower;
        value_[j] = dir > 0 ? up_[j] : lo_[j];
        continue;
      }
      const double entering_value = value_[j] + dir * step;
      const int k = basis_[leave];
      const double rate = -t(leave, j) * dir;
      state_[k] = rate < 0 ? State::lower : State::upper;
      value_[k] = rate < 0 ? lo_[k] : up_[k];
      pivot(leave, j);
      beta_[leave] = entering_value;
    }
  }

  // Two-pass ratio test. The first pass finds the largest step that keeps
  // every basic variable within a small tolerance of its bounds; the second
  // takes the largest pivot among rows blocking at or below that step. After
  // a long run of degenerate pivots the lowest basic index wins instead, among
  // pivots that are not much smaller than the largest candidate.
  void ratio_test(int j, double dir, double& best, int& leave, bool& tiny_block) const {
    double limit = kInf;
    for (int i = 0; i < m_; ++i) {
      const double a = t(i, j);
      const int k = basis_[i];
      const double rate = -a * dir;
      const double bound = rate < 0 ? lo_[k] : up_[k];
      if (!std::isfinite(bound)) continue;
      if (std::abs(a) <= opt_.pivot_tol) {
        if (a != 0.0) tiny_block = true;
        continue;
      }
      const double slack = rate < 0 ? beta_[i] - lo_[k] : up_[k] - beta_[i];
      const double tol = opt_.feasibility_tol * (1.0 + std::abs(bound));
      limit = std::min(limit, std::max(slack + tol, 0.0) / std::abs(rate));
    }
    if (!std::isfinite(limit)) return;
    double biggest = 0.0;
    for (int i = 0; i < m_; ++i) {
      const double a = t(i, j);
      const int k = basis_[i];
      if (std::abs(a) <= opt_.pivot_tol) continue;
      const double rate = -a * dir;
      const double bound = rate < 0 ? lo_[k] : up_[k];
      if (!std::isfinite(bound)) continue;
      const double slack = rate < 0 ? beta_[i] - lo_[k] : up_[k] - beta_[i];
      if (std::max(slack, 0.0) / std::abs(rate) <= limit) biggest = std::max(biggest, std::abs(a));
    }
    const bool bland = degenerate_run_ > 50;
    double chosen = 0.0;
    for (int i = 0; i < m_; ++i) {
      const double a = t(i, j);
      const int k = basis_[i];
      if (std::abs(a) <= opt_.pivot_tol) continue;
      const double rate = -a * dir;
      const double bound = rate < 0 ? lo_[k] : up_[k];
      if (!std::isfinite(bound)) continue;
      const double slack = rate < 0 ? beta_[i] - lo_[k] : up_[k] - beta_[i];
      const double ratio = std::max(slack, 0.0) / std::abs(rate);
      if (ratio > limit) continue;
      bool take;
      if (bland) {
        take = std::abs(a) >= 1e-2 * biggest && (leave < 0 || k < basis_[leave]);
      } else {
        take = leave < 0 || std::abs(a) > chosen * (1.0 + 1e-12) ||
               (std::abs(a) >= chosen * (1.0 - 1e-12) && k < basis_[leave]);
      }
      if (take) {
        leave = i;
        chosen = std::abs(a);
        best = ratio;
      }
    }
  }

  // Recomputes the tableau, basic values and reduced costs from the original
  // rows and a fresh factorization of the basis. Returns false if singular.
  bool reinvert() {
    since_reinvert_ = 0;
    if (m_ == 0) return false;
    std::vector<double> bmat(static_cast<std::size_t>(m_) * m_);
    std::vector<double> col(m_);
    for (int r = 0; r < m_; ++r) {
      original_column(basis_[r], col);
      for (int i = 0; i < m_; ++i) bmat[static_cast<std::size_t>(i) * m_ + r] = col[i];
    }
    DenseLu lu(std::move(bmat), m_);
    if (!lu.ok()) return false;
    std::vector<double> rhs(rhs_);
    for (int j = 0; j < cols_; ++j) {
      original_column(j, col);
      if (state_[j] != State::basic && value_[j] != 0.0) {
        for (int i = 0; i < m_; ++i) rhs[i] -= col[i] * value_[j];
      }
      const auto z = lu.solve(col);
      for (int i = 0; i < m_; ++i) t(i, j) = z[i];
    }
    beta_ = lu.solve(rhs);
    for (int r = 0; r < m_; ++r) {
      for (int j = 0; j < cols_; ++j) {
        if (std::abs(t(r, j)) < 1e-14) t(r, j) = 0.0;
      }
      t(r, basis_[r]) = 1.0;
    }
    set_costs(cost_);
    return true;
  }

  void pivot(int r, int j) {
    const int k = basis_[r];
    const double p = t(r, j);
    double* prow = &tab_[static_cast<std::size_t>(r) * cols_];
    for (int c = 0; c < cols_; ++c) prow[c] /= p;
    prow[j] = 1.0;
    for (int i = 0; i < m_; ++i) {
      if (i == r) continue;
      double* row = &tab_[static_cast<std::size_t>(i) * cols_];
      const double f = row[j];
      if (f == 0.0) continue;
      for (int c = 0; c < cols_; ++c) row[c] -= f * prow[c];
      row[j] = 0.0;
    }
    const double fd = d_[j];
    if (fd != 0.0) {
      for (int c = 0; c < cols_; ++c) d_[c] -= fd * prow[c];
    }
    d_[j] = 0.0;
    pos_[k] = -1;
    basis_[r] = j;
    pos_[j] = r;
    state_[j] = State::basic;
  }

  void record_ray(int j, double dir) {
    ray_.assign(n_, 0.0);
    if (j < n_) ray_[j] = dir;
    for (int i = 0; i < m_; ++i) {
      const int k = basis_[i];
      if (k < n_) ray_[k] = -t(i, j) * dir;
    }
  }

  // Fixes artificials at zero and pivots them out of the basis where possible.
  void retire_artificials() {
    for (int a = first_artificial_; a < cols_; ++a) {
      up_[a] = 0.0;
      if (pos_[a] < 0) value_[a] = 0.0;
    }
    for (int r = 0; r < m_; ++r) {
      if (kind_[basis_[r]] != Column::artificial) continue;
      int best = -1;
      double mag = 1e-7;
      for (int j = 0; j < first_artificial_; ++j) {
        if (state_[j] == State::basic) continue;
        if (std::abs(t(r, j)) > mag) {
          mag = std::abs(t(r, j));
          best = j;
        }
      }
      if (best < 0) continue;  // redundant row; artificial stays basic at zero
      const int a = basis_[r];
      const double v = value_[best];
      state_[a] = State::lower;
      value_[a] = 0.0;
      pivot(r, best);
      beta_[r] = v;
    }
  }

  [[nodiscard]] std::vector<double> structural_values() const {
    std::vector<double> x(n_);
    for (int j = 0; j < n_; ++j) x[j] = value_of(j);
    return x;
  }

  // Column j of the original constraint matrix [A | I | artificial].
  void original_column(int j, std::vector<double>& col) const {
    std::fill(col.begin(), col.end(), 0.0);
    switch (kind_[j]) {
      case Column::structural:
        for (int i = 0; i < m_; ++i) col[i] = a(i, j);
        break;
      case Column::slack: col[j - n_] = 1.0; break;
      case Column::artificial: col[art_row_[j]] = art_coef_[j]; break;
    }
  }

  void finish(LpSolution& sol, double sign) {
    std::vector<double> pi(m_, 0.0);
    bool refined = false;
    if (m_ > 0) {
      std::vector<double> bmat(static_cast<std::size_t>(m_) * m_);
      std::vector<double> col(m_);
      for (int r = 0; r < m_; ++r) {
        original_column(basis_[r], col);
        for (int i = 0; i < m_; ++i) bmat[static_cast<std::size_t>(i) * m_ + r] = col[i];
      }
      DenseLu lu(std::move(bmat), m_);
      if (lu.ok()) {
        std::vector<double> rhs(m_);
        for (int i = 0; i < m_; ++i) rhs[i] = rhs_[i];
        for (int j = 0; j < cols_; ++j) {
          if (state_[j] == State::basic || value_[j] == 0.0) continue;
          original_column(j, col);
          for (int i = 0; i < m_; ++i) rhs[i] -= col[i] * value_[j];
        }
        const auto xb = lu.solve(rhs);
        std::vector<double> cb(m_);
        for (int r = 0; r < m_; ++r) {
          beta_[r] = xb[r];
          cb[r] = cost_[basis_[r]];
        }
        pi = lu.solve_transposed(cb);
        refined = true;
      }
    }
    if (!refined) {
      // Fall back to the tableau: pi_i = -d(slack_i).
      for (int i = 0; i < m_; ++i) pi[i] = -d_[n_ + i];
    }
    for (int i = 0; i < m_; ++i) pi[i] *= row_scale_[i];

    sol.x = structural_values();
    sol.reduced_costs.assign(n_, 0.0);
    for (int j = 0; j < n_; ++j) {
      double dj = cost_[j];
      for (int i = 0; i < m_; ++i) {
        const auto& c = lp_.rows[i].coefficients;
        if (static_cast<std::size_t>(j) < c.size()) dj -= pi[i] * c[j];
      }
      if (state_[j] == State::basic) dj = 0.0;
      sol.reduced_costs[j] = sign * dj;
    }
    sol.row_duals.resize(m_);
    for (int i = 0; i < m_; ++i) sol.row_duals[i] = sign * pi[i];
    sol.objective = 0.0;
    for (int j = 0; j < n_; ++j) sol.objective += lp_.objective[j] * sol.x[j];
    sol.basis.resize(n_);
    for (int j = 0; j < n_; ++j) {
      switch (state_[j]) {
        case State::basic: sol.basis[j] = VarStatus::basic; break;
        case State::lower: sol.basis[j] = VarStatus::at_lower; break;
        case State::upper: sol.basis[j] = VarStatus::at_upper; break;
        case State::zero: sol.basis[j] = VarStatus::free_zero; break;
      }
    }
  }

  const LinearProgram& lp_;
  LpOptions opt_;
  int n_;
  int m_;
  int cols_ = 0;
  int first_artificial_ = 0;
  int num_artificial_ = 0;
  double scale_ = 0.0;
  std::int64_t pivots_ = 0;
  bool phase_one_ = false;
  std::int64_t degenerate_run_ = 0;
  std::vector<char> rejected_;

  std::vector<double> tab_;
  std::vector<double> a_, rhs_, row_scale_;
  std::int64_t since_reinvert_ = 0;
  std::vector<double> lo_, up_, value_, cost_, d_, beta_;
  std::vector<State> state_;
  std::vector<Column> kind_;
  std::vector<int> pos_, basis_, art_row_;
  std::vector<double> art_coef_;
  std::vector<double> ray_;
};

}  // namespace

namespace detail {

LpSolution solve_relaxation(const LinearProgram& lp, std::span<const double> lower,
                            std::span<const double> upper, const LpOptions& options) {
  for (int j = 0; j < lp.num_variables(); ++j) {
    if (lower[j] > upper[j]) {
      LpSolution sol;
      sol.status = LpStatus::infeasible;
      sol.nodes = 1;
      return sol;
    }
  }
  Simplex simplex(lp, lower, upper, options);
  return simplex.run();
}

}  // namespace detail

LpSolution solve_lp(const LinearProgram& lp, const LpOptions& options) {
  lp.validate();
  if (lp.has_integers()) {
    throw DataError("solve_lp: integrality mask must be all-false; use solve_milp");
  }
  return detail::solve_relaxation(lp, lp.lower, lp.upper, options);
}

double OptimalityReport::duality_gap() const {
  return std::abs(primal_objective - dual_objective);
}

OptimalityReport check_optimality(const LinearProgram& lp, const LpSolution& sol) {
  OptimalityReport rep;
  const int n = lp.num_variables();
  const int m = lp.num_rows();
  if (sol.status != LpStatus::optimal || static_cast<int>(sol.x.size()) != n ||
      static_cast<int>(sol.row_duals.size()) != m ||
      static_cast<int>(sol.reduced_costs.size()) != n) {
    throw DimensionError("check_optimality: solution is not an optimal LP solution for this program");
  }
  const double s = lp.sense == Sense::minimize ? 1.0 : -1.0;
  const auto& x = sol.x;
  double dual_obj = 0.0;

  for (int j = 0; j < n; ++j) {
    rep.primal_objective += lp.objective[j] * x[j];
    rep.primal_infeasibility = std::max({rep.primal_infeasibility, lp.lower[j] - x[j], x[j] - lp.upper[j]});
    const double d = s * sol.reduced_costs[j];
    const double lo_gap = x[j] - lp.lower[j];
    const double up_gap = lp.upper[j] - x[j];
    if (lp.lower[j] != lp.upper[j]) {
      // Sign conditions in minimization form.
      if (!std::isfinite(lp.upper[j]) || up_gap > 1e-9 * (1 + std::abs(x[j])))
        rep.dual_infeasibility = std::max(rep.dual_infeasibility, -d);
      if (!std::isfinite(lp.lower[j]) || lo_gap > 1e-9 * (1 + std::abs(x[j])))
        rep.dual_infeasibility = std::max(rep.dual_infeasibility, d);
    }
    double gap = kInf;
    if (std::isfinite(lp.lower[j])) gap = std::min(gap, std::abs(lo_gap));
    if (std::isfinite(lp.upper[j])) gap = std::min(gap, std::abs(up_gap));
    if (std::isfinite(gap)) rep.complementarity = std::max(rep.complementarity, std::abs(d) * gap);
    double bound;
    if (d > 0) {
      bound = std::isfinite(lp.lower[j]) ? lp.lower[j] : x[j];
    } else if (d < 0) {
      bound = std::isfinite(lp.upper[j]) ? lp.upper[j] : x[j];
    } else {
      bound = 0.0;
    }
    dual_obj += d * bound;
  }
  for (int i = 0; i < m; ++i) {
    const auto& row = lp.rows[i];
    double act = 0.0;
    for (std::size_t j = 0; j < row.coefficients.size(); ++j) act += row.coefficients[j] * x[j];
    const double slack = act - row.rhs;
    const double pi = s * sol.row_duals[i];
    switch (row.relation) {
      case Relation::less_equal:
        rep.primal_infeasibility = std::max(rep.primal_infeasibility, slack);
        rep.dual_infeasibility = std::max(rep.dual_infeasibility, pi);
        break;
      case Relation::greater_equal:
        rep.primal_infeasibility = std::max(rep.primal_infeasibility, -slack);
        rep.dual_infeasibility = std::max(rep.dual_infeasibility, -pi);
        break;
      case Relation::equal:
        rep.primal_infeasibility = std::max(rep.primal_infeasibility, std::abs(slack));
        break;
    }
    rep.complementarity = std::max(rep.complementarity, std::abs(pi * slack));
    dual_obj += pi * row.rhs;
  }
  rep.dual_objective = s * dual_obj;
  return rep;
}

}  // namespace resilience::lp
