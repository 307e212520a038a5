#include "qleak/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "qleak/error.hpp"

namespace qleak {

ColumnSimplex::ColumnSimplex(const Eigen::VectorXd& rhs)
    : rows_(static_cast<int>(rhs.size())),
      rhs_(rhs.cwiseAbs()),
      row_sign_(rhs.size()) {
  if (rows_ < 1) throw ValidationError("ColumnSimplex: no rows");
  for (int i = 0; i < rows_; ++i) {
    row_sign_[i] = rhs[i] < 0 ? -1.0 : 1.0;
    cols_.push_back(Eigen::VectorXd::Unit(rows_, i));
    cost_.push_back(0.0);
    basis_.push_back(i);
    in_basis_.push_back(1);
  }
  const double scale = std::max(1.0, rhs_.lpNorm<Eigen::Infinity>());
  std::mt19937_64 rng(0x5eed);
  std::uniform_real_distribution<double> unit(1.0, 2.0);
  for (int i = 0; i < rows_; ++i) rhs_[i] += kPerturbation * scale * unit(rng);
  binv_ = Eigen::MatrixXd::Identity(rows_, rows_);
  xb_ = rhs_;
}

int ColumnSimplex::AddColumn(const Eigen::VectorXd& column, double cost) {
  if (column.size() != rows_) {
    throw DimensionMismatch("ColumnSimplex::AddColumn: wrong column length");
  }
  cols_.push_back(column.cwiseProduct(row_sign_));
  cost_.push_back(cost);
  in_basis_.push_back(0);
  if (phase_ == 2) {
    const int j = static_cast<int>(cols_.size()) - 1;
    Eigen::VectorXd d;
    for (int r = 0; r < rows_; ++r) {
      if (!IsArtificial(basis_[r])) continue;
      if (d.size() == 0) d = binv_ * cols_[j];
      if (std::abs(d[r]) > 1e-9) {
        Pivot(r, j, d);
        break;
      }
    }
  }
  return columns() - 1;
}

double ColumnSimplex::Cost(int j) const {
  if (phase_ == 1) return IsArtificial(j) ? -1.0 : 0.0;
  return IsArtificial(j) ? 0.0 : cost_[j];
}

Eigen::VectorXd ColumnSimplex::PhaseMultipliers() const {
  Eigen::VectorXd cb(rows_);
  for (int i = 0; i < rows_; ++i) cb[i] = Cost(basis_[i]);
  return binv_.transpose() * cb;
}

int ColumnSimplex::ChooseEntering(const Eigen::VectorXd& pi, bool bland) const {
  const int n = static_cast<int>(cols_.size());
  int best = -1;
  double best_reduced = 0.0;
  for (int j = 0; j < n; ++j) {
    if (in_basis_[j]) continue;
    if (phase_ == 2 && IsArtificial(j)) continue;
    const double reduced = Cost(j) - pi.dot(cols_[j]);
    const double scale = 1.0 + std::abs(Cost(j)) + pi.cwiseAbs().dot(cols_[j].cwiseAbs());
    if (reduced <= kEnterTol * scale) continue;
    if (bland) return j;
    if (reduced > best_reduced) {
      best_reduced = reduced;
      best = j;
    }
  }
  return best;
}

void ColumnSimplex::Pivot(int leave_row, int enter, const Eigen::VectorXd& d) {
  const double dr = d[leave_row];
  binv_.row(leave_row) /= dr;
  xb_[leave_row] /= dr;
  for (int i = 0; i < rows_; ++i) {
    if (i == leave_row || d[i] == 0.0) continue;
    binv_.row(i) -= d[i] * binv_.row(leave_row);
    xb_[i] -= d[i] * xb_[leave_row];
  }
  in_basis_[basis_[leave_row]] = 0;
  basis_[leave_row] = enter;
  in_basis_[enter] = 1;
  ++total_pivots_;
  if (++since_refactor_ >= kRefactorEvery) Refactor();
}

void ColumnSimplex::Refactor() {
  Eigen::MatrixXd b(rows_, rows_);
  for (int i = 0; i < rows_; ++i) b.col(i) = cols_[basis_[i]];
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(b);
  binv_ = lu.inverse();
  xb_ = binv_ * rhs_;
  for (int i = 0; i < rows_; ++i) {
    if (xb_[i] < 0.0 && xb_[i] > -1e-12) xb_[i] = 0.0;
  }
  since_refactor_ = 0;
}

// Replaces basic artificials (at level zero after phase I) by any column
// with a nonzero entry in their row; such a pivot is degenerate.
void ColumnSimplex::DriveOutArtificials() {
  for (int r = 0; r < rows_; ++r) {
    if (!IsArtificial(basis_[r])) continue;
    const int n = static_cast<int>(cols_.size());
    for (int j = rows_; j < n; ++j) {
      if (in_basis_[j]) continue;
      const Eigen::VectorXd d = binv_ * cols_[j];
      if (std::abs(d[r]) > 1e-9) {
        Pivot(r, j, d);
        break;
      }
    }
  }
}

LpStatus ColumnSimplex::Run(int max_pivots) {
  int stalled = 0;
  for (int iter = 0; iter < max_pivots; ++iter) {
    const Eigen::VectorXd pi = PhaseMultipliers();
    const int enter = ChooseEntering(pi, stalled >= kStallLimit);
    if (enter < 0) return LpStatus::kOptimal;
    const Eigen::VectorXd d = binv_ * cols_[enter];

    const double tol = std::max(kPivotTol, kRelPivotTol * d.cwiseAbs().maxCoeff());
    int leave = -1;
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < rows_; ++i) {
      if (phase_ == 2 && IsArtificial(basis_[i]) && std::abs(d[i]) > tol) {
        leave = i;
        best = 0.0;
        break;
      }
      if (d[i] <= tol) continue;
      best = std::min(best, std::max(xb_[i], 0.0) / d[i]);
    }
    // Among rows within a hair of the minimum ratio, prefer the largest pivot.
    if (leave < 0 && std::isfinite(best)) {
      double largest = 0.0;
      for (int i = 0; i < rows_; ++i) {
        if (d[i] <= tol) continue;
        const double ratio = std::max(xb_[i], 0.0) / d[i];
        if (ratio <= best + kRatioSlack && d[i] > largest) {
          largest = d[i];
          leave = i;
        }
      }
    }
    if (leave < 0 && since_refactor_ > 0) {
      Refactor();
      continue;
    }
    if (leave < 0) {
      return LpStatus::kUnbounded;
    }
    stalled = xb_[leave] / d[leave] > kStepTol ? 0 : stalled + 1;
    Pivot(leave, enter, d);
  }
  return LpStatus::kPivotLimit;
}

LpStatus ColumnSimplex::Solve(int max_pivots) {
  if (phase_ == 1) {
    const LpStatus s = Run(max_pivots);
    if (s != LpStatus::kOptimal) return s;
    double infeasibility = 0.0;
    for (int i = 0; i < rows_; ++i) {
      if (IsArtificial(basis_[i])) infeasibility += std::max(xb_[i], 0.0);
    }
    if (infeasibility > 1e-9 * std::max(1.0, rhs_.lpNorm<1>())) {
      return LpStatus::kInfeasible;
    }
    phase_ = 2;
    DriveOutArtificials();
  }
  return Run(max_pivots);
}

double ColumnSimplex::Objective() const {
  double v = 0.0;
  for (int i = 0; i < rows_; ++i) {
    if (!IsArtificial(basis_[i])) v += cost_[basis_[i]] * xb_[i];
  }
  return v;
}

Eigen::VectorXd ColumnSimplex::Multipliers() const {
  Eigen::VectorXd cb(rows_);
  for (int i = 0; i < rows_; ++i) {
    cb[i] = IsArtificial(basis_[i]) ? 0.0 : cost_[basis_[i]];
  }
  Eigen::VectorXd pi = binv_.transpose() * cb;
  return pi.cwiseProduct(row_sign_);
}

std::vector<double> ColumnSimplex::Solution() const {
  std::vector<double> y(columns(), 0.0);
  for (int i = 0; i < rows_; ++i) {
    if (!IsArtificial(basis_[i])) y[basis_[i] - rows_] = xb_[i];
  }
  return y;
}

}  // namespace qleak
