#pragma once

// Dense primal simplex for
//
//     maximize    c^T y
//     subject to  M y = f,  y >= 0,
//
// with a fixed number of rows and a column set that may grow between
// solves. Appending a column keeps the current basis primal feasible, so a
// re-solve after column generation starts from the previous optimum.
//
// Entering variable by the largest positive reduced cost, switching to
// Bland's rule (lowest index) after kStallLimit consecutive pivots whose
// step is below kStepTol; leaving variable by the minimum-ratio test with near-ties broken
// by the largest pivot. Phase I uses one artificial column per row.
//
// The right-hand side is perturbed by a few multiples of kPerturbation
// (relative) so that the heavily degenerate systems met in column
// generation do not stall. Solution() and Objective() therefore refer to the
// perturbed program; callers that need exact feasibility repair y
// themselves. Multipliers() do not depend on the right-hand side.

#include <vector>

#include <Eigen/Dense>

namespace qleak {

enum class LpStatus { kOptimal, kInfeasible, kUnbounded, kPivotLimit };

class ColumnSimplex {
 public:
  // Relative to 1 + |c_j| + |pi|^T |M_j|.
  static constexpr double kEnterTol = 1e-11;
  static constexpr double kPivotTol = 1e-11;
  static constexpr double kRelPivotTol = 1e-9;
  static constexpr double kRatioSlack = 1e-12;
  static constexpr double kPerturbation = 1e-10;
  static constexpr int kStallLimit = 50;
  static constexpr double kStepTol = 1e-14;
  static constexpr int kRefactorEvery = 64;

  explicit ColumnSimplex(const Eigen::VectorXd& rhs);

  int rows() const { return rows_; }
  int columns() const { return static_cast<int>(cols_.size()) - rows_; }

  // Adds a structural column; returns its index among structural columns.
  int AddColumn(const Eigen::VectorXd& column, double cost);

  LpStatus Solve(int max_pivots = 100000);

  // Objective c^T y at the current basis.
  double Objective() const;
  // Simplex multipliers pi with c_j - pi^T M_j <= 0 at optimality; these
  // are the primal variables of the LP whose dual this program is.
  Eigen::VectorXd Multipliers() const;
  // Values of the structural columns.
  std::vector<double> Solution() const;

  int pivots() const { return total_pivots_; }
  // True once phase I has found a feasible basis.
  bool feasible() const { return phase_ == 2; }

 private:
  bool IsArtificial(int j) const { return j < rows_; }
  double Cost(int j) const;
  Eigen::VectorXd PhaseMultipliers() const;
  int ChooseEntering(const Eigen::VectorXd& pi, bool bland) const;
  void Pivot(int leave_row, int enter, const Eigen::VectorXd& d);
  void Refactor();
  LpStatus Run(int max_pivots);
  void DriveOutArtificials();

  int rows_;
  Eigen::VectorXd rhs_;        // sign-normalised, >= 0
  Eigen::VectorXd row_sign_;   // +1 or -1 per original row
  std::vector<Eigen::VectorXd> cols_;  // sign-normalised; artificials first
  std::vector<double> cost_;
  std::vector<int> basis_;
  std::vector<char> in_basis_;
  Eigen::MatrixXd binv_;
  Eigen::VectorXd xb_;
  int phase_ = 1;
  int since_refactor_ = 0;
  int total_pivots_ = 0;
};

}  // namespace qleak
