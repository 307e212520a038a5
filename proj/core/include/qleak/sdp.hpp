#pragma once

// Certified cutting-plane solver for the two linear-matrix-inequality
// programs behind the leakage measures.
//
//   Barycentric weights (P1):
//       min  sum_x c_x   s.t.  c >= 0,  sum_x c_x rho_x >= rho_x'  for all x'.
//   With mu = sum c and pi = c / mu this is exactly
//       min mu  s.t.  rho_x' <= mu sum_x pi(x) rho_x,
//   since every rho_x has unit trace.
//
//   Dominating operator (P2):
//       min  tr Y   s.t.  Y >= rho_x  for all x,  Y Hermitian.
//   Its optimum is 2^{I~_inf(X;A)} of the classical-quantum state: the
//   constraint rho_XA <= mu rho_X (x) sigma splits into the diagonal blocks
//   rho_x <= mu sigma (prior weights cancel), and Y = mu sigma.
//
// Each LMI  L(z) >= 0  is relaxed by linear cuts  v^H L(z) v >= 0  taken at
// the eigenvector of the most negative eigenvalue; the relaxation is an LP
// whose value is a lower bound. The LP point is then made exactly feasible
// (P1: rescaled by the smallest factor that satisfies every LMI; P2: shifted
// by the smallest multiple of the identity), which gives the upper bound.

#include <variant>
#include <vector>

#include "qleak/hermitian.hpp"

namespace qleak {

enum class LmiForm { kBarycentricWeights, kDominatingOperator };

class LmiProgram {
 public:
  // Throws ValidationError on an empty state list or mixed dimensions.
  LmiProgram(LmiForm form, std::vector<DensityOperator> states);

  LmiForm form() const { return form_; }
  const std::vector<DensityOperator>& states() const { return states_; }
  int dim() const { return states_.front().dim(); }
  int size() const { return static_cast<int>(states_.size()); }
  // Number of LP variables: |states| for P1, dim^2 for P2.
  int variables() const;

 private:
  LmiForm form_;
  std::vector<DensityOperator> states_;
};

enum class SdpStatus { kOptimal, kIterationCap, kInfeasible };

const char* ToString(SdpStatus s);

struct SdpOptions {
  double gap_tol = 1e-6;   // relative, (upper - lower) / max(1, upper)
  int max_cuts = 2000;     // cuts generated after the initial eigenvector cuts
  double feas_tol = 1e-9;  // LMI min eigenvalue accepted as feasible
};

struct SdpIterate {
  double lp_value;     // relaxation value at this round
  double best_upper;   // best certified feasible objective so far
  int cuts;            // cuts in the relaxation
};

using SdpPoint = std::variant<std::vector<double>, HermitianOperator>;

struct SdpSolution {
  double value = 0.0;        // objective of the certified feasible point
  SdpPoint primal_point;     // weights c (P1) or operator Y (P2), feasible
  double lower_bound = 0.0;
  double upper_bound = 0.0;
  SdpStatus status = SdpStatus::kIterationCap;
  int cut_count = 0;
  std::vector<SdpIterate> history;

  double relative_gap() const;
};

struct ViolationCertificate {
  int constraint = -1;          // index x' of the worst LMI
  double min_eigenvalue = 0.0;  // >= -feas_tol certifies feasibility
  CVector eigenvector;
};

// Worst LMI at a P1 point (weights c, one per state).
ViolationCertificate FindViolation(const LmiProgram& program,
                                   const std::vector<double>& weights);
// Worst LMI at a P2 point.
ViolationCertificate FindViolation(const LmiProgram& program,
                                   const HermitianOperator& y);

// Throws ValidationError unless 0 < gap_tol <= 1e-2 and max_cuts >= 1.
SdpSolution Solve(const LmiProgram& program, const SdpOptions& options = {});

}  // namespace qleak
