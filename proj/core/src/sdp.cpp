#include "qleak/sdp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "qleak/divergences.hpp"
#include "qleak/error.hpp"
#include "qleak/simplex.hpp"

namespace qleak {
namespace {

// Hermitian Y on C^d as d^2 real coordinates: the d diagonal entries, then
// (Re Y_ij, Im Y_ij) for i < j in row-major order.
RVector DominatingCut(const CVector& v) {
  const int d = static_cast<int>(v.size());
  RVector a(d * d);
  for (int i = 0; i < d; ++i) a[i] = std::norm(v[i]);
  int k = d;
  for (int i = 0; i < d; ++i) {
    for (int j = i + 1; j < d; ++j) {
      const Complex z = std::conj(v[i]) * v[j];
      a[k++] = 2.0 * z.real();
      a[k++] = -2.0 * z.imag();
    }
  }
  return a;
}

HermitianOperator OperatorFromCoordinates(const RVector& x, int d) {
  CMatrix y = CMatrix::Zero(d, d);
  for (int i = 0; i < d; ++i) y(i, i) = x[i];
  int k = d;
  for (int i = 0; i < d; ++i) {
    for (int j = i + 1; j < d; ++j) {
      y(i, j) = Complex(x[k], x[k + 1]);
      y(j, i) = std::conj(y(i, j));
      k += 2;
    }
  }
  return HermitianOperator::FromComputed(y);
}

double Quadratic(const CVector& v, const HermitianOperator& h) {
  return (v.adjoint() * h.matrix() * v)(0, 0).real();
}

HermitianOperator Mixture(const std::vector<DensityOperator>& states,
                          const std::vector<double>& c) {
  CMatrix s = CMatrix::Zero(states.front().dim(), states.front().dim());
  for (std::size_t x = 0; x < states.size(); ++x) s += c[x] * states[x].matrix();
  return HermitianOperator::FromComputed(s);
}

// Cut v^H (sum_x c_x rho_x - rho_target) v >= 0 in P1 variables.
RVector BarycentricCut(const std::vector<DensityOperator>& states,
                       const CVector& v) {
  RVector a(states.size());
  for (std::size_t x = 0; x < states.size(); ++x) a[x] = Quadratic(v, states[x]);
  return a;
}

ViolationCertificate WorstOf(const std::vector<DensityOperator>& states,
                             const HermitianOperator& lhs) {
  ViolationCertificate worst;
  worst.min_eigenvalue = std::numeric_limits<double>::infinity();
  for (std::size_t x = 0; x < states.size(); ++x) {
    const Spectrum s = EigHermitian(lhs - states[x].op());
    if (s.min() < worst.min_eigenvalue) {
      worst.constraint = static_cast<int>(x);
      worst.min_eigenvalue = s.min();
      worst.eigenvector = s.eigenvectors.col(0);
    }
  }
  return worst;
}

struct Cut {
  CVector v;
  int target;
};

// The LP is solved with a perturbed right-hand side, so its y is only
// nearly dual feasible. These repair y into an exactly feasible dual point
// of the relaxation and return its objective, a valid lower bound.

// P1 dual: max sum_k b_k y_k  s.t.  sum_k a_k(x) y_k <= 1 for all x, y >= 0.
double BarycentricDualValue(const std::vector<DensityOperator>& states,
                            const std::vector<Cut>& cuts,
                            const std::vector<double>& y) {
  std::vector<double> load(states.size(), 0.0);
  double value = 0.0;
  for (std::size_t k = 0; k < cuts.size(); ++k) {
    const double yk = std::max(y[k], 0.0);
    if (yk == 0.0) continue;
    for (std::size_t x = 0; x < states.size(); ++x) {
      load[x] += yk * Quadratic(cuts[k].v, states[x].op());
    }
    value += yk * Quadratic(cuts[k].v, states[cuts[k].target].op());
  }
  const double worst = *std::max_element(load.begin(), load.end());
  return value / std::max(1.0, worst);
}

// P2 dual: M_x = sum_{k -> x} y_k v_k v_k^H with sum_x M_x = S. Conjugating
// by S^{-1/2} makes the sum exactly I; the value is sum_x tr(rho_x M_x).
struct DominatingDual {
  double value = -std::numeric_limits<double>::infinity();
  std::vector<CMatrix> povm;
};

DominatingDual RepairDominatingDual(const std::vector<DensityOperator>& states,
                                    const std::vector<Cut>& cuts,
                                    const std::vector<double>& y) {
  const int d = states.front().dim();
  CMatrix sum = CMatrix::Zero(d, d);
  for (std::size_t k = 0; k < cuts.size(); ++k) {
    const double yk = std::max(y[k], 0.0);
    if (yk > 0.0) sum += yk * cuts[k].v * cuts[k].v.adjoint();
  }
  DominatingDual out;
  const Spectrum s = EigHermitian(HermitianOperator::FromComputed(sum));
  if (!(s.min() > 0.0)) return out;
  const RVector inv_sqrt = s.eigenvalues.cwiseSqrt().cwiseInverse();
  const CMatrix w = s.eigenvectors * inv_sqrt.asDiagonal() * s.eigenvectors.adjoint();
  out.value = 0.0;
  out.povm.assign(states.size(), CMatrix::Zero(d, d));
  for (std::size_t k = 0; k < cuts.size(); ++k) {
    const double yk = std::max(y[k], 0.0);
    if (yk == 0.0) continue;
    const CVector u = w * cuts[k].v;
    out.value += yk * Quadratic(u, states[cuts[k].target].op());
    out.povm[cuts[k].target] += yk * u * u.adjoint();
  }
  return out;
}

// At an optimal POVM, Y = sum_x rho_x M_x is Hermitian and dominates every
// rho_x; near the optimum its Hermitian part is a good primal guess.
HermitianOperator PovmOperator(const std::vector<DensityOperator>& states,
                               const std::vector<CMatrix>& povm) {
  const int d = states.front().dim();
  CMatrix y = CMatrix::Zero(d, d);
  for (std::size_t x = 0; x < states.size(); ++x) y += states[x].matrix() * povm[x];
  return HermitianOperator::FromComputed(y);
}

struct Restored {
  double objective = std::numeric_limits<double>::infinity();
  SdpPoint point;
};

// Smallest rescaling of c that satisfies every LMI. When the mixture misses
// part of some state's support, blend in a uniform component first.
Restored RestoreBarycentric(const std::vector<DensityOperator>& states,
                            std::vector<double> c) {
  const int m = static_cast<int>(states.size());
  double sum = 0.0;
  for (double& v : c) {
    v = std::max(v, 0.0);
    sum += v;
  }
  if (!(sum > 0.0)) {
    c.assign(m, 1.0);
    sum = m;
  }
  Restored best;
  for (double blend : {0.0, 1e-9, 1e-6, 1e-3, 1.0}) {
    std::vector<double> cb = c;
    for (double& v : cb) v += blend * sum / m;
    const Spectrum s = EigHermitian(Mixture(states, cb));
    double scale = 0.0;
    for (const DensityOperator& rho : states) {
      scale = std::max(scale, MaxRelativeRatio(rho.op(), s));
    }
    if (!std::isfinite(scale)) continue;
    double total = 0.0;
    for (double& v : cb) {
      v *= scale;
      total += v;
    }
    if (total < best.objective) {
      best.objective = total;
      best.point = cb;
    }
    break;
  }
  return best;
}

Restored RestoreDominating(const std::vector<DensityOperator>& states,
                           const HermitianOperator& y) {
  const ViolationCertificate worst = WorstOf(states, y);
  const double shift = std::max(0.0, -worst.min_eigenvalue);
  HermitianOperator fixed = y + HermitianOperator::Identity(y.dim()) * shift;
  Restored r;
  r.objective = fixed.Trace();
  r.point = std::move(fixed);
  return r;
}

constexpr int kPivotsPerRound = 20000;

void CheckOptions(const SdpOptions& o) {
  if (!(o.gap_tol > 0.0 && o.gap_tol <= 1e-2)) {
    std::ostringstream os;
    os << "Solve: gap_tol " << o.gap_tol << " outside (0, 1e-2]";
    throw ValidationError(os.str());
  }
  if (o.max_cuts < 1) throw ValidationError("Solve: max_cuts must be >= 1");
  if (!(o.feas_tol >= 0.0)) throw ValidationError("Solve: feas_tol must be >= 0");
}

}  // namespace

LmiProgram::LmiProgram(LmiForm form, std::vector<DensityOperator> states)
    : form_(form), states_(std::move(states)) {
  if (states_.empty()) throw ValidationError("LmiProgram: no constraint states");
  for (std::size_t x = 1; x < states_.size(); ++x) {
    if (states_[x].dim() != states_[0].dim()) {
      std::ostringstream os;
      os << "LmiProgram: state " << x << " has dimension " << states_[x].dim()
         << ", state 0 has " << states_[0].dim();
      throw DimensionMismatch(os.str());
    }
  }
  if (form_ == LmiForm::kDominatingOperator && dim() * dim() > 4096) {
    throw ValidationError("LmiProgram: dominating-operator form limited to 4096 variables");
  }
}

int LmiProgram::variables() const {
  return form_ == LmiForm::kBarycentricWeights ? size() : dim() * dim();
}

const char* ToString(SdpStatus s) {
  switch (s) {
    case SdpStatus::kOptimal:
      return "optimal";
    case SdpStatus::kIterationCap:
      return "iteration_cap";
    case SdpStatus::kInfeasible:
      return "infeasible";
  }
  return "unknown";
}

double SdpSolution::relative_gap() const {
  return (upper_bound - lower_bound) / std::max(1.0, upper_bound);
}

ViolationCertificate FindViolation(const LmiProgram& program,
                                   const std::vector<double>& weights) {
  if (program.form() != LmiForm::kBarycentricWeights) {
    throw ValidationError("FindViolation: weights given for a dominating-operator program");
  }
  if (static_cast<int>(weights.size()) != program.size()) {
    throw DimensionMismatch("FindViolation: one weight per state expected");
  }
  return WorstOf(program.states(), Mixture(program.states(), weights));
}

ViolationCertificate FindViolation(const LmiProgram& program,
                                   const HermitianOperator& y) {
  if (program.form() != LmiForm::kDominatingOperator) {
    throw ValidationError("FindViolation: operator given for a barycentric program");
  }
  if (y.dim() != program.dim()) {
    throw DimensionMismatch("FindViolation: operator dimension differs from states");
  }
  return WorstOf(program.states(), y);
}

SdpSolution Solve(const LmiProgram& program, const SdpOptions& options) {
  CheckOptions(options);
  const auto& states = program.states();
  const int d = program.dim();
  const int m = program.size();
  const bool barycentric = program.form() == LmiForm::kBarycentricWeights;
  const int n = program.variables();

  // The relaxation  min f^T z  s.t.  A z >= b  is solved through its dual
  // max b^T y  s.t.  A^T y (<= or =) f,  y >= 0,  one column per cut.
  RVector f = RVector::Zero(n);
  if (barycentric) {
    f.setOnes();
  } else {
    f.head(d).setOnes();
  }
  ColumnSimplex lp(f);
  if (barycentric) {
    for (int i = 0; i < n; ++i) lp.AddColumn(RVector::Unit(n, i), 0.0);
  }
  int cuts = 0;
  std::vector<Cut> cut_list;
  auto add_cut = [&](const CVector& v, int target) {
    const RVector a = barycentric ? BarycentricCut(states, v) : DominatingCut(v);
    lp.AddColumn(a, Quadratic(v, states[target].op()));
    cut_list.push_back({v, target});
    ++cuts;
  };
  for (int x = 0; x < m; ++x) {
    const Spectrum s = EigHermitian(states[x].op());
    for (int k = 0; k < d; ++k) add_cut(s.eigenvectors.col(k), x);
  }
  if (!barycentric) {
    // Pairwise directions e_i +- e_j, e_i +- i e_j make the relaxation
    // bounded in every coordinate of Y.
    const double h = std::sqrt(0.5);
    for (int i = 0; i < d; ++i) {
      for (int j = i + 1; j < d; ++j) {
        for (const Complex w : {Complex(1, 0), Complex(-1, 0), Complex(0, 1), Complex(0, -1)}) {
          CVector v = CVector::Zero(d);
          v[i] = h;
          v[j] = h * w;
          int target = 0;
          for (int x = 1; x < m; ++x) {
            if (Quadratic(v, states[x].op()) > Quadratic(v, states[target].op())) target = x;
          }
          add_cut(v, target);
        }
      }
    }
  }
  const int initial_cuts = cuts;

  SdpSolution sol;
  Restored best;
  double lower = -std::numeric_limits<double>::infinity();
  sol.status = SdpStatus::kIterationCap;

  while (true) {
    const LpStatus ls = lp.Solve(kPivotsPerRound);
    // A capped phase-2 basis is still feasible; its point is used as is.
    if (ls != LpStatus::kOptimal && !(ls == LpStatus::kPivotLimit && lp.feasible())) {
      std::ostringstream os;
      os << "Solve: LP relaxation ended with status " << static_cast<int>(ls)
         << " after " << cuts << " cuts";
      throw SolverError(os.str());
    }
    std::vector<double> dual_y = lp.Solution();
    DominatingDual dual;
    if (barycentric) {
      dual_y.erase(dual_y.begin(), dual_y.begin() + n);
      lower = std::max(lower, BarycentricDualValue(states, cut_list, dual_y));
    } else {
      dual = RepairDominatingDual(states, cut_list, dual_y);
      lower = std::max(lower, dual.value);
    }
    const RVector z = lp.Multipliers();

    std::vector<std::pair<int, CVector>> new_cuts;
    Restored candidate;
    if (barycentric) {
      std::vector<double> c(z.data(), z.data() + n);
      for (double& v : c) v = std::max(v, 0.0);
      const HermitianOperator mix = Mixture(states, c);
      for (int x = 0; x < m; ++x) {
        const Spectrum s = EigHermitian(mix - states[x].op());
        if (s.min() < -options.feas_tol * 1e-3) new_cuts.emplace_back(x, s.eigenvectors.col(0));
      }
      candidate = RestoreBarycentric(states, std::move(c));
    } else {
      const HermitianOperator y = OperatorFromCoordinates(z, d);
      for (int x = 0; x < m; ++x) {
        const Spectrum s = EigHermitian(y - states[x].op());
        for (int k = 0; k < d && s.eigenvalues[k] < -options.feas_tol * 1e-3; ++k) {
          new_cuts.emplace_back(x, s.eigenvectors.col(k));
        }
      }
      candidate = RestoreDominating(states, y);
      if (!dual.povm.empty()) {
        Restored alt = RestoreDominating(states, PovmOperator(states, dual.povm));
        if (alt.objective < candidate.objective) candidate = std::move(alt);
      }
    }
    if (candidate.objective < best.objective) best = std::move(candidate);

    sol.history.push_back({lp.Objective(), best.objective, cuts});
    const double gap = (best.objective - lower) / std::max(1.0, best.objective);
    if (gap <= options.gap_tol || new_cuts.empty()) {
      sol.status = gap <= options.gap_tol ? SdpStatus::kOptimal
                                          : SdpStatus::kIterationCap;
      break;
    }
    if (cuts - initial_cuts >= options.max_cuts) break;
    for (const auto& [x, v] : new_cuts) add_cut(v, x);
  }

  sol.upper_bound = best.objective;
  sol.lower_bound = std::min(lower, sol.upper_bound);
  sol.value = sol.upper_bound;
  sol.primal_point = std::move(best.point);
  sol.cut_count = cuts;
  return sol;
}

}  // namespace qleak
