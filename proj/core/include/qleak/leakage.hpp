#pragma once

// Leakage measures of a classical-quantum ensemble {p(x), rho_x}, all in
// bits:
//
//   Q   maximal leakage, sup over POVMs of log2 sum_y max_x tr(rho_x F_y)
//   B   barycentric leakage, min over pi of max_x' D~_inf(rho_x' || sum pi rho)
//   R   pairwise leakage, max over ordered pairs of D~_inf(rho_x || rho_x')
//   I~  sandwiched alpha = inf mutual information of the cq state
//
// Q and I~ are both log2 of the minimum-trace dominating operator program.
// Merging the outcomes of any POVM by their arg-max symbol gives a POVM
// {M_x} with the same value, so Q = log2 max sum_x tr(rho_x M_x), and the
// dual of that program is min tr Y s.t. Y >= rho_x (strictly feasible at
// M_x = I/|X|, so there is no duality gap). None of B, Q, R, I~ depends on
// the prior.

#include <utility>
#include <variant>
#include <vector>

#include "qleak/divergences.hpp"
#include "qleak/hermitian.hpp"
#include "qleak/sdp.hpp"

namespace qleak {

class Ensemble {
 public:
  // Throws ValidationError on a size mismatch, an empty ensemble, or a
  // zero prior entry; DimensionMismatch on mixed state dimensions.
  Ensemble(ProbVector prior, std::vector<DensityOperator> states);
  // Uniform prior.
  explicit Ensemble(std::vector<DensityOperator> states);

  const ProbVector& prior() const { return prior_; }
  const std::vector<DensityOperator>& states() const { return states_; }
  const DensityOperator& state(int x) const { return states_[x]; }
  int size() const { return static_cast<int>(states_.size()); }
  int dim() const { return states_.front().dim(); }

  // Every state replaced by U rho U^dagger.
  Ensemble Conjugate(const CMatrix& u) const;

 private:
  void Validate() const;

  ProbVector prior_;
  std::vector<DensityOperator> states_;
};

// |x><x| for x = 0 .. 2^qubits - 1 under a uniform prior.
Ensemble BasisEncoding(int qubits);

inline constexpr double kPovmSumTol = 1e-9;

class Povm {
 public:
  // Throws ValidationError when an element is not PSD or the elements do
  // not sum to the identity within kPovmSumTol (max entry deviation).
  explicit Povm(std::vector<HermitianOperator> elements);

  static Povm Trivial(int dim);
  static Povm Basis(int dim);

  const std::vector<HermitianOperator>& elements() const { return elements_; }
  const HermitianOperator& element(int y) const { return elements_[y]; }
  int size() const { return static_cast<int>(elements_.size()); }
  int dim() const { return elements_.front().dim(); }

 private:
  std::vector<HermitianOperator> elements_;
};

enum class LeakageKind { kMaximal, kBarycentric, kPairwise, kSandwichedInfMI };

const char* ToString(LeakageKind k);

struct NoWitness {};
using LeakageWitness =
    std::variant<NoWitness, std::vector<double>, HermitianOperator, std::pair<int, int>>;

struct LeakageCertificate {
  double value = 0.0;  // bits, may be +inf for kPairwise
  LeakageKind kind = LeakageKind::kPairwise;
  // pi (barycentric), Y (maximal, sandwiched), (x, x') (pairwise).
  LeakageWitness witness;
  // log2(upper) - log2(lower) of the certified bracket; 0 when exact.
  double gap = 0.0;
  SdpStatus status = SdpStatus::kOptimal;
};

LeakageCertificate PairwiseLeakage(const Ensemble& e);

LeakageCertificate BarycentricLeakage(const Ensemble& e, double gap_tol = 1e-6);

LeakageCertificate MaxLeakage(const Ensemble& e, double gap_tol = 1e-6);

LeakageCertificate SandwichedInfMutualInformation(const Ensemble& e,
                                                  double gap_tol = 1e-6);

// log2 sum_y max_x tr(rho_x F_y). Throws DimensionMismatch.
double PovmLeakage(const Ensemble& e, const Povm& m);

// M_x = S^-1/2 rho_x S^-1/2, S = sum_x rho_x, inverse on supp(S). When S
// is singular, I - Pi_supp(S) is appended as an extra outcome.
Povm SquareRootMeasurement(const Ensemble& e);

// chi = H(sum p rho) - sum p H(rho_x).
double HolevoInformation(const Ensemble& e);

// Mutual information I(X;Y) of the outcome of m on e, in bits.
double MeasuredInformation(const Ensemble& e, const Povm& m);

struct AccessibleInfoResult {
  double value = 0.0;  // achieved by `povm`, hence a lower bound on I_acc
  Povm povm;
};

// Coordinate ascent over rank-1 POVMs with d^2 outcomes, written as the
// first d columns of a d^2 x d^2 unitary (rows = outcomes). Moves are 2x2
// unitary rotations between two outcomes. Restart 0 starts from the
// computational basis; the others from seeded random unitaries.
AccessibleInfoResult AccessibleInformationLower(const Ensemble& e,
                                                int restarts = 32,
                                                std::uint64_t seed = 0);

struct ChainOptions {
  double gap_tol = 1e-6;
  int restarts = 32;
  std::uint64_t seed = 0;
  double slack = 1e-6;
};

struct ChainReport {
  double accessible_lower = 0.0;
  double holevo = 0.0;
  double srm_leakage = 0.0;
  LeakageCertificate sandwiched_inf_mi;
  LeakageCertificate maximal;
  LeakageCertificate barycentric;
  LeakageCertificate pairwise;
};

// Computes every quantity and checks
//   I_acc_lb <= chi <= B <= R,   I~ <= B,   SRM <= Q <= B,
// each within the certificates' gaps plus options.slack. Throws
// ChainViolation naming the first failed inequality.
ChainReport InequalityChainReport(const Ensemble& e, const ChainOptions& options = {});

}  // namespace qleak
