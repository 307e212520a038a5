#pragma once

// Dense complex Hermitian linear algebra for dimensions up to 64.
//
// HermitianOperator and DensityOperator are immutable values. Every
// function in this header is pure; the random generators are pure
// functions of their seed.

#include <complex>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace qleak {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

inline constexpr int kMaxDim = 64;

// Absolute tolerance for conjugate symmetry on ingestion.
inline constexpr double kHermitianTol = 1e-12;
// Relative tolerance for positive semi-definiteness.
inline constexpr double kPsdTol = 1e-10;
// Absolute tolerance on unit trace for density operators.
inline constexpr double kTraceTol = 1e-10;
// Eigenvalues at or below kSupportTol * lambda_max are treated as zero.
inline constexpr double kSupportTol = 1e-9;
// Eigenvalues at or below this floor are dropped from entropy sums.
inline constexpr double kEntropyFloor = 1e-14;

class HermitianOperator {
 public:
  // Checked construction: throws ValidationError if `m` is not square, is
  // empty, exceeds kMaxDim, or deviates from conjugate symmetry by more than
  // kHermitianTol in any entry. The stored matrix is exactly Hermitian.
  explicit HermitianOperator(const CMatrix& m);

  // Unchecked construction for operators produced by this library's own
  // arithmetic. Symmetrises (m + m^dagger)/2.
  static HermitianOperator FromComputed(const CMatrix& m);

  static HermitianOperator Identity(int dim);
  static HermitianOperator Zero(int dim);
  static HermitianOperator Diagonal(const std::vector<double>& diag);
  // |psi><psi|, without normalisation.
  static HermitianOperator Projector(const CVector& psi);

  int dim() const { return static_cast<int>(m_.rows()); }
  const CMatrix& matrix() const { return m_; }
  Complex operator()(int i, int j) const { return m_(i, j); }

  double Trace() const { return m_.trace().real(); }
  double FrobeniusNorm() const { return m_.norm(); }

  // U H U^dagger.
  HermitianOperator Conjugate(const CMatrix& u) const;

  HermitianOperator operator+(const HermitianOperator& o) const;
  HermitianOperator operator-(const HermitianOperator& o) const;
  HermitianOperator operator*(double s) const;

 private:
  struct Unchecked {};
  HermitianOperator(CMatrix m, Unchecked) : m_(std::move(m)) {}

  CMatrix m_;
};

inline HermitianOperator operator*(double s, const HermitianOperator& h) {
  return h * s;
}

// A positive semi-definite, unit-trace HermitianOperator.
class DensityOperator {
 public:
  // Throws ValidationError unless op is PSD (lambda_min >= -kPsdTol *
  // max|lambda|) and |tr op - 1| <= kTraceTol.
  explicit DensityOperator(HermitianOperator op);

  // For outputs of channels and other computations: accepts a trace error up
  // to `trace_tol`, then rescales to unit trace. PSD check as above.
  static DensityOperator FromComputed(const HermitianOperator& op,
                                      double trace_tol = 1e-8);

  static DensityOperator Pure(const CVector& psi);
  static DensityOperator MaximallyMixed(int dim);
  static DensityOperator Diagonal(const std::vector<double>& probs);

  int dim() const { return op_.dim(); }
  const HermitianOperator& op() const { return op_; }
  const CMatrix& matrix() const { return op_.matrix(); }
  operator const HermitianOperator&() const { return op_; }

 private:
  struct Trusted {};
  DensityOperator(HermitianOperator op, Trusted) : op_(std::move(op)) {}

  HermitianOperator op_;
};

struct Spectrum {
  RVector eigenvalues;   // ascending
  CMatrix eigenvectors;  // column k pairs with eigenvalues[k]

  double max() const { return eigenvalues[eigenvalues.size() - 1]; }
  double min() const { return eigenvalues[0]; }
};

inline constexpr int kJacobiMaxSweeps = 100;
inline constexpr double kJacobiRelTol = 1e-13;

// Cyclic Jacobi eigendecomposition. Converged when the off-diagonal
// Frobenius norm is at most kJacobiRelTol * ||H||_F. Throws SolverError
// after kJacobiMaxSweeps sweeps.
Spectrum EigHermitian(const HermitianOperator& h);

// True when lambda_min(h) >= -kPsdTol * max|lambda|.
bool IsPsd(const HermitianOperator& h);
bool IsPsd(const Spectrum& s);

// Spectral function on the support: eigenvalues above kSupportTol *
// lambda_max are raised to `t`, the rest map to 0 (so t < 0 yields a
// pseudo-inverse power and t = 0 the support projector). Throws DomainError
// if h is not PSD.
HermitianOperator OperatorPower(const HermitianOperator& h, double t);

// Same, from an existing decomposition.
HermitianOperator OperatorPower(const Spectrum& s, double t);

// Orthogonal projector onto the span of eigenvectors whose eigenvalue
// exceeds kSupportTol * lambda_max.
HermitianOperator SupportProjector(const HermitianOperator& h);

// rho << sigma: every eigenvector v of sigma with eigenvalue <= tol *
// lambda_max(sigma) has <v|rho|v> <= tol.
bool SupportContained(const HermitianOperator& rho,
                      const HermitianOperator& sigma,
                      double tol = kSupportTol);

HermitianOperator Kron(const HermitianOperator& a, const HermitianOperator& b);
CMatrix Kron(const CMatrix& a, const CMatrix& b);

enum class Subsystem { kFirst, kSecond };

// Traces out `which` from an operator on C^{dim_first} (x) C^{dim_second}.
HermitianOperator PartialTrace(const HermitianOperator& h, int dim_first,
                               int dim_second, Subsystem which);

// ||rho - sigma||_1, the sum of absolute eigenvalues of the difference.
double TraceDistance(const HermitianOperator& rho,
                     const HermitianOperator& sigma);

// -sum lambda log2 lambda over eigenvalues above kEntropyFloor.
double VonNeumannEntropy(const DensityOperator& rho);

// G G^dagger / tr, G a dim x rank matrix of i.i.d. standard complex normals
// drawn from a generator seeded with `seed`.
DensityOperator RandomDensity(int dim, int rank, std::uint64_t seed);

// Haar-distributed unitary via QR of a complex Ginibre matrix with the
// diagonal phases of R removed.
CMatrix RandomUnitary(int dim, std::uint64_t seed);

}  // namespace qleak
