#include "qleak/hermitian.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>
#include <string>

#include "qleak/error.hpp"

namespace qleak {
namespace {

void CheckDim(int dim, const char* what) {
  if (dim < 1 || dim > kMaxDim) {
    std::ostringstream os;
    os << what << ": dimension " << dim << " outside [1, " << kMaxDim << "]";
    throw ValidationError(os.str());
  }
}

void RequireSameDim(const HermitianOperator& a, const HermitianOperator& b,
                    const char* what) {
  if (a.dim() != b.dim()) {
    std::ostringstream os;
    os << what << ": dimension mismatch (" << a.dim() << " vs " << b.dim()
       << ")";
    throw DimensionMismatch(os.str());
  }
}

// One complex Jacobi rotation annihilating a(p, q). Applies A <- G^H A G and
// V <- V G with G = diag(1, e^{-i phi}) * [[c, s], [-s, c]].
void Rotate(CMatrix& a, CMatrix& v, int p, int q) {
  const Complex apq = a(p, q);
  const double abs_apq = std::abs(apq);
  if (abs_apq == 0.0) return;
  const Complex phase = apq / abs_apq;  // e^{i phi}
  const double theta = (a(q, q).real() - a(p, p).real()) / (2.0 * abs_apq);
  const double t = (theta >= 0 ? 1.0 : -1.0) /
                   (std::abs(theta) + std::sqrt(theta * theta + 1.0));
  const double c = 1.0 / std::sqrt(t * t + 1.0);
  const double s = t * c;
  const Complex gqp = -s * std::conj(phase);
  const Complex gqq = c * std::conj(phase);
  const int n = static_cast<int>(a.rows());

  for (int k = 0; k < n; ++k) {
    const Complex akp = a(k, p);
    const Complex akq = a(k, q);
    a(k, p) = c * akp + gqp * akq;
    a(k, q) = s * akp + gqq * akq;
  }
  for (int k = 0; k < n; ++k) {
    const Complex apk = a(p, k);
    const Complex aqk = a(q, k);
    a(p, k) = c * apk + std::conj(gqp) * aqk;
    a(q, k) = s * apk + std::conj(gqq) * aqk;
  }
  a(p, q) = 0.0;
  a(q, p) = 0.0;
  a(p, p) = a(p, p).real();
  a(q, q) = a(q, q).real();

  for (int k = 0; k < n; ++k) {
    const Complex vkp = v(k, p);
    const Complex vkq = v(k, q);
    v(k, p) = c * vkp + gqp * vkq;
    v(k, q) = s * vkp + gqq * vkq;
  }
}

double OffDiagonalNorm(const CMatrix& a) {
  double sum = 0.0;
  const int n = static_cast<int>(a.rows());
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      if (i != j) sum += std::norm(a(i, j));
    }
  }
  return std::sqrt(sum);
}

CMatrix Reconstruct(const CMatrix& vecs, const RVector& vals) {
  return vecs * vals.cast<Complex>().asDiagonal() * vecs.adjoint();
}

double SupportThreshold(const Spectrum& s) {
  return kSupportTol * std::max(s.max(), 0.0);
}

CMatrix GaussianMatrix(int rows, int cols, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  CMatrix g(rows, cols);
  for (int j = 0; j < cols; ++j) {
    for (int i = 0; i < rows; ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      g(i, j) = Complex(re, im);
    }
  }
  return g;
}

}  // namespace

HermitianOperator::HermitianOperator(const CMatrix& m) {
  if (m.rows() != m.cols()) {
    std::ostringstream os;
    os << "HermitianOperator: matrix is " << m.rows() << "x" << m.cols()
       << ", expected square";
    throw ValidationError(os.str());
  }
  CheckDim(static_cast<int>(m.rows()), "HermitianOperator");
  const int n = static_cast<int>(m.rows());
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      const double dev = std::abs(m(i, j) - std::conj(m(j, i)));
      if (!(dev <= kHermitianTol)) {
        std::ostringstream os;
        os << "HermitianOperator: entry (" << i << "," << j
           << ") violates conjugate symmetry by " << dev;
        throw ValidationError(os.str());
      }
    }
  }
  m_ = 0.5 * (m + m.adjoint());
}

HermitianOperator HermitianOperator::FromComputed(const CMatrix& m) {
  return HermitianOperator(CMatrix(0.5 * (m + m.adjoint())), Unchecked{});
}

HermitianOperator HermitianOperator::Identity(int dim) {
  CheckDim(dim, "Identity");
  return HermitianOperator(CMatrix::Identity(dim, dim), Unchecked{});
}

HermitianOperator HermitianOperator::Zero(int dim) {
  CheckDim(dim, "Zero");
  return HermitianOperator(CMatrix::Zero(dim, dim), Unchecked{});
}

HermitianOperator HermitianOperator::Diagonal(const std::vector<double>& diag) {
  CheckDim(static_cast<int>(diag.size()), "Diagonal");
  CMatrix m = CMatrix::Zero(diag.size(), diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
  return HermitianOperator(std::move(m), Unchecked{});
}

HermitianOperator HermitianOperator::Projector(const CVector& psi) {
  CheckDim(static_cast<int>(psi.size()), "Projector");
  return FromComputed(psi * psi.adjoint());
}

HermitianOperator HermitianOperator::Conjugate(const CMatrix& u) const {
  if (u.rows() != dim() || u.cols() != dim()) {
    throw DimensionMismatch("Conjugate: unitary shape does not match operator");
  }
  return FromComputed(u * m_ * u.adjoint());
}

HermitianOperator HermitianOperator::operator+(
    const HermitianOperator& o) const {
  RequireSameDim(*this, o, "operator+");
  return HermitianOperator(m_ + o.m_, Unchecked{});
}

HermitianOperator HermitianOperator::operator-(
    const HermitianOperator& o) const {
  RequireSameDim(*this, o, "operator-");
  return HermitianOperator(m_ - o.m_, Unchecked{});
}

HermitianOperator HermitianOperator::operator*(double s) const {
  return HermitianOperator(m_ * s, Unchecked{});
}

DensityOperator::DensityOperator(HermitianOperator op) : op_(std::move(op)) {
  const Spectrum s = EigHermitian(op_);
  if (!IsPsd(s)) {
    std::ostringstream os;
    os << "DensityOperator: not positive semi-definite (lambda_min = "
       << s.min() << ")";
    throw ValidationError(os.str());
  }
  const double tr = op_.Trace();
  if (!(std::abs(tr - 1.0) <= kTraceTol)) {
    std::ostringstream os;
    os << "DensityOperator: trace " << tr << " differs from 1 by more than "
       << kTraceTol;
    throw ValidationError(os.str());
  }
}

DensityOperator DensityOperator::FromComputed(const HermitianOperator& op,
                                              double trace_tol) {
  const double tr = op.Trace();
  if (!(std::abs(tr - 1.0) <= trace_tol)) {
    std::ostringstream os;
    os << "DensityOperator: computed trace " << tr
       << " differs from 1 by more than " << trace_tol;
    throw ValidationError(os.str());
  }
  HermitianOperator normalized = op * (1.0 / tr);
  if (!IsPsd(normalized)) {
    throw ValidationError(
        "DensityOperator: computed operator is not positive semi-definite");
  }
  return DensityOperator(std::move(normalized), Trusted{});
}

DensityOperator DensityOperator::Pure(const CVector& psi) {
  const double n = psi.norm();
  if (!(n > 0.0)) throw ValidationError("DensityOperator::Pure: zero vector");
  return DensityOperator(HermitianOperator::Projector(psi / n), Trusted{});
}

DensityOperator DensityOperator::MaximallyMixed(int dim) {
  return DensityOperator(HermitianOperator::Identity(dim) * (1.0 / dim),
                         Trusted{});
}

DensityOperator DensityOperator::Diagonal(const std::vector<double>& probs) {
  return DensityOperator(HermitianOperator::Diagonal(probs));
}

Spectrum EigHermitian(const HermitianOperator& h) {
  const int n = h.dim();
  CMatrix a = h.matrix();
  CMatrix v = CMatrix::Identity(n, n);
  const double scale = h.FrobeniusNorm();
  const double target = kJacobiRelTol * scale;

  int sweep = 0;
  while (OffDiagonalNorm(a) > target) {
    if (sweep == kJacobiMaxSweeps) {
      std::ostringstream os;
      os << "EigHermitian: Jacobi did not converge after " << sweep
         << " sweeps (||H||_F = " << scale
         << ", off-diagonal norm = " << OffDiagonalNorm(a) << ")";
      throw SolverError(os.str());
    }
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) Rotate(a, v, p, q);
    }
    ++sweep;
  }

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&a](int i, int j) {
    return a(i, i).real() < a(j, j).real();
  });
  Spectrum out{RVector(n), CMatrix(n, n)};
  for (int k = 0; k < n; ++k) {
    out.eigenvalues[k] = a(order[k], order[k]).real();
    out.eigenvectors.col(k) = v.col(order[k]);
  }
  return out;
}

bool IsPsd(const Spectrum& s) {
  const double scale = std::max(std::abs(s.min()), std::abs(s.max()));
  return s.min() >= -kPsdTol * scale;
}

bool IsPsd(const HermitianOperator& h) { return IsPsd(EigHermitian(h)); }

HermitianOperator OperatorPower(const Spectrum& s, double t) {
  if (!IsPsd(s)) {
    std::ostringstream os;
    os << "OperatorPower: operator is not positive semi-definite (lambda_min = "
       << s.min() << ")";
    throw DomainError(os.str());
  }
  const double cut = SupportThreshold(s);
  RVector powered(s.eigenvalues.size());
  for (int i = 0; i < powered.size(); ++i) {
    const double lam = s.eigenvalues[i];
    powered[i] = lam > cut ? std::pow(lam, t) : 0.0;
  }
  return HermitianOperator::FromComputed(Reconstruct(s.eigenvectors, powered));
}

HermitianOperator OperatorPower(const HermitianOperator& h, double t) {
  if (t == 1.0) {
    if (!IsPsd(h)) {
      throw DomainError("OperatorPower: operator is not positive semi-definite");
    }
    return h;
  }
  return OperatorPower(EigHermitian(h), t);
}

HermitianOperator SupportProjector(const HermitianOperator& h) {
  const Spectrum s = EigHermitian(h);
  const double cut = SupportThreshold(s);
  RVector ind(s.eigenvalues.size());
  for (int i = 0; i < ind.size(); ++i) ind[i] = s.eigenvalues[i] > cut;
  return HermitianOperator::FromComputed(Reconstruct(s.eigenvectors, ind));
}

bool SupportContained(const HermitianOperator& rho,
                      const HermitianOperator& sigma, double tol) {
  RequireSameDim(rho, sigma, "SupportContained");
  const Spectrum s = EigHermitian(sigma);
  const double cut = tol * std::max(s.max(), 0.0);
  for (int k = 0; k < s.eigenvalues.size(); ++k) {
    if (s.eigenvalues[k] > cut) continue;
    const CVector v = s.eigenvectors.col(k);
    const double weight = (v.adjoint() * rho.matrix() * v)(0, 0).real();
    if (weight > tol) return false;
  }
  return true;
}

CMatrix Kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

HermitianOperator Kron(const HermitianOperator& a, const HermitianOperator& b) {
  if (a.dim() * b.dim() > kMaxDim) {
    std::ostringstream os;
    os << "Kron: product dimension " << a.dim() * b.dim() << " exceeds "
       << kMaxDim;
    throw ValidationError(os.str());
  }
  return HermitianOperator::FromComputed(Kron(a.matrix(), b.matrix()));
}

HermitianOperator PartialTrace(const HermitianOperator& h, int dim_first,
                               int dim_second, Subsystem which) {
  if (dim_first < 1 || dim_second < 1 || dim_first * dim_second != h.dim()) {
    std::ostringstream os;
    os << "PartialTrace: subsystem dims " << dim_first << "x" << dim_second
       << " do not factor dimension " << h.dim();
    throw DimensionMismatch(os.str());
  }
  const CMatrix& m = h.matrix();
  if (which == Subsystem::kSecond) {
    CMatrix out = CMatrix::Zero(dim_first, dim_first);
    for (int i = 0; i < dim_first; ++i)
      for (int j = 0; j < dim_first; ++j)
        for (int k = 0; k < dim_second; ++k)
          out(i, j) += m(i * dim_second + k, j * dim_second + k);
    return HermitianOperator::FromComputed(out);
  }
  CMatrix out = CMatrix::Zero(dim_second, dim_second);
  for (int i = 0; i < dim_second; ++i)
    for (int j = 0; j < dim_second; ++j)
      for (int k = 0; k < dim_first; ++k)
        out(i, j) += m(k * dim_second + i, k * dim_second + j);
  return HermitianOperator::FromComputed(out);
}

double TraceDistance(const HermitianOperator& rho,
                     const HermitianOperator& sigma) {
  RequireSameDim(rho, sigma, "TraceDistance");
  const Spectrum s = EigHermitian(rho - sigma);
  return s.eigenvalues.cwiseAbs().sum();
}

double VonNeumannEntropy(const DensityOperator& rho) {
  const Spectrum s = EigHermitian(rho.op());
  double h = 0.0;
  for (int i = 0; i < s.eigenvalues.size(); ++i) {
    const double lam = s.eigenvalues[i];
    if (lam > kEntropyFloor) h -= lam * std::log2(lam);
  }
  return std::max(h, 0.0);
}

DensityOperator RandomDensity(int dim, int rank, std::uint64_t seed) {
  CheckDim(dim, "RandomDensity");
  if (rank < 1 || rank > dim) {
    std::ostringstream os;
    os << "RandomDensity: rank " << rank << " outside [1, " << dim << "]";
    throw ValidationError(os.str());
  }
  std::mt19937_64 rng(seed);
  const CMatrix g = GaussianMatrix(dim, rank, rng);
  CMatrix m = g * g.adjoint();
  m /= m.trace().real();
  return DensityOperator::FromComputed(HermitianOperator::FromComputed(m));
}

CMatrix RandomUnitary(int dim, std::uint64_t seed) {
  CheckDim(dim, "RandomUnitary");
  std::mt19937_64 rng(seed);
  const CMatrix z = GaussianMatrix(dim, dim, rng);
  Eigen::HouseholderQR<CMatrix> qr(z);
  CMatrix q = qr.householderQ() * CMatrix::Identity(dim, dim);
  const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < dim; ++j) {
    const Complex d = r(j, j);
    const double ad = std::abs(d);
    if (ad > 0) q.col(j) *= d / ad;
  }
  return q;
}

}  // namespace qleak
