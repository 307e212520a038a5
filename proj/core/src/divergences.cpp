#include "qleak/divergences.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qleak/error.hpp"

namespace qleak {
namespace {

void RequireSameDim(int a, int b, const char* what) {
  if (a != b) {
    std::ostringstream os;
    os << what << ": dimension mismatch (" << a << " vs " << b << ")";
    throw DimensionMismatch(os.str());
  }
}

void RequirePsd(const Spectrum& s, const char* what) {
  if (!IsPsd(s)) {
    std::ostringstream os;
    os << what << ": sigma is not positive semi-definite (lambda_min = "
       << s.min() << ")";
    throw DomainError(os.str());
  }
}

bool NearOne(const RenyiOrder& a) {
  return a.kind() == RenyiOrder::Kind::kFinite &&
         std::abs(a.alpha() - 1.0) < kNearOneTol;
}

// log2 of sum_i w_i^alpha over the strictly positive entries, evaluated
// without overflow for large alpha.
double Log2PowerSum(const std::vector<double>& w, double alpha) {
  double wmax = 0.0;
  for (double v : w) wmax = std::max(wmax, v);
  if (wmax <= 0.0) return -kInf;
  double acc = 0.0;
  for (double v : w) {
    if (v > 0.0) acc += std::pow(v / wmax, alpha);
  }
  return alpha * std::log2(wmax) + std::log2(acc);
}

// Support part of a spectrum: eigenvalues above kSupportTol * lambda_max.
struct SupportBasis {
  CMatrix vectors;
  RVector values;
};

SupportBasis Support(const Spectrum& s) {
  const double cut = kSupportTol * std::max(s.max(), 0.0);
  std::vector<int> keep;
  for (int k = 0; k < s.eigenvalues.size(); ++k) {
    if (s.eigenvalues[k] > cut) keep.push_back(k);
  }
  SupportBasis out{CMatrix(s.eigenvectors.rows(), keep.size()),
                   RVector(keep.size())};
  for (std::size_t i = 0; i < keep.size(); ++i) {
    out.vectors.col(i) = s.eigenvectors.col(keep[i]);
    out.values[i] = s.eigenvalues[keep[i]];
  }
  return out;
}

}  // namespace

ProbVector::ProbVector(std::vector<double> probs) : probs_(std::move(probs)) {
  if (probs_.empty()) throw ValidationError("ProbVector: empty");
  double sum = 0.0;
  for (std::size_t i = 0; i < probs_.size(); ++i) {
    const double p = probs_[i];
    if (!std::isfinite(p) || p < 0.0) {
      std::ostringstream os;
      os << "ProbVector: entry " << i << " = " << p << " is not a probability";
      throw ValidationError(os.str());
    }
    sum += p;
  }
  if (!(std::abs(sum - 1.0) <= kProbSumTol)) {
    std::ostringstream os;
    os << "ProbVector: entries sum to " << sum << ", expected 1";
    throw ValidationError(os.str());
  }
}

ProbVector ProbVector::Uniform(int n) {
  if (n < 1) throw ValidationError("ProbVector::Uniform: n must be >= 1");
  return ProbVector(std::vector<double>(n, 1.0 / n));
}

ConditionalKernel::ConditionalKernel(std::vector<ProbVector> rows)
    : rows_(std::move(rows)) {
  if (rows_.empty()) throw ValidationError("ConditionalKernel: no rows");
  for (std::size_t x = 1; x < rows_.size(); ++x) {
    if (rows_[x].size() != rows_[0].size()) {
      std::ostringstream os;
      os << "ConditionalKernel: row " << x << " has " << rows_[x].size()
         << " outputs, row 0 has " << rows_[0].size();
      throw DimensionMismatch(os.str());
    }
  }
}

RenyiOrder RenyiOrder::Finite(double alpha) {
  if (!std::isfinite(alpha) || alpha <= 0.0 || alpha == 1.0) {
    std::ostringstream os;
    os << "RenyiOrder: finite order must lie in (0,1) or (1,inf), got "
       << alpha;
    throw ValidationError(os.str());
  }
  return RenyiOrder(Kind::kFinite, alpha);
}

double RenyiClassical(const ProbVector& p, const ProbVector& q,
                      RenyiOrder alpha) {
  RequireSameDim(p.size(), q.size(), "RenyiClassical");
  bool contained = true;
  for (int i = 0; i < p.size(); ++i) {
    if (p[i] > 0.0 && q[i] == 0.0) contained = false;
  }
  if (!contained && alpha.at_least_one()) return kInf;
  if (NearOne(alpha)) alpha = RenyiOrder::One();

  switch (alpha.kind()) {
    case RenyiOrder::Kind::kOne: {
      double d = 0.0;
      for (int i = 0; i < p.size(); ++i) {
        if (q[i] > 0.0 && p[i] > 0.0) d += p[i] * std::log2(p[i] / q[i]);
      }
      return d;
    }
    case RenyiOrder::Kind::kInfinity: {
      double ratio = 0.0;
      for (int i = 0; i < p.size(); ++i) {
        if (q[i] > 0.0) ratio = std::max(ratio, p[i] / q[i]);
      }
      return std::log2(ratio);
    }
    case RenyiOrder::Kind::kFinite: {
      const double a = alpha.alpha();
      double sum = 0.0;
      for (int i = 0; i < p.size(); ++i) {
        if (q[i] > 0.0 && p[i] > 0.0) {
          sum += std::pow(p[i], a) * std::pow(q[i], 1.0 - a);
        }
      }
      return std::log2(sum) / (a - 1.0);
    }
  }
  return kInf;
}

double SibsonInformation(const ProbVector& prior,
                         const ConditionalKernel& kernel, RenyiOrder alpha) {
  RequireSameDim(prior.size(), kernel.inputs(), "SibsonInformation");
  bool any_support = false;
  for (int x = 0; x < prior.size(); ++x) any_support |= prior[x] > 0.0;
  if (!any_support) throw ValidationError("SibsonInformation: prior has empty support");
  if (NearOne(alpha)) alpha = RenyiOrder::One();

  const int ny = kernel.outputs();
  switch (alpha.kind()) {
    case RenyiOrder::Kind::kOne: {
      std::vector<double> py(ny, 0.0);
      for (int x = 0; x < prior.size(); ++x)
        for (int y = 0; y < ny; ++y) py[y] += prior[x] * kernel(x, y);
      double mi = 0.0;
      for (int x = 0; x < prior.size(); ++x) {
        for (int y = 0; y < ny; ++y) {
          const double joint = prior[x] * kernel(x, y);
          if (joint > 0.0) mi += joint * std::log2(kernel(x, y) / py[y]);
        }
      }
      return std::max(mi, 0.0);
    }
    case RenyiOrder::Kind::kInfinity: {
      double sum = 0.0;
      for (int y = 0; y < ny; ++y) {
        double best = 0.0;
        for (int x = 0; x < prior.size(); ++x) {
          if (prior[x] > 0.0) best = std::max(best, kernel(x, y));
        }
        sum += best;
      }
      return std::log2(sum);
    }
    case RenyiOrder::Kind::kFinite: {
      const double a = alpha.alpha();
      double sum = 0.0;
      for (int y = 0; y < ny; ++y) {
        double top = 0.0;
        for (int x = 0; x < prior.size(); ++x) {
          if (prior[x] > 0.0) top = std::max(top, kernel(x, y));
        }
        if (top == 0.0) continue;
        double inner = 0.0;
        for (int x = 0; x < prior.size(); ++x) {
          if (prior[x] > 0.0 && kernel(x, y) > 0.0) {
            inner += prior[x] * std::pow(kernel(x, y) / top, a);
          }
        }
        sum += top * std::pow(inner, 1.0 / a);
      }
      return a / (a - 1.0) * std::log2(sum);
    }
  }
  return kInf;
}

double MaxRelativeRatio(const HermitianOperator& rho,
                        const HermitianOperator& sigma) {
  RequireSameDim(rho.dim(), sigma.dim(), "MaxRelativeRatio");
  const Spectrum s = EigHermitian(sigma);
  RequirePsd(s, "MaxRelativeRatio");
  return MaxRelativeRatio(rho, s);
}

double MaxRelativeRatio(const HermitianOperator& rho,
                        const Spectrum& sigma_spectrum) {
  RequireSameDim(rho.dim(), static_cast<int>(sigma_spectrum.eigenvalues.size()),
                 "MaxRelativeRatio");
  const Spectrum& s = sigma_spectrum;
  // Support containment, as in SupportContained.
  const double cut = kSupportTol * std::max(s.max(), 0.0);
  for (int k = 0; k < s.eigenvalues.size(); ++k) {
    if (s.eigenvalues[k] > cut) continue;
    const CVector v = s.eigenvectors.col(k);
    if ((v.adjoint() * rho.matrix() * v)(0, 0).real() > kSupportTol) return kInf;
  }
  const SupportBasis sb = Support(s);
  if (sb.values.size() == 0) return 0.0;
  const RVector inv_sqrt = sb.values.cwiseSqrt().cwiseInverse();
  const CMatrix reduced = inv_sqrt.cast<Complex>().asDiagonal() *
                          (sb.vectors.adjoint() * rho.matrix() * sb.vectors) *
                          inv_sqrt.cast<Complex>().asDiagonal();
  const Spectrum r = EigHermitian(HermitianOperator::FromComputed(reduced));
  return std::max(r.max(), 0.0);
}

double QuantumRelativeEntropy(const DensityOperator& rho,
                              const HermitianOperator& sigma) {
  RequireSameDim(rho.dim(), sigma.dim(), "QuantumRelativeEntropy");
  const Spectrum s = EigHermitian(sigma);
  RequirePsd(s, "QuantumRelativeEntropy");
  if (!SupportContained(rho.op(), sigma)) return kInf;

  const Spectrum r = EigHermitian(rho.op());
  double rho_log_rho = 0.0;
  for (int i = 0; i < r.eigenvalues.size(); ++i) {
    const double v = r.eigenvalues[i];
    if (v > kEntropyFloor) rho_log_rho += v * std::log2(v);
  }
  const SupportBasis sb = Support(s);
  double rho_log_sigma = 0.0;
  for (int j = 0; j < sb.values.size(); ++j) {
    const CVector v = sb.vectors.col(j);
    const double weight = (v.adjoint() * rho.matrix() * v)(0, 0).real();
    rho_log_sigma += weight * std::log2(sb.values[j]);
  }
  return rho_log_rho - rho_log_sigma;
}

double PetzRenyi(const DensityOperator& rho, const HermitianOperator& sigma,
                 RenyiOrder alpha) {
  RequireSameDim(rho.dim(), sigma.dim(), "PetzRenyi");
  const Spectrum s = EigHermitian(sigma);
  RequirePsd(s, "PetzRenyi");
  if (alpha.at_least_one() && !SupportContained(rho.op(), sigma)) return kInf;
  if (NearOne(alpha)) alpha = RenyiOrder::One();

  switch (alpha.kind()) {
    case RenyiOrder::Kind::kOne:
      return QuantumRelativeEntropy(rho, sigma);
    case RenyiOrder::Kind::kInfinity: {
      const Spectrum r = EigHermitian(rho.op());
      const SupportBasis rs = Support(r);
      const SupportBasis ss = Support(s);
      double best = 0.0;
      for (int i = 0; i < rs.values.size(); ++i) {
        for (int j = 0; j < ss.values.size(); ++j) {
          const double overlap =
              std::norm(rs.vectors.col(i).dot(ss.vectors.col(j)));
          if (overlap > kOverlapTol) {
            best = std::max(best, rs.values[i] / ss.values[j]);
          }
        }
      }
      return std::log2(best);
    }
    case RenyiOrder::Kind::kFinite: {
      const double a = alpha.alpha();
      const HermitianOperator rho_a = OperatorPower(rho.op(), a);
      const HermitianOperator sigma_b = OperatorPower(s, 1.0 - a);
      const double tr = (rho_a.matrix() * sigma_b.matrix()).trace().real();
      return std::log2(tr) / (a - 1.0);
    }
  }
  return kInf;
}

double SandwichedRenyi(const DensityOperator& rho,
                       const HermitianOperator& sigma, RenyiOrder alpha) {
  RequireSameDim(rho.dim(), sigma.dim(), "SandwichedRenyi");
  const Spectrum s = EigHermitian(sigma);
  RequirePsd(s, "SandwichedRenyi");
  if (alpha.at_least_one() && !SupportContained(rho.op(), sigma)) return kInf;
  if (NearOne(alpha)) alpha = RenyiOrder::One();

  switch (alpha.kind()) {
    case RenyiOrder::Kind::kOne:
      return QuantumRelativeEntropy(rho, sigma);
    case RenyiOrder::Kind::kInfinity:
      return std::log2(MaxRelativeRatio(rho.op(), sigma));
    case RenyiOrder::Kind::kFinite: {
      const double a = alpha.alpha();
      const HermitianOperator side = OperatorPower(s, (1.0 - a) / (2.0 * a));
      const HermitianOperator q = HermitianOperator::FromComputed(
          side.matrix() * rho.matrix() * side.matrix());
      const Spectrum qs = EigHermitian(q);
      const double cut = kSupportTol * std::max(qs.max(), 0.0);
      std::vector<double> w;
      for (int i = 0; i < qs.eigenvalues.size(); ++i) {
        if (qs.eigenvalues[i] > cut) w.push_back(qs.eigenvalues[i]);
      }
      return Log2PowerSum(w, a) / (a - 1.0);
    }
  }
  return kInf;
}

}  // namespace qleak
