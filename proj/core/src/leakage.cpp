#include "qleak/leakage.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "qleak/error.hpp"
#include "qleak/parallel.hpp"

namespace qleak {
namespace {

std::vector<double> UniformPrior(int n) {
  if (n < 1) throw ValidationError("Ensemble: no states");
  return std::vector<double>(n, 1.0 / n);
}

double Expectation(const HermitianOperator& rho, const CVector& v) {
  return (v.adjoint() * rho.matrix() * v)(0, 0).real();
}

double BitsGap(const SdpSolution& s) {
  if (!(s.lower_bound > 0.0)) return kInf;
  return std::max(0.0, std::log2(s.upper_bound) - std::log2(s.lower_bound));
}

LeakageCertificate DominatingCertificate(const Ensemble& e, double gap_tol,
                                         LeakageKind kind) {
  const SdpSolution s = Solve(LmiProgram(LmiForm::kDominatingOperator, e.states()),
                              {.gap_tol = gap_tol});
  LeakageCertificate c;
  c.kind = kind;
  c.value = std::log2(s.value);
  c.witness = std::get<HermitianOperator>(s.primal_point);
  c.gap = BitsGap(s);
  c.status = s.status;
  return c;
}

// Sum over outcomes y of sum_x p(x) P(y|x) log2(P(y|x) / q(y)).
double OutcomeTerm(const ProbVector& prior, const double* column, int inputs) {
  double q = 0.0;
  for (int x = 0; x < inputs; ++x) q += prior[x] * column[x];
  if (!(q > 0.0)) return 0.0;
  double t = 0.0;
  for (int x = 0; x < inputs; ++x) {
    if (column[x] > 0.0) t += prior[x] * column[x] * std::log2(column[x] / q);
  }
  return t;
}

Povm FrameMeasurement(const Eigen::MatrixXcd& w) {
  std::vector<HermitianOperator> el;
  for (int y = 0; y < w.rows(); ++y) {
    const CVector v = w.row(y).adjoint();
    if (v.squaredNorm() == 0.0) continue;
    el.push_back(HermitianOperator::Projector(v));
  }
  return Povm(std::move(el));
}

constexpr double kHolevoReachTol = 1e-9;

// Rank-1 POVM with outcome vectors w_y = conj(row y of W), W^H W = I.
class FrameAscent {
 public:
  FrameAscent(const Ensemble& e, Eigen::MatrixXcd w)
      : e_(e), w_(std::move(w)), probs_(e.size(), w_.rows()), terms_(w_.rows()) {
    for (int y = 0; y < w_.rows(); ++y) Refresh(y);
  }

  double Value() const { return terms_.sum(); }

  // Stops early once the value reaches `target`.
  void Run(double target) {
    const int m = static_cast<int>(w_.rows());
    double step = 0.25 * std::numbers::pi;
    for (int sweep = 0; sweep < kMaxSweeps && step > kMinStep; ++sweep) {
      if (Value() >= target) return;
      bool improved = false;
      for (int a = 0; a < m; ++a) {
        for (int b = a + 1; b < m; ++b) improved |= TryPair(a, b, step);
      }
      if (!improved) step *= 0.5;
    }
  }

  const Eigen::MatrixXcd& frame() const { return w_; }

 private:
  static constexpr int kMaxSweeps = 200;
  static constexpr double kMinStep = 1e-5;

  void Refresh(int y) {
    const CVector v = w_.row(y).adjoint();
    for (int x = 0; x < e_.size(); ++x) {
      probs_(x, y) = std::max(0.0, Expectation(e_.state(x).op(), v));
    }
    terms_[y] = OutcomeTerm(e_.prior(), &probs_(0, y), e_.size());
  }

  bool TryPair(int a, int b, double step) {
    const Eigen::RowVectorXcd ra = w_.row(a), rb = w_.row(b);
    const double before = terms_[a] + terms_[b];
    for (const double theta : {step, -step}) {
      for (const double phi : {0.0, 0.5 * std::numbers::pi}) {
        const Complex ph = std::polar(1.0, phi);
        const double c = std::cos(theta), s = std::sin(theta);
        w_.row(a) = c * ra + s * ph * rb;
        w_.row(b) = -s * std::conj(ph) * ra + c * rb;
        const double ta = terms_[a], tb = terms_[b];
        Refresh(a);
        Refresh(b);
        if (terms_[a] + terms_[b] > before + 1e-13) return true;
        terms_[a] = ta;
        terms_[b] = tb;
      }
    }
    w_.row(a) = ra;
    w_.row(b) = rb;
    Refresh(a);
    Refresh(b);
    return false;
  }

  const Ensemble& e_;
  Eigen::MatrixXcd w_;
  Eigen::MatrixXd probs_;  // probs_(x, y) = P(y | x)
  Eigen::VectorXd terms_;
};

void Require(bool ok, const char* what, double lhs, double rhs) {
  if (ok) return;
  std::ostringstream os;
  os.precision(12);
  os << "InequalityChainReport: " << what << " violated (" << lhs << " > " << rhs
     << ")";
  throw ChainViolation(os.str());
}

}  // namespace

Ensemble::Ensemble(ProbVector prior, std::vector<DensityOperator> states)
    : prior_(std::move(prior)), states_(std::move(states)) {
  Validate();
}

Ensemble::Ensemble(std::vector<DensityOperator> states)
    : prior_(UniformPrior(static_cast<int>(states.size()))), states_(std::move(states)) {
  Validate();
}

void Ensemble::Validate() const {
  if (states_.empty()) throw ValidationError("Ensemble: no states");
  if (prior_.size() != size()) {
    std::ostringstream os;
    os << "Ensemble: prior has " << prior_.size() << " entries for " << size()
       << " states";
    throw ValidationError(os.str());
  }
  for (int x = 0; x < size(); ++x) {
    if (!(prior_[x] > 0.0)) {
      std::ostringstream os;
      os << "Ensemble: prior entry " << x << " is not strictly positive";
      throw ValidationError(os.str());
    }
    if (states_[x].dim() != dim()) {
      std::ostringstream os;
      os << "Ensemble: state " << x << " has dimension " << states_[x].dim()
         << ", state 0 has " << dim();
      throw DimensionMismatch(os.str());
    }
  }
}

Ensemble Ensemble::Conjugate(const CMatrix& u) const {
  std::vector<DensityOperator> out;
  out.reserve(states_.size());
  for (const DensityOperator& rho : states_) {
    out.push_back(DensityOperator::FromComputed(rho.op().Conjugate(u)));
  }
  return Ensemble(prior_, std::move(out));
}

Ensemble BasisEncoding(int qubits) {
  if (qubits < 1 || (1 << qubits) > kMaxDim) {
    throw ValidationError("BasisEncoding: qubits must be in 1..6");
  }
  const int d = 1 << qubits;
  std::vector<DensityOperator> states;
  for (int x = 0; x < d; ++x) {
    std::vector<double> diag(d, 0.0);
    diag[x] = 1.0;
    states.push_back(DensityOperator::Diagonal(diag));
  }
  return Ensemble(std::move(states));
}

Povm::Povm(std::vector<HermitianOperator> elements) : elements_(std::move(elements)) {
  if (elements_.empty()) throw ValidationError("Povm: no elements");
  const int d = elements_.front().dim();
  CMatrix sum = CMatrix::Zero(d, d);
  for (int y = 0; y < size(); ++y) {
    if (elements_[y].dim() != d) {
      throw DimensionMismatch("Povm: elements of different dimensions");
    }
    if (!IsPsd(elements_[y])) {
      std::ostringstream os;
      os << "Povm: element " << y << " is not positive semi-definite";
      throw ValidationError(os.str());
    }
    sum += elements_[y].matrix();
  }
  const double dev = (sum - CMatrix::Identity(d, d)).cwiseAbs().maxCoeff();
  if (dev > kPovmSumTol) {
    std::ostringstream os;
    os << "Povm: elements sum to the identity only within " << dev;
    throw ValidationError(os.str());
  }
}

Povm Povm::Trivial(int dim) { return Povm({HermitianOperator::Identity(dim)}); }

Povm Povm::Basis(int dim) {
  std::vector<HermitianOperator> el;
  for (int y = 0; y < dim; ++y) el.push_back(HermitianOperator::Projector(CVector::Unit(dim, y)));
  return Povm(std::move(el));
}

const char* ToString(LeakageKind k) {
  switch (k) {
    case LeakageKind::kMaximal:
      return "maximal";
    case LeakageKind::kBarycentric:
      return "barycentric";
    case LeakageKind::kPairwise:
      return "pairwise";
    case LeakageKind::kSandwichedInfMI:
      return "sandwiched_inf_mi";
  }
  return "unknown";
}

LeakageCertificate PairwiseLeakage(const Ensemble& e) {
  const int m = e.size();
  std::vector<Spectrum> spectra(m);
  ParallelFor(m, [&](int x) { spectra[x] = EigHermitian(e.state(x).op()); });
  std::vector<double> ratio(static_cast<std::size_t>(m) * m, 1.0);
  ParallelFor(m * m, [&](int k) {
    const int x = k / m, xp = k % m;
    if (x != xp) ratio[k] = MaxRelativeRatio(e.state(x).op(), spectra[xp]);
  });
  LeakageCertificate c;
  c.kind = LeakageKind::kPairwise;
  c.witness = std::make_pair(0, 0);
  c.value = 0.0;
  for (int k = 0; k < m * m; ++k) {
    const double v = std::isinf(ratio[k]) ? kInf : std::log2(ratio[k]);
    if (v > c.value) {
      c.value = v;
      c.witness = std::make_pair(k / m, k % m);
    }
  }
  return c;
}

LeakageCertificate BarycentricLeakage(const Ensemble& e, double gap_tol) {
  const SdpSolution s = Solve(LmiProgram(LmiForm::kBarycentricWeights, e.states()),
                              {.gap_tol = gap_tol});
  std::vector<double> pi = std::get<std::vector<double>>(s.primal_point);
  double total = 0.0;
  for (double v : pi) total += v;
  for (double& v : pi) v /= total;
  LeakageCertificate c;
  c.kind = LeakageKind::kBarycentric;
  c.value = std::log2(s.value);
  c.witness = std::move(pi);
  c.gap = BitsGap(s);
  c.status = s.status;
  return c;
}

LeakageCertificate MaxLeakage(const Ensemble& e, double gap_tol) {
  return DominatingCertificate(e, gap_tol, LeakageKind::kMaximal);
}

LeakageCertificate SandwichedInfMutualInformation(const Ensemble& e, double gap_tol) {
  return DominatingCertificate(e, gap_tol, LeakageKind::kSandwichedInfMI);
}

double PovmLeakage(const Ensemble& e, const Povm& m) {
  if (m.dim() != e.dim()) {
    std::ostringstream os;
    os << "PovmLeakage: POVM acts on dimension " << m.dim() << ", ensemble on "
       << e.dim();
    throw DimensionMismatch(os.str());
  }
  double sum = 0.0;
  for (const HermitianOperator& f : m.elements()) {
    double best = 0.0;
    for (const DensityOperator& rho : e.states()) {
      best = std::max(best, (rho.matrix() * f.matrix()).trace().real());
    }
    sum += best;
  }
  return std::log2(sum);
}

Povm SquareRootMeasurement(const Ensemble& e) {
  const int d = e.dim();
  CMatrix s = CMatrix::Zero(d, d);
  for (const DensityOperator& rho : e.states()) s += rho.matrix();
  const Spectrum sp = EigHermitian(HermitianOperator::FromComputed(s));
  const HermitianOperator inv_sqrt = OperatorPower(sp, -0.5);
  std::vector<HermitianOperator> el;
  for (const DensityOperator& rho : e.states()) {
    el.push_back(HermitianOperator::FromComputed(inv_sqrt.matrix() * rho.matrix() *
                                                 inv_sqrt.matrix()));
  }
  const double cut = kSupportTol * sp.max();
  CMatrix null = CMatrix::Zero(d, d);
  bool singular = false;
  for (int k = 0; k < d; ++k) {
    if (sp.eigenvalues[k] > cut) continue;
    singular = true;
    null += sp.eigenvectors.col(k) * sp.eigenvectors.col(k).adjoint();
  }
  if (singular) el.push_back(HermitianOperator::FromComputed(null));
  return Povm(std::move(el));
}

double HolevoInformation(const Ensemble& e) {
  CMatrix avg = CMatrix::Zero(e.dim(), e.dim());
  double mixed = 0.0;
  for (int x = 0; x < e.size(); ++x) {
    avg += e.prior()[x] * e.state(x).matrix();
    mixed += e.prior()[x] * VonNeumannEntropy(e.state(x));
  }
  const double chi =
      VonNeumannEntropy(DensityOperator::FromComputed(HermitianOperator::FromComputed(avg))) -
      mixed;
  return std::max(chi, 0.0);
}

double MeasuredInformation(const Ensemble& e, const Povm& m) {
  if (m.dim() != e.dim()) {
    throw DimensionMismatch("MeasuredInformation: POVM and ensemble dimensions differ");
  }
  std::vector<double> column(e.size());
  double total = 0.0;
  for (const HermitianOperator& f : m.elements()) {
    for (int x = 0; x < e.size(); ++x) {
      column[x] = std::max(0.0, (e.state(x).matrix() * f.matrix()).trace().real());
    }
    total += OutcomeTerm(e.prior(), column.data(), e.size());
  }
  return std::max(total, 0.0);
}

AccessibleInfoResult AccessibleInformationLower(const Ensemble& e, int restarts,
                                                std::uint64_t seed) {
  if (restarts < 1) throw ValidationError("AccessibleInformationLower: restarts must be >= 1");
  const int d = e.dim();
  const int outcomes = std::min(d * d, kMaxDim);
  // The Holevo quantity bounds every measured value, so reaching it ends the
  // search. The lowest restart index that reaches it wins, which keeps the
  // result independent of scheduling.
  const double target = HolevoInformation(e) - kHolevoReachTol;
  std::atomic<int> first_hit{restarts};
  std::vector<double> values(restarts, -kInf);
  std::vector<Eigen::MatrixXcd> frames(restarts);
  ParallelFor(restarts, [&](int r) {
    if (r > first_hit.load()) return;
    Eigen::MatrixXcd w = Eigen::MatrixXcd::Zero(outcomes, d);
    if (r == 0) {
      w.topRows(d).setIdentity();
    } else {
      w = RandomUnitary(outcomes, seed + static_cast<std::uint64_t>(r)).leftCols(d);
    }
    FrameAscent ascent(e, std::move(w));
    if (outcomes > 1) ascent.Run(target);
    values[r] = ascent.Value();
    frames[r] = ascent.frame();
    if (values[r] >= target) {
      int seen = first_hit.load();
      while (r < seen && !first_hit.compare_exchange_weak(seen, r)) {
      }
    }
  });
  int best = first_hit.load();
  if (best == restarts) {
    best = static_cast<int>(std::max_element(values.begin(), values.end()) - values.begin());
  }
  Povm povm = FrameMeasurement(frames[best]);
  const double value = MeasuredInformation(e, povm);
  return {value, std::move(povm)};
}

ChainReport InequalityChainReport(const Ensemble& e, const ChainOptions& options) {
  ChainReport r;
  r.accessible_lower = AccessibleInformationLower(e, options.restarts, options.seed).value;
  r.holevo = HolevoInformation(e);
  r.srm_leakage = PovmLeakage(e, SquareRootMeasurement(e));
  r.maximal = MaxLeakage(e, options.gap_tol);
  r.sandwiched_inf_mi = r.maximal;
  r.sandwiched_inf_mi.kind = LeakageKind::kSandwichedInfMI;
  r.barycentric = BarycentricLeakage(e, options.gap_tol);
  r.pairwise = PairwiseLeakage(e);

  const double s = options.slack;
  const double gb = r.barycentric.gap, gq = r.maximal.gap;
  Require(r.accessible_lower <= r.holevo + s, "I_acc_lb <= chi", r.accessible_lower, r.holevo);
  Require(r.holevo <= r.barycentric.value + gb + s, "chi <= B", r.holevo, r.barycentric.value);
  Require(r.barycentric.value <= r.pairwise.value + gb + s, "B <= R", r.barycentric.value,
          r.pairwise.value);
  Require(r.sandwiched_inf_mi.value <= r.barycentric.value + gq + gb + s, "I~_inf <= B",
          r.sandwiched_inf_mi.value, r.barycentric.value);
  Require(r.srm_leakage <= r.maximal.value + gq + s, "SRM <= Q", r.srm_leakage,
          r.maximal.value);
  Require(r.maximal.value <= r.barycentric.value + gq + gb + s, "Q <= B", r.maximal.value,
          r.barycentric.value);
  return r;
}

}  // namespace qleak
