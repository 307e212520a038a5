#include "qleak/vqml.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "qleak/error.hpp"
#include "qleak/parallel.hpp"

namespace qleak {
namespace {

constexpr double kUnitaryTol = 1e-9;

CMatrix Ry(double t) {
  CMatrix g(2, 2);
  const double c = std::cos(0.5 * t), s = std::sin(0.5 * t);
  g << c, -s, s, c;
  return g;
}

CMatrix Rz(double t) {
  CMatrix g = CMatrix::Zero(2, 2);
  g(0, 0) = std::polar(1.0, -0.5 * t);
  g(1, 1) = std::polar(1.0, 0.5 * t);
  return g;
}

int Bit(int index, int qubit, int k) { return (index >> (k - 1 - qubit)) & 1; }

CMatrix OnQubit(const CMatrix& g, int qubit, int k) {
  const int before = 1 << qubit, after = 1 << (k - 1 - qubit);
  return Kron(Kron(CMatrix::Identity(before, before), g), CMatrix::Identity(after, after));
}

CMatrix Cnot(int control, int target, int k) {
  const int d = 1 << k;
  CMatrix m = CMatrix::Zero(d, d);
  for (int i = 0; i < d; ++i) {
    const int j = Bit(i, control, k) ? i ^ (1 << (k - 1 - target)) : i;
    m(j, i) = 1.0;
  }
  return m;
}

CMatrix Circuit(int k, const std::vector<Layer>& layers) {
  const int d = 1 << k;
  CMatrix u = CMatrix::Identity(d, d);
  for (const Layer& layer : layers) {
    for (int j = 0; j < k; ++j) u = OnQubit(Ry(layer.ry[j]) * Rz(layer.rz[j]), j, k) * u;
    if (k == 2) {
      u = Cnot(0, 1, k) * u;
    } else if (k > 2) {
      for (int j = 0; j < k; ++j) u = Cnot(j, (j + 1) % k, k) * u;
    }
  }
  return u;
}

std::vector<double> Probabilities(const Povm& povm, const CMatrix& rho) {
  std::vector<double> p;
  double total = 0.0;
  for (const HermitianOperator& o : povm.elements()) {
    p.push_back(std::max(0.0, (o.matrix() * rho).trace().real()));
    total += p.back();
  }
  for (double& v : p) v /= total;
  return p;
}

void Check(bool ok, const std::string& what) {
  if (!ok) throw ChainViolation("TradeoffCurve: " + what);
}

}  // namespace

Povm BasisClassifier(int qubits) {
  if (qubits < 1 || qubits > 6) throw ValidationError("BasisClassifier: qubits must be in 1..6");
  return Povm::Basis(1 << qubits);
}

Povm ParityClassifier(int qubits) {
  if (qubits < 1 || qubits > 6) throw ValidationError("ParityClassifier: qubits must be in 1..6");
  const int d = 1 << qubits;
  std::vector<double> even(d, 0.0), odd(d, 0.0);
  for (int i = 0; i < d; ++i) (__builtin_popcount(i) % 2 ? odd : even)[i] = 1.0;
  return Povm({HermitianOperator::Diagonal(even), HermitianOperator::Diagonal(odd)});
}

VariationalModel::VariationalModel(int qubits, EncoderKind encoder, std::vector<Layer> layers,
                                   Povm classifier)
    : qubits_(qubits),
      encoder_(encoder),
      layers_(std::move(layers)),
      classifier_(std::move(classifier)) {
  if (qubits_ < 1 || qubits_ > 6) {
    throw ValidationError("VariationalModel: qubits must be in 1..6");
  }
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    if (static_cast<int>(layers_[l].ry.size()) != qubits_ ||
        static_cast<int>(layers_[l].rz.size()) != qubits_) {
      std::ostringstream os;
      os << "VariationalModel: layer " << l << " needs " << qubits_
         << " ry and rz angles";
      throw ValidationError(os.str());
    }
  }
  if (classifier_.dim() != dim()) {
    std::ostringstream os;
    os << "VariationalModel: classifier acts on dimension " << classifier_.dim()
       << ", circuit on " << dim();
    throw DimensionMismatch(os.str());
  }
  circuit_ = Circuit(qubits_, layers_);
  const double dev =
      (circuit_.adjoint() * circuit_ - CMatrix::Identity(dim(), dim())).cwiseAbs().maxCoeff();
  if (dev > kUnitaryTol) throw SolverError("VariationalModel: circuit lost unitarity");
}

VariationalModel VariationalModel::Random(int qubits, int layers, EncoderKind encoder,
                                          Povm classifier, std::uint64_t seed) {
  if (layers < 0) throw ValidationError("VariationalModel::Random: layers must be >= 0");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  std::vector<Layer> ls(layers);
  for (Layer& l : ls) {
    for (int j = 0; j < qubits; ++j) l.ry.push_back(angle(rng));
    for (int j = 0; j < qubits; ++j) l.rz.push_back(angle(rng));
  }
  return VariationalModel(qubits, encoder, std::move(ls), std::move(classifier));
}

CVector VariationalModel::EncodeState(const Input& x) const {
  const int d = dim();
  if (encoder_ == EncoderKind::kBasis) {
    if (x.size() != 1 || !(x[0] >= 0.0) || x[0] >= d || x[0] != std::floor(x[0])) {
      std::ostringstream os;
      os << "EncodeState: basis input must be one integer in [0, " << d << ")";
      throw ValidationError(os.str());
    }
    return CVector::Unit(d, static_cast<int>(x[0]));
  }
  if (static_cast<int>(x.size()) != qubits_) {
    std::ostringstream os;
    os << "EncodeState: angle input needs " << qubits_ << " features, got " << x.size();
    throw ValidationError(os.str());
  }
  CVector psi = CVector::Ones(1);
  for (int j = 0; j < qubits_; ++j) {
    if (!std::isfinite(x[j])) throw ValidationError("EncodeState: non-finite feature");
    const double t = std::fmod(x[j], 2.0 * std::numbers::pi);
    const CVector q = Ry(t < 0 ? t + 2.0 * std::numbers::pi : t).col(0);
    psi = Kron(psi, q);
  }
  return psi;
}

Ensemble EncodeEnsemble(const VariationalModel& model, const std::vector<Input>& inputs,
                        const ProbVector& prior) {
  if (static_cast<int>(inputs.size()) != prior.size()) {
    std::ostringstream os;
    os << "EncodeEnsemble: " << inputs.size() << " inputs, prior of size " << prior.size();
    throw ValidationError(os.str());
  }
  std::vector<DensityOperator> states;
  for (const Input& x : inputs) states.push_back(DensityOperator::Pure(model.EncodeState(x)));
  return Ensemble(prior, std::move(states));
}

ProbVector ClassifyProbabilities(const VariationalModel& model, const Input& x,
                                 const QuantumChannel* channel) {
  const CVector psi = model.circuit() * model.EncodeState(x);
  DensityOperator rho = DensityOperator::Pure(psi);
  if (channel) rho = channel->Apply(rho);
  return ProbVector(Probabilities(model.classifier(), rho.matrix()));
}

double PerformanceDegradation(const VariationalModel& model, const std::vector<Input>& inputs,
                              const QuantumChannel& channel) {
  double worst = 0.0;
  for (const Input& x : inputs) {
    const ProbVector clean = ClassifyProbabilities(model, x);
    const ProbVector noisy = ClassifyProbabilities(model, x, &channel);
    double shift = 0.0;
    for (int c = 0; c < clean.size(); ++c) shift += std::abs(clean[c] - noisy[c]);
    worst = std::max(worst, shift);
  }
  return worst;
}

std::vector<TradeoffRow> TradeoffCurve(const VariationalModel& model,
                                       const std::vector<Input>& inputs,
                                       const ProbVector& prior,
                                       const std::vector<double>& p_grid, double gap_tol) {
  for (double p : p_grid) {
    if (!(p > 0.0 && p <= 1.0)) {
      std::ostringstream os;
      os << "TradeoffCurve: p = " << p << " outside (0, 1]";
      throw ValidationError(os.str());
    }
  }
  const int d = model.dim();
  const Ensemble processed =
      EncodeEnsemble(model, inputs, prior).Conjugate(model.circuit());
  std::vector<TradeoffRow> rows(p_grid.size());
  ParallelFor(static_cast<int>(p_grid.size()), [&](int i) {
    const double p = p_grid[i];
    const QuantumChannel ch = DepolarizingGlobal(p, d);
    TradeoffRow& r = rows[i];
    r.p = p;
    r.gamma_actual = PerformanceDegradation(model, inputs, ch);
    r.gamma_bound = 2.0 * p;
    const ChannelLeakage leak = LeakageAfterChannel(ch, processed, gap_tol);
    r.leakage_b = leak.barycentric.value;
    r.leakage_r = leak.pairwise.value;
    r.gap = leak.barycentric.gap;
    r.leakage_bound = LeakageBoundDepolarizing(p, d);
  });

  for (std::size_t i = 0; i < rows.size(); ++i) {
    const TradeoffRow& r = rows[i];
    std::ostringstream at;
    at.precision(12);
    at << " at p = " << r.p;
    Check(r.gamma_actual <= r.gamma_bound + 1e-9, "degradation above 2p" + at.str());
    Check(r.leakage_b <= r.leakage_r + r.gap + 1e-6, "B above R" + at.str());
    Check(r.leakage_b <= r.leakage_bound + r.gap + 1e-6 &&
              r.leakage_r <= r.leakage_bound + r.gap + 1e-6,
          "leakage above the depolarizing bound" + at.str());
    const double via_gamma = std::log2((1.0 - 2.0 * d) + 4.0 * d / r.gamma_bound);
    Check(std::abs(via_gamma - r.leakage_bound) <= 1e-9 * std::max(1.0, r.leakage_bound),
          "trade-off identity fails" + at.str());
    if (r.gamma_actual > 0.0) {
      Check(r.leakage_r <= via_gamma + r.gap + 1e-6, "R above the trade-off bound" + at.str());
    }
    if (i > 0 && rows[i].p > rows[i - 1].p) {
      Check(rows[i].leakage_bound < rows[i - 1].leakage_bound,
            "bound not decreasing along the grid" + at.str());
    }
  }
  return rows;
}

}  // namespace qleak
