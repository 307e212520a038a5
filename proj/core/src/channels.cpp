#include "qleak/channels.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "qleak/divergences.hpp"
#include "qleak/error.hpp"
#include "qleak/parallel.hpp"

namespace qleak {
namespace {

void CheckProbability(double p, const char* where) {
  if (!(p >= 0.0 && p <= 1.0)) {
    std::ostringstream os;
    os << where << ": p = " << p << " outside [0, 1]";
    throw ValidationError(os.str());
  }
}

CMatrix Shift(int d) {
  CMatrix x = CMatrix::Zero(d, d);
  for (int j = 0; j < d; ++j) x((j + 1) % d, j) = 1.0;
  return x;
}

CMatrix Clock(int d) {
  CMatrix z = CMatrix::Zero(d, d);
  for (int j = 0; j < d; ++j) z(j, j) = std::polar(1.0, 2.0 * std::numbers::pi * j / d);
  return z;
}

}  // namespace

QuantumChannel::QuantumChannel(std::vector<CMatrix> kraus) : kraus_(std::move(kraus)) {
  if (kraus_.empty()) throw ValidationError("QuantumChannel: no Kraus operators");
  const int rows = static_cast<int>(kraus_.front().rows());
  const int cols = static_cast<int>(kraus_.front().cols());
  if (rows < 1 || cols < 1 || rows > kMaxDim || cols > kMaxDim) {
    throw ValidationError("QuantumChannel: Kraus dimensions must be in 1..64");
  }
  CMatrix sum = CMatrix::Zero(cols, cols);
  for (const CMatrix& k : kraus_) {
    if (k.rows() != rows || k.cols() != cols) {
      throw DimensionMismatch("QuantumChannel: Kraus operators of different shapes");
    }
    sum += k.adjoint() * k;
  }
  const double dev = (sum - CMatrix::Identity(cols, cols)).cwiseAbs().maxCoeff();
  if (dev > kKrausTol) {
    std::ostringstream os;
    os << "QuantumChannel: sum K^H K deviates from the identity by " << dev;
    throw ValidationError(os.str());
  }
}

QuantumChannel QuantumChannel::Identity(int dim) {
  return QuantumChannel({CMatrix::Identity(dim, dim)});
}

QuantumChannel QuantumChannel::Unitary(const CMatrix& u) { return QuantumChannel({u}); }

DensityOperator QuantumChannel::Apply(const DensityOperator& rho) const {
  if (rho.dim() != in_dim()) {
    std::ostringstream os;
    os << "QuantumChannel::Apply: state dimension " << rho.dim() << ", channel input "
       << in_dim();
    throw DimensionMismatch(os.str());
  }
  CMatrix out = CMatrix::Zero(out_dim(), out_dim());
  for (const CMatrix& k : kraus_) out += k * rho.matrix() * k.adjoint();
  return DensityOperator::FromComputed(HermitianOperator::FromComputed(out));
}

Ensemble QuantumChannel::Apply(const Ensemble& e) const {
  std::vector<DensityOperator> out;
  out.reserve(e.size());
  for (const DensityOperator& rho : e.states()) out.push_back(Apply(rho));
  return Ensemble(e.prior(), std::move(out));
}

QuantumChannel DepolarizingGlobal(double p, int dim) {
  CheckProbability(p, "DepolarizingGlobal");
  if (dim < 1 || dim > kMaxDim) throw ValidationError("DepolarizingGlobal: dim must be in 1..64");
  const CMatrix x = Shift(dim), z = Clock(dim);
  const double d2 = static_cast<double>(dim) * dim;
  std::vector<CMatrix> kraus;
  CMatrix xa = CMatrix::Identity(dim, dim);
  for (int a = 0; a < dim; ++a) {
    CMatrix w = xa;
    for (int b = 0; b < dim; ++b) {
      const double weight = (a == 0 && b == 0) ? 1.0 - p + p / d2 : p / d2;
      if (weight > 0.0) kraus.push_back(std::sqrt(weight) * w);
      w = w * z;
    }
    xa = x * xa;
  }
  QuantumChannel ch(std::move(kraus));
  ch.tag_ = DepolarizingTag{p, dim, 0};
  return ch;
}

QuantumChannel DepolarizingLocal(double p, int qubits) {
  CheckProbability(p, "DepolarizingLocal");
  if (qubits < 1 || (1 << std::min(qubits, 7)) > kMaxDim) {
    throw ValidationError("DepolarizingLocal: qubits must be in 1..6");
  }
  const QuantumChannel one = DepolarizingGlobal(p, 2);
  QuantumChannel ch = one;
  for (int q = 1; q < qubits; ++q) ch = Tensor(ch, one);
  ch.tag_ = DepolarizingTag{p, 1 << qubits, qubits};
  return ch;
}

QuantumChannel Compose(const QuantumChannel& second, const QuantumChannel& first) {
  if (second.in_dim() != first.out_dim()) {
    throw DimensionMismatch("Compose: output of the first channel does not match input of the second");
  }
  std::vector<CMatrix> kraus;
  for (const CMatrix& b : second.kraus()) {
    for (const CMatrix& a : first.kraus()) kraus.push_back(b * a);
  }
  return QuantumChannel(std::move(kraus));
}

QuantumChannel Tensor(const QuantumChannel& a, const QuantumChannel& b) {
  if (a.in_dim() * b.in_dim() > kMaxDim || a.out_dim() * b.out_dim() > kMaxDim) {
    throw ValidationError("Tensor: product dimension exceeds 64");
  }
  std::vector<CMatrix> kraus;
  for (const CMatrix& ka : a.kraus()) {
    for (const CMatrix& kb : b.kraus()) kraus.push_back(Kron(ka, kb));
  }
  return QuantumChannel(std::move(kraus));
}

QuantumChannel RandomChannel(int in_dim, int out_dim, int kraus_count, std::uint64_t seed) {
  const int big = out_dim * kraus_count;
  if (in_dim < 1 || out_dim < 1 || kraus_count < 1 || big > kMaxDim || big < in_dim) {
    throw ValidationError(
        "RandomChannel: need in_dim <= out_dim * kraus_count <= 64, all positive");
  }
  const CMatrix v = RandomUnitary(big, seed).leftCols(in_dim);
  std::vector<CMatrix> kraus;
  for (int i = 0; i < kraus_count; ++i) kraus.push_back(v.middleRows(i * out_dim, out_dim));
  return QuantumChannel(std::move(kraus));
}

double DpEpsilonBoundDepolarizing(double p, int dim) {
  CheckProbability(p, "DpEpsilonBoundDepolarizing");
  if (dim < 1) throw ValidationError("DpEpsilonBoundDepolarizing: dim must be >= 1");
  if (p == 0.0) return kInf;
  return std::log1p(2.0 * (1.0 - p) * dim / p);
}

double LeakageBoundDepolarizing(double p, int dim) {
  return DpEpsilonBoundDepolarizing(p, dim) / std::numbers::ln2;
}

DpReport VerifyDpOnEnsemble(const QuantumChannel& ch, const Ensemble& e,
                            const DpParams& params) {
  if (params.delta > 0.0 && params.delta <= 1.0) {
    throw UnsupportedMode("VerifyDpOnEnsemble: only delta = 0 can be checked");
  }
  if (!(params.delta == 0.0)) throw ValidationError("VerifyDpOnEnsemble: delta outside [0, 1]");
  if (!(params.epsilon_nats >= 0.0)) {
    throw ValidationError("VerifyDpOnEnsemble: epsilon must be >= 0");
  }
  const int m = e.size();
  std::vector<std::pair<int, int>> pairs;
  if (const auto* explicit_pairs = std::get_if<ExplicitPairs>(&params.neighbouring)) {
    for (const auto& [x, xp] : explicit_pairs->pairs) {
      if (x < 0 || x >= m || xp < 0 || xp >= m) {
        std::ostringstream os;
        os << "VerifyDpOnEnsemble: pair (" << x << ", " << xp << ") out of range";
        throw ValidationError(os.str());
      }
      pairs.emplace_back(x, xp);
    }
  } else {
    double kappa = kInf;
    if (const auto* td = std::get_if<TraceDistanceNeighbours>(&params.neighbouring)) {
      if (!(td->kappa > 0.0)) throw ValidationError("VerifyDpOnEnsemble: kappa must be > 0");
      kappa = td->kappa;
    }
    for (int x = 0; x < m; ++x) {
      for (int xp = 0; xp < m; ++xp) {
        if (std::isinf(kappa) || TraceDistance(e.state(x).op(), e.state(xp).op()) <= kappa) {
          pairs.emplace_back(x, xp);
        }
      }
    }
  }

  std::vector<DensityOperator> out;
  for (const DensityOperator& rho : e.states()) out.push_back(ch.Apply(rho));
  DpReport r;
  r.epsilon_nats = params.epsilon_nats;
  r.threshold_bits = params.epsilon_nats / std::numbers::ln2;
  r.pairs.resize(pairs.size());
  ParallelFor(static_cast<int>(pairs.size()), [&](int i) {
    const auto [x, xp] = pairs[i];
    DpPairCheck& c = r.pairs[i];
    c.x = x;
    c.x_prime = xp;
    c.divergence_bits =
        x == xp ? 0.0 : SandwichedRenyi(out[x], out[xp].op(), RenyiOrder::Infinity());
    c.pass = c.divergence_bits <= r.threshold_bits;
  });
  for (const DpPairCheck& c : r.pairs) {
    r.max_divergence_bits = std::max(r.max_divergence_bits, c.divergence_bits);
    r.pass = r.pass && c.pass;
  }
  return r;
}

ChannelLeakage LeakageAfterChannel(const QuantumChannel& ch, const Ensemble& e,
                                   double gap_tol) {
  const Ensemble out = ch.Apply(e);
  ChannelLeakage r;
  r.barycentric = BarycentricLeakage(out, gap_tol);
  r.pairwise = PairwiseLeakage(out);
  const auto& tag = ch.depolarizing();
  if (tag && tag->p > 0.0) {
    r.bound_bits = LeakageBoundDepolarizing(tag->p, tag->dim);
    const double limit = *r.bound_bits + r.barycentric.gap + 1e-6;
    if (r.barycentric.value > limit || r.pairwise.value > limit) {
      std::ostringstream os;
      os.precision(12);
      os << "LeakageAfterChannel: B = " << r.barycentric.value << ", R = " << r.pairwise.value
         << " exceed the depolarizing bound " << *r.bound_bits;
      throw ChainViolation(os.str());
    }
  }
  return r;
}

}  // namespace qleak
