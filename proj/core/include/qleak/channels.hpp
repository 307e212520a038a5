#pragma once

// Quantum channels in Kraus form, the global and local depolarizing
// channels, and the max-divergence consequence of quantum differential
// privacy: an (eps, 0)-DP channel has D~_inf(E(rho) || E(sigma)) <= eps/ln 2
// bits for every neighbouring pair. A passed check is necessary for DP, not
// sufficient.
//
// DP epsilons are in nats; divergences and leakages are in bits.

#include <cstdint>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include "qleak/hermitian.hpp"
#include "qleak/leakage.hpp"

namespace qleak {

inline constexpr double kKrausTol = 1e-9;

// Set on channels built by DepolarizingGlobal / DepolarizingLocal, where
// `dim` is the total dimension the leakage bound refers to.
struct DepolarizingTag {
  double p = 0.0;
  int dim = 0;
  int qubits = 0;  // 0 for the global channel
};

class QuantumChannel {
 public:
  // Each K_i is out_dim x in_dim. Throws ValidationError unless the list is
  // nonempty, shapes agree and sum K^H K = I within kKrausTol.
  explicit QuantumChannel(std::vector<CMatrix> kraus);

  static QuantumChannel Identity(int dim);
  static QuantumChannel Unitary(const CMatrix& u);

  int in_dim() const { return static_cast<int>(kraus_.front().cols()); }
  int out_dim() const { return static_cast<int>(kraus_.front().rows()); }
  const std::vector<CMatrix>& kraus() const { return kraus_; }
  const std::optional<DepolarizingTag>& depolarizing() const { return tag_; }

  // sum_i K_i rho K_i^H. Throws DimensionMismatch.
  DensityOperator Apply(const DensityOperator& rho) const;
  Ensemble Apply(const Ensemble& e) const;

 private:
  friend QuantumChannel DepolarizingGlobal(double p, int dim);
  friend QuantumChannel DepolarizingLocal(double p, int qubits);

  std::vector<CMatrix> kraus_;
  std::optional<DepolarizingTag> tag_;
};

// rho -> (p/d) I + (1-p) rho, realised with the d^2 Weyl operators X^a Z^b,
// weights 1 - p + p/d^2 (a = b = 0) and p/d^2. Zero-weight operators are
// dropped. Throws ValidationError unless 0 <= p <= 1 and 1 <= d <= 64.
QuantumChannel DepolarizingGlobal(double p, int dim);

// k-fold tensor power of DepolarizingGlobal(p, 2). Throws ValidationError
// unless 1 <= qubits <= 6.
QuantumChannel DepolarizingLocal(double p, int qubits);

// `second` after `first`. Throws DimensionMismatch.
QuantumChannel Compose(const QuantumChannel& second, const QuantumChannel& first);

QuantumChannel Tensor(const QuantumChannel& a, const QuantumChannel& b);

// Stinespring dilation: the first in_dim columns of a seeded Haar unitary on
// C^{out_dim * kraus_count}, cut into kraus_count blocks of out_dim rows.
QuantumChannel RandomChannel(int in_dim, int out_dim, int kraus_count, std::uint64_t seed);

// ln(1 + 2 (1 - p) d / p), +inf at p = 0. Throws ValidationError unless
// 0 <= p <= 1 and d >= 1.
double DpEpsilonBoundDepolarizing(double p, int dim);

// The same bound in bits: log2(1 + 2 (1 - p) d / p).
double LeakageBoundDepolarizing(double p, int dim);

struct AllPairs {};
struct TraceDistanceNeighbours {
  double kappa = 2.0;  // pairs with ||rho_x - rho_x'||_1 <= kappa
};
struct ExplicitPairs {
  std::vector<std::pair<int, int>> pairs;
};
using Neighbouring = std::variant<AllPairs, TraceDistanceNeighbours, ExplicitPairs>;

struct DpParams {
  double epsilon_nats = 0.0;
  double delta = 0.0;
  Neighbouring neighbouring = AllPairs{};
};

struct DpPairCheck {
  int x = 0;
  int x_prime = 0;
  double divergence_bits = 0.0;  // D~_inf(E(rho_x) || E(rho_x'))
  bool pass = false;
};

struct DpReport {
  double epsilon_nats = 0.0;
  double threshold_bits = 0.0;  // epsilon_nats / ln 2
  double max_divergence_bits = 0.0;
  std::vector<DpPairCheck> pairs;
  bool pass = true;  // every pair passes; vacuous when there are no pairs
};

// Ordered pairs (x, x') selected by params.neighbouring on the input
// states, reflexive pairs included. Throws UnsupportedMode when delta > 0
// and ValidationError on a negative epsilon, delta outside [0, 1], a
// non-positive kappa or an out-of-range explicit pair.
DpReport VerifyDpOnEnsemble(const QuantumChannel& ch, const Ensemble& e,
                            const DpParams& params);

struct ChannelLeakage {
  LeakageCertificate barycentric;
  LeakageCertificate pairwise;
  // log2(1 + 2 (1 - p) d / p) for depolarizing channels.
  std::optional<double> bound_bits;
};

// B and R of the ensemble after the channel. For a depolarizing channel with
// p > 0 throws ChainViolation when either exceeds the bound plus the
// barycentric gap plus 1e-6.
ChannelLeakage LeakageAfterChannel(const QuantumChannel& ch, const Ensemble& e,
                                   double gap_tol = 1e-6);

}  // namespace qleak
