#pragma once

// A small variational quantum classifier: inputs are encoded as
// V_x |0...0>, processed by a layered circuit U_theta, optionally passed
// through a noise channel and measured with a classifier POVM {O_c}.
// Qubit 0 is the most significant bit of the computational basis index.

#include <optional>
#include <vector>

#include "qleak/channels.hpp"
#include "qleak/divergences.hpp"
#include "qleak/leakage.hpp"

namespace qleak {

enum class EncoderKind {
  kBasis,  // input {i}: |i>, 0 <= i < 2^k
  kAngle,  // input {x_0 .. x_{k-1}}: (x) R_y(x_j) |0>, x_j taken mod 2 pi
};

// One circuit layer: R_y(ry[j]) R_z(rz[j]) on every qubit j, then the CNOT
// ring CNOT(0,1), CNOT(1,2), ..., CNOT(k-1,0). Two qubits use CNOT(0,1)
// only; one qubit has no entangler.
struct Layer {
  std::vector<double> ry;
  std::vector<double> rz;
};

using Input = std::vector<double>;

// Basis POVM (2^k classes) or parity of the bit string (2 classes).
Povm BasisClassifier(int qubits);
Povm ParityClassifier(int qubits);

class VariationalModel {
 public:
  // Throws ValidationError unless 1 <= qubits <= 6, every layer has `qubits`
  // angles of each kind and the POVM acts on 2^qubits dimensions.
  VariationalModel(int qubits, EncoderKind encoder, std::vector<Layer> layers,
                   Povm classifier);

  // Seeded model with uniform angles in [0, 2 pi).
  static VariationalModel Random(int qubits, int layers, EncoderKind encoder,
                                 Povm classifier, std::uint64_t seed);

  int qubits() const { return qubits_; }
  int dim() const { return 1 << qubits_; }
  EncoderKind encoder() const { return encoder_; }
  const std::vector<Layer>& layers() const { return layers_; }
  const Povm& classifier() const { return classifier_; }
  // U_theta, checked unitary within 1e-9 at construction.
  const CMatrix& circuit() const { return circuit_; }

  // V_x |0...0>. Throws ValidationError on a malformed input.
  CVector EncodeState(const Input& x) const;

 private:
  int qubits_;
  EncoderKind encoder_;
  std::vector<Layer> layers_;
  Povm classifier_;
  CMatrix circuit_;
};

// Pure-state ensemble {prior(x), V_x |0><0| V_x^H}. Throws ValidationError
// when inputs and prior differ in length.
Ensemble EncodeEnsemble(const VariationalModel& model, const std::vector<Input>& inputs,
                        const ProbVector& prior);

// tr(O_c E(U rho_x U^H)), with E the identity when no channel is given.
ProbVector ClassifyProbabilities(const VariationalModel& model, const Input& x,
                                 const QuantumChannel* channel = nullptr);

// max_x sum_c |P(c | x) - P_E(c | x)| over the given inputs.
double PerformanceDegradation(const VariationalModel& model, const std::vector<Input>& inputs,
                              const QuantumChannel& channel);

struct TradeoffRow {
  double p = 0.0;
  double gamma_actual = 0.0;
  double gamma_bound = 0.0;    // 2p
  double leakage_b = 0.0;      // bits
  double leakage_r = 0.0;      // bits, may be +inf
  double leakage_bound = 0.0;  // log2(1 + 2 (1 - p) d / p)
  double gap = 0.0;            // bracket width of leakage_b
};

// One row per p in p_grid (each in (0, 1]) for the global depolarizing
// channel on 2^k dimensions applied after U_theta. Leakages are those of the
// noisy ensemble. Throws ChainViolation when a row breaks
//   gamma_actual <= gamma_bound + 1e-9,  B <= R + gap + 1e-6,
//   B, R <= leakage_bound + gap + 1e-6,
//   log2((1 - 2d) + 4d / gamma_bound) == leakage_bound,
// or when the grid is increasing but the bound is not decreasing.
std::vector<TradeoffRow> TradeoffCurve(const VariationalModel& model,
                                       const std::vector<Input>& inputs,
                                       const ProbVector& prior,
                                       const std::vector<double>& p_grid,
                                       double gap_tol = 1e-6);

}  // namespace qleak
