#pragma once

// Classical Renyi divergence and Sibson's alpha-mutual information, and the
// Petz and sandwiched quantum Renyi relative entropies. All results are in
// bits. +infinity is an ordinary return value (support violation at
// alpha >= 1), not an error.

#include <limits>
#include <vector>

#include "qleak/hermitian.hpp"

namespace qleak {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// |<i|j>|^2 above this counts as overlap in the Petz D_inf eigen-ratio rule.
inline constexpr double kOverlapTol = 1e-12;
// Orders with |alpha - 1| below this are evaluated on the alpha = 1 branch.
inline constexpr double kNearOneTol = 1e-6;
// Absolute tolerance on the sum of a probability vector.
inline constexpr double kProbSumTol = 1e-10;

class ProbVector {
 public:
  // Throws ValidationError on an empty vector, a negative or non-finite
  // entry, or a sum differing from 1 by more than kProbSumTol.
  explicit ProbVector(std::vector<double> probs);

  static ProbVector Uniform(int n);

  int size() const { return static_cast<int>(probs_.size()); }
  double operator[](int i) const { return probs_[i]; }
  const std::vector<double>& values() const { return probs_; }

 private:
  std::vector<double> probs_;
};

// Rows are P(.|x), one ProbVector per input symbol, all over the same
// output alphabet.
class ConditionalKernel {
 public:
  explicit ConditionalKernel(std::vector<ProbVector> rows);

  int inputs() const { return static_cast<int>(rows_.size()); }
  int outputs() const { return rows_.front().size(); }
  double operator()(int x, int y) const { return rows_[x][y]; }
  const ProbVector& row(int x) const { return rows_[x]; }

 private:
  std::vector<ProbVector> rows_;
};

class RenyiOrder {
 public:
  enum class Kind { kFinite, kOne, kInfinity };

  // alpha > 0, alpha != 1, finite. Throws ValidationError otherwise.
  static RenyiOrder Finite(double alpha);
  static RenyiOrder One() { return RenyiOrder(Kind::kOne, 1.0); }
  static RenyiOrder Infinity() { return RenyiOrder(Kind::kInfinity, kInf); }

  Kind kind() const { return kind_; }
  // Meaningful for kFinite; 1 for kOne and +inf for kInfinity.
  double alpha() const { return alpha_; }
  bool at_least_one() const { return kind_ != Kind::kFinite || alpha_ > 1.0; }

 private:
  RenyiOrder(Kind kind, double alpha) : kind_(kind), alpha_(alpha) {}

  Kind kind_;
  double alpha_;
};

// d_alpha(p || q) over supp(q); +inf when supp(p) is not inside supp(q) and
// alpha >= 1.
double RenyiClassical(const ProbVector& p, const ProbVector& q,
                      RenyiOrder alpha);

// Sibson's I_alpha(X;Y). One: mutual information. Infinity: log2 sum_y
// max_{x in supp(prior)} P(y|x). Finite: the closed form
// alpha/(alpha-1) log2 sum_y (sum_x p(x) P(y|x)^alpha)^(1/alpha).
double SibsonInformation(const ProbVector& prior,
                         const ConditionalKernel& kernel, RenyiOrder alpha);

// Petz D_alpha(rho || sigma) with powers taken on the support.
double PetzRenyi(const DensityOperator& rho, const HermitianOperator& sigma,
                 RenyiOrder alpha);

// Sandwiched D~_alpha(rho || sigma). The alpha = infinity branch is the
// max-relative entropy log2 lambda_max(sigma^-1/2 rho sigma^-1/2), computed
// on supp(sigma) after a support check.
double SandwichedRenyi(const DensityOperator& rho,
                       const HermitianOperator& sigma, RenyiOrder alpha);

// Same as SandwichedRenyi(.., Infinity()) but for an arbitrary PSD `rho`
// (not necessarily unit trace). Returned in linear scale: the smallest mu
// with rho <= mu sigma, or +inf.
double MaxRelativeRatio(const HermitianOperator& rho,
                        const HermitianOperator& sigma);
// Same, reusing a decomposition of sigma (which must be PSD).
double MaxRelativeRatio(const HermitianOperator& rho,
                        const Spectrum& sigma_spectrum);

// tr(rho (log2 rho - log2 sigma)), +inf when rho is not << sigma.
double QuantumRelativeEntropy(const DensityOperator& rho,
                              const HermitianOperator& sigma);

}  // namespace qleak
