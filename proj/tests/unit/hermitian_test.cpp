#include "qleak/hermitian.hpp"

#include <cmath>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "qleak/error.hpp"

namespace qleak {
namespace {

CMatrix RandomHermitian(int d, std::uint64_t seed) {
  const CMatrix u = RandomUnitary(d, seed);
  const CMatrix g = RandomUnitary(d, seed + 1000);
  return u + u.adjoint() + 0.5 * (g + g.adjoint());
}

TEST(HermitianOperatorTest, RejectsMalformedMatrices) {
  EXPECT_THROW(HermitianOperator(CMatrix::Zero(2, 3)), ValidationError);
  EXPECT_THROW(HermitianOperator(CMatrix::Zero(0, 0)), ValidationError);
  EXPECT_THROW(HermitianOperator(CMatrix::Zero(65, 65)), ValidationError);
  CMatrix m = CMatrix::Zero(2, 2);
  m(0, 1) = 1.0;
  EXPECT_THROW(HermitianOperator{m}, ValidationError);
}

TEST(HermitianOperatorTest, SymmetrisesWithinTolerance) {
  CMatrix m = CMatrix::Identity(2, 2);
  m(0, 1) = Complex(0.5, 1e-13);
  m(1, 0) = Complex(0.5, 0.0);
  const HermitianOperator h(m);
  EXPECT_EQ(h(0, 1), std::conj(h(1, 0)));
}

TEST(HermitianOperatorTest, Arithmetic) {
  const HermitianOperator a = HermitianOperator::Diagonal({1.0, 2.0});
  const HermitianOperator b = HermitianOperator::Identity(2);
  EXPECT_DOUBLE_EQ((a + b).Trace(), 5.0);
  EXPECT_DOUBLE_EQ((a - b).Trace(), 1.0);
  EXPECT_DOUBLE_EQ((2.0 * a).Trace(), 6.0);
  EXPECT_DOUBLE_EQ(HermitianOperator::Zero(3).FrobeniusNorm(), 0.0);
}

TEST(DensityOperatorTest, Validation) {
  EXPECT_THROW(DensityOperator(HermitianOperator::Diagonal({0.5, 0.6})), ValidationError);
  EXPECT_THROW(DensityOperator(HermitianOperator::Diagonal({1.2, -0.2})), ValidationError);
  EXPECT_NO_THROW(DensityOperator(HermitianOperator::Diagonal({0.25, 0.75})));
  const DensityOperator r =
      DensityOperator::FromComputed(HermitianOperator::Diagonal({0.5, 0.5 + 1e-9}));
  EXPECT_NEAR(r.op().Trace(), 1.0, 1e-15);
  EXPECT_THROW(DensityOperator::FromComputed(HermitianOperator::Diagonal({0.5, 0.6})),
               ValidationError);
  EXPECT_THROW(DensityOperator::Pure(CVector::Zero(2)), ValidationError);
}

TEST(DensityOperatorTest, Factories) {
  const DensityOperator m = DensityOperator::MaximallyMixed(4);
  EXPECT_NEAR(m.matrix()(2, 2).real(), 0.25, 1e-15);
  CVector psi(2);
  psi << 3.0, Complex(0.0, 4.0);
  const DensityOperator p = DensityOperator::Pure(psi);
  EXPECT_NEAR(p.matrix()(0, 0).real(), 9.0 / 25.0, 1e-15);
  EXPECT_NEAR(std::abs(p.matrix()(0, 1)), 12.0 / 25.0, 1e-15);
}

class EigTest : public ::testing::TestWithParam<int> {};

TEST_P(EigTest, MatchesReferenceSolver) {
  const int d = GetParam();
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const CMatrix m = RandomHermitian(d, 31 * seed + d);
    const Spectrum s = EigHermitian(HermitianOperator::FromComputed(m));
    const oracle::Vec ref = oracle::Eigenvalues(m);
    ASSERT_EQ(s.eigenvalues.size(), d);
    for (int k = 0; k < d; ++k) EXPECT_NEAR(s.eigenvalues[k], ref[k], 1e-11);
    const CMatrix back =
        s.eigenvectors * s.eigenvalues.cast<Complex>().asDiagonal() * s.eigenvectors.adjoint();
    EXPECT_LT((back - m).cwiseAbs().maxCoeff(), 1e-11);
    EXPECT_LT((s.eigenvectors.adjoint() * s.eigenvectors - CMatrix::Identity(d, d))
                  .cwiseAbs()
                  .maxCoeff(),
              1e-12);
  }
}

INSTANTIATE_TEST_SUITE_P(Dimensions, EigTest, ::testing::Values(1, 2, 3, 5, 8, 16, 32));

TEST(EigTest, DegenerateSpectrum) {
  const CMatrix u = RandomUnitary(6, 9);
  RVector w(6);
  w << 1, 1, 1, 2, 2, 3;
  const CMatrix m = u * w.cast<Complex>().asDiagonal() * u.adjoint();
  const Spectrum s = EigHermitian(HermitianOperator::FromComputed(m));
  for (int k = 0; k < 6; ++k) EXPECT_NEAR(s.eigenvalues[k], w[k], 1e-12);
}

TEST(OperatorPowerTest, MatchesReference) {
  for (int d : {2, 3, 6}) {
    const DensityOperator rho = RandomDensity(d, d, 40 + d);
    for (double t : {-0.5, 0.5, 2.0, 0.3}) {
      const HermitianOperator p = OperatorPower(rho.op(), t);
      EXPECT_LT((p.matrix() - oracle::Power(rho.matrix(), t)).cwiseAbs().maxCoeff(), 1e-10)
          << "d=" << d << " t=" << t;
    }
  }
}

TEST(OperatorPowerTest, PseudoInverseOnSupport) {
  const DensityOperator rho = RandomDensity(4, 2, 5);
  const HermitianOperator inv = OperatorPower(rho.op(), -1.0);
  const CMatrix proj = SupportProjector(rho.op()).matrix();
  EXPECT_LT((inv.matrix() * rho.matrix() - proj).cwiseAbs().maxCoeff(), 1e-9);
  EXPECT_NEAR(proj.trace().real(), 2.0, 1e-12);
  EXPECT_LT((OperatorPower(rho.op(), 0.0).matrix() - proj).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(OperatorPowerTest, RejectsIndefinite) {
  EXPECT_THROW(OperatorPower(HermitianOperator::Diagonal({1.0, -0.5}), 0.5), DomainError);
  EXPECT_FALSE(IsPsd(HermitianOperator::Diagonal({1.0, -0.5})));
  EXPECT_TRUE(IsPsd(HermitianOperator::Diagonal({1.0, -1e-12})));
}

TEST(SupportTest, Containment) {
  const HermitianOperator p0 = HermitianOperator::Diagonal({1.0, 0.0, 0.0});
  const HermitianOperator p01 = HermitianOperator::Diagonal({0.5, 0.5, 0.0});
  EXPECT_TRUE(SupportContained(p0, p01));
  EXPECT_FALSE(SupportContained(p01, p0));
  EXPECT_TRUE(SupportContained(p01, HermitianOperator::Identity(3)));
}

TEST(KronTest, ProductAndPartialTrace) {
  const DensityOperator a = RandomDensity(2, 2, 1);
  const DensityOperator b = RandomDensity(3, 2, 2);
  const HermitianOperator ab = Kron(a.op(), b.op());
  ASSERT_EQ(ab.dim(), 6);
  EXPECT_NEAR(ab(1, 4).real(), (a.matrix()(0, 1) * b.matrix()(1, 1)).real(), 1e-15);
  const HermitianOperator ta = PartialTrace(ab, 2, 3, Subsystem::kSecond);
  const HermitianOperator tb = PartialTrace(ab, 2, 3, Subsystem::kFirst);
  EXPECT_LT((ta.matrix() - a.matrix()).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_LT((tb.matrix() - b.matrix()).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_THROW(PartialTrace(ab, 2, 2, Subsystem::kFirst), DimensionMismatch);
  EXPECT_THROW(Kron(HermitianOperator::Identity(16), HermitianOperator::Identity(8)),
               ValidationError);
}

TEST(DistanceTest, TraceNormAndEntropy) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const DensityOperator r = RandomDensity(4, 3, seed);
    const DensityOperator s = RandomDensity(4, 4, seed + 50);
    double ref = 0.0;
    for (double v : oracle::Eigenvalues(r.matrix() - s.matrix())) ref += std::abs(v);
    EXPECT_NEAR(TraceDistance(r.op(), s.op()), ref, 1e-11);
    EXPECT_NEAR(VonNeumannEntropy(r), oracle::Entropy(r.matrix()), 1e-11);
  }
  EXPECT_NEAR(VonNeumannEntropy(DensityOperator::MaximallyMixed(8)), 3.0, 1e-12);
  EXPECT_NEAR(VonNeumannEntropy(DensityOperator::Pure(CVector::Unit(3, 1))), 0.0, 1e-12);
}

TEST(RandomTest, DensityRankAndDeterminism) {
  const DensityOperator a = RandomDensity(5, 2, 77);
  const DensityOperator b = RandomDensity(5, 2, 77);
  EXPECT_EQ(a.matrix(), b.matrix());
  const oracle::Vec w = oracle::Eigenvalues(a.matrix());
  int rank = 0;
  for (double v : w) rank += v > 1e-10;
  EXPECT_EQ(rank, 2);
  EXPECT_THROW(RandomDensity(3, 4, 0), ValidationError);
}

TEST(RandomTest, UnitaryIsUnitary) {
  const CMatrix u = RandomUnitary(7, 3);
  EXPECT_LT((u.adjoint() * u - CMatrix::Identity(7, 7)).cwiseAbs().maxCoeff(), 1e-13);
}

}  // namespace
}  // namespace qleak
