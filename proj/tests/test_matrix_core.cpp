#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "tracelab/ensembles.hpp"
#include "tracelab/matrix_core.hpp"

using namespace tracelab;

namespace {

const Complex I{0.0, 1.0};

ComplexMatrix jordan() { return ComplexMatrix::from_rows({{1.0, 1.0}, {0.0, 1.0}}); }
ComplexMatrix shift_up() { return ComplexMatrix::from_rows({{0.0, 1.0}, {0.0, 0.0}}); }
ComplexMatrix shift_down() { return ComplexMatrix::from_rows({{0.0, 0.0}, {1.0, 0.0}}); }

double frobenius_rel(const ComplexMatrix& x, const ComplexMatrix& y) {
  const double denom = std::max(1e-300, y.entries().norm());
  return (x.entries() - y.entries()).norm() / denom;
}

}  // namespace

TEST(ComplexMatrix, RejectsNonFiniteAndNonSquare) {
  DenseMatrix bad = DenseMatrix::Zero(2, 2);
  bad(0, 1) = Complex{std::nan(""), 0.0};
  EXPECT_THROW(ComplexMatrix{bad}, ContractViolation);
  EXPECT_THROW(ComplexMatrix{DenseMatrix::Zero(2, 3)}, ContractViolation);
  EXPECT_THROW(ComplexMatrix{DenseMatrix::Zero(0, 0)}, ContractViolation);
}

TEST(ComplexMatrix, NormCacheMatchesLargestSingularValue) {
  Rng rng = trial_rng(11, 0);
  const ComplexMatrix u = random_unitary(6, rng);
  ASSERT_TRUE(u.norm_cache().has_value());
  EXPECT_NEAR(*u.norm_cache(), oracle::singular_values_by_dilation(u.entries()).front(), 1e-12);
  const auto d = ComplexMatrix::diagonal({3.0, -4.0 * I, 0.5});
  EXPECT_NEAR(*d.norm_cache(), 4.0, 1e-12 * 4.0);
}

TEST(EigenvalueSequence, DiagonalOrdersByModulusAndDropsZeros) {
  const auto seq = eigenvalue_sequence(ComplexMatrix::diagonal({1.0, 2.0 * I, 0.0}), 1e-12);
  ASSERT_EQ(seq.values.size(), 2u);
  EXPECT_EQ(seq.values[0], 2.0 * I);
  EXPECT_EQ(seq.values[1], Complex(1.0));
  EXPECT_EQ(seq.zero_tail_count, 1u);
  EXPECT_EQ(seq.source_dim, 3u);
}

TEST(EigenvalueSequence, JordanBlockKeepsMultiplicity) {
  const auto seq = eigenvalue_sequence(jordan());
  ASSERT_EQ(seq.values.size(), 2u);
  EXPECT_NEAR(std::abs(seq.values[0] - 1.0), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(seq.values[1] - 1.0), 0.0, 1e-12);
  EXPECT_EQ(seq.zero_tail_count, 0u);
}

TEST(EigenvalueSequence, NilpotentIsAllZeroTail) {
  const auto seq = eigenvalue_sequence(shift_up());
  EXPECT_TRUE(seq.values.empty());
  EXPECT_EQ(seq.zero_tail_count, 2u);
}

TEST(EigenvalueSequence, TiesBrokenByAscendingArgument) {
  // Unit circle: 1 (arg 0), i (π/2), −1 (π), −i (3π/2).
  const auto seq = eigenvalue_sequence(ComplexMatrix::diagonal({-I, -1.0, I, 1.0}));
  ASSERT_EQ(seq.values.size(), 4u);
  EXPECT_EQ(seq.values[0], Complex(1.0));
  EXPECT_EQ(seq.values[1], I);
  EXPECT_EQ(seq.values[2], Complex(-1.0));
  EXPECT_EQ(seq.values[3], -I);
}

TEST(EigenvalueSequence, RejectsBadZeroTolerance) {
  EXPECT_THROW(eigenvalue_sequence(jordan(), 1.0), ContractViolation);
  EXPECT_THROW(eigenvalue_sequence(jordan(), -1e-3), ContractViolation);
}

TEST(EigenvalueSequence, MatchesClosedFormOn2x2) {
  Rng rng = trial_rng(5, 0);
  for (int trial = 0; trial < 50; ++trial) {
    const ComplexMatrix a = random_gaussian(2, rng);
    const auto [r1, r2] = oracle::eigenvalues_2x2(a.entries());
    const auto seq = eigenvalue_sequence(a, 0.0);
    ASSERT_EQ(seq.size(), 2u);
    const auto got = seq.padded();
    const double direct = std::abs(got[0] - r1) + std::abs(got[1] - r2);
    const double swapped = std::abs(got[0] - r2) + std::abs(got[1] - r1);
    EXPECT_LT(std::min(direct, swapped), 1e-12 * (1.0 + a.op_norm()));
  }
}

TEST(EigenvalueSequence, OrderingAndDeterminismOnRandomMatrices) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng rng = trial_rng(seed, 1);
    const ComplexMatrix a = random_gaussian(12, rng);
    const auto s1 = eigenvalue_sequence(a);
    const auto s2 = eigenvalue_sequence(a);
    ASSERT_EQ(s1.values, s2.values);
    for (std::size_t j = 1; j < s1.values.size(); ++j)
      EXPECT_GE(std::abs(s1.values[j - 1]) + 1e-12 * std::abs(s1.values[0]), std::abs(s1.values[j]));
  }
}

TEST(EigenvalueSequence, EachValueMakesShiftNearlySingular) {
  Rng rng = trial_rng(17, 0);
  const ComplexMatrix a = random_gaussian(10, rng);
  for (const auto& lambda : eigenvalue_sequence(a).values) {
    const DenseMatrix shifted = a.entries() - lambda * DenseMatrix::Identity(10, 10);
    EXPECT_LT(oracle::singular_values_by_dilation(shifted).back(), 1e-10 * a.op_norm());
  }
}

TEST(EigenvalueSequence, FiniteLidskiiOnRandomMatrices) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    Rng rng = trial_rng(seed, 2);
    const std::size_t dim = 2 + seed % 30;
    const ComplexMatrix a = random_gaussian(dim, rng);
    Complex sum{0.0, 0.0};
    for (const auto& v : eigenvalue_sequence(a).values) sum += v;
    EXPECT_LE(std::abs(a.trace() - sum), 1e-8 * static_cast<double>(dim) * std::max(1.0, a.op_norm()));
  }
}

TEST(SingularValues, Examples) {
  const auto diag = singular_value_sequence(ComplexMatrix::diagonal({3.0, -4.0 * I}));
  EXPECT_NEAR(diag.values[0], 4.0, 1e-14);
  EXPECT_NEAR(diag.values[1], 3.0, 1e-14);

  const auto rank_one = singular_value_sequence(ComplexMatrix::from_rows({{0.0, 2.0}, {0.0, 0.0}}));
  EXPECT_NEAR(rank_one.values[0], 2.0, 1e-14);
  EXPECT_NEAR(rank_one.values[1], 0.0, 1e-14);

  // √((3 ± √5)/2): the golden ratio and its reciprocal.
  const auto j = singular_value_sequence(jordan());
  EXPECT_NEAR(j.values[0], 1.6180339887498949, 1e-14);
  EXPECT_NEAR(j.values[1], 0.6180339887498949, 1e-14);
}

TEST(SingularValues, AgreeWithHermitianDilation) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Rng rng = trial_rng(seed, 3);
    ComplexMatrix a = random_gaussian(8, rng);
    if (seed % 2) a = truncate_rank(a, 3);
    const auto got = singular_value_sequence(a).values;
    const auto want = oracle::singular_values_by_dilation(a.entries());
    for (std::size_t k = 0; k < got.size(); ++k) EXPECT_NEAR(got[k], want[k], 1e-10 * a.op_norm());
  }
}

TEST(SingularValues, UnitarilyInvariant) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Rng rng = trial_rng(seed, 4);
    const ComplexMatrix a = random_gaussian(9, rng);
    const ComplexMatrix u = random_unitary(9, rng);
    const ComplexMatrix v = random_unitary(9, rng);
    const auto base = singular_value_sequence(a).values;
    const auto rotated = singular_value_sequence(u * a * v).values;
    for (std::size_t k = 0; k < base.size(); ++k) EXPECT_NEAR(base[k], rotated[k], 1e-9 * a.op_norm());
  }
}

TEST(Polar, RealDiagonal) {
  const auto p = polar_decompose(ComplexMatrix::diagonal({-1.0, 2.0}));
  EXPECT_LT(oracle::max_abs(p.unitary.entries() - ComplexMatrix::diagonal({-1.0, 1.0}).entries()), 1e-12);
  EXPECT_LT(oracle::max_abs(p.positive.entries() - ComplexMatrix::diagonal({1.0, 2.0}).entries()), 1e-12);
}

TEST(Polar, UnitaryInputIsItsOwnFactor) {
  Rng rng = trial_rng(2, 0);
  const ComplexMatrix v = random_unitary(5, rng);
  const auto p = polar_decompose(v);
  EXPECT_LT(oracle::max_abs(p.unitary.entries() - v.entries()), 1e-10);
  EXPECT_LT(oracle::max_abs(p.positive.entries() - DenseMatrix::Identity(5, 5)), 1e-10);
}

TEST(Polar, RankDeficientStillGetsAUnitaryFactor) {
  const ComplexMatrix a = shift_up();
  const auto p = polar_decompose(a);
  EXPECT_TRUE(is_unitary(p.unitary, 1e-10));
  // |A| = √(A*A) = diag(0, 1).
  EXPECT_LT(oracle::max_abs(p.positive.entries() - ComplexMatrix::diagonal({0.0, 1.0}).entries()), 1e-12);
  EXPECT_LT(oracle::max_abs(oracle::naive_multiply(p.unitary.entries(), p.positive.entries()) - a.entries()), 1e-12);
}

TEST(Polar, RankOneReconstructsWithOracleProduct) {
  const auto a = ComplexMatrix::from_rows({{0.0, 2.0}, {0.0, 0.0}});
  const auto p = polar_decompose(a);
  EXPECT_TRUE(is_unitary(p.unitary, 1e-10));
  EXPECT_LT(oracle::max_abs(p.positive.entries() - ComplexMatrix::diagonal({0.0, 2.0}).entries()), 1e-12);
  EXPECT_LT(oracle::max_abs(oracle::naive_multiply(p.unitary.entries(), p.positive.entries()) - a.entries()), 1e-12);
}

TEST(Polar, InvariantsOnRandomMatrices) {
  for (std::uint64_t seed = 0; seed < 15; ++seed) {
    Rng rng = trial_rng(seed, 5);
    ComplexMatrix a = random_gaussian(10, rng);
    if (seed % 3 == 0) a = truncate_rank(a, 4);
    const auto p = polar_decompose(a);
    EXPECT_TRUE(is_unitary(p.unitary, 1e-10));
    EXPECT_TRUE(is_hermitian(p.positive, 1e-10));
    EXPECT_GE(oracle::jacobi_hermitian_eigenvalues(p.positive.entries()).front(), -1e-10);
    EXPECT_LT(frobenius_rel(p.unitary * p.positive, a), 1e-9);
  }
}

TEST(SpectralProjection, Thresholding) {
  const auto a = ComplexMatrix::diagonal({1.0, 0.5, 0.25});
  EXPECT_LT(oracle::max_abs(spectral_projection(a, 1.0 / 3.0).entries() -
                            ComplexMatrix::diagonal({1.0, 1.0, 0.0}).entries()),
            1e-12);
  EXPECT_LT(oracle::max_abs(spectral_projection(a, 1.0 / 8.0).entries() - DenseMatrix::Identity(3, 3)), 1e-12);
  EXPECT_LT(oracle::max_abs(spectral_projection(a, 2.0).entries()), 1e-15);
}

TEST(SpectralProjection, RejectsBadInput) {
  EXPECT_THROW(spectral_projection(jordan(), 0.5), ContractViolation);
  EXPECT_THROW(spectral_projection(ComplexMatrix::diagonal({1.0, -1.0}), 0.5), ContractViolation);
  EXPECT_THROW(spectral_projection(ComplexMatrix::diagonal({1.0, 1.0}), 0.0), ContractViolation);
}

TEST(SpectralProjection, CommutesAndIsIdempotentOnRandomPsd) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Rng rng = trial_rng(seed, 6);
    const ComplexMatrix g = random_gaussian(12, rng);
    const ComplexMatrix a = g.adjoint() * g;
    const double norm = a.op_norm();
    for (double cutoff : {0.1 * norm, 0.5 * norm, 0.9 * norm}) {
      const ComplexMatrix p = spectral_projection(a, cutoff);
      EXPECT_LT(oracle::max_abs((p * p - p).entries()), 1e-10);
      EXPECT_TRUE(is_hermitian(p, 1e-10));
      EXPECT_LT(oracle::max_abs(commutator(p, a).entries()), 1e-10 * norm);
    }
  }
}

TEST(FourUnitary, IdentityAndZero) {
  const auto id = four_unitary_decomposition(ComplexMatrix::identity(3));
  EXPECT_NEAR(std::abs(id.coefficients[0] - 0.5), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(id.coefficients[1] - 0.5), 0.0, 1e-15);
  EXPECT_LT(oracle::max_abs(id.unitaries[0].entries() - DenseMatrix::Identity(3, 3)), 1e-12);
  EXPECT_LT(oracle::max_abs(id.unitaries[1].entries() - DenseMatrix::Identity(3, 3)), 1e-12);
  EXPECT_LT(oracle::max_abs(id.unitaries[2].entries() - I * DenseMatrix::Identity(3, 3)), 1e-12);
  EXPECT_LT(oracle::max_abs(id.unitaries[3].entries() + I * DenseMatrix::Identity(3, 3)), 1e-12);

  const auto z = four_unitary_decomposition(ComplexMatrix::zero(2));
  for (const auto& c : z.coefficients) EXPECT_EQ(c, Complex(0.0));
  for (const auto& u : z.unitaries) EXPECT_TRUE(is_unitary(u, 0.0));
}

TEST(FourUnitary, ReconstructsAndEachFactorIsUnitary) {
  std::vector<ComplexMatrix> inputs{ComplexMatrix::from_rows({{0.0, 2.0}, {0.0, 0.0}}), jordan()};
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    Rng rng = trial_rng(seed, 7);
    inputs.push_back(random_gaussian(7, rng));
  }
  for (const auto& a : inputs) {
    const auto dec = four_unitary_decomposition(a);
    DenseMatrix sum = DenseMatrix::Zero(a.entries().rows(), a.entries().cols());
    for (int k = 0; k < 4; ++k) {
      EXPECT_TRUE(is_unitary(dec.unitaries[static_cast<std::size_t>(k)], 1e-10));
      sum += dec.coefficients[static_cast<std::size_t>(k)] * dec.unitaries[static_cast<std::size_t>(k)].entries();
    }
    EXPECT_LT((sum - a.entries()).norm() / a.entries().norm(), 1e-9);
  }
}

TEST(FourUnitary, HermitianContractionIsRealPartOfItsLift) {
  // U + U* = 2X for U = X + i√(I − X²).
  Rng rng = trial_rng(9, 0);
  const ComplexMatrix g = random_gaussian(6, rng);
  const ComplexMatrix h = Complex(0.5) * (g + g.adjoint());
  const auto dec = four_unitary_decomposition(h);
  const DenseMatrix& u = dec.unitaries[0].entries();
  EXPECT_LT(oracle::max_abs(u + u.adjoint() - 2.0 * h.entries() / h.op_norm()), 1e-10);
}

TEST(Resolvent, Examples) {
  EXPECT_EQ(resolvent_identity_residual(ComplexMatrix::zero(3), ComplexMatrix::zero(3), 1.0), 0.0);
  EXPECT_LE(resolvent_identity_residual(ComplexMatrix::diagonal({1.0, 0.0}), ComplexMatrix::diagonal({0.0, 1.0}), 5.0),
            1e-12);
  EXPECT_LE(resolvent_identity_residual(shift_up(), shift_down(), 2.0), 1e-10);
}

TEST(Resolvent, MatchesGaussJordanInverse) {
  // (2 − BA)⁻¹ computed without the library.
  const ComplexMatrix a = shift_up();
  const ComplexMatrix b = shift_down();
  const DenseMatrix ba = oracle::naive_multiply(b.entries(), a.entries());
  const DenseMatrix inv = oracle::naive_inverse(2.0 * DenseMatrix::Identity(2, 2) - ba);
  // BA = diag(0, 1) so the inverse is diag(1/2, 1).
  EXPECT_NEAR(std::abs(inv(0, 0) - 0.5), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(inv(1, 1) - 1.0), 0.0, 1e-15);
  EXPECT_LE(resolvent_identity_residual(a, b, 2.0), 1e-10);
}

TEST(Resolvent, SingularShiftAndZeroLambdaAreErrors) {
  // AB = diag(1, 0): λ = 1 lies in the spectrum.
  EXPECT_THROW(resolvent_identity_residual(shift_up(), shift_down(), 1.0), SingularityError);
  EXPECT_THROW(resolvent_identity_residual(shift_up(), shift_down(), 0.0), ContractViolation);
}

TEST(AlgebraicMultiplicity, Examples) {
  EXPECT_EQ(algebraic_multiplicity(jordan(), 1.0, 1e-8), 2u);
  EXPECT_EQ(algebraic_multiplicity(ComplexMatrix::diagonal({1.0, 2.0}), 1.0, 1e-8), 1u);
  EXPECT_EQ(algebraic_multiplicity(ComplexMatrix::diagonal({1.0, 2.0}), 5.0, 1e-8), 0u);
  EXPECT_THROW(algebraic_multiplicity(jordan(), 1.0, 0.0), ContractViolation);
}

TEST(AlgebraicMultiplicity, NilpotentCountsAllAtZero) {
  EXPECT_EQ(algebraic_multiplicity(shift_up(), 0.0, 1e-8), 2u);
}

TEST(Commutator, Examples) {
  Rng rng = trial_rng(1, 0);
  const ComplexMatrix a = random_gaussian(4, rng);
  EXPECT_EQ(oracle::max_abs(commutator(a, a).entries()), 0.0);
  EXPECT_EQ(oracle::max_abs(commutator(ComplexMatrix::diagonal({1.0, 2.0}), ComplexMatrix::diagonal({3.0, 4.0})).entries()),
            0.0);
  const auto k = commutator(shift_up(), shift_down());
  EXPECT_EQ(k.entries(), ComplexMatrix::diagonal({1.0, -1.0}).entries());
  EXPECT_THROW(commutator(ComplexMatrix::zero(2), ComplexMatrix::zero(3)), ContractViolation);
}

TEST(Intertwining, HoldsForRandomPairs) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Rng rng = trial_rng(seed, 8);
    const ComplexMatrix a = Complex(0.3) * random_gaussian(8, rng);
    const ComplexMatrix b = Complex(0.3) * random_gaussian(8, rng);
    for (int n = 0; n <= 4; ++n) {
      const double growth = std::pow(1.0 + a.op_norm() * b.op_norm(), n) * b.op_norm();
      EXPECT_LE(intertwining_residual(a, b, n), 1e-9 * growth) << "n=" << n;
    }
  }
}
