#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "tracelab/errors.hpp"

namespace tracelab {

using Complex = std::complex<double>;
using DenseMatrix = Eigen::MatrixXcd;

/// Dense square complex matrix. Immutable once built; every constructor
/// rejects non-finite entries.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  explicit ComplexMatrix(DenseMatrix entries, std::optional<double> known_norm = std::nullopt);

  static ComplexMatrix zero(std::size_t dim);
  static ComplexMatrix identity(std::size_t dim);
  static ComplexMatrix diagonal(const std::vector<Complex>& diag);
  static ComplexMatrix from_rows(std::initializer_list<std::initializer_list<Complex>> rows);

  std::size_t dim() const { return static_cast<std::size_t>(entries_.rows()); }
  const DenseMatrix& entries() const { return entries_; }
  Complex operator()(std::size_t i, std::size_t j) const {
    return entries_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }

  /// Operator 2-norm (largest singular value). Uses the cached value when the
  /// constructor was told it.
  double op_norm() const;
  const std::optional<double>& norm_cache() const { return norm_cache_; }

  Complex trace() const { return entries_.trace(); }
  ComplexMatrix adjoint() const;

  friend ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b);
  friend ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b);
  friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
  friend ComplexMatrix operator*(Complex s, const ComplexMatrix& a);

 private:
  DenseMatrix entries_;
  std::optional<double> norm_cache_;
};

/// Largest singular value of an arbitrary (possibly rectangular) block.
double operator_norm(const DenseMatrix& m);
double max_abs_entry(const DenseMatrix& m);

/// λ(A): nonzero eigenvalues by nonincreasing modulus, ties broken by
/// ascending argument in [0, 2π). Eigenvalues with modulus at most
/// zero_tol_rel·‖A‖ are only counted in zero_tail_count.
struct EigenvalueSequence {
  std::vector<Complex> values;
  std::size_t zero_tail_count = 0;
  std::size_t source_dim = 0;

  std::size_t size() const { return values.size() + zero_tail_count; }
  /// values followed by zero_tail_count zeros.
  std::vector<Complex> padded() const;
  /// Moduli of padded(), a nonincreasing nonnegative sequence.
  std::vector<double> moduli() const;
};

struct SingularSequence {
  std::vector<double> values;
  std::optional<std::size_t> source_dim;

  SingularSequence() = default;
  /// Throws ContractViolation unless values is nonnegative and nonincreasing.
  explicit SingularSequence(std::vector<double> v, std::optional<std::size_t> dim = std::nullopt);

  std::size_t size() const { return values.size(); }
};

struct PolarFactors {
  ComplexMatrix unitary;
  ComplexMatrix positive;
};

struct FourUnitaryDecomposition {
  std::array<Complex, 4> coefficients;
  std::array<ComplexMatrix, 4> unitaries;
};

inline constexpr double kDefaultZeroTolRel = 1e-10;
/// Schur iteration budget per matrix dimension.
inline constexpr int kSchurSweepsPerDim = 40;

/// Every eigenvalue with algebraic multiplicity, in solver order.
std::vector<Complex> all_eigenvalues(const ComplexMatrix& a);

/// Orders arbitrary complex values by the λ(A) convention (nonincreasing
/// modulus, ascending argument among equal moduli).
void sort_by_modulus(std::vector<Complex>& values);

EigenvalueSequence eigenvalue_sequence(const ComplexMatrix& a,
                                       double zero_tol_rel = kDefaultZeroTolRel);
SingularSequence singular_value_sequence(const ComplexMatrix& a);
PolarFactors polar_decompose(const ComplexMatrix& a);

/// Orthogonal projection onto the eigenvectors of a Hermitian PSD matrix
/// whose eigenvalue is at least cutoff.
ComplexMatrix spectral_projection(const ComplexMatrix& a, double cutoff);

/// A = Σ coefficients[k]·unitaries[k], each unitary of the form X ± i√(I−X²).
FourUnitaryDecomposition four_unitary_decomposition(const ComplexMatrix& a);

struct ResolventCheck {
  double residual = 0.0;
  /// ‖(λ−BA)⁻¹‖ times the larger of the two condition numbers, floored at 1.
  double condition_scale = 1.0;
};

inline constexpr double kResolventConditionCap = 1e12;

/// ‖(λ−BA)⁻¹ − λ⁻¹(I + B(λ−AB)⁻¹A)‖ in operator norm together with the
/// conditioning it should be judged against.
ResolventCheck resolvent_identity_check(const ComplexMatrix& a, const ComplexMatrix& b, Complex lambda);
double resolvent_identity_residual(const ComplexMatrix& a, const ComplexMatrix& b, Complex lambda);

std::size_t algebraic_multiplicity(const ComplexMatrix& a, Complex lambda, double cluster_tol);

ComplexMatrix commutator(const ComplexMatrix& x, const ComplexMatrix& y);

/// ‖(I−BA)ⁿB − B(I−AB)ⁿ‖ in operator norm.
double intertwining_residual(const ComplexMatrix& a, const ComplexMatrix& b, int power);

bool is_unitary(const ComplexMatrix& u, double tol);
bool is_hermitian(const ComplexMatrix& h, double tol);

}  // namespace tracelab
