#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "tracelab/check_report.hpp"
#include "tracelab/matrix_core.hpp"

namespace tracelab {

/// Weight sequence d_1, d_2, ... for the block commutator construction.
/// Weights may be complex; square roots use the principal branch.
class WeightSpec {
 public:
  enum class Kind { explicit_list, harmonic, inverse_square, custom_generator };

  static WeightSpec harmonic(std::size_t count);
  static WeightSpec inverse_square(std::size_t count);
  static WeightSpec explicit_list(std::vector<Complex> values);
  /// Generator output is materialised as an explicit list.
  static WeightSpec custom(std::vector<Complex> values);

  Kind kind() const { return kind_; }
  std::size_t size() const { return values_.size(); }
  /// d_n, 1-based.
  Complex d(std::size_t n) const;
  /// s_n = d_1 + ... + d_n.
  Complex partial_sum(std::size_t n) const;
  const std::vector<Complex>& values() const { return values_; }
  bool real_nonnegative() const;
  std::string describe() const;

 private:
  WeightSpec(Kind kind, std::vector<Complex> values);
  Kind kind_ = Kind::explicit_list;
  std::vector<Complex> values_;
  std::vector<Complex> partial_sums_;
};

std::string to_string(WeightSpec::Kind kind);

/// A_n, X_n are n×(n+1); B_n, Y_n are (n+1)×n.
struct BpwBlocks {
  DenseMatrix a, b, x, y;
};

BpwBlocks build_blocks(const WeightSpec& weights, std::size_t n);

enum class BpwOperator { C, Z };

/// Offset of block row k (1-based) in the block-row-major layout.
constexpr std::size_t block_offset(std::size_t k) { return (k - 1) * k / 2; }
constexpr std::size_t truncation_dim(std::size_t blocks) { return blocks * (blocks + 1) / 2; }

/// C or Z truncated to block rows 1..N (dimension N(N+1)/2).
ComplexMatrix assemble(const WeightSpec& weights, std::size_t blocks, BpwOperator which);

struct BpwTruncation {
  WeightSpec weights;
  std::size_t block_count = 0;
  ComplexMatrix c;
  ComplexMatrix z;
  std::size_t dim = 0;
  /// First index of block row N−1; everything before it is the interior.
  std::size_t boundary_start = 0;
};

BpwTruncation make_truncation(const WeightSpec& weights, std::size_t blocks);

/// Leading principal block of size `size`.
ComplexMatrix leading_block(const ComplexMatrix& m, std::size_t size);

struct DiagonalBlock {
  std::size_t size = 0;
  Complex scalar;
};

/// Claimed diagonal of [C, Z]: block n is (d_n/n)·I_n.
std::vector<DiagonalBlock> expected_diagonal(const WeightSpec& weights, std::size_t blocks);

/// expected_diagonal flattened into a spectrum.
EigenvalueSequence expected_spectrum(const WeightSpec& weights, std::size_t blocks,
                                     double zero_tol_rel = kDefaultZeroTolRel);

CheckReport verify_commutator(const WeightSpec& weights, std::size_t blocks, double tol);

/// eigenvalue_sequence of the interior of [C, Z] against expected_diagonal.
CheckReport spectrum_consistency(const WeightSpec& weights, std::size_t blocks, double tol);

CheckReport product_dominance_report(const WeightSpec& weights, std::size_t blocks);

}  // namespace tracelab
