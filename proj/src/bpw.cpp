#include "tracelab/bpw.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "tracelab/sequence_calculus.hpp"

namespace tracelab {

namespace {

using Eigen::Index;

Index idx(std::size_t v) { return static_cast<Index>(v); }

std::string block_key(const char* prefix, std::size_t n) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%s[%02zu]", prefix, n);
  return buf;
}

void require_blocks(const WeightSpec& weights, std::size_t blocks, std::size_t min_blocks, const char* context) {
  if (blocks < min_blocks)
    throw ContractViolation(std::string(context) + ": need at least " + std::to_string(min_blocks) + " blocks");
  if (blocks > weights.size())
    throw ContractViolation(std::string(context) + ": " + std::to_string(blocks) +
                            " blocks requested but only " + std::to_string(weights.size()) + " weights given");
}

Complex principal_sqrt(Complex z) {
  // -0.0 imaginary parts would select the lower branch.
  if (z.imag() == 0.0) z = Complex{z.real(), 0.0};
  return std::sqrt(z);
}

}  // namespace

WeightSpec::WeightSpec(Kind kind, std::vector<Complex> values) : kind_(kind), values_(std::move(values)) {
  if (values_.empty()) throw ContractViolation("WeightSpec: at least one weight is required");
  partial_sums_.reserve(values_.size());
  Complex running{0.0, 0.0};
  for (const auto& v : values_) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw ContractViolation("WeightSpec: weights must be finite");
    running += v;
    partial_sums_.push_back(running);
  }
}

WeightSpec WeightSpec::harmonic(std::size_t count) {
  std::vector<Complex> v(count);
  for (std::size_t n = 1; n <= count; ++n) v[n - 1] = 1.0 / static_cast<double>(n);
  return WeightSpec(Kind::harmonic, std::move(v));
}

WeightSpec WeightSpec::inverse_square(std::size_t count) {
  std::vector<Complex> v(count);
  for (std::size_t n = 1; n <= count; ++n) {
    const auto x = static_cast<double>(n);
    v[n - 1] = 1.0 / (x * x);
  }
  return WeightSpec(Kind::inverse_square, std::move(v));
}

WeightSpec WeightSpec::explicit_list(std::vector<Complex> values) {
  return WeightSpec(Kind::explicit_list, std::move(values));
}

WeightSpec WeightSpec::custom(std::vector<Complex> values) {
  return WeightSpec(Kind::custom_generator, std::move(values));
}

Complex WeightSpec::d(std::size_t n) const {
  if (n == 0 || n > values_.size()) throw ContractViolation("WeightSpec::d: index out of range");
  return values_[n - 1];
}

Complex WeightSpec::partial_sum(std::size_t n) const {
  if (n == 0 || n > values_.size()) throw ContractViolation("WeightSpec::partial_sum: index out of range");
  return partial_sums_[n - 1];
}

bool WeightSpec::real_nonnegative() const {
  return std::all_of(values_.begin(), values_.end(), [](Complex v) { return v.imag() == 0.0 && v.real() >= 0.0; });
}

std::string to_string(WeightSpec::Kind kind) {
  switch (kind) {
    case WeightSpec::Kind::explicit_list: return "explicit";
    case WeightSpec::Kind::harmonic: return "harmonic";
    case WeightSpec::Kind::inverse_square: return "inverse-square";
    case WeightSpec::Kind::custom_generator: return "custom-generator";
  }
  return "explicit";
}

std::string WeightSpec::describe() const {
  return to_string(kind_) + "(" + std::to_string(values_.size()) + ")";
}

BpwBlocks build_blocks(const WeightSpec& weights, std::size_t n) {
  if (n == 0 || n > weights.size())
    throw ContractViolation("build_blocks: n must lie in [1, " + std::to_string(weights.size()) + "]");
  const double nn = static_cast<double>(n);
  const Complex root = principal_sqrt(weights.partial_sum(n));
  const Complex upper_scale = root / nn;
  const Complex lower_scale = root / (nn + 1.0);

  BpwBlocks blk;
  blk.a = DenseMatrix::Zero(idx(n), idx(n + 1));
  blk.x = DenseMatrix::Zero(idx(n), idx(n + 1));
  blk.b = DenseMatrix::Zero(idx(n + 1), idx(n));
  blk.y = DenseMatrix::Zero(idx(n + 1), idx(n));
  for (std::size_t j = 0; j < n; ++j) {
    const double descending = std::sqrt(static_cast<double>(n - j));
    const double ascending = std::sqrt(static_cast<double>(j + 1));
    blk.a(idx(j), idx(j)) = upper_scale * descending;
    blk.x(idx(j), idx(j + 1)) = upper_scale * ascending;
    blk.b(idx(j + 1), idx(j)) = -lower_scale * ascending;
    blk.y(idx(j), idx(j)) = lower_scale * descending;
  }
  return blk;
}

ComplexMatrix assemble(const WeightSpec& weights, std::size_t blocks, BpwOperator which) {
  require_blocks(weights, blocks, 1, "assemble");
  const std::size_t dim = truncation_dim(blocks);
  DenseMatrix m = DenseMatrix::Zero(idx(dim), idx(dim));
  for (std::size_t k = 1; k < blocks; ++k) {
    const BpwBlocks blk = build_blocks(weights, k);
    const DenseMatrix& upper = which == BpwOperator::C ? blk.a : blk.x;
    const DenseMatrix& lower = which == BpwOperator::C ? blk.b : blk.y;
    const Index row_k = idx(block_offset(k));
    const Index row_next = idx(block_offset(k + 1));
    m.block(row_k, row_next, idx(k), idx(k + 1)) = upper;
    m.block(row_next, row_k, idx(k + 1), idx(k)) = lower;
  }
  return ComplexMatrix(std::move(m));
}

BpwTruncation make_truncation(const WeightSpec& weights, std::size_t blocks) {
  require_blocks(weights, blocks, 1, "make_truncation");
  return BpwTruncation{weights,
                       blocks,
                       assemble(weights, blocks, BpwOperator::C),
                       assemble(weights, blocks, BpwOperator::Z),
                       truncation_dim(blocks),
                       blocks >= 2 ? block_offset(blocks - 1) : 0};
}

ComplexMatrix leading_block(const ComplexMatrix& m, std::size_t size) {
  if (size == 0 || size > m.dim()) throw ContractViolation("leading_block: size out of range");
  return ComplexMatrix(m.entries().topLeftCorner(idx(size), idx(size)));
}

std::vector<DiagonalBlock> expected_diagonal(const WeightSpec& weights, std::size_t blocks) {
  require_blocks(weights, blocks, 1, "expected_diagonal");
  std::vector<DiagonalBlock> out;
  out.reserve(blocks);
  for (std::size_t n = 1; n <= blocks; ++n) out.push_back({n, weights.d(n) / static_cast<double>(n)});
  return out;
}

EigenvalueSequence expected_spectrum(const WeightSpec& weights, std::size_t blocks, double zero_tol_rel) {
  std::vector<Complex> all;
  double top = 0.0;
  for (const auto& blk : expected_diagonal(weights, blocks)) {
    all.insert(all.end(), blk.size, blk.scalar);
    top = std::max(top, std::abs(blk.scalar));
  }
  EigenvalueSequence seq;
  seq.source_dim = all.size();
  for (const auto& v : all) {
    if (std::abs(v) <= zero_tol_rel * top)
      ++seq.zero_tail_count;
    else
      seq.values.push_back(v);
  }
  sort_by_modulus(seq.values);
  return seq;
}

CheckReport verify_commutator(const WeightSpec& weights, std::size_t blocks, double tol) {
  require_blocks(weights, blocks, 3, "verify_commutator");
  const BpwTruncation t = make_truncation(weights, blocks);
  const DenseMatrix k = commutator(t.c, t.z).entries();

  CheckReport report("bpw-verify");
  report.note("weights", weights.describe());
  report.note("blocks", static_cast<std::int64_t>(blocks));
  report.note("dim", static_cast<std::int64_t>(t.dim));
  report.note("interior_dim", static_cast<std::int64_t>(t.boundary_start));
  report.note("interior_block_rows", static_cast<std::int64_t>(blocks - 2));

  auto block = [&](std::size_t row, std::size_t col) {
    return k.block(idx(block_offset(row)), idx(block_offset(col)), idx(row), idx(col));
  };

  const std::size_t interior = blocks - 2;
  double diag_worst = 0.0, upper_worst = 0.0, lower_worst = 0.0, other_worst = 0.0;
  for (std::size_t n = 1; n <= interior; ++n) {
    const DenseMatrix expected = weights.d(n) / static_cast<double>(n) * DenseMatrix::Identity(idx(n), idx(n));
    const double dev = max_abs_entry(block(n, n) - expected);
    report.record(block_key("D", n), dev);
    diag_worst = std::max(diag_worst, dev);

    const double up = max_abs_entry(block(n, n + 2));
    const double low = max_abs_entry(block(n + 2, n));
    report.record(block_key("U", n), up);
    report.record(block_key("L", n), low);
    upper_worst = std::max(upper_worst, up);
    lower_worst = std::max(lower_worst, low);

    for (std::size_t col = 1; col <= blocks; ++col) {
      if (col == n || col == n + 2 || col + 2 == n) continue;
      other_worst = std::max(other_worst, max_abs_entry(block(n, col)));
    }
  }
  report.check("diagonal_max_deviation", diag_worst, tol);
  report.check("upper_offdiag_max", upper_worst, tol);
  report.check("lower_offdiag_max", lower_worst, tol);
  report.check("other_blocks_max", other_worst, tol);

  // Last two block rows see the cut; recorded, never judged.
  for (std::size_t n = blocks - 1; n <= blocks; ++n) {
    const DenseMatrix expected = weights.d(n) / static_cast<double>(n) * DenseMatrix::Identity(idx(n), idx(n));
    report.record(block_key("boundary_D", n), max_abs_entry(block(n, n) - expected));
  }
  return report;
}

CheckReport spectrum_consistency(const WeightSpec& weights, std::size_t blocks, double tol) {
  require_blocks(weights, blocks, 3, "spectrum_consistency");
  const BpwTruncation t = make_truncation(weights, blocks);
  const ComplexMatrix interior = leading_block(commutator(t.c, t.z), t.boundary_start);
  const EigenvalueSequence computed = eigenvalue_sequence(interior);
  const EigenvalueSequence expected = expected_spectrum(weights, blocks - 2);
  const MatchReport match = match_spectra(computed, expected, tol);

  CheckReport report("bpw-spectrum");
  report.note("weights", weights.describe());
  report.note("blocks", static_cast<std::int64_t>(blocks));
  report.note("interior_dim", static_cast<std::int64_t>(t.boundary_start));
  report.note("nonzero_computed", static_cast<std::int64_t>(computed.values.size()));
  report.note("nonzero_expected", static_cast<std::int64_t>(expected.values.size()));
  report.check("max_distance", match.max_distance, match.tolerance);
  report.check("unmatched_count",
               static_cast<double>(match.unmatched_left.size() + match.unmatched_right.size()), 0.0);
  return report;
}

namespace {

// Smallest M with s_j ≤ M·candidate_j; infinite when a zero candidate faces a
// nonzero singular value.
double dominance_constant(const std::vector<double>& s, const std::vector<double>& candidate, double zero_floor) {
  double m = 0.0;
  for (std::size_t j = 0; j < s.size(); ++j) {
    if (s[j] <= zero_floor) continue;
    if (candidate[j] <= 0.0) return std::numeric_limits<double>::infinity();
    m = std::max(m, s[j] / candidate[j]);
  }
  return m;
}

MetaValue finite_or_label(double v) {
  if (std::isfinite(v)) return v;
  return std::string("inf");
}

}  // namespace

CheckReport product_dominance_report(const WeightSpec& weights, std::size_t blocks) {
  require_blocks(weights, blocks, 3, "product_dominance_report");
  if (!weights.real_nonnegative())
    throw ContractViolation("product_dominance_report: weights must be real and nonnegative");
  const BpwTruncation t = make_truncation(weights, blocks);
  const std::size_t interior_dim = t.boundary_start;
  const std::size_t interior_blocks = blocks - 2;

  std::vector<double> by_weight, by_mean;
  for (std::size_t n = 1; n <= interior_blocks; ++n) {
    const double nn = static_cast<double>(n);
    by_weight.insert(by_weight.end(), n, weights.d(n).real() / nn);
    by_mean.insert(by_mean.end(), n, weights.partial_sum(n).real() / nn);
  }
  std::sort(by_weight.begin(), by_weight.end(), std::greater<>());
  std::sort(by_mean.begin(), by_mean.end(), std::greater<>());

  CheckReport report("bpw-product-dominance", /*is_informational=*/true);
  report.note("weights", weights.describe());
  report.note("blocks", static_cast<std::int64_t>(blocks));
  report.note("interior_dim", static_cast<std::int64_t>(interior_dim));

  const std::pair<const char*, ComplexMatrix> products[] = {
      {"CZ", leading_block(t.c * t.z, interior_dim)},
      {"ZC", leading_block(t.z * t.c, interior_dim)},
  };
  bool weight_bound_holds = true;
  bool mean_bound_holds = true;
  for (const auto& [label, product] : products) {
    const auto s = singular_value_sequence(product).values;
    const double floor = 1e-12 * std::max(1.0, s.empty() ? 0.0 : s.front());
    const double m_weight = dominance_constant(s, by_weight, floor);
    const double m_mean = dominance_constant(s, by_mean, floor);
    report.note(std::string(label) + "_constant_dn_over_n", finite_or_label(m_weight));
    report.note(std::string(label) + "_constant_sn_over_n", finite_or_label(m_mean));
    report.record(std::string(label) + "_largest_singular_value", s.empty() ? 0.0 : s.front());
    weight_bound_holds = weight_bound_holds && std::isfinite(m_weight);
    mean_bound_holds = mean_bound_holds && std::isfinite(m_mean);
  }
  report.note("dn_over_n_bound_supported", weight_bound_holds);
  report.note("sn_over_n_bound_supported", mean_bound_holds);
  return report;
}

}  // namespace tracelab
