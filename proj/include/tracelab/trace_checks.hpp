#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "tracelab/bpw.hpp"
#include "tracelab/check_report.hpp"
#include "tracelab/matrix_core.hpp"

namespace tracelab {

/// |trace(A) − Σλ(A)| against 1e-8·dim·max(1, ‖A‖).
CheckReport lidskii_residual(const ComplexMatrix& a);

/// Weyl's inequality: s(A) logarithmically submajorizes |λ(A)|. Also checks
/// |trace A| ≤ Σ|λ| ≤ Σ s.
CheckReport weyl_check(const ComplexMatrix& a, double rel_tol);

/// Nonzero spectra of AB and BA agree with multiplicity, and
/// |trace(AB) − trace(BA)| ≤ 1e-10·dim·‖A‖·‖B‖.
CheckReport ab_ba_spectrum_check(const ComplexMatrix& a, const ComplexMatrix& b, double tol);

struct LnrrLevel {
  std::size_t n = 0;
  double cutoff = 0.0;
  /// |t(P A B) − t(P A P B P)|, |t(P A P B P) − t(P B P A P)|, |t(P B P A P) − t(B A P)|
  std::array<double, 3> residual_chain{};
  Complex partial_trace_left;
  Complex partial_trace_right;
};

struct LnrrTrace {
  std::vector<LnrrLevel> levels;
  double limit_gap = 0.0;
  /// |trace(AB − BA) − trace(|A|BU − BU|A|)| for A = U|A|.
  double polar_reduction_residual = 0.0;
  /// First level whose projection is the support projection of |A|.
  std::size_t termination_level = 1;
  /// dim·max(1, ‖A‖)·max(1, ‖B‖); all residuals are judged relative to it.
  double scale = 1.0;
  Complex trace_ab;
  Complex trace_ba;
};

/// Cutoff-sweep trace argument at finite dimension: reduces A to |A| through
/// its polar factor, then for n = 1..n_max projects onto the eigenvalues of
/// |A| at least 1/n. n_max = 0 runs up to the termination level.
LnrrTrace lnrr_pipeline(const ComplexMatrix& a, const ComplexMatrix& b, std::size_t n_max = 0);

/// Judges an LnrrTrace: chain residuals ≤ 1e-10·scale, polar reduction ≤
/// 1e-10·scale and, once terminated, limit_gap ≤ 1e-9·scale.
CheckReport lnrr_report(const LnrrTrace& trace);

/// Largest level the automatic n_max may reach.
inline constexpr std::size_t kLnrrLevelCap = 10'000'000;

struct DixmierEstimate {
  Complex estimate;
  /// (n, (1/ln n)·Σ_{k≤n} x_k) at logarithmically spaced n, ending at N.
  std::vector<std::pair<std::size_t, Complex>> trace_curve;
};

/// Logarithmic-mean estimator (1/ln N)·Σ_{k≤N} x_k. An estimator, not a trace.
DixmierEstimate dixmier_estimate(std::span<const Complex> x, std::size_t terms);
DixmierEstimate dixmier_estimate(const SingularSequence& s, std::size_t terms);
DixmierEstimate dixmier_estimate(const EigenvalueSequence& s, std::size_t terms);
/// x(k) for k = 1..terms.
DixmierEstimate dixmier_estimate(const std::function<Complex(std::size_t)>& x, std::size_t terms);

struct ExperimentConfig {
  WeightSpec weights;
  std::size_t blocks = 12;
  std::uint64_t seed = 0;
  double tol = 1e-10;
};

/// Probes τ(CZ) = τ(ZC) on the block commutator pair through spectra and the
/// logarithmic-mean estimator.
CheckReport commutator_property_experiment(const ExperimentConfig& config);

inline constexpr double kEstimatorGapTol = 1e-9;

}  // namespace tracelab
