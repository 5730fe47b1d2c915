#include "tracelab/trace_checks.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Eigenvalues>

#include "tracelab/sequence_calculus.hpp"

namespace tracelab {

namespace {

using Eigen::Index;

Complex trace_of_product(const DenseMatrix& x, const DenseMatrix& y) {
  return x.cwiseProduct(y.transpose()).sum();
}

std::vector<double> sorted_moduli(const EigenvalueSequence& seq) {
  std::vector<double> m = seq.moduli();
  std::sort(m.begin(), m.end(), std::greater<>());
  return m;
}

// 1-based sample points 2 ≤ n ≤ terms, eight per decade, always ending at terms.
std::vector<std::size_t> log_spaced_points(std::size_t terms) {
  std::vector<std::size_t> pts;
  for (int j = 0;; ++j) {
    const double v = std::round(std::pow(10.0, j / 8.0));
    if (v > static_cast<double>(terms)) break;
    const auto n = static_cast<std::size_t>(v);
    if (n >= 2 && (pts.empty() || pts.back() != n)) pts.push_back(n);
  }
  if (pts.empty() || pts.back() != terms) pts.push_back(terms);
  return pts;
}

}  // namespace

CheckReport lidskii_residual(const ComplexMatrix& a) {
  const EigenvalueSequence seq = eigenvalue_sequence(a);
  Complex sum{0.0, 0.0};
  for (const auto& v : seq.values) sum += v;
  const double scale = static_cast<double>(a.dim()) * std::max(1.0, a.op_norm());
  CheckReport report("lidskii");
  report.note("dim", static_cast<std::int64_t>(a.dim()));
  report.note("zero_tail_count", static_cast<std::int64_t>(seq.zero_tail_count));
  report.note("trace_re", a.trace().real());
  report.note("trace_im", a.trace().imag());
  report.check("trace_minus_eigenvalue_sum", std::abs(a.trace() - sum), 1e-8 * scale);
  return report;
}

CheckReport weyl_check(const ComplexMatrix& a, double rel_tol) {
  const EigenvalueSequence eig = eigenvalue_sequence(a);
  const SingularSequence moduli(sorted_moduli(eig));
  const SingularSequence sing = singular_value_sequence(a);
  const LogMajorization lm = log_submajorizes(moduli, sing, rel_tol);

  CheckReport report("weyl");
  report.note("dim", static_cast<std::int64_t>(a.dim()));
  report.note("log_submajorized", lm.verdict);
  double deficit = 0.0;
  double max_abs_margin = 0.0;
  Series margins;
  for (std::size_t n = 0; n < lm.margins.size(); ++n) {
    const double m = lm.margins[n];
    deficit = std::max(deficit, -m / static_cast<double>(n + 1));
    if (std::isfinite(m)) max_abs_margin = std::max(max_abs_margin, std::abs(m));
    margins.emplace_back(static_cast<double>(n + 1), m);
  }
  report.series["margins"] = std::move(margins);
  report.check("normalized_margin_deficit", deficit, rel_tol);
  report.record("max_abs_finite_margin", max_abs_margin);

  // |trace A| = |Σλ| ≤ Σ|λ| ≤ Σ s, the last step from weak majorization.
  Complex eig_sum{0.0, 0.0};
  double mod_sum = 0.0;
  for (const auto& v : eig.values) {
    eig_sum += v;
    mod_sum += std::abs(v);
  }
  double sing_sum = 0.0;
  for (double s : sing.values) sing_sum += s;
  const double slack = 1e-8 * static_cast<double>(a.dim()) * std::max(1.0, a.op_norm());
  const double violation = std::max({0.0, std::abs(a.trace()) - mod_sum, mod_sum - sing_sum});
  report.check("bound_chain_violation", violation, slack);
  return report;
}

CheckReport ab_ba_spectrum_check(const ComplexMatrix& a, const ComplexMatrix& b, double tol) {
  if (a.dim() != b.dim()) throw ContractViolation("ab_ba_spectrum_check: dimension mismatch");
  const ComplexMatrix ab = a * b;
  const ComplexMatrix ba = b * a;
  const EigenvalueSequence left = eigenvalue_sequence(ab);
  const EigenvalueSequence right = eigenvalue_sequence(ba);
  const MatchReport match = match_spectra(left, right, tol);

  CheckReport report("abba");
  report.note("dim", static_cast<std::int64_t>(a.dim()));
  report.note("nonzero_ab", static_cast<std::int64_t>(left.values.size()));
  report.note("nonzero_ba", static_cast<std::int64_t>(right.values.size()));
  report.note("absorbed_by_zero_tail", static_cast<std::int64_t>(match.absorbed_left + match.absorbed_right));
  report.check("spectrum_max_distance", match.max_distance, match.tolerance);
  report.check("unmatched_count",
               static_cast<double>(match.unmatched_left.size() + match.unmatched_right.size()), 0.0);
  const double scale = static_cast<double>(a.dim()) * a.op_norm() * b.op_norm();
  report.check("trace_gap", std::abs(ab.trace() - ba.trace()), 1e-10 * scale);
  return report;
}

LnrrTrace lnrr_pipeline(const ComplexMatrix& a, const ComplexMatrix& b, std::size_t n_max) {
  if (a.dim() != b.dim()) throw ContractViolation("lnrr_pipeline: dimension mismatch");
  LnrrTrace out;
  const double norm_a = a.op_norm();
  out.scale = static_cast<double>(a.dim()) * std::max(1.0, norm_a) * std::max(1.0, b.op_norm());
  out.trace_ab = trace_of_product(a.entries(), b.entries());
  out.trace_ba = trace_of_product(b.entries(), a.entries());

  // Reduction to a positive left factor: A = U|A|, B ↦ BU.
  const PolarFactors polar = polar_decompose(a);
  const DenseMatrix& pos = polar.positive.entries();
  const DenseMatrix b_rot = b.entries() * polar.unitary.entries();
  out.polar_reduction_residual =
      std::abs((out.trace_ab - out.trace_ba) - (trace_of_product(pos, b_rot) - trace_of_product(b_rot, pos)));

  Eigen::SelfAdjointEigenSolver<DenseMatrix> eig(pos, Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success) throw NumericalFailure("lnrr_pipeline: eigensolver failed on |A|");
  const Eigen::VectorXd& evals = eig.eigenvalues();  // ascending
  const double zero_threshold = kDefaultZeroTolRel * norm_a;
  double smallest_nonzero = std::numeric_limits<double>::infinity();
  for (Index k = 0; k < evals.size(); ++k)
    if (evals(k) > zero_threshold) smallest_nonzero = std::min(smallest_nonzero, evals(k));

  std::size_t termination = 1;
  if (std::isfinite(smallest_nonzero)) {
    const double need = std::ceil(1.0 / smallest_nonzero);
    termination = need >= static_cast<double>(kLnrrLevelCap) ? kLnrrLevelCap : std::max<std::size_t>(1, static_cast<std::size_t>(need));
    while (termination > 1 && 1.0 / static_cast<double>(termination - 1) <= smallest_nonzero) --termination;
    while (termination < kLnrrLevelCap && 1.0 / static_cast<double>(termination) > smallest_nonzero) ++termination;
  }
  out.termination_level = termination;
  if (n_max == 0) n_max = termination;

  const auto count_at = [&](double cutoff) {
    return static_cast<std::size_t>(evals.data() + evals.size() -
                                    std::lower_bound(evals.data(), evals.data() + evals.size(), cutoff));
  };

  out.levels.reserve(n_max);
  std::optional<std::size_t> last_count;
  LnrrLevel cached;
  for (std::size_t n = 1; n <= n_max; ++n) {
    const double cutoff = 1.0 / static_cast<double>(n);
    const std::size_t count = count_at(cutoff);
    if (!last_count || *last_count != count) {
      // The projection only changes when the cutoff crosses an eigenvalue.
      const DenseMatrix p = spectral_projection(polar.positive, cutoff).entries();
      const DenseMatrix pa = p * pos;
      const DenseMatrix pbp = p * b_rot * p;
      const DenseMatrix pap = pa * p;
      const Complex t0 = trace_of_product(pa, b_rot);
      const Complex t1 = trace_of_product(pap, pbp);
      const Complex t2 = trace_of_product(pbp, pap);
      const Complex t3 = trace_of_product(b_rot * pos, p);
      cached.residual_chain = {std::abs(t0 - t1), std::abs(t1 - t2), std::abs(t2 - t3)};
      cached.partial_trace_left = t0;
      cached.partial_trace_right = t3;
      last_count = count;
    }
    cached.n = n;
    cached.cutoff = cutoff;
    out.levels.push_back(cached);
  }
  const LnrrLevel& last = out.levels.back();
  out.limit_gap = std::abs(last.partial_trace_left - out.trace_ab) + std::abs(last.partial_trace_right - out.trace_ba);
  return out;
}

CheckReport lnrr_report(const LnrrTrace& trace) {
  CheckReport report("lnrr");
  const double tol = 1e-10 * trace.scale;
  std::array<double, 3> worst{};
  for (const auto& level : trace.levels)
    for (std::size_t k = 0; k < 3; ++k) worst[k] = std::max(worst[k], level.residual_chain[k]);
  report.check("chain_project_left", worst[0], tol);
  report.check("chain_swap", worst[1], tol);
  report.check("chain_project_right", worst[2], tol);
  report.check("polar_reduction", trace.polar_reduction_residual, tol);

  const std::size_t reached = trace.levels.empty() ? 0 : trace.levels.back().n;
  const bool terminated = reached >= trace.termination_level;
  if (terminated)
    report.check("limit_gap", trace.limit_gap, 1e-9 * trace.scale);
  else
    report.record("limit_gap", trace.limit_gap);
  report.note("levels", static_cast<std::int64_t>(reached));
  report.note("termination_level", static_cast<std::int64_t>(trace.termination_level));
  report.note("terminated", terminated);
  report.note("scale", trace.scale);

  Series left, right;
  if (reached > 0) {
    for (std::size_t n : log_spaced_points(std::max<std::size_t>(reached, 2))) {
      if (n > reached) break;
      const auto& level = trace.levels[n - 1];
      left.emplace_back(static_cast<double>(n), level.partial_trace_left.real());
      right.emplace_back(static_cast<double>(n), level.partial_trace_right.real());
    }
    if (reached == 1) {
      left.emplace_back(1.0, trace.levels[0].partial_trace_left.real());
      right.emplace_back(1.0, trace.levels[0].partial_trace_right.real());
    }
  }
  report.series["partial_trace_left_re"] = std::move(left);
  report.series["partial_trace_right_re"] = std::move(right);
  return report;
}

DixmierEstimate dixmier_estimate(const std::function<Complex(std::size_t)>& x, std::size_t terms) {
  if (terms < 2) throw ContractViolation("dixmier_estimate: need at least 2 terms");
  DixmierEstimate out;
  const auto points = log_spaced_points(terms);
  std::size_t next = 0;
  long double re = 0.0L, im = 0.0L;
  for (std::size_t k = 1; k <= terms; ++k) {
    const Complex v = x(k);
    re += v.real();
    im += v.imag();
    if (next < points.size() && points[next] == k) {
      const long double log_k = std::log(static_cast<long double>(k));
      out.trace_curve.emplace_back(k, Complex{static_cast<double>(re / log_k), static_cast<double>(im / log_k)});
      ++next;
    }
  }
  out.estimate = out.trace_curve.back().second;
  return out;
}

DixmierEstimate dixmier_estimate(std::span<const Complex> x, std::size_t terms) {
  if (terms > x.size())
    throw ContractViolation("dixmier_estimate: " + std::to_string(terms) + " terms requested from a sequence of length " +
                            std::to_string(x.size()));
  return dixmier_estimate([&](std::size_t k) { return x[k - 1]; }, terms);
}

DixmierEstimate dixmier_estimate(const SingularSequence& s, std::size_t terms) {
  std::vector<Complex> v(s.values.begin(), s.values.end());
  return dixmier_estimate(std::span<const Complex>(v), terms);
}

DixmierEstimate dixmier_estimate(const EigenvalueSequence& s, std::size_t terms) {
  const std::vector<Complex> v = s.padded();
  return dixmier_estimate(std::span<const Complex>(v), terms);
}

CheckReport commutator_property_experiment(const ExperimentConfig& config) {
  const std::size_t blocks = config.blocks;
  if (blocks < 3) throw ContractViolation("commutator_property_experiment: need at least 3 blocks");
  const BpwTruncation t = make_truncation(config.weights, blocks);

  CheckReport report = ab_ba_spectrum_check(t.c, t.z, config.tol);
  report.name = "experiment";
  report.note("seed", static_cast<std::int64_t>(config.seed));
  report.note("weights", config.weights.describe());
  report.note("blocks", static_cast<std::int64_t>(blocks));
  report.note("estimator", std::string("ESTIMATOR (logarithmic mean), not a trace"));

  const EigenvalueSequence cz = eigenvalue_sequence(t.c * t.z);
  const EigenvalueSequence zc = eigenvalue_sequence(t.z * t.c);
  const DixmierEstimate est_cz = dixmier_estimate(cz, t.dim);
  const DixmierEstimate est_zc = dixmier_estimate(zc, t.dim);
  report.check("estimator_gap_cz_zc", std::abs(est_cz.estimate - est_zc.estimate), kEstimatorGapTol);
  report.note("estimate_cz_re", est_cz.estimate.real());
  report.note("estimate_cz_im", est_cz.estimate.imag());

  const ComplexMatrix interior = leading_block(commutator(t.c, t.z), t.boundary_start);
  const EigenvalueSequence interior_spec = eigenvalue_sequence(interior);
  report.note("interior_dim", static_cast<std::int64_t>(t.boundary_start));
  report.note("interior_nonzero_eigenvalues", static_cast<std::int64_t>(interior_spec.values.size()));
  if (t.boundary_start >= 2) {
    const DixmierEstimate est = dixmier_estimate(interior_spec, t.boundary_start);
    report.note("commutator_estimate_re", est.estimate.real());
    report.note("commutator_estimate_im", est.estimate.imag());
    Series curve;
    for (const auto& [n, v] : est.trace_curve) curve.emplace_back(static_cast<double>(n), v.real());
    report.series["commutator_estimate_curve_re"] = std::move(curve);
  }
  Series curve_cz;
  for (const auto& [n, v] : est_cz.trace_curve) curve_cz.emplace_back(static_cast<double>(n), v.real());
  report.series["cz_estimate_curve_re"] = std::move(curve_cz);
  return report;
}

}  // namespace tracelab
