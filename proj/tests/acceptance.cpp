// One line per acceptance criterion; exit status 1 if any line fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

#include "tracelab/bpw.hpp"
#include "tracelab/cli/report_io.hpp"
#include "tracelab/cli/run.hpp"
#include "tracelab/ensembles.hpp"
#include "tracelab/sequence_calculus.hpp"
#include "tracelab/trace_checks.hpp"

using namespace tracelab;

namespace {

// Pinned tolerances and limits.
constexpr double kBpwTol = 1e-10;
constexpr double kSpectrumTol = 1e-9;
constexpr double kWeylRelTol = 1e-9;
constexpr double kNormalMarginTol = 1e-9;
constexpr double kAbBaTol = 1e-6;
constexpr double kHarmonicTarget = 1.0;
constexpr double kHarmonicSlack = 0.05;
constexpr double kInverseSquareCeiling = 0.13;
constexpr double kResolventTol = 1e-8;
constexpr double kCriterion1Seconds = 5.0;
constexpr double kCriterion4Seconds = 30.0;
constexpr double kCriterion8Seconds = 10.0;

struct Outcome {
  bool pass = true;
  std::string detail;
};

int failures = 0;

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

void report(int id, const std::string& title, const std::function<Outcome()>& body, double time_limit = 0.0) {
  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::ostringstream line;
  if (time_limit > 0.0) {
    if (secs > time_limit) o.pass = false;
    line << "; " << fmt(secs) << " s (limit " << time_limit << " s)";
  } else {
    line << "; " << fmt(secs) << " s";
  }
  if (!o.pass) ++failures;
  std::printf("[%s] %2d %s: %s%s\n", o.pass ? "PASS" : "FAIL", id, title.c_str(), o.detail.c_str(), line.str().c_str());
  std::fflush(stdout);
}


WeightSpec alternating(std::size_t count) {
  std::vector<Complex> v(count);
  for (std::size_t j = 0; j < count; ++j) v[j] = j % 2 ? -1.0 : 1.0;
  return WeightSpec::explicit_list(v);
}

Outcome bpw_outcome(const CheckReport& r) {
  const double worst = std::max({r.residuals.at("diagonal_max_deviation"), r.residuals.at("upper_offdiag_max"),
                                 r.residuals.at("lower_offdiag_max"), r.residuals.at("other_blocks_max")});
  return {r.passed(), "worst interior residual " + fmt(worst) + " <= " + fmt(kBpwTol)};
}

}  // namespace

int main() {
  report(1, "BPW construction, harmonic weights, N=12", [] {
    return bpw_outcome(verify_commutator(WeightSpec::harmonic(12), 12, kBpwTol));
  }, kCriterion1Seconds);

  report(2, "BPW construction, alternating-sign weights, N=8", [] {
    return bpw_outcome(verify_commutator(alternating(8), 8, kBpwTol));
  });

  report(3, "Interior spectrum of [C,Z] vs expected diagonal, harmonic N=12", [] {
    const CheckReport r = spectrum_consistency(WeightSpec::harmonic(12), 12, kSpectrumTol);
    return Outcome{r.passed(), "max distance " + fmt(r.residuals.at("max_distance")) + ", unmatched " +
                                   fmt(r.residuals.at("unmatched_count"))};
  });

  report(4, "Weyl inequality, 500 random + 100 normal matrices", [] {
    std::size_t bad = 0, bad_normal = 0;
    double worst_normal = 0.0;
    for (std::uint64_t seed = 0; seed < 500; ++seed) {
      Rng rng = trial_rng(seed, 4);
      const ComplexMatrix a = random_gaussian(2 + seed % 29, rng);
      const SingularSequence lambda{eigenvalue_sequence(a, 0.0).moduli()};
      if (!log_submajorizes(lambda, singular_value_sequence(a), kWeylRelTol).verdict) ++bad;
    }
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      Rng rng = trial_rng(seed, 41);
      const ComplexMatrix a = random_normal(2 + seed % 29, rng);
      const SingularSequence lambda{eigenvalue_sequence(a, 0.0).moduli()};
      const auto lm = log_submajorizes(lambda, singular_value_sequence(a), kWeylRelTol);
      double worst = 0.0;
      for (double m : lm.margins) worst = std::max(worst, std::abs(m));
      worst_normal = std::max(worst_normal, worst);
      if (!lm.verdict || !(worst <= kNormalMarginTol)) ++bad_normal;
    }
    return Outcome{bad == 0 && bad_normal == 0, std::to_string(bad) + "/500 random failures, " +
                                                    std::to_string(bad_normal) + "/100 normal failures, worst normal margin " +
                                                    fmt(worst_normal)};
  }, kCriterion4Seconds);

  report(5, "Finite Lidskii, 200 matrices up to dim 40", [] {
    std::size_t bad = 0;
    double worst_ratio = 0.0;
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
      Rng rng = trial_rng(seed, 5);
      const CheckReport r = lidskii_residual(random_gaussian(1 + seed % 40, rng));
      worst_ratio = std::max(worst_ratio, r.residuals.at("trace_minus_eigenvalue_sum") /
                                              r.tolerances.at("trace_minus_eigenvalue_sum"));
      if (!r.passed()) ++bad;
    }
    return Outcome{bad == 0, std::to_string(bad) + "/200 failures, worst residual/tolerance " + fmt(worst_ratio)};
  });

  report(6, "AB/BA spectra, 200 pairs up to dim 40", [] {
    std::size_t bad = 0, deficient = 0;
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
      Rng rng = trial_rng(seed, 6);
      const std::size_t dim = 1 + seed % 40;
      ComplexMatrix a = random_gaussian(dim, rng);
      const ComplexMatrix b = random_gaussian(dim, rng);
      if (seed % 2) {
        std::uniform_int_distribution<std::size_t> pick(0, dim - 1);
        a = truncate_rank(a, pick(rng));
        ++deficient;
      }
      const CheckReport r = ab_ba_spectrum_check(a, b, kAbBaTol);
      if (!r.passed()) ++bad;
    }
    return Outcome{bad == 0 && deficient >= 50,
                   std::to_string(bad) + "/200 failures, " + std::to_string(deficient) + " rank-deficient"};
  });

  report(7, "LNRR chain, 100 pairs up to dim 40", [] {
    std::size_t bad = 0, unterminated = 0;
    double worst_chain = 0.0, worst_gap = 0.0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      Rng rng = trial_rng(seed, 7);
      const std::size_t dim = 1 + seed % 40;
      ComplexMatrix a = random_gaussian(dim, rng);
      const ComplexMatrix b = random_gaussian(dim, rng);
      if (seed % 4 == 3) a = truncate_rank(a, dim / 2);
      const LnrrTrace t = lnrr_pipeline(a, b);
      const CheckReport r = lnrr_report(t);
      for (const auto& level : t.levels)
        for (double c : level.residual_chain) worst_chain = std::max(worst_chain, c / t.scale);
      worst_gap = std::max(worst_gap, t.limit_gap / t.scale);
      const bool terminated = std::get<bool>(r.metadata.at("terminated"));
      if (!terminated) ++unterminated;
      if (!r.passed() || !terminated) ++bad;
    }
    return Outcome{bad == 0, std::to_string(bad) + "/100 failures (" + std::to_string(unterminated) +
                                 " unterminated), worst chain/scale " + fmt(worst_chain) + ", worst gap/scale " +
                                 fmt(worst_gap)};
  });

  report(8, "Logarithmic-mean estimator calibration", [] {
    const double harmonic =
        dixmier_estimate([](std::size_t k) { return Complex(1.0 / static_cast<double>(k)); }, 1000000).estimate.real();
    const double inv_sq = dixmier_estimate([](std::size_t k) {
                            const double x = static_cast<double>(k);
                            return Complex(1.0 / (x * x));
                          }, 1000000).estimate.real();
    const CheckReport exp = commutator_property_experiment({WeightSpec::harmonic(12), 12, 0, kAbBaTol});
    const double gap = exp.residuals.at("estimator_gap_cz_zc");
    const bool spectra_match = exp.residuals.at("unmatched_count") == 0.0 &&
                               exp.residuals.at("spectrum_max_distance") <= exp.tolerances.at("spectrum_max_distance");
    const bool ok = std::abs(harmonic - kHarmonicTarget) <= kHarmonicSlack && inv_sq <= kInverseSquareCeiling &&
                    spectra_match && gap <= kEstimatorGapTol;
    return Outcome{ok, "1/k -> " + fmt(harmonic) + ", 1/k^2 -> " + fmt(inv_sq) + ", CZ/ZC gap " + fmt(gap)};
  }, kCriterion8Seconds);

  report(9, "Byte-identical JSON for repeated runs", [] {
    using cli::Command;
    const std::vector<cli::RunConfig> configs = [] {
      std::vector<cli::RunConfig> v;
      cli::RunConfig c;
      c.seed = 7;
      for (Command cmd : {Command::bpw_verify, Command::weyl, Command::lidskii, Command::abba, Command::lnrr,
                          Command::dixmier, Command::experiment}) {
        c.command = cmd;
        c.trials = (cmd == Command::bpw_verify || cmd == Command::dixmier || cmd == Command::experiment) ? 1 : 8;
        c.rank_deficient = cmd == Command::abba || cmd == Command::lnrr;
        c.terms = 100000;
        c.tol = cmd == Command::abba ? kAbBaTol : 1e-10;
        v.push_back(c);
      }
      return v;
    }();
    std::size_t differing = 0;
    for (const auto& c : configs) {
      const std::string first = cli::render(c, cli::execute(c));
      const std::string second = cli::render(c, cli::execute(c));
      if (first != second || first.empty()) ++differing;
    }
    return Outcome{differing == 0,
                   std::to_string(differing) + "/" + std::to_string(configs.size()) + " suites differ between runs"};
  });

  report(10, "Resolvent identity, 100 triples", [] {
    std::size_t bad = 0;
    double worst_ratio = 0.0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      Rng rng = trial_rng(seed, 10);
      const std::size_t dim = 1 + seed % 40;
      const ComplexMatrix a = random_gaussian(dim, rng);
      const ComplexMatrix b = random_gaussian(dim, rng);
      const double ab_norm = (a * b).op_norm();
      const auto spec = eigenvalue_sequence(a * b, 0.0).padded();
      std::uniform_real_distribution<double> radius(0.2, 2.0), angle(0.0, 2.0 * std::numbers::pi);
      // Even seeds sample among the eigenvalues, odd seeds beyond the spectral radius.
      Complex lambda;
      for (;;) {
        const double r = seed % 2 ? 2.0 * ab_norm + 1.0 : radius(rng) * std::max(1.0, ab_norm);
        lambda = std::polar(r, angle(rng));
        double gap = std::abs(lambda);
        for (const auto& mu : spec) gap = std::min(gap, std::abs(lambda - mu));
        if (gap >= 0.05 * std::max(1.0, ab_norm)) break;
      }
      const ResolventCheck r = resolvent_identity_check(a, b, lambda);
      const double ratio = r.residual / (kResolventTol * r.condition_scale);
      worst_ratio = std::max(worst_ratio, ratio);
      if (!(ratio <= 1.0)) ++bad;
    }
    return Outcome{bad == 0, std::to_string(bad) + "/100 failures, worst residual/(1e-8*scale) " + fmt(worst_ratio)};
  });

  std::printf("%d criterion(s) failed\n", failures);
  return failures == 0 ? 0 : 1;
}
