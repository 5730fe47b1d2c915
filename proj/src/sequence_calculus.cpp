#include "tracelab/sequence_calculus.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace tracelab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double window_average(const std::vector<double>& ratios, double lo, double hi) {
  // Averages ratios[n−1] over 1-based n in (lo, hi].
  double sum = 0.0;
  std::size_t count = 0;
  for (std::size_t n = 1; n <= ratios.size(); ++n) {
    const auto x = static_cast<double>(n);
    if (x > lo && x <= hi) {
      sum += ratios[n - 1];
      ++count;
    }
  }
  return count == 0 ? std::numeric_limits<double>::quiet_NaN() : sum / static_cast<double>(count);
}

}  // namespace

LogMajorization log_submajorizes(const SingularSequence& a, const SingularSequence& b, double rel_tol) {
  const std::size_t len = std::min(a.size(), b.size());
  LogMajorization out;
  out.margins.reserve(len);
  double margin = 0.0;
  bool a_vanished = false;
  bool b_vanished = false;
  for (std::size_t j = 0; j < len; ++j) {
    if (a_vanished || a.values[j] == 0.0) {
      a_vanished = true;
      margin = kInf;
    } else if (b_vanished || b.values[j] == 0.0) {
      b_vanished = true;
      margin = -kInf;
    } else {
      margin += std::log(b.values[j]) - std::log(a.values[j]);
    }
    out.margins.push_back(margin);
    if (margin < -rel_tol * static_cast<double>(j + 1)) out.verdict = false;
  }
  return out;
}

MeanSequence cesaro_mean(const SingularSequence& x) {
  if (x.values.empty()) throw ContractViolation("cesaro_mean: sequence must be nonempty");
  MeanSequence out;
  out.source_length = x.size();
  out.values.reserve(x.size());
  long double running = 0.0L;
  for (std::size_t n = 0; n < x.size(); ++n) {
    running += x.values[n];
    out.values.push_back(static_cast<double>(running / static_cast<long double>(n + 1)));
  }
  return out;
}

bool majorizes(const SingularSequence& xi, const SingularSequence& eta, double rel_tol) {
  if (xi.size() != eta.size()) throw ContractViolation("majorizes: sequences must have equal length");
  if (xi.size() == 0) return true;
  const auto xa = cesaro_mean(xi);
  const auto ea = cesaro_mean(eta);
  for (std::size_t n = 0; n < xa.values.size(); ++n)
    if (xa.values[n] > ea.values[n] + rel_tol * std::max(1.0, std::abs(ea.values[n]))) return false;
  return true;
}

MatchReport match_spectra(const EigenvalueSequence& left, const EigenvalueSequence& right, double tol) {
  if (!(tol > 0.0)) throw ContractViolation("match_spectra: tol must be positive");
  MatchReport report;
  double scale = 1.0;
  for (const auto& v : left.values) scale = std::max(scale, std::abs(v));
  for (const auto& v : right.values) scale = std::max(scale, std::abs(v));
  report.tolerance = tol * scale;
  const double radius = report.tolerance;

  // Right-hand candidates ordered by modulus; |l − r| ≥ ||l| − |r|| bounds the window.
  std::vector<std::size_t> order(right.values.size());
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> right_mod(right.values.size());
  for (std::size_t j = 0; j < right.values.size(); ++j) right_mod[j] = std::abs(right.values[j]);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return right_mod[x] < right_mod[y]; });
  std::vector<double> sorted_mod(order.size());
  for (std::size_t k = 0; k < order.size(); ++k) sorted_mod[k] = right_mod[order[k]];
  std::vector<bool> used(right.values.size(), false);

  std::vector<std::size_t> left_leftover;
  for (std::size_t i = 0; i < left.values.size(); ++i) {
    const Complex l = left.values[i];
    const double lm = std::abs(l);
    auto lo = std::lower_bound(sorted_mod.begin(), sorted_mod.end(), lm - radius);
    auto hi = std::upper_bound(sorted_mod.begin(), sorted_mod.end(), lm + radius);
    std::optional<std::size_t> best;
    double best_dist = kInf;
    for (auto it = lo; it != hi; ++it) {
      const std::size_t j = order[static_cast<std::size_t>(it - sorted_mod.begin())];
      if (used[j]) continue;
      const double d = std::abs(l - right.values[j]);
      if (d < best_dist) {
        best_dist = d;
        best = j;
      }
    }
    if (best && best_dist <= radius) {
      used[*best] = true;
      report.matched_pairs.push_back({i, *best, best_dist});
      report.max_distance = std::max(report.max_distance, best_dist);
    } else {
      left_leftover.push_back(i);
    }
  }

  // Leftovers small enough to be zeros may pair with the other side's zero tail.
  std::size_t right_zeros = right.zero_tail_count;
  for (std::size_t i : left_leftover) {
    const double m = std::abs(left.values[i]);
    if (right_zeros > 0 && m <= radius) {
      --right_zeros;
      ++report.absorbed_left;
      report.max_distance = std::max(report.max_distance, m);
    } else {
      report.unmatched_left.push_back(left.values[i]);
    }
  }
  std::size_t left_zeros = left.zero_tail_count;
  for (std::size_t j = 0; j < right.values.size(); ++j) {
    if (used[j]) continue;
    const double m = right_mod[j];
    if (left_zeros > 0 && m <= radius) {
      --left_zeros;
      ++report.absorbed_right;
      report.max_distance = std::max(report.max_distance, m);
    } else {
      report.unmatched_right.push_back(right.values[j]);
    }
  }

  report.verdict = report.unmatched_left.empty() && report.unmatched_right.empty() &&
                   report.max_distance <= report.tolerance;
  return report;
}

std::string to_string(RegularityTrend trend) {
  switch (trend) {
    case RegularityTrend::bounded_looking: return "bounded-looking";
    case RegularityTrend::growing: return "growing";
    case RegularityTrend::inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

RegularityDiagnostic regularity_diagnostic(const SingularSequence& eta, std::size_t horizon) {
  if (horizon == 0 || horizon > eta.size())
    throw ContractViolation("regularity_diagnostic: horizon must lie in [1, sequence length]");
  RegularityDiagnostic out;
  out.ratios.reserve(horizon);
  long double running = 0.0L;
  for (std::size_t n = 0; n < horizon; ++n) {
    const double v = eta.values[n];
    if (!(v > 0.0)) throw ContractViolation("regularity_diagnostic: sequence must be strictly positive over the horizon");
    running += v;
    const double mean = static_cast<double>(running / static_cast<long double>(n + 1));
    out.ratios.push_back(mean / v);
  }
  out.sup_ratio = *std::max_element(out.ratios.begin(), out.ratios.end());

  const double h = static_cast<double>(horizon);
  const double root = std::sqrt(h);
  const double half_decade = std::sqrt(10.0);
  out.late_average = window_average(out.ratios, h / 10.0, h);
  out.mid_average = window_average(out.ratios, root / half_decade, root * half_decade);
  if (std::isfinite(out.late_average) && std::isfinite(out.mid_average) && out.mid_average > 0.0 && horizon >= 10) {
    const double growth = out.late_average / out.mid_average;
    if (growth > kGrowingRatio)
      out.trend = RegularityTrend::growing;
    else if (growth < kBoundedRatio)
      out.trend = RegularityTrend::bounded_looking;
  }
  return out;
}

std::string to_string(MembershipVerdict verdict) {
  return verdict == MembershipVerdict::yes ? "yes" : "no-evidence";
}

MembershipReport principal_ideal_member(const SingularSequence& xi, const SingularSequence& eta,
                                        std::size_t k_max) {
  if (xi.size() != eta.size()) throw ContractViolation("principal_ideal_member: sequences must have equal length");
  if (k_max == 0) throw ContractViolation("principal_ideal_member: k_max must be positive");
  MembershipReport out;
  out.note = "finite-horizon heuristic over " + std::to_string(xi.size()) + " terms";
  const std::size_t len = xi.size();
  if (len == 0) {
    out.verdict = MembershipVerdict::yes;
    out.witness_k = 1;
    return out;
  }
  const std::size_t first_half = (len + 1) / 2;
  double best = kInf;
  for (std::size_t k = 1; k <= k_max; ++k) {
    double sup_first = 0.0;
    double sup_second = 0.0;
    for (std::size_t n = 1; n <= len; ++n) {
      const double num = xi.values[n - 1];
      const double den = eta.values[(n + k - 1) / k - 1];
      double r = 0.0;
      if (num > 0.0) r = den > 0.0 ? num / den : kInf;
      if (n <= first_half)
        sup_first = std::max(sup_first, r);
      else
        sup_second = std::max(sup_second, r);
    }
    const double sup_all = std::max(sup_first, sup_second);
    const bool bounded = std::isfinite(sup_all) && (sup_second <= kMembershipGrowthSlack * sup_first);
    if (bounded) {
      out.verdict = MembershipVerdict::yes;
      out.witness_k = k;
      out.witness_constant = sup_all;
      return out;
    }
    best = std::min(best, sup_all);
  }
  out.witness_constant = best;
  return out;
}

}  // namespace tracelab
