#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tracelab/matrix_core.hpp"

namespace tracelab {

/// Running arithmetic means of a sequence: values[n] = (1/(n+1))·Σ_{j≤n} x_j.
struct MeanSequence {
  std::vector<double> values;
  std::size_t source_length = 0;
};

struct LogMajorization {
  bool verdict = true;
  /// margins[n] = Σ_{j≤n} (log b_j − log a_j); +inf once a hits zero, −inf when
  /// b hits zero first.
  std::vector<double> margins;
};

/// Does b logarithmically submajorize a over their common length?
/// Margin n (1-based) may dip to −rel_tol·n before the verdict fails.
LogMajorization log_submajorizes(const SingularSequence& a, const SingularSequence& b, double rel_tol);

MeanSequence cesaro_mean(const SingularSequence& x);

/// ξ ≺ η via arithmetic means: (ξ_a)_n ≤ (η_a)_n + rel_tol·max(1, |(η_a)_n|).
bool majorizes(const SingularSequence& xi, const SingularSequence& eta, double rel_tol);

struct MatchedPair {
  std::size_t left_index = 0;
  std::size_t right_index = 0;
  double distance = 0.0;
};

struct MatchReport {
  std::vector<MatchedPair> matched_pairs;
  std::vector<Complex> unmatched_left;
  std::vector<Complex> unmatched_right;
  /// Small nonzero values paired with the other side's zero tail.
  std::size_t absorbed_left = 0;
  std::size_t absorbed_right = 0;
  double max_distance = 0.0;
  /// tol·max(1, largest modulus on either side).
  double tolerance = 0.0;
  bool verdict = false;
};

/// Greedy nearest-neighbour matching of the nonzero parts of two spectra.
MatchReport match_spectra(const EigenvalueSequence& left, const EigenvalueSequence& right, double tol);

enum class RegularityTrend { bounded_looking, growing, inconclusive };
std::string to_string(RegularityTrend trend);

struct RegularityDiagnostic {
  /// ratios[n] = (η_a)_n / η_n.
  std::vector<double> ratios;
  double sup_ratio = 0.0;
  /// Average ratio over the last decade (H/10, H] and over the decade
  /// centred on √H in log scale.
  double late_average = 0.0;
  double mid_average = 0.0;
  RegularityTrend trend = RegularityTrend::inconclusive;
};

inline constexpr double kGrowingRatio = 1.5;
inline constexpr double kBoundedRatio = 1.1;

/// Heuristic look at whether η_a/η stays bounded over the first `horizon`
/// terms. A diagnostic, not a classifier.
RegularityDiagnostic regularity_diagnostic(const SingularSequence& eta, std::size_t horizon);

enum class MembershipVerdict { yes, no_evidence };
std::string to_string(MembershipVerdict verdict);

struct MembershipReport {
  MembershipVerdict verdict = MembershipVerdict::no_evidence;
  std::optional<std::size_t> witness_k;
  /// sup_n ξ_n / η_{⌈n/k⌉} for the witness, or the smallest sup over k otherwise.
  double witness_constant = 0.0;
  std::string note;
};

/// Finite-horizon heuristic for diag(ξ) lying in the principal ideal of
/// diag(η): looks for k ≤ k_max with ξ_n ≤ C·η_{⌈n/k⌉} and no growth of the
/// ratio between the first and second half of the horizon.
MembershipReport principal_ideal_member(const SingularSequence& xi, const SingularSequence& eta,
                                        std::size_t k_max);

/// Growth allowance between the two half-horizon suprema.
inline constexpr double kMembershipGrowthSlack = 1.1;

}  // namespace tracelab
