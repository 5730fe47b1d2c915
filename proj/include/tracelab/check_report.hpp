#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace tracelab {

enum class Verdict { pass, fail, informational };
std::string to_string(Verdict v);

using MetaValue = std::variant<std::int64_t, double, std::string, bool>;
using Series = std::vector<std::pair<double, double>>;

/// Outcome of one verification. Residuals with a paired tolerance decide the
/// verdict; residuals without one are recorded for inspection only.
struct CheckReport {
  std::string name;
  Verdict verdict = Verdict::informational;
  std::map<std::string, double> residuals;
  std::map<std::string, double> tolerances;
  std::map<std::string, MetaValue> metadata;
  /// Named curves for plotting (x, y).
  std::map<std::string, Series> series;

  CheckReport() = default;
  explicit CheckReport(std::string report_name, bool is_informational = false);

  void check(const std::string& key, double residual, double tolerance);
  void record(const std::string& key, double residual);
  void note(const std::string& key, MetaValue value);
  /// Forces a fail verdict with a reason, e.g. after a numerical failure.
  void fail(const std::string& reason);

  /// Recomputes the verdict: pass iff every checked residual ≤ its tolerance.
  Verdict evaluate();
  bool passed() const { return verdict == Verdict::pass; }

 private:
  bool informational_ = false;
  bool forced_fail_ = false;
};

}  // namespace tracelab
