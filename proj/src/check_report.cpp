#include "tracelab/check_report.hpp"

namespace tracelab {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    case Verdict::informational: return "informational";
  }
  return "fail";
}

CheckReport::CheckReport(std::string report_name, bool is_informational)
    : name(std::move(report_name)), informational_(is_informational) {
  evaluate();
}

void CheckReport::check(const std::string& key, double residual, double tolerance) {
  residuals[key] = residual;
  tolerances[key] = tolerance;
  evaluate();
}

void CheckReport::record(const std::string& key, double residual) { residuals[key] = residual; }

void CheckReport::note(const std::string& key, MetaValue value) { metadata[key] = std::move(value); }

void CheckReport::fail(const std::string& reason) {
  forced_fail_ = true;
  metadata["failure"] = reason;
  evaluate();
}

Verdict CheckReport::evaluate() {
  if (forced_fail_) return verdict = Verdict::fail;
  bool ok = true;
  for (const auto& [key, tol] : tolerances) {
    auto it = residuals.find(key);
    // NaN residuals fail the comparison.
    if (it == residuals.end() || !(it->second <= tol)) ok = false;
  }
  if (informational_ && tolerances.empty()) return verdict = Verdict::informational;
  return verdict = ok ? Verdict::pass : Verdict::fail;
}

}  // namespace tracelab
