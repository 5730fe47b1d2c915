#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "tracelab/check_report.hpp"

namespace tracelab::cli {

enum class Command { bpw_verify, weyl, lidskii, abba, lnrr, dixmier, experiment };
enum class Format { json, csv, svg };

std::string to_string(Command c);
std::string to_string(Format f);

struct RunConfig {
  Command command = Command::bpw_verify;
  std::string weights = "harmonic";
  std::size_t blocks = 12;
  std::size_t dim = 20;
  std::size_t trials = 1;
  std::uint64_t seed = 0;
  double tol = 1e-10;
  std::string out_path;  // empty: standard output
  Format format = Format::json;

  // Command-specific extras.
  bool normal = false;          // weyl/lidskii: normal ensemble
  bool rank_deficient = false;  // abba/lnrr: every other trial truncates A's rank
  std::string matrix_a;         // weyl/lidskii/abba/lnrr: read A instead of sampling
  std::string matrix_b;         // abba/lnrr
  std::size_t levels = 0;       // lnrr: 0 runs to the termination level
  std::size_t terms = 1'000'000;  // dixmier
  std::string dump_dir;         // write the matrices used
  bool timing = false;          // embed wall time (breaks byte-identical output)
};

/// Bad flags or values; maps to exit status 2.
class UsageError : public std::runtime_error {
 public:
  explicit UsageError(const std::string& what) : std::runtime_error(what) {}
};

nlohmann::json config_echo(const RunConfig& config);

struct RunResult {
  std::vector<CheckReport> reports;
  double wall_seconds = 0.0;
  /// 0 when every verdict is pass or informational, 1 otherwise.
  int exit_status = 0;
};

/// Executes the suite without writing anything. Throws UsageError for
/// configurations that cannot run.
RunResult execute(const RunConfig& config);

/// Serialized artifact for the selected format.
std::string render(const RunConfig& config, const RunResult& result);

/// Worker count from TRACE_LAB_THREADS (unset or 0: hardware concurrency).
std::size_t worker_count();

/// Full command-line entry point: parse, execute, write. Returns the exit status.
int main_entry(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace tracelab::cli
