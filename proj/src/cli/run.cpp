#include "tracelab/cli/run.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <mutex>
#include <ostream>
#include <thread>

#include <CLI11.hpp>

#include "tracelab/bpw.hpp"
#include "tracelab/cli/matrix_io.hpp"
#include "tracelab/cli/report_io.hpp"
#include "tracelab/cli/weight_parse.hpp"
#include "tracelab/ensembles.hpp"
#include "tracelab/trace_checks.hpp"

namespace tracelab::cli {

std::string to_string(Command c) {
  switch (c) {
    case Command::bpw_verify: return "bpw-verify";
    case Command::weyl: return "weyl";
    case Command::lidskii: return "lidskii";
    case Command::abba: return "abba";
    case Command::lnrr: return "lnrr";
    case Command::dixmier: return "dixmier";
    case Command::experiment: return "experiment";
  }
  return "bpw-verify";
}

std::string to_string(Format f) {
  switch (f) {
    case Format::json: return "json";
    case Format::csv: return "csv";
    case Format::svg: return "svg";
  }
  return "json";
}

nlohmann::json config_echo(const RunConfig& c) {
  nlohmann::json j;
  j["command"] = to_string(c.command);
  j["weights"] = c.weights;
  j["blocks"] = c.blocks;
  j["dim"] = c.dim;
  j["trials"] = c.trials;
  j["seed"] = c.seed;
  j["tol"] = c.tol;
  j["out_path"] = c.out_path;
  j["format"] = to_string(c.format);
  j["normal"] = c.normal;
  j["rank_deficient"] = c.rank_deficient;
  j["matrix_a"] = c.matrix_a;
  j["matrix_b"] = c.matrix_b;
  j["levels"] = c.levels;
  j["terms"] = c.terms;
  j["dump_dir"] = c.dump_dir;
  return j;
}

std::size_t worker_count() {
  std::size_t n = 0;
  if (const char* env = std::getenv("TRACE_LAB_THREADS")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0') n = static_cast<std::size_t>(v);
  }
  if (n == 0) n = std::max(1u, std::thread::hardware_concurrency());
  return n;
}

namespace {

// Runs fn(trial) for every trial; slot i always holds trial i's report.
std::vector<CheckReport> run_trials(std::size_t trials, const std::function<CheckReport(std::size_t)>& fn) {
  std::vector<CheckReport> out(trials);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t t = next++; t < trials; t = next++) {
      try {
        out[t] = fn(t);
      } catch (const std::exception& e) {
        CheckReport r("trial");
        r.note("trial", static_cast<std::int64_t>(t));
        r.fail(e.what());
        out[t] = std::move(r);
      }
    }
  };
  const std::size_t workers = std::min(worker_count(), trials);
  std::vector<std::jthread> pool;
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(worker);
  worker();
  return out;
}

void dump(const RunConfig& config, const std::string& name, const ComplexMatrix& m) {
  if (config.dump_dir.empty()) return;
  std::filesystem::create_directories(config.dump_dir);
  save_matrix((std::filesystem::path(config.dump_dir) / (name + ".txt")).string(), m);
}

WeightSpec weights_for_blocks(const RunConfig& config) {
  WeightSpec w = parse_weight_spec(config.weights, config.blocks);
  if (w.size() < config.blocks)
    throw UsageError("weight list has " + std::to_string(w.size()) + " entries but --blocks is " +
                     std::to_string(config.blocks));
  return w;
}

struct TrialInputs {
  ComplexMatrix a;
  ComplexMatrix b;
  std::optional<std::size_t> rank;
};

TrialInputs pair_for_trial(const RunConfig& config, std::size_t trial, const std::optional<ComplexMatrix>& given_a,
                           const std::optional<ComplexMatrix>& given_b) {
  Rng rng = trial_rng(config.seed, trial);
  TrialInputs in;
  in.a = given_a ? *given_a : random_gaussian(config.dim, rng);
  in.b = given_b ? *given_b : random_gaussian(in.a.dim(), rng);
  if (config.rank_deficient && !given_a && trial % 2 == 1) {
    std::uniform_int_distribution<std::size_t> pick(0, config.dim - 1);
    in.rank = pick(rng);
    in.a = truncate_rank(in.a, *in.rank);
  }
  return in;
}

void tag(CheckReport& r, const RunConfig& config, std::size_t trial) {
  r.note("trial", static_cast<std::int64_t>(trial));
  r.note("seed", static_cast<std::int64_t>(config.seed));
}

void validate(const RunConfig& config) {
  if (!(config.tol > 0.0)) throw UsageError("--tol must be positive");
  if (config.trials == 0) throw UsageError("--trials must be positive");
  if (config.dim == 0) throw UsageError("--dim must be positive");
  if (config.blocks == 0) throw UsageError("--blocks must be positive");
  const bool has_curves = config.command == Command::weyl || config.command == Command::lnrr ||
                          config.command == Command::dixmier || config.command == Command::experiment;
  if (config.format == Format::svg && !has_curves)
    throw UsageError("--format svg is only available for weyl, lnrr, dixmier and experiment");
  if ((config.command == Command::bpw_verify || config.command == Command::experiment) && config.blocks < 3)
    throw UsageError("--blocks must be at least 3 for " + to_string(config.command));
  if (config.command == Command::dixmier && config.terms < 2) throw UsageError("--terms must be at least 2");
  if (!config.matrix_b.empty() && config.matrix_a.empty()) throw UsageError("--matrix-b requires --matrix");
}

std::vector<CheckReport> run_command(const RunConfig& config) {
  std::optional<ComplexMatrix> given_a, given_b;
  if (!config.matrix_a.empty()) given_a = load_matrix(config.matrix_a);
  if (!config.matrix_b.empty()) {
    given_b = load_matrix(config.matrix_b);
    if (given_b->dim() != given_a->dim()) throw UsageError("--matrix and --matrix-b differ in dimension");
  }
  const std::size_t trials = given_a ? 1 : config.trials;

  switch (config.command) {
    case Command::bpw_verify: {
      const WeightSpec w = weights_for_blocks(config);
      if (!config.dump_dir.empty()) {
        const BpwTruncation t = make_truncation(w, config.blocks);
        dump(config, "C", t.c);
        dump(config, "Z", t.z);
      }
      std::vector<CheckReport> reports{verify_commutator(w, config.blocks, config.tol),
                                       spectrum_consistency(w, config.blocks, config.tol)};
      if (w.real_nonnegative()) reports.push_back(product_dominance_report(w, config.blocks));
      return reports;
    }
    case Command::weyl:
    case Command::lidskii: {
      return run_trials(trials, [&](std::size_t t) {
        ComplexMatrix a;
        if (given_a) {
          a = *given_a;
        } else {
          Rng rng = trial_rng(config.seed, t);
          a = config.normal ? random_normal(config.dim, rng) : random_gaussian(config.dim, rng);
        }
        if (t == 0) dump(config, "A", a);
        CheckReport r = config.command == Command::weyl ? weyl_check(a, config.tol) : lidskii_residual(a);
        tag(r, config, t);
        return r;
      });
    }
    case Command::abba:
    case Command::lnrr: {
      return run_trials(trials, [&](std::size_t t) {
        const TrialInputs in = pair_for_trial(config, t, given_a, given_b);
        if (t == 0) {
          dump(config, "A", in.a);
          dump(config, "B", in.b);
        }
        CheckReport r = config.command == Command::abba ? ab_ba_spectrum_check(in.a, in.b, config.tol)
                                                        : lnrr_report(lnrr_pipeline(in.a, in.b, config.levels));
        tag(r, config, t);
        if (in.rank) r.note("rank_of_a", static_cast<std::int64_t>(*in.rank));
        return r;
      });
    }
    case Command::dixmier: {
      DixmierEstimate est;
      std::size_t terms = config.terms;
      if (config.weights == "harmonic") {
        est = dixmier_estimate([](std::size_t k) { return Complex{1.0 / static_cast<double>(k), 0.0}; }, terms);
      } else if (config.weights == "invsq") {
        est = dixmier_estimate(
            [](std::size_t k) {
              const auto x = static_cast<double>(k);
              return Complex{1.0 / (x * x), 0.0};
            },
            terms);
      } else {
        const WeightSpec w = parse_weight_spec(config.weights, 0);
        terms = std::min(terms, w.size());
        if (terms < 2) throw UsageError("dixmier needs at least 2 terms");
        est = dixmier_estimate(std::span<const Complex>(w.values()), terms);
      }
      CheckReport r("dixmier", /*is_informational=*/true);
      r.note("estimator", std::string("ESTIMATOR (logarithmic mean), not a trace"));
      r.note("sequence", config.weights);
      r.note("terms", static_cast<std::int64_t>(terms));
      r.note("estimate_re", est.estimate.real());
      r.note("estimate_im", est.estimate.imag());
      Series curve;
      for (const auto& [n, v] : est.trace_curve) curve.emplace_back(static_cast<double>(n), v.real());
      r.series["trace_curve_re"] = std::move(curve);
      return {r};
    }
    case Command::experiment: {
      const WeightSpec w = weights_for_blocks(config);
      if (!config.dump_dir.empty()) {
        const BpwTruncation t = make_truncation(w, config.blocks);
        dump(config, "C", t.c);
        dump(config, "Z", t.z);
      }
      return {commutator_property_experiment({w, config.blocks, config.seed, config.tol})};
    }
  }
  return {};
}

}  // namespace

RunResult execute(const RunConfig& config) {
  validate(config);
  const auto start = std::chrono::steady_clock::now();
  RunResult result;
  try {
    result.reports = run_command(config);
  } catch (const ContractViolation& e) {
    throw UsageError(e.what());
  } catch (const NumericalFailure& e) {
    CheckReport failed(to_string(config.command));
    failed.fail(e.what());
    result.reports = {std::move(failed)};
  }
  result.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  result.exit_status =
      std::any_of(result.reports.begin(), result.reports.end(), [](const CheckReport& r) { return r.verdict == Verdict::fail; })
          ? 1
          : 0;
  return result;
}

std::string render(const RunConfig& config, const RunResult& result) {
  switch (config.format) {
    case Format::csv: return reports_to_csv(result.reports);
    case Format::svg: return reports_to_svg(result.reports, "trace_lab " + to_string(config.command));
    case Format::json: break;
  }
  nlohmann::json doc = report_document(config_echo(config), result.reports);
  if (config.timing) doc["wall_time_s"] = result.wall_seconds;
  return canonical_dump(doc);
}

namespace {

void add_common(CLI::App* sub, RunConfig& c, std::string& format) {
  sub->add_option("--seed", c.seed, "Seed for every random draw");
  sub->add_option("--tol", c.tol, "Tolerance")->check(CLI::PositiveNumber);
  sub->add_option("--out", c.out_path, "Output file (default: standard output)");
  sub->add_option("--format", format, "json, csv or svg")->check(CLI::IsMember({"json", "csv", "svg"}));
  sub->add_option("--dump-matrices", c.dump_dir, "Directory for text dumps of the matrices used");
  sub->add_flag("--timing", c.timing, "Embed wall time in the JSON report");
}

void add_random(CLI::App* sub, RunConfig& c, bool* random_flag) {
  sub->add_flag("--random", *random_flag, "Sample complex Gaussian matrices (default)");
  sub->add_option("--dim", c.dim, "Matrix dimension")->check(CLI::PositiveNumber);
  sub->add_option("--trials", c.trials, "Number of seeded samples")->check(CLI::PositiveNumber);
  sub->add_option("--matrix", c.matrix_a, "Read A from a matrix dump instead of sampling");
}

}  // namespace

int main_entry(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig config;
  std::string format = "json";
  bool random_flag = false;

  CLI::App app{"Numerical checks for traces on operator ideals", "trace_lab"};
  app.require_subcommand(1);

  auto* bpw = app.add_subcommand("bpw-verify", "Verify the block commutator construction [C, Z]");
  bpw->add_option("--weights", config.weights, "harmonic | invsq | list:v1,v2,...");
  bpw->add_option("--blocks", config.blocks, "Number of block rows N")->check(CLI::PositiveNumber);
  add_common(bpw, config, format);

  auto* weyl = app.add_subcommand("weyl", "Weyl's eigenvalue/singular value inequality");
  add_random(weyl, config, &random_flag);
  weyl->add_flag("--normal", config.normal, "Sample normal matrices");
  add_common(weyl, config, format);

  auto* lidskii = app.add_subcommand("lidskii", "trace(A) against the eigenvalue sum");
  add_random(lidskii, config, &random_flag);
  lidskii->add_flag("--normal", config.normal, "Sample normal matrices");
  add_common(lidskii, config, format);

  auto* abba = app.add_subcommand("abba", "Nonzero spectra of AB and BA");
  add_random(abba, config, &random_flag);
  abba->add_option("--matrix-b", config.matrix_b, "Read B from a matrix dump");
  abba->add_flag("--rank-deficient", config.rank_deficient, "Truncate the rank of A on odd trials");
  add_common(abba, config, format);

  auto* lnrr = app.add_subcommand("lnrr", "Cutoff-projection trace chain");
  add_random(lnrr, config, &random_flag);
  lnrr->add_option("--matrix-b", config.matrix_b, "Read B from a matrix dump");
  lnrr->add_flag("--rank-deficient", config.rank_deficient, "Truncate the rank of A on odd trials");
  lnrr->add_option("--levels", config.levels, "Number of cutoff levels (0: up to termination)");
  add_common(lnrr, config, format);

  auto* dix = app.add_subcommand("dixmier", "Logarithmic-mean estimator of a sequence");
  dix->add_option("--weights", config.weights, "harmonic | invsq | list:v1,v2,...");
  dix->add_option("--terms", config.terms, "Number of terms N")->check(CLI::PositiveNumber);
  add_common(dix, config, format);

  auto* exp = app.add_subcommand("experiment", "Commutator-property experiment on (C, Z)");
  exp->add_option("--weights", config.weights, "harmonic | invsq | list:v1,v2,...");
  exp->add_option("--blocks", config.blocks, "Number of block rows N")->check(CLI::PositiveNumber);
  add_common(exp, config, format);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "trace_lab: " << e.what() << '\n';
    return 2;
  }

  const std::pair<CLI::App*, Command> commands[] = {
      {bpw, Command::bpw_verify}, {weyl, Command::weyl}, {lidskii, Command::lidskii}, {abba, Command::abba},
      {lnrr, Command::lnrr},      {dix, Command::dixmier}, {exp, Command::experiment}};
  for (const auto& [sub, cmd] : commands)
    if (sub->parsed()) config.command = cmd;
  config.format = format == "csv" ? Format::csv : format == "svg" ? Format::svg : Format::json;
  if (random_flag && !config.matrix_a.empty()) {
    err << "trace_lab: --random and --matrix are mutually exclusive\n";
    return 2;
  }

  RunResult result;
  try {
    result = execute(config);
  } catch (const UsageError& e) {
    err << "trace_lab: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "trace_lab: " << e.what() << '\n';
    return 1;
  }

  try {
    const std::string artifact = render(config, result);
    if (config.out_path.empty())
      out << artifact;
    else
      write_file_atomically(config.out_path, artifact);
  } catch (const std::exception& e) {
    err << "trace_lab: " << e.what() << '\n';
    return 1;
  }

  std::size_t failed = 0;
  for (const auto& r : result.reports) failed += r.verdict == Verdict::fail ? 1 : 0;
  err << to_string(config.command) << ": " << result.reports.size() << " report(s), " << failed << " failed\n";
  return result.exit_status;
}

}  // namespace tracelab::cli
