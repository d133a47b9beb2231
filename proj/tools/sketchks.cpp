// sketchks: approximate two-sample KS tests from quantile sketches.
//
//   sketchks ks2 --file-x ref.txt --file-y test.txt --alpha 0.05 --beta 0.025
//   sketchks experiment --id 1 --out exp1.csv
//   sketchks lall-compare --out table.csv
//   sketchks convergence --out convergence.csv
//   sketchks cdf --file-x data.txt --delta 0.2 --out knots.csv --with-exact

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "sketchks/approx_cdf.hpp"
#include "sketchks/errors.hpp"
#include "sketchks/experiment.hpp"
#include "sketchks/format.hpp"
#include "sketchks/ingest.hpp"
#include "sketchks/ks.hpp"

namespace fs = std::filesystem;
using namespace sketchks;

namespace {

constexpr int kExitError = 1;
constexpr int kExitRejected = 2;

struct InputFlags {
  bool skip_header = false;
  bool skip_invalid = false;

  IngestOptions options() const { return IngestOptions{skip_header, skip_invalid}; }
};

void add_input_flags(CLI::App* cmd, InputFlags& flags) {
  cmd->add_flag("--skip-header", flags.skip_header, "Ignore the first line of each input file");
  cmd->add_flag("--skip-invalid", flags.skip_invalid, "Drop unparsable or non-finite lines instead of failing");
}

std::vector<double> load(const std::string& path, const InputFlags& flags) {
  IngestResult in = ingest(fs::path(path), flags.options());
  if (in.skipped > 0) std::cerr << fmt::format("{}: skipped {} invalid line(s)\n", path, in.skipped);
  return std::move(in.values);
}

// Writes to `path`, or stdout when path is empty or "-".
template <typename Fn>
void emit(const std::string& path, Fn&& write) {
  if (path.empty() || path == "-") {
    write(std::cout);
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(fmt::format("cannot open '{}' for writing", path));
  write(out);
  if (!out) throw IoError(fmt::format("failed writing '{}'", path));
}

fs::path exact_companion(const fs::path& out) {
  fs::path p = out;
  const std::string ext = p.has_extension() ? p.extension().string() : std::string(".csv");
  p.replace_extension();
  p += ".exact" + ext;
  return p;
}

std::string plan_json(const CdfPlan& p) {
  return fmt::format(R"({{"n": {}, "delta": {}, "epsilon": {}, "knots": {}}})", p.n, format_real(p.delta),
                     format_real(p.epsilon), p.knots);
}

std::string ks2_json(const ApproxKsRun& run, const TestPrecision& precision) {
  std::string body = to_json(run.outcome);
  body.pop_back();  // reopen the object to append the parameters
  body += fmt::format(R"(, "params": {{"phi": {}, "beta": {}, "a_x": {}, "a_y": {}, "plan_x": {}, "plan_y": {}}}}})",
                      format_real(precision.phi), format_real(precision.beta), run.cdf_x.plan().knots,
                      run.cdf_y.plan().knots, plan_json(run.cdf_x.plan()), plan_json(run.cdf_y.plan()));
  return body;
}

void run_experiments(const std::vector<int>& ids, int replications, std::uint64_t seed,
                     std::optional<std::int64_t> n, std::optional<std::int64_t> m, const std::string& out) {
  emit(out, [&](std::ostream& os) {
    bool header = true;
    for (int id : ids) {
      ExperimentSpec spec = experiment_spec(id);
      spec.replications = replications;
      spec.master_seed = seed;
      if (n) spec.n = *n;
      if (m) spec.m = *m;
      write_experiment_csv(os, run_experiment(spec), header);
      header = false;
    }
  });
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Approximate two-sample Kolmogorov-Smirnov tests built on epsilon-approximate quantile sketches"};
  app.require_subcommand(1);

  std::uint64_t seed = kDefaultSeed;
  int replications = 20;
  std::string out;
  InputFlags input;

  // ks2
  auto* ks2 = app.add_subcommand("ks2", "Approximate two-sample KS test between two files");
  std::string file_x, file_y;
  double alpha = 0.05;
  std::optional<double> beta, phi;
  bool exit_on_reject = false;
  ks2->add_option("--file-x", file_x, "Reference sample, one number per line")->required()->check(CLI::ExistingFile);
  ks2->add_option("--file-y", file_y, "Test sample, one number per line")->required()->check(CLI::ExistingFile);
  ks2->add_option("--alpha", alpha, "Significance level")->capture_default_str();
  auto* beta_opt = ks2->add_option("--beta", beta, "p-value precision used to derive phi");
  auto* phi_opt = ks2->add_option("--phi", phi, "Required precision in the KS distance");
  beta_opt->excludes(phi_opt);
  ks2->add_flag("--exit-on-reject", exit_on_reject, "Exit with status 2 when the null hypothesis is rejected");
  ks2->add_option("--out", out, "Write JSON here instead of stdout");
  add_input_flags(ks2, input);

  // experiment / lall-compare
  auto* experiment = app.add_subcommand("experiment", "Run one synthetic experiment (ids 1-10) and write CSV");
  auto* lall = app.add_subcommand("lall-compare", "Sketch-direct comparison experiments (ids 6-10)");
  int id = 0;
  std::optional<std::int64_t> size_x, size_y;
  for (auto* cmd : {experiment, lall}) {
    cmd->add_option("--replications", replications, "Replications per experiment")->capture_default_str()
        ->check(CLI::PositiveNumber);
    cmd->add_option("--seed", seed, "Master seed")->envname("SKETCHKS_SEED")->capture_default_str();
    cmd->add_option("--out", out, "Output CSV (stdout when omitted)");
    cmd->add_option("--n", size_x, "Override the first sample size");
    cmd->add_option("--m", size_y, "Override the second sample size");
  }
  experiment->add_option("--id", id, "Experiment id")->required()->check(CLI::Range(1, 10));
  lall->add_option("--id", id, "Experiment id; all of 6-10 when omitted")->check(CLI::Range(6, 10));

  // convergence
  auto* convergence = app.add_subcommand("convergence", "CDF approximation error study over standard-normal samples");
  std::int64_t conv_n = 10'000;
  convergence->add_option("--replications", replications, "Samples per row")->capture_default_str()
      ->check(CLI::PositiveNumber);
  convergence->add_option("--seed", seed, "Master seed")->envname("SKETCHKS_SEED")->capture_default_str();
  convergence->add_option("--n", conv_n, "Points per sample")->capture_default_str();
  convergence->add_option("--out", out, "Output CSV (stdout when omitted)");

  // cdf
  auto* cdf = app.add_subcommand("cdf", "Export approximate CDF knots of a data file");
  std::string cdf_file;
  std::optional<double> delta, cdf_phi;
  bool with_exact = false;
  cdf->add_option("--file-x,--file", cdf_file, "Input sample")->required()->check(CLI::ExistingFile);
  auto* delta_opt = cdf->add_option("--delta", delta, "CDF error bound");
  auto* cdf_phi_opt = cdf->add_option("--phi", cdf_phi, "KS precision; the CDF uses delta = phi / 2");
  delta_opt->excludes(cdf_phi_opt);
  cdf->add_option("--out", out, "Knot CSV path")->required();
  cdf->add_flag("--with-exact", with_exact, "Also write <out>.exact.csv with the full empirical CDF");
  add_input_flags(cdf, input);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*ks2) {
      if (!beta && !phi) throw DomainError("ks2 needs either --beta or --phi");
      const std::vector<double> x = load(file_x, input);
      const std::vector<double> y = load(file_y, input);
      const TestPrecision precision =
          phi ? TestPrecision::from_phi(alpha, *phi)
              : TestPrecision::from_alpha_beta(alpha, *beta, static_cast<std::int64_t>(x.size()),
                                               static_cast<std::int64_t>(y.size()));
      const ApproxKsRun run = run_test_detailed(x, y, precision);
      emit(out, [&](std::ostream& os) { os << ks2_json(run, precision) << '\n'; });
      return exit_on_reject && run.outcome.reject ? kExitRejected : 0;
    }
    if (*experiment) {
      run_experiments({id}, replications, seed, size_x, size_y, out);
      return 0;
    }
    if (*lall) {
      std::vector<int> ids = id ? std::vector<int>{id} : std::vector<int>{6, 7, 8, 9, 10};
      run_experiments(ids, replications, seed, size_x, size_y, out);
      return 0;
    }
    if (*convergence) {
      const auto rows = run_convergence(replications, conv_n, seed);
      emit(out, [&](std::ostream& os) { write_convergence_csv(os, rows); });
      for (const auto& r : rows) {
        if (!r.within_bound()) {
          std::cerr << fmt::format("a={} eps={}: max error {} exceeds bound {}\n", r.knots, r.epsilon, r.max_error,
                                   r.delta);
          return kExitError;
        }
      }
      return 0;
    }
    if (*cdf) {
      if (!delta && !cdf_phi) throw DomainError("cdf needs either --delta or --phi");
      const std::vector<double> data = load(cdf_file, input);
      const double d = delta ? *delta : *cdf_phi / 2.0;
      const ApproxCdf result = build_cdf(data, plan_from_phi(2.0 * d, static_cast<std::int64_t>(data.size())));
      emit(out, [&](std::ostream& os) { write_cdf_csv(os, result); });
      if (with_exact) {
        emit(exact_companion(out).string(), [&](std::ostream& os) { write_exact_cdf_csv(os, data); });
      }
      return 0;
    }
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
  return 0;
}
