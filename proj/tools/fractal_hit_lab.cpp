// fractal-hit-lab: runs experiment manifests through the C API.
//
//   fractal-hit-lab <subcommand> --config <path> [--seed N] [--trials N]
//                   [--out DIR] [--workers N]
//
// Records stream to stdout as JSONL; a one-line summary and the wall time go
// to stderr. Exit status: 0 when every assertion passes, 1 when some
// assertion fails, 2 on configuration or runtime errors.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "fhl/fhl.h"

namespace {

struct RunArgs {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> trials;
  std::optional<std::string> out;
  unsigned workers = 0;
  bool quiet = false;
};

void print_record(const char* line, void* user) {
  if (*static_cast<bool*>(user)) return;
  std::fputs(line, stdout);
  std::fputc('\n', stdout);
}

int run(const std::string& kind, const RunArgs& args) {
  std::ifstream in(args.config, std::ios::binary);
  if (!in) {
    std::cerr << "error: Io: cannot read config " << args.config << "\n";
    return 2;
  }
  std::ostringstream text;
  text << in.rdbuf();

  bool quiet = args.quiet;
  fhl_run_options opts{};
  opts.kind = kind.c_str();
  opts.has_seed = args.seed.has_value();
  opts.seed = args.seed.value_or(0);
  opts.has_trials = args.trials.has_value();
  opts.trials = args.trials.value_or(0);
  opts.workers = args.workers;
  opts.out_dir = args.out ? args.out->c_str() : nullptr;
  opts.on_record = print_record;
  opts.user = &quiet;

  auto t0 = std::chrono::steady_clock::now();
  fhl_run_result result{};
  fhl_status status = fhl_run_manifest(text.str().c_str(), &opts, &result);
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::fflush(stdout);
  if (status != FHL_OK) {
    std::cerr << "error: " << fhl_last_error() << "\n";
    return 2;
  }
  std::cerr << kind << ": " << result.rows << " rows, " << result.failures << " failed, digest " << result.digest
            << ", " << secs << " s\n";
  int code = result.passed ? 0 : 1;
  fhl_run_result_free(&result);
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simulation and verification lab for limsup random fractals on the dyadic grid"};
  app.set_version_flag("--version", std::string(fhl_version()));
  app.require_subcommand(1);

  RunArgs args;
  std::string chosen;
  for (std::size_t i = 0; i < fhl_kind_count(); ++i) {
    std::string kind = fhl_kind_name(i);
    CLI::App* sub = app.add_subcommand(kind, "run a '" + kind + "' manifest");
    sub->add_option("--config", args.config, "manifest JSON file")->required()->check(CLI::ExistingFile);
    sub->add_option("--seed", args.seed, "master seed (overrides the manifest)");
    sub->add_option("--trials", args.trials, "Monte Carlo trials (overrides the manifest)")->check(CLI::PositiveNumber);
    sub->add_option("--out", args.out, "output directory for <kind>.jsonl and <kind>.csv");
    sub->add_option("--workers", args.workers, "worker threads; never changes results")->check(CLI::Range(1u, 1024u));
    sub->add_flag("--quiet", args.quiet, "do not echo records to stdout");
    sub->callback([&chosen, kind] { chosen = kind; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  return run(chosen, args);
}
