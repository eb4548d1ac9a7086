// Command-line front end. Talks to the library exclusively through the
// C API in fairgf/fairgf.h.

#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include "fairgf/fairgf.h"

namespace {

// FAIRGF_E_VALIDATION -> 1, FAIRGF_E_IO -> 2; internal failures also exit 1.
int exit_code_for(int rc) {
  switch (rc) {
    case FAIRGF_OK:
      return 0;
    case FAIRGF_E_IO:
      return 2;
    default:
      return 1;
  }
}

int finish(int rc, char* summary) {
  if (rc == FAIRGF_OK) {
    if (summary) std::fputs(summary, stdout);
  } else {
    std::fprintf(stderr, "error: %s\n", fairgf_last_error());
  }
  fairgf_string_free(summary);
  return exit_code_for(rc);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fairness-aware graph spectral filtering toolkit"};
  app.require_subcommand(1);

  std::string config;
  std::string out_dir = ".";
  long long seed = -1;
  double tau = 0.0;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config, "JSON run configuration")
        ->required();
    cmd->add_option("--out", out_dir, "output directory (default: .)");
    cmd->add_option("--seed", seed, "override every seed in the config");
  };

  CLI::App* spectrum = app.add_subcommand(
      "spectrum", "dump per-frequency magnitudes of the sensitive and label "
                  "signals");
  add_common(spectrum);

  CLI::App* filter = app.add_subcommand(
      "filter", "design the fair filter, report rho and its bound, write "
                "filtered features");
  add_common(filter);
  filter->add_option(
      "--tau", tau,
      "cutoff threshold in (0,1]; default: first tau_grid entry");

  CLI::App* experiment = app.add_subcommand(
      "experiment", "baseline vs fair-filtered GCN over seeded splits");
  add_common(experiment);

  CLI::App* generate = app.add_subcommand(
      "generate", "materialize a synthetic SBM dataset in the loader format");
  add_common(generate);

  // keep the documented exit codes: 0 ok, 1 validation, 2 I/O
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  char* summary = nullptr;
  int rc = FAIRGF_OK;
  if (spectrum->parsed()) {
    rc = fairgf_cmd_spectrum(config.c_str(), out_dir.c_str(), seed, &summary);
  } else if (filter->parsed()) {
    rc = fairgf_cmd_filter(config.c_str(), out_dir.c_str(), tau, seed,
                           &summary);
  } else if (experiment->parsed()) {
    rc = fairgf_cmd_experiment(config.c_str(), out_dir.c_str(), seed,
                               &summary);
  } else if (generate->parsed()) {
    rc = fairgf_cmd_generate(config.c_str(), out_dir.c_str(), seed, &summary);
  }
  return finish(rc, summary);
}
