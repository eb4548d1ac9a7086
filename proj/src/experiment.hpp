#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dataset.hpp"
#include "fair_filter.hpp"
#include "gcn.hpp"

namespace fairgf {

/// Run configuration shared by all CLI commands; parsed from a JSON file.
/// See README for the schema.
struct ExperimentConfig {
  // dataset source: either an SBM sample or files on disk
  bool use_sbm = true;
  SbmConfig sbm;
  std::filesystem::path node_file;
  std::filesystem::path edge_file;
  ColumnSchema schema;
  bool standardize = false;

  std::vector<double> tau_grid{0.04, 0.05, 0.06};
  int num_splits = 5;
  std::array<double, 3> split_fractions{0.4, 0.3, 0.3};
  TrainConfig train;
  std::uint64_t seed = 1;

  void validate() const;

  /// Relative dataset paths resolve against the config file's directory.
  static ExperimentConfig from_json_file(const std::filesystem::path& path);
  static ExperimentConfig from_json_text(const std::string& text,
                                         const std::filesystem::path& base_dir);

  /// Single knob for reproducing a run: overrides the split master seed,
  /// the SBM seed and the training seed.
  void override_seed(std::uint64_t s);
};

/// One trained-and-evaluated classifier run.
struct VariantResult {
  std::string variant;  // "baseline" or "fair_<tau>"
  int split = 0;
  double val_accuracy = 0.0;
  FairnessReport report;  // on the test mask
};

struct Aggregate {
  double mean_accuracy = 0.0, std_accuracy = 0.0;
  double mean_sp = 0.0, std_sp = 0.0;
  double mean_eo = 0.0, std_eo = 0.0;
  double mean_val_accuracy = 0.0;
};

struct ExperimentResult {
  std::vector<VariantResult> rows;
  std::map<std::string, Aggregate> aggregates;  // keyed by variant
  double chosen_tau = 0.0;  // grid value with the best mean val accuracy

  std::string to_json() const;
  /// Flat rows `variant,split,accuracy,delta_sp,delta_eo`, full precision.
  std::string to_csv() const;
};

Dataset load_configured_dataset(const ExperimentConfig& cfg);

/// Fraction of ||z~||^2 carried by the lowest `band` share of frequencies.
double low_band_energy_fraction(const Spectrum& spec, const Vector& signal,
                                double band = 0.1);

ExperimentResult run_experiment(const ExperimentConfig& cfg);

// Command entry points: write output files under out_dir and return a short
// human-readable summary (percentages, two decimals).
std::string cmd_spectrum(const ExperimentConfig& cfg,
                         const std::filesystem::path& out_dir);
std::string cmd_filter(const ExperimentConfig& cfg, double tau,
                       const std::filesystem::path& out_dir);
std::string cmd_experiment(const ExperimentConfig& cfg,
                           const std::filesystem::path& out_dir);
std::string cmd_generate(const ExperimentConfig& cfg,
                         const std::filesystem::path& out_dir);

}  // namespace fairgf
