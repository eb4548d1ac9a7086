#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "experiment.hpp"
#include "io_util.hpp"
#include "test_support.hpp"

using namespace fairgf;
using nlohmann::json;

namespace {

const std::filesystem::path kFixtures{FAIRGF_FIXTURE_DIR};

std::filesystem::path scratch_dir(const std::string& leaf) {
  const auto dir =
      std::filesystem::temp_directory_path() / "fairgf_experiment_tests" / leaf;
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

ExperimentConfig small_sbm_config() {
  ExperimentConfig cfg;
  cfg.use_sbm = true;
  cfg.sbm.group_neg = 40;
  cfg.sbm.group_pos = 40;
  cfg.sbm.p_intra = 0.15;
  cfg.sbm.p_inter = 0.02;
  cfg.sbm.label_flip = 0.15;
  cfg.sbm.feature_dim = 6;
  cfg.sbm.feature_noise = 0.3;
  cfg.sbm.seed = 11;
  cfg.tau_grid = {0.05, 0.3};
  cfg.num_splits = 2;
  cfg.train.hidden_dim = 8;
  cfg.train.epochs = 60;
  cfg.train.learning_rate = 0.1;
  cfg.train.early_stop_patience = 60;
  cfg.train.seed = 3;
  cfg.seed = 5;
  return cfg;
}

std::vector<std::string> read_lines(const std::filesystem::path& p) {
  std::ifstream in(p);
  REQUIRE(in.good());
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

}  // namespace

TEST_CASE("config parsing") {
  const std::string text = R"({
    "dataset": {"type": "sbm",
      "sbm": {"group_neg": 30, "group_pos": 20, "p_intra": 0.2,
              "p_inter": 0.01, "label_flip": 0.05, "feature_dim": 4,
              "feature_noise": 0.2, "seed": 9}},
    "tau_grid": [0.04, 0.05, 0.06],
    "num_splits": 3,
    "split_fractions": [0.4, 0.3, 0.3],
    "train": {"hidden_dim": 12, "learning_rate": 0.02, "epochs": 50,
              "weight_decay": 0.0005, "patience": 10, "seed": 2},
    "seed": 4
  })";
  const ExperimentConfig cfg = ExperimentConfig::from_json_text(text, ".");
  CHECK(cfg.use_sbm);
  CHECK(cfg.sbm.group_neg == 30);
  CHECK(cfg.sbm.group_pos == 20);
  CHECK(cfg.sbm.seed == 9);
  CHECK(cfg.tau_grid == std::vector<double>{0.04, 0.05, 0.06});
  CHECK(cfg.num_splits == 3);
  CHECK(cfg.train.hidden_dim == 12);
  CHECK(cfg.train.early_stop_patience == 10);
  CHECK(cfg.seed == 4);

  SUBCASE("defaults mirror the reference protocol") {
    const ExperimentConfig d = ExperimentConfig::from_json_text(
        R"({"dataset": {"type": "sbm"}})", ".");
    CHECK(d.tau_grid == std::vector<double>{0.04, 0.05, 0.06});
    CHECK(d.num_splits == 5);
    CHECK(d.split_fractions[0] == 0.4);
    CHECK(d.train.hidden_dim == 16);
  }

  SUBCASE("rejects garbage") {
    CHECK_THROWS_AS(ExperimentConfig::from_json_text("{nope", "."), Error);
    CHECK_THROWS_AS(ExperimentConfig::from_json_text("{}", "."), Error);
    CHECK_THROWS_AS(ExperimentConfig::from_json_text(
                        R"({"dataset": {"type": "sbm"}, "tau_grid": [2.0]})",
                        "."),
                    Error);
  }

  SUBCASE("relative dataset paths resolve against the config directory") {
    const std::string files = R"({
      "dataset": {"type": "files", "node_file": "toy_nodes.csv",
                  "edge_file": "toy_edges.txt"}})";
    const ExperimentConfig cfg2 =
        ExperimentConfig::from_json_text(files, kFixtures);
    CHECK(cfg2.node_file == kFixtures / "toy_nodes.csv");
    CHECK_NOTHROW(load_configured_dataset(cfg2));
  }
}

TEST_CASE("spectrum command: file shape and energy concentration") {
  ExperimentConfig cfg = small_sbm_config();
  cfg.sbm.group_neg = 60;
  cfg.sbm.group_pos = 60;
  cfg.sbm.p_intra = 0.15;
  cfg.sbm.p_inter = 0.01;
  const auto out = scratch_dir("spectrum");
  cmd_spectrum(cfg, out);

  const auto lines = read_lines(out / "spectrum.csv");
  REQUIRE(lines.size() == 121u);  // header + N rows
  CHECK(lines[0] == "lambda,abs_s_tilde,abs_y_tilde");

  double prev = -1.0;
  double total_energy = 0.0;
  double low_energy = 0.0;
  const int low_band = 12;  // lowest 10% of 120
  for (std::size_t i = 1; i < lines.size(); ++i) {
    std::istringstream ss(lines[i]);
    std::string cell;
    std::getline(ss, cell, ',');
    const double lambda = std::stod(cell);
    std::getline(ss, cell, ',');
    const double abs_s = std::stod(cell);
    CHECK(lambda >= prev);
    CHECK(abs_s >= 0.0);
    prev = lambda;
    total_energy += abs_s * abs_s;
    if (static_cast<int>(i) <= low_band) low_energy += abs_s * abs_s;
  }
  // homophilic sample concentrates the sensitive signal at low frequencies
  CHECK(low_energy / total_energy >= 0.6);

  SUBCASE("ER control shows no such concentration") {
    ExperimentConfig er = cfg;
    er.sbm.p_intra = 0.05;
    er.sbm.p_inter = 0.05;
    const Dataset d = load_configured_dataset(er);
    const Spectrum spec = eigendecompose(normalized_laplacian(d.graph));
    CHECK(low_band_energy_fraction(spec, d.sensitive) < 0.5);
  }
}

TEST_CASE("filter command: reports, bound ordering, filtered features") {
  // 2-node path fixture: rho 2 for the identity filter, 0 for the fair one
  ExperimentConfig cfg;
  cfg.use_sbm = false;
  cfg.node_file = kFixtures / "path2_nodes.csv";
  cfg.edge_file = kFixtures / "path2_edges.txt";
  const auto out = scratch_dir("filter");
  cmd_filter(cfg, 0.5, out);

  const json report = json::parse(read_text_file(out / "bias_report.json"));
  CHECK(report.at("tau").get<double>() == 0.5);
  CHECK(report.at("k").get<int>() == 1);
  CHECK(std::abs(report.at("rho").get<double>()) < 1e-12);
  CHECK(report.at("variants").at("identity").at("rho").get<double>() ==
        doctest::Approx(2.0).epsilon(1e-12));
  CHECK(report.at("variants").at("identity").at("rho_bound").get<double>() ==
        doctest::Approx(2.0).epsilon(1e-12));

  // the fair bound never exceeds the uniform bound at equal l1 mass
  const double fair_bound =
      report.at("variants").at("fair").at("rho_bound").get<double>();
  const double uniform_bound =
      report.at("variants").at("uniform").at("rho_bound").get<double>();
  CHECK(fair_bound <= uniform_bound + 1e-12);

  const auto lines = read_lines(out / "features_filtered.csv");
  REQUIRE(lines.size() == 3u);
  CHECK(lines[0] == "feat_0");

  SUBCASE("report JSON round-trips") {
    const std::string dumped = report.dump(2);
    CHECK(json::parse(dumped) == report);
  }

  SUBCASE("bound ordering holds on an SBM sample too") {
    const auto out2 = scratch_dir("filter_sbm");
    cmd_filter(small_sbm_config(), 0.05, out2);
    const json r2 = json::parse(read_text_file(out2 / "bias_report.json"));
    CHECK(r2.at("variants").at("fair").at("rho_bound").get<double>() <=
          r2.at("variants").at("uniform").at("rho_bound").get<double>() +
              1e-12);
    CHECK(r2.at("rho").get<double>() <=
          r2.at("rho_bound").get<double>() + 1e-9);
  }
}

TEST_CASE("generate command round trip") {
  ExperimentConfig cfg = small_sbm_config();
  const auto out = scratch_dir("generate");
  cmd_generate(cfg, out);

  const Dataset direct = generate_sbm(cfg.sbm);
  const Dataset loaded =
      load_dataset(out / "nodes.csv", out / "edges.txt", ColumnSchema{});
  CHECK(loaded.graph.edges() == direct.graph.edges());
  CHECK(loaded.labels == direct.labels);
  CHECK((loaded.features - direct.features).cwiseAbs().maxCoeff() == 0.0);

  const json stats = json::parse(read_text_file(out / "stats.json"));
  const DatasetStats expected = dataset_stats(direct);
  CHECK(stats.at("inter_edges").get<long>() == expected.inter_edges);
  CHECK(stats.at("intra_edges").get<long>() == expected.intra_edges);
  CHECK(stats.at("group_neg").get<long>() == expected.group_neg);

  SUBCASE("fixed seed reproduces identical files") {
    const auto out2 = scratch_dir("generate_again");
    cmd_generate(cfg, out2);
    CHECK(read_text_file(out / "nodes.csv") ==
          read_text_file(out2 / "nodes.csv"));
    CHECK(read_text_file(out / "edges.txt") ==
          read_text_file(out2 / "edges.txt"));
  }
}

TEST_CASE("experiment command") {
  const ExperimentConfig cfg = small_sbm_config();
  const auto out = scratch_dir("experiment");
  cmd_experiment(cfg, out);
  const json result = json::parse(read_text_file(out / "result.json"));

  SUBCASE("rows cover every variant and split") {
    const auto& rows = result.at("rows");
    CHECK(rows.size() == 2u * 3u);  // 2 splits x (baseline + 2 taus)
    int baseline_rows = 0;
    for (const auto& r : rows) {
      if (r.at("variant") == "baseline") ++baseline_rows;
    }
    CHECK(baseline_rows == 2);
  }

  SUBCASE("aggregates recompute from the per-split rows") {
    for (const auto& [variant, agg] :
         result.at("aggregates").items()) {
      if (variant == "fair_selected") continue;
      std::vector<double> acc;
      for (const auto& r : result.at("rows")) {
        if (r.at("variant") == variant) {
          acc.push_back(r.at("accuracy").get<double>());
        }
      }
      REQUIRE(!acc.empty());
      double mean = 0.0;
      for (double a : acc) mean += a;
      mean /= double(acc.size());
      double ss = 0.0;
      for (double a : acc) ss += (a - mean) * (a - mean);
      const double sd =
          acc.size() > 1 ? std::sqrt(ss / double(acc.size() - 1)) : 0.0;
      CHECK(std::abs(agg.at("mean_accuracy").get<double>() - mean) <= 1e-12);
      CHECK(std::abs(agg.at("std_accuracy").get<double>() - sd) <= 1e-12);
    }
  }

  SUBCASE("chosen tau comes from the grid by validation accuracy") {
    const double chosen = result.at("chosen_tau").get<double>();
    CHECK((chosen == 0.05 || chosen == 0.3));
    double best_val = -1.0;
    double best_tau = 0.0;
    for (double tau : cfg.tau_grid) {
      const std::string name = "fair_" + format_double(tau);
      const double v = result.at("aggregates")
                           .at(name)
                           .at("mean_val_accuracy")
                           .get<double>();
      if (v > best_val) {
        best_val = v;
        best_tau = tau;
      }
    }
    CHECK(chosen == best_tau);
  }

  SUBCASE("CSV layout") {
    const auto lines = read_lines(out / "results.csv");
    CHECK(lines[0] == "variant,split,accuracy,delta_sp,delta_eo");
    CHECK(lines.size() == 1u + 6u);
  }

  SUBCASE("byte-identical on a repeated run") {
    const auto out2 = scratch_dir("experiment_again");
    cmd_experiment(cfg, out2);
    CHECK(read_text_file(out / "results.csv") ==
          read_text_file(out2 / "results.csv"));
    CHECK(read_text_file(out / "result.json") ==
          read_text_file(out2 / "result.json"));
  }
}

TEST_CASE("tau = 1 reduces the fair variant to the baseline (shared seeds)") {
  // With tau = 1 the cutoff set is empty, the filter is the identity and the
  // fair rows must match the baseline rows exactly; this pins the shared
  // initialization contract.
  ExperimentConfig cfg = small_sbm_config();
  cfg.tau_grid = {1.0};
  cfg.num_splits = 2;
  const ExperimentResult result = run_experiment(cfg);
  REQUIRE(result.rows.size() == 4u);
  for (int split = 0; split < 2; ++split) {
    const VariantResult* baseline = nullptr;
    const VariantResult* fair = nullptr;
    for (const auto& r : result.rows) {
      if (r.split != split) continue;
      if (r.variant == "baseline") baseline = &r;
      if (r.variant == "fair_1") fair = &r;
    }
    REQUIRE(baseline != nullptr);
    REQUIRE(fair != nullptr);
    CHECK(baseline->report.accuracy == fair->report.accuracy);
    CHECK(baseline->report.delta_sp == fair->report.delta_sp);
    CHECK(baseline->report.delta_eo == fair->report.delta_eo);
  }
}

TEST_CASE("degenerate split fractions are rejected") {
  ExperimentConfig cfg = small_sbm_config();
  cfg.num_splits = 1;
  cfg.split_fractions = {0.999, 0.0005, 0.0005};
  CHECK_THROWS_AS(run_experiment(cfg), Error);
}

TEST_CASE("errors raised inside a variant carry (variant, split) provenance") {
  // this draw leaves the s=-1 group of split 1's test mask without a single
  // positive label, so equal_opportunity fails during evaluation; if the
  // seeded draw ever shifts, re-pick a seed that reproduces the condition
  ExperimentConfig cfg;
  cfg.use_sbm = true;
  cfg.sbm.group_neg = 40;
  cfg.sbm.group_pos = 40;
  cfg.sbm.p_intra = 0.15;
  cfg.sbm.p_inter = 0.02;
  cfg.sbm.label_flip = 0.15;
  cfg.sbm.feature_dim = 6;
  cfg.sbm.feature_noise = 0.3;
  cfg.sbm.seed = 13;
  cfg.tau_grid = {0.05};
  cfg.num_splits = 2;
  cfg.train.hidden_dim = 8;
  cfg.train.epochs = 5;
  cfg.train.early_stop_patience = 5;
  cfg.train.seed = 3;
  cfg.seed = 3;
  try {
    run_experiment(cfg);
    FAIL("expected a degenerate-group failure");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::empty_positive_group);
    const std::string msg = e.what();
    CHECK(msg.find("variant 'baseline'") != std::string::npos);
    CHECK(msg.find("split 1") != std::string::npos);
  }
}
