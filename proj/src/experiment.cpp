#include "experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <json.hpp>
#include <sstream>

#include "io_util.hpp"

namespace fairgf {

namespace {

using nlohmann::json;

double get_or(const json& j, const char* key, double fallback) {
  return j.contains(key) ? j.at(key).get<double>() : fallback;
}

std::string fmt_pct(double fraction) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", fraction * 100.0);
  return buf;
}

// Mean and sample (n-1) standard deviation; std is 0 for a single value.
std::pair<double, double> mean_std(const std::vector<double>& xs) {
  const double n = static_cast<double>(xs.size());
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= n;
  if (xs.size() < 2) return {mean, 0.0};
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  return {mean, std::sqrt(ss / (n - 1.0))};
}

std::string variant_name(double tau) { return "fair_" + format_double(tau); }

}  // namespace

void ExperimentConfig::validate() const {
  if (use_sbm) {
    sbm.validate();
  } else if (node_file.empty() || edge_file.empty()) {
    throw Error(ErrorKind::invalid_config,
                "file-backed dataset needs node_file and edge_file");
  }
  if (tau_grid.empty()) {
    throw Error(ErrorKind::invalid_config, "tau_grid must be non-empty");
  }
  for (double tau : tau_grid) {
    if (!(tau > 0.0) || tau > 1.0) {
      throw Error(ErrorKind::invalid_tau,
                  "tau_grid entries must lie in (0,1]");
    }
  }
  if (num_splits < 1) {
    throw Error(ErrorKind::invalid_config, "num_splits must be >= 1");
  }
  train.validate();
}

ExperimentConfig ExperimentConfig::from_json_file(
    const std::filesystem::path& path) {
  return from_json_text(read_text_file(path), path.parent_path());
}

ExperimentConfig ExperimentConfig::from_json_text(
    const std::string& text, const std::filesystem::path& base_dir) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::parse_error,
                std::string("config is not valid JSON: ") + e.what());
  }
  ExperimentConfig cfg;
  try {
    if (!j.contains("dataset")) {
      throw Error(ErrorKind::invalid_config, "config needs a 'dataset' object");
    }
    const json& d = j.at("dataset");
    const std::string type = d.value("type", "sbm");
    if (type == "sbm") {
      cfg.use_sbm = true;
      const json s = d.value("sbm", json::object());
      cfg.sbm.group_neg = static_cast<int>(get_or(s, "group_neg", 100));
      cfg.sbm.group_pos = static_cast<int>(get_or(s, "group_pos", 100));
      cfg.sbm.p_intra = get_or(s, "p_intra", 0.1);
      cfg.sbm.p_inter = get_or(s, "p_inter", 0.01);
      cfg.sbm.label_flip = get_or(s, "label_flip", 0.1);
      cfg.sbm.feature_dim = static_cast<int>(get_or(s, "feature_dim", 8));
      cfg.sbm.feature_noise = get_or(s, "feature_noise", 0.1);
      cfg.sbm.seed = static_cast<std::uint64_t>(get_or(s, "seed", 1));
    } else if (type == "files") {
      cfg.use_sbm = false;
      std::filesystem::path nodes = d.at("node_file").get<std::string>();
      std::filesystem::path edges = d.at("edge_file").get<std::string>();
      cfg.node_file = nodes.is_absolute() ? nodes : base_dir / nodes;
      cfg.edge_file = edges.is_absolute() ? edges : base_dir / edges;
      cfg.schema.id = d.value("id_column", "id");
      cfg.schema.sensitive = d.value("sensitive_column", "sensitive");
      cfg.schema.label = d.value("label_column", "label");
      cfg.standardize = d.value("standardize", false);
    } else {
      throw Error(ErrorKind::invalid_config,
                  "dataset.type must be 'sbm' or 'files', got '" + type + "'");
    }
    if (j.contains("tau_grid")) {
      cfg.tau_grid = j.at("tau_grid").get<std::vector<double>>();
    }
    cfg.num_splits = static_cast<int>(get_or(j, "num_splits", 5));
    if (j.contains("split_fractions")) {
      const auto f = j.at("split_fractions").get<std::vector<double>>();
      if (f.size() != 3) {
        throw Error(ErrorKind::invalid_config,
                    "split_fractions needs exactly three entries");
      }
      cfg.split_fractions = {f[0], f[1], f[2]};
    }
    const json t = j.value("train", json::object());
    cfg.train.hidden_dim = static_cast<int>(get_or(t, "hidden_dim", 16));
    cfg.train.learning_rate = get_or(t, "learning_rate", 0.05);
    cfg.train.epochs = static_cast<int>(get_or(t, "epochs", 300));
    cfg.train.weight_decay = get_or(t, "weight_decay", 5e-4);
    cfg.train.early_stop_patience =
        static_cast<int>(get_or(t, "patience", 30));
    cfg.train.seed = static_cast<std::uint64_t>(get_or(t, "seed", 1));
    cfg.seed = static_cast<std::uint64_t>(get_or(j, "seed", 1));
  } catch (const json::exception& e) {
    throw Error(ErrorKind::invalid_config,
                std::string("bad config value: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

void ExperimentConfig::override_seed(std::uint64_t s) {
  seed = s;
  sbm.seed = s;
  train.seed = s;
}

Dataset load_configured_dataset(const ExperimentConfig& cfg) {
  if (cfg.use_sbm) return generate_sbm(cfg.sbm);
  return load_dataset(cfg.node_file, cfg.edge_file, cfg.schema,
                      cfg.standardize);
}

double low_band_energy_fraction(const Spectrum& spec, const Vector& signal,
                                double band) {
  const Vector coeffs = gft(spec, signal);
  const double total = coeffs.squaredNorm();
  if (total == 0.0) return 0.0;
  const int cutoff = std::max(
      1, static_cast<int>(std::floor(band * static_cast<double>(spec.size()))));
  return coeffs.head(cutoff).squaredNorm() / total;
}

std::string ExperimentResult::to_csv() const {
  std::ostringstream out;
  out << "variant,split,accuracy,delta_sp,delta_eo\n";
  for (const VariantResult& r : rows) {
    out << r.variant << ',' << r.split << ','
        << format_double(r.report.accuracy) << ','
        << format_double(r.report.delta_sp) << ','
        << format_double(r.report.delta_eo) << '\n';
  }
  return out.str();
}

std::string ExperimentResult::to_json() const {
  json j;
  j["chosen_tau"] = chosen_tau;
  json jrows = json::array();
  for (const VariantResult& r : rows) {
    jrows.push_back({{"variant", r.variant},
                     {"split", r.split},
                     {"val_accuracy", r.val_accuracy},
                     {"accuracy", r.report.accuracy},
                     {"delta_sp", r.report.delta_sp},
                     {"delta_eo", r.report.delta_eo}});
  }
  j["rows"] = jrows;
  json jagg;
  for (const auto& [name, a] : aggregates) {
    jagg[name] = {{"mean_accuracy", a.mean_accuracy},
                  {"std_accuracy", a.std_accuracy},
                  {"mean_delta_sp", a.mean_sp},
                  {"std_delta_sp", a.std_sp},
                  {"mean_delta_eo", a.mean_eo},
                  {"std_delta_eo", a.std_eo},
                  {"mean_val_accuracy", a.mean_val_accuracy}};
  }
  j["aggregates"] = jagg;
  return j.dump(2);
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const Dataset data = load_configured_dataset(cfg);
  const Matrix a_hat = normalized_adjacency(data.graph);
  const Spectrum spec = eigendecompose(normalized_laplacian(data.graph));
  const Vector m = bias_coefficients(spec, data.sensitive);

  // Pre-filter features once per tau; annotate failures with their variant.
  std::vector<Matrix> filtered;
  filtered.reserve(cfg.tau_grid.size());
  for (double tau : cfg.tau_grid) {
    try {
      const Vector gains = fair_filter(m, tau);
      // empty cutoff set = identity filter = untouched features
      if ((gains.array() == 1.0).all()) {
        filtered.push_back(data.features);
      } else {
        filtered.push_back(filter_features(spec, gains, data.features));
      }
    } catch (const Error& e) {
      throw Error(e.kind(), "variant '" + variant_name(tau) +
                                "': " + e.what());
    }
  }

  ExperimentResult result;
  for (int split = 0; split < cfg.num_splits; ++split) {
    const SplitMasks masks =
        split_nodes(data.label_known, cfg.split_fractions,
                    cfg.seed + static_cast<std::uint64_t>(split));
    TrainConfig tcfg = cfg.train;
    // baseline and fair variants share init and training seeds per split
    tcfg.seed = cfg.train.seed + static_cast<std::uint64_t>(split);

    auto run_variant = [&](const std::string& name, const Matrix& x) {
      try {
        const GcnModel model = train_gcn(a_hat, x, data.labels, masks.train,
                                         masks.val, tcfg);
        const std::vector<int> y_hat = predict(model, a_hat, x);
        VariantResult r;
        r.variant = name;
        r.split = split;
        r.val_accuracy = accuracy(y_hat, data.labels, masks.val);
        r.report = evaluate_fairness(y_hat, data.labels, data.sensitive,
                                     masks.test);
        result.rows.push_back(std::move(r));
      } catch (const Error& e) {
        throw Error(e.kind(), "variant '" + name + "', split " +
                                  std::to_string(split) + ": " + e.what());
      }
    };

    run_variant("baseline", data.features);
    for (std::size_t t = 0; t < cfg.tau_grid.size(); ++t) {
      run_variant(variant_name(cfg.tau_grid[t]), filtered[t]);
    }
  }

  // Aggregate per variant.
  std::vector<std::string> order{"baseline"};
  for (double tau : cfg.tau_grid) order.push_back(variant_name(tau));
  for (const std::string& name : order) {
    std::vector<double> acc, sp, eo, val;
    for (const VariantResult& r : result.rows) {
      if (r.variant != name) continue;
      acc.push_back(r.report.accuracy);
      sp.push_back(r.report.delta_sp);
      eo.push_back(r.report.delta_eo);
      val.push_back(r.val_accuracy);
    }
    Aggregate a;
    std::tie(a.mean_accuracy, a.std_accuracy) = mean_std(acc);
    std::tie(a.mean_sp, a.std_sp) = mean_std(sp);
    std::tie(a.mean_eo, a.std_eo) = mean_std(eo);
    a.mean_val_accuracy = mean_std(val).first;
    result.aggregates[name] = a;
  }

  // tau with the best mean validation accuracy; ties keep the earlier entry.
  double best_val = -1.0;
  for (double tau : cfg.tau_grid) {
    const double v = result.aggregates.at(variant_name(tau)).mean_val_accuracy;
    if (v > best_val) {
      best_val = v;
      result.chosen_tau = tau;
    }
  }
  result.aggregates["fair_selected"] =
      result.aggregates.at(variant_name(result.chosen_tau));
  return result;
}

std::string cmd_spectrum(const ExperimentConfig& cfg,
                         const std::filesystem::path& out_dir) {
  const Dataset data = load_configured_dataset(cfg);
  const Spectrum spec = eigendecompose(normalized_laplacian(data.graph));

  Vector label_signal(data.num_nodes());
  for (int i = 0; i < data.num_nodes(); ++i) {
    label_signal[i] = data.label_known[i] ? data.labels[i] : 0.0;
  }
  const Vector s_coeffs = gft(spec, data.sensitive);
  const Vector y_coeffs = gft(spec, label_signal);

  std::ostringstream csv;
  csv << "lambda,abs_s_tilde,abs_y_tilde\n";
  for (int i = 0; i < spec.size(); ++i) {
    csv << format_double(spec.eigenvalues[i]) << ','
        << format_double(std::abs(s_coeffs[i])) << ','
        << format_double(std::abs(y_coeffs[i])) << '\n';
  }
  std::filesystem::create_directories(out_dir);
  write_text_file(out_dir / "spectrum.csv", csv.str());

  std::ostringstream summary;
  summary << "wrote " << (out_dir / "spectrum.csv").string() << " (" << spec.size()
          << " frequencies)\n"
          << "energy in lowest 10% of frequencies: s "
          << fmt_pct(low_band_energy_fraction(spec, data.sensitive)) << "%, y "
          << fmt_pct(low_band_energy_fraction(spec, label_signal)) << "%\n";
  return summary.str();
}

std::string cmd_filter(const ExperimentConfig& cfg, double tau,
                       const std::filesystem::path& out_dir) {
  const Dataset data = load_configured_dataset(cfg);
  const Spectrum spec = eigendecompose(normalized_laplacian(data.graph));
  const Vector m = bias_coefficients(spec, data.sensitive);
  const Vector fair = fair_filter(m, tau);
  const Vector uniform = uniform_counterpart(fair);
  const Vector identity = Vector::Ones(spec.size());

  const BiasReport fair_report = bias_report(spec, data.sensitive, tau, fair);
  const BiasReport id_report =
      bias_report(spec, data.sensitive, tau, identity);
  const BiasReport uni_report =
      bias_report(spec, data.sensitive, tau, uniform);

  json j = json::parse(fair_report.to_json());
  j["variants"] = {
      {"identity",
       {{"rho", id_report.rho}, {"rho_bound", id_report.rho_bound}}},
      {"fair",
       {{"rho", fair_report.rho}, {"rho_bound", fair_report.rho_bound}}},
      {"uniform",
       {{"rho", uni_report.rho}, {"rho_bound", uni_report.rho_bound}}}};

  const Matrix x_f = filter_features(spec, fair, data.features);
  std::ostringstream csv;
  for (int c = 0; c < x_f.cols(); ++c) {
    csv << (c ? "," : "") << "feat_" << c;
  }
  csv << '\n';
  for (int i = 0; i < x_f.rows(); ++i) {
    for (int c = 0; c < x_f.cols(); ++c) {
      csv << (c ? "," : "") << format_double(x_f(i, c));
    }
    csv << '\n';
  }

  std::filesystem::create_directories(out_dir);
  write_text_file(out_dir / "bias_report.json", j.dump(2) + "\n");
  write_text_file(out_dir / "features_filtered.csv", csv.str());

  std::ostringstream summary;
  summary << "tau " << format_double(tau) << ", cutoff size "
          << fair_report.k << " of " << spec.size() << "\n"
          << "rho (identity) " << format_double(id_report.rho) << ", bound "
          << format_double(id_report.rho_bound) << "\n"
          << "rho (fair)     " << format_double(fair_report.rho) << ", bound "
          << format_double(fair_report.rho_bound) << "\n"
          << "rho (uniform)  " << format_double(uni_report.rho) << ", bound "
          << format_double(uni_report.rho_bound) << "\n"
          << "wrote " << (out_dir / "bias_report.json").string() << ", "
          << (out_dir / "features_filtered.csv").string() << "\n";
  return summary.str();
}

std::string cmd_experiment(const ExperimentConfig& cfg,
                           const std::filesystem::path& out_dir) {
  const ExperimentResult result = run_experiment(cfg);
  std::filesystem::create_directories(out_dir);
  write_text_file(out_dir / "results.csv", result.to_csv());
  write_text_file(out_dir / "result.json", result.to_json() + "\n");

  std::ostringstream summary;
  summary << "variant        accuracy%        delta_sp%        delta_eo%\n";
  auto line = [&](const std::string& name) {
    const Aggregate& a = result.aggregates.at(name);
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%-14s %6s +- %-6s %6s +- %-6s %6s +- %-6s\n",
                  name.c_str(), fmt_pct(a.mean_accuracy).c_str(),
                  fmt_pct(a.std_accuracy).c_str(), fmt_pct(a.mean_sp).c_str(),
                  fmt_pct(a.std_sp).c_str(), fmt_pct(a.mean_eo).c_str(),
                  fmt_pct(a.std_eo).c_str());
    summary << buf;
  };
  line("baseline");
  for (double tau : cfg.tau_grid) line(variant_name(tau));
  summary << "selected tau: " << format_double(result.chosen_tau) << "\n"
          << "wrote " << (out_dir / "results.csv").string() << ", "
          << (out_dir / "result.json").string() << "\n";
  return summary.str();
}

std::string cmd_generate(const ExperimentConfig& cfg,
                         const std::filesystem::path& out_dir) {
  if (!cfg.use_sbm) {
    throw Error(ErrorKind::invalid_config,
                "generate needs a dataset of type 'sbm'");
  }
  const Dataset data = generate_sbm(cfg.sbm);
  std::filesystem::create_directories(out_dir);
  save_dataset(data, out_dir / "nodes.csv", out_dir / "edges.txt");
  write_text_file(out_dir / "stats.json", dataset_stats(data).to_json() + "\n");

  const DatasetStats stats = dataset_stats(data);
  std::ostringstream summary;
  summary << "generated " << data.num_nodes() << " nodes, "
          << data.graph.edges().size() << " edges (intra " << stats.intra_edges
          << ", inter " << stats.inter_edges << "), F = "
          << stats.num_features << "\n"
          << "wrote " << (out_dir / "nodes.csv").string() << ", "
          << (out_dir / "edges.txt").string() << ", "
          << (out_dir / "stats.json").string() << "\n";
  return summary.str();
}

}  // namespace fairgf
