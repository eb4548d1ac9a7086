#include "fairgf/fairgf.h"

#include <cmath>
#include <cstring>
#include <exception>
#include <json.hpp>
#include <memory>
#include <new>
#include <string>

#include "experiment.hpp"
#include "io_util.hpp"

using namespace fairgf;

struct fairgf_dataset {
  Dataset data;
};

struct fairgf_spectrum {
  Spectrum spec;
};

struct fairgf_filter {
  double tau = 0.0;
  Vector gains;
  BiasReport fair_report;
  BiasReport identity_report;
  BiasReport uniform_report;
};

namespace {

thread_local std::string g_last_error;

int set_error(const Error& e) {
  g_last_error = e.what();
  return static_cast<int>(e.cls());
}

int set_error(const std::exception& e) {
  g_last_error = e.what();
  return FAIRGF_E_INTERNAL;
}

template <typename Fn>
int guarded(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return FAIRGF_OK;
  } catch (const Error& e) {
    return set_error(e);
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return FAIRGF_E_INTERNAL;
  } catch (const std::exception& e) {
    return set_error(e);
  }
}

int require(bool ok, const char* message) {
  if (!ok) {
    g_last_error = message;
    return FAIRGF_E_VALIDATION;
  }
  return FAIRGF_OK;
}

char* copy_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

Vector label_signal_of(const Dataset& d) {
  Vector y(d.num_nodes());
  for (int i = 0; i < d.num_nodes(); ++i) {
    y[i] = d.label_known[i] ? d.labels[i] : 0.0;
  }
  return y;
}

// Shared driver for the four command entry points.
template <typename Fn>
int run_command(const char* config_path, const char* out_dir,
                long long seed_override, char** summary_out, Fn&& command) {
  if (int rc = require(config_path && out_dir,
                       "config_path and out_dir must be non-NULL")) {
    return rc;
  }
  return guarded([&] {
    ExperimentConfig cfg = ExperimentConfig::from_json_file(config_path);
    if (seed_override >= 0) {
      cfg.override_seed(static_cast<std::uint64_t>(seed_override));
    }
    const std::string summary = command(cfg);
    if (summary_out) *summary_out = copy_string(summary);
  });
}

}  // namespace

extern "C" {

const char* fairgf_last_error(void) { return g_last_error.c_str(); }

void fairgf_string_free(char* s) { delete[] s; }

int fairgf_dataset_load(const char* node_csv, const char* edge_file,
                        const char* id_column, const char* sensitive_column,
                        const char* label_column, fairgf_dataset** out) {
  if (int rc = require(node_csv && edge_file && out,
                       "node_csv, edge_file and out must be non-NULL")) {
    return rc;
  }
  return guarded([&] {
    ColumnSchema schema;
    if (id_column) schema.id = id_column;
    if (sensitive_column) schema.sensitive = sensitive_column;
    if (label_column) schema.label = label_column;
    *out = new fairgf_dataset{load_dataset(node_csv, edge_file, schema)};
  });
}

int fairgf_dataset_generate_sbm(const char* sbm_json, fairgf_dataset** out) {
  if (int rc = require(sbm_json && out, "sbm_json and out must be non-NULL")) {
    return rc;
  }
  return guarded([&] {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(sbm_json);
    } catch (const nlohmann::json::parse_error& e) {
      throw Error(ErrorKind::parse_error,
                  std::string("sbm_json is not valid JSON: ") + e.what());
    }
    SbmConfig cfg;
    cfg.group_neg = j.value("group_neg", cfg.group_neg);
    cfg.group_pos = j.value("group_pos", cfg.group_pos);
    cfg.p_intra = j.value("p_intra", cfg.p_intra);
    cfg.p_inter = j.value("p_inter", cfg.p_inter);
    cfg.label_flip = j.value("label_flip", cfg.label_flip);
    cfg.feature_dim = j.value("feature_dim", cfg.feature_dim);
    cfg.feature_noise = j.value("feature_noise", cfg.feature_noise);
    cfg.seed = j.value("seed", cfg.seed);
    *out = new fairgf_dataset{generate_sbm(cfg)};
  });
}

int fairgf_dataset_save(const fairgf_dataset* d, const char* node_csv,
                        const char* edge_file) {
  if (int rc = require(d && node_csv && edge_file,
                       "dataset and paths must be non-NULL")) {
    return rc;
  }
  return guarded([&] { save_dataset(d->data, node_csv, edge_file); });
}

int fairgf_dataset_num_nodes(const fairgf_dataset* d) {
  return d ? d->data.num_nodes() : -1;
}

int fairgf_dataset_num_features(const fairgf_dataset* d) {
  return d ? d->data.num_features() : -1;
}

int fairgf_dataset_stats_json(const fairgf_dataset* d, char** json_out) {
  if (int rc = require(d && json_out, "dataset and json_out must be non-NULL")) {
    return rc;
  }
  return guarded([&] { *json_out = copy_string(dataset_stats(d->data).to_json()); });
}

void fairgf_dataset_free(fairgf_dataset* d) { delete d; }

int fairgf_spectrum_compute(const fairgf_dataset* d, fairgf_spectrum** out) {
  if (int rc = require(d && out, "dataset and out must be non-NULL")) {
    return rc;
  }
  return guarded([&] {
    *out = new fairgf_spectrum{
        eigendecompose(normalized_laplacian(d->data.graph))};
  });
}

int fairgf_spectrum_size(const fairgf_spectrum* s) {
  return s ? s->spec.size() : -1;
}

int fairgf_spectrum_eigenvalues(const fairgf_spectrum* s, double* out,
                                size_t len) {
  if (int rc = require(s && out, "spectrum and out must be non-NULL")) {
    return rc;
  }
  if (int rc = require(static_cast<int>(len) == s->spec.size(),
                       "len must equal the spectrum size")) {
    return rc;
  }
  std::memcpy(out, s->spec.eigenvalues.data(), len * sizeof(double));
  g_last_error.clear();
  return FAIRGF_OK;
}

int fairgf_spectrum_profile_csv(const fairgf_spectrum* s,
                                const fairgf_dataset* d,
                                const char* csv_path) {
  if (int rc = require(s && d && csv_path,
                       "spectrum, dataset and csv_path must be non-NULL")) {
    return rc;
  }
  return guarded([&] {
    const Vector s_coeffs = gft(s->spec, d->data.sensitive);
    const Vector y_coeffs = gft(s->spec, label_signal_of(d->data));
    std::string csv = "lambda,abs_s_tilde,abs_y_tilde\n";
    for (int i = 0; i < s->spec.size(); ++i) {
      csv += format_double(s->spec.eigenvalues[i]);
      csv += ',';
      csv += format_double(std::abs(s_coeffs[i]));
      csv += ',';
      csv += format_double(std::abs(y_coeffs[i]));
      csv += '\n';
    }
    write_text_file(csv_path, csv);
  });
}

void fairgf_spectrum_free(fairgf_spectrum* s) { delete s; }

int fairgf_filter_design(const fairgf_spectrum* s, const fairgf_dataset* d,
                         double tau, fairgf_filter** out) {
  if (int rc = require(s && d && out,
                       "spectrum, dataset and out must be non-NULL")) {
    return rc;
  }
  return guarded([&] {
    const Vector m = bias_coefficients(s->spec, d->data.sensitive);
    const Vector fair = fair_filter(m, tau);
    const Vector uniform = uniform_counterpart(fair);
    const Vector identity = Vector::Ones(s->spec.size());
    auto f = std::make_unique<fairgf_filter>();
    f->tau = tau;
    f->gains = fair;
    f->fair_report = bias_report(s->spec, d->data.sensitive, tau, fair);
    f->identity_report =
        bias_report(s->spec, d->data.sensitive, tau, identity);
    f->uniform_report = bias_report(s->spec, d->data.sensitive, tau, uniform);
    *out = f.release();
  });
}

int fairgf_filter_gains(const fairgf_filter* f, double* out, size_t len) {
  if (int rc = require(f && out, "filter and out must be non-NULL")) {
    return rc;
  }
  if (int rc = require(static_cast<int>(len) == f->gains.size(),
                       "len must equal the filter length")) {
    return rc;
  }
  std::memcpy(out, f->gains.data(), len * sizeof(double));
  g_last_error.clear();
  return FAIRGF_OK;
}

int fairgf_filter_report_json(const fairgf_filter* f, char** json_out) {
  if (int rc = require(f && json_out, "filter and json_out must be non-NULL")) {
    return rc;
  }
  return guarded([&] {
    nlohmann::json j = nlohmann::json::parse(f->fair_report.to_json());
    j["variants"] = {{"identity",
                      {{"rho", f->identity_report.rho},
                       {"rho_bound", f->identity_report.rho_bound}}},
                     {"fair",
                      {{"rho", f->fair_report.rho},
                       {"rho_bound", f->fair_report.rho_bound}}},
                     {"uniform",
                      {{"rho", f->uniform_report.rho},
                       {"rho_bound", f->uniform_report.rho_bound}}}};
    *json_out = copy_string(j.dump(2));
  });
}

int fairgf_filter_write_features(const fairgf_filter* f,
                                 const fairgf_spectrum* s,
                                 const fairgf_dataset* d,
                                 const char* csv_path) {
  if (int rc = require(f && s && d && csv_path,
                       "filter, spectrum, dataset and csv_path must be non-NULL")) {
    return rc;
  }
  return guarded([&] {
    const Matrix x_f = filter_features(s->spec, f->gains, d->data.features);
    std::string csv;
    for (int c = 0; c < x_f.cols(); ++c) {
      if (c) csv += ',';
      csv += "feat_" + std::to_string(c);
    }
    csv += '\n';
    for (int i = 0; i < x_f.rows(); ++i) {
      for (int c = 0; c < x_f.cols(); ++c) {
        if (c) csv += ',';
        csv += format_double(x_f(i, c));
      }
      csv += '\n';
    }
    write_text_file(csv_path, csv);
  });
}

void fairgf_filter_free(fairgf_filter* f) { delete f; }

int fairgf_cmd_spectrum(const char* config_path, const char* out_dir,
                        long long seed_override, char** summary_out) {
  return run_command(config_path, out_dir, seed_override, summary_out,
                     [&](const ExperimentConfig& cfg) {
                       return cmd_spectrum(cfg, out_dir);
                     });
}

int fairgf_cmd_filter(const char* config_path, const char* out_dir, double tau,
                      long long seed_override, char** summary_out) {
  return run_command(config_path, out_dir, seed_override, summary_out,
                     [&](const ExperimentConfig& cfg) {
                       const double t = tau > 0.0 ? tau : cfg.tau_grid.front();
                       return cmd_filter(cfg, t, out_dir);
                     });
}

int fairgf_cmd_experiment(const char* config_path, const char* out_dir,
                          long long seed_override, char** summary_out) {
  return run_command(config_path, out_dir, seed_override, summary_out,
                     [&](const ExperimentConfig& cfg) {
                       return cmd_experiment(cfg, out_dir);
                     });
}

int fairgf_cmd_generate(const char* config_path, const char* out_dir,
                        long long seed_override, char** summary_out) {
  return run_command(config_path, out_dir, seed_override, summary_out,
                     [&](const ExperimentConfig& cfg) {
                       return cmd_generate(cfg, out_dir);
                     });
}

}  // extern "C"
