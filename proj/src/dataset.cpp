#include "dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <json.hpp>
#include <random>
#include <set>
#include <sstream>
#include <unordered_map>

#include "io_util.hpp"

namespace fairgf {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

std::string strip(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

}  // namespace

Dataset load_dataset(const std::filesystem::path& node_file,
                     const std::filesystem::path& edge_file,
                     const ColumnSchema& schema, bool standardize) {
  std::ifstream nodes(node_file);
  if (!nodes) {
    throw Error(ErrorKind::io_error, "cannot open " + node_file.string());
  }
  std::string line;
  if (!std::getline(nodes, line)) {
    throw Error(ErrorKind::parse_error,
                node_file.string() + " is empty (missing header)");
  }
  const std::vector<std::string> header = split_csv_line(line);
  int id_col = -1, sens_col = -1, label_col = -1;
  std::vector<int> feature_cols;
  for (int c = 0; c < static_cast<int>(header.size()); ++c) {
    const std::string name = strip(header[c]);
    if (name == schema.id) {
      id_col = c;
    } else if (name == schema.sensitive) {
      sens_col = c;
    } else if (name == schema.label) {
      label_col = c;
    } else {
      feature_cols.push_back(c);
    }
  }
  for (const auto& [col, name] :
       {std::pair{id_col, schema.id}, {sens_col, schema.sensitive},
        {label_col, schema.label}}) {
    if (col < 0) {
      throw Error(ErrorKind::missing_column,
                  "column '" + name + "' not found in " + node_file.string());
    }
  }

  std::vector<std::string> ids;
  std::unordered_map<std::string, int> id_index;
  std::vector<std::vector<double>> feature_rows;
  std::vector<double> sensitive_values;
  std::vector<int> labels;
  std::vector<bool> label_known;
  int line_no = 1;
  while (std::getline(nodes, line)) {
    ++line_no;
    if (strip(line).empty()) continue;
    const std::vector<std::string> cells = split_csv_line(line);
    if (cells.size() != header.size()) {
      throw Error(ErrorKind::parse_error,
                  node_file.string() + ":" + std::to_string(line_no) +
                      ": expected " + std::to_string(header.size()) +
                      " cells, got " + std::to_string(cells.size()));
    }
    const std::string id = strip(cells[id_col]);
    if (!id_index.emplace(id, static_cast<int>(ids.size())).second) {
      throw Error(ErrorKind::parse_error,
                  "duplicate node id '" + id + "' in " + node_file.string());
    }
    ids.push_back(id);

    const std::string sens = strip(cells[sens_col]);
    if (sens == "0") {
      sensitive_values.push_back(-1.0);
    } else if (sens == "1") {
      sensitive_values.push_back(1.0);
    } else {
      throw Error(ErrorKind::sensitive_not_binary,
                  "sensitive value '" + sens + "' for node '" + id +
                      "' is not in {0,1}");
    }

    const std::string lab = strip(cells[label_col]);
    if (lab.empty() || lab == "-1") {
      labels.push_back(0);
      label_known.push_back(false);
    } else if (lab == "0" || lab == "1") {
      labels.push_back(lab == "1" ? 1 : 0);
      label_known.push_back(true);
    } else {
      throw Error(ErrorKind::parse_error,
                  "label '" + lab + "' for node '" + id +
                      "' is not in {0,1,-1,<empty>}");
    }

    std::vector<double> row;
    row.reserve(feature_cols.size());
    for (int c : feature_cols) {
      const double v = parse_double(strip(cells[c]),
                                    "feature column '" + strip(header[c]) +
                                        "' of node '" + id + "'");
      if (!std::isfinite(v)) {
        throw Error(ErrorKind::parse_error,
                    "non-finite feature for node '" + id + "'");
      }
      row.push_back(v);
    }
    feature_rows.push_back(std::move(row));
  }
  const int n = static_cast<int>(ids.size());
  if (n == 0) {
    throw Error(ErrorKind::parse_error, node_file.string() + " has no nodes");
  }

  std::ifstream edges_in(edge_file);
  if (!edges_in) {
    throw Error(ErrorKind::io_error, "cannot open " + edge_file.string());
  }
  std::set<Edge> edge_set;
  int edge_line = 0;
  while (std::getline(edges_in, line)) {
    ++edge_line;
    std::string cleaned = line;
    std::replace(cleaned.begin(), cleaned.end(), ',', ' ');
    std::istringstream ss(cleaned);
    std::string a, b;
    if (!(ss >> a)) continue;  // blank line
    if (!(ss >> b)) {
      throw Error(ErrorKind::parse_error,
                  edge_file.string() + ":" + std::to_string(edge_line) +
                      ": expected an id pair");
    }
    const auto ia = id_index.find(a);
    const auto ib = id_index.find(b);
    if (ia == id_index.end() || ib == id_index.end()) {
      throw Error(ErrorKind::unknown_node_id,
                  edge_file.string() + ":" + std::to_string(edge_line) +
                      ": edge references unknown node id '" +
                      (ia == id_index.end() ? a : b) + "'");
    }
    int u = ia->second;
    int v = ib->second;
    if (u == v) {
      throw Error(ErrorKind::self_loop,
                  edge_file.string() + ":" + std::to_string(edge_line) +
                      ": self-loop at id '" + a + "'");
    }
    if (u > v) std::swap(u, v);
    edge_set.insert({u, v});  // edge lists often carry both directions
  }

  const int f = static_cast<int>(feature_cols.size());
  Matrix features(n, f);
  for (int i = 0; i < n; ++i) {
    for (int c = 0; c < f; ++c) features(i, c) = feature_rows[i][c];
  }
  if (standardize && n > 1) {
    for (int c = 0; c < f; ++c) {
      const double mean = features.col(c).mean();
      features.col(c).array() -= mean;
      const double sd = std::sqrt(features.col(c).squaredNorm() /
                                  static_cast<double>(n - 1));
      if (sd > 0.0) features.col(c) /= sd;
    }
  }

  Dataset data{Graph(n, {edge_set.begin(), edge_set.end()}),
               std::move(features),
               Eigen::Map<Vector>(sensitive_values.data(), n),
               std::move(labels),
               std::move(label_known)};
  return data;
}

void save_dataset(const Dataset& data, const std::filesystem::path& node_file,
                  const std::filesystem::path& edge_file) {
  std::ostringstream nodes;
  nodes << "id";
  for (int c = 0; c < data.num_features(); ++c) nodes << ",feat_" << c;
  nodes << ",sensitive,label\n";
  for (int i = 0; i < data.num_nodes(); ++i) {
    nodes << i;
    for (int c = 0; c < data.num_features(); ++c) {
      nodes << ',' << format_double(data.features(i, c));
    }
    nodes << ',' << (data.sensitive[i] > 0.0 ? 1 : 0) << ','
          << (data.label_known[i] ? data.labels[i] : -1) << '\n';
  }
  write_text_file(node_file, nodes.str());

  std::ostringstream edges;
  for (const Edge& e : data.graph.edges()) {
    edges << e.first << ' ' << e.second << '\n';
  }
  write_text_file(edge_file, edges.str());
}

DatasetStats dataset_stats(const Dataset& data) {
  DatasetStats stats;
  stats.num_features = data.num_features();
  for (int i = 0; i < data.num_nodes(); ++i) {
    (data.sensitive[i] < 0.0 ? stats.group_neg : stats.group_pos) += 1;
  }
  for (const Edge& e : data.graph.edges()) {
    if (data.sensitive[e.first] == data.sensitive[e.second]) {
      stats.intra_edges += 1;
    } else {
      stats.inter_edges += 1;
    }
  }
  return stats;
}

std::string DatasetStats::to_json() const {
  nlohmann::json j;
  j["group_neg"] = group_neg;
  j["group_pos"] = group_pos;
  j["inter_edges"] = inter_edges;
  j["intra_edges"] = intra_edges;
  j["num_features"] = num_features;
  return j.dump(2);
}

void SbmConfig::validate() const {
  if (group_neg < 1 || group_pos < 1) {
    throw Error(ErrorKind::invalid_config, "both groups need at least one node");
  }
  if (!(0.0 <= p_inter && p_inter <= p_intra && p_intra <= 1.0)) {
    throw Error(ErrorKind::invalid_config,
                "need 0 <= p_inter <= p_intra <= 1");
  }
  if (!(0.0 <= label_flip && label_flip < 0.5)) {
    throw Error(ErrorKind::invalid_config, "need 0 <= label_flip < 0.5");
  }
  if (feature_dim < 4) {
    throw Error(ErrorKind::invalid_config,
                "feature_dim must be >= 4 (two one-hot pairs)");
  }
  if (feature_noise < 0.0) {
    throw Error(ErrorKind::invalid_config, "feature_noise must be >= 0");
  }
}

Dataset generate_sbm(const SbmConfig& cfg) {
  cfg.validate();
  const int n = cfg.group_neg + cfg.group_pos;
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  auto group_of = [&](int i) { return i < cfg.group_neg ? 0 : 1; };

  std::vector<Edge> edges;
  std::vector<int> degree(n, 0);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double p = group_of(i) == group_of(j) ? cfg.p_intra : cfg.p_inter;
      if (unit(rng) < p) {
        edges.push_back({i, j});
        degree[i] += 1;
        degree[j] += 1;
      }
    }
  }
  // graph-core rejects isolated nodes, so give them one random partner
  std::set<Edge> existing(edges.begin(), edges.end());
  std::uniform_int_distribution<int> pick(0, n - 2);
  for (int i = 0; i < n; ++i) {
    while (degree[i] == 0) {
      int j = pick(rng);
      if (j >= i) j += 1;
      Edge e = i < j ? Edge{i, j} : Edge{j, i};
      if (existing.insert(e).second) {
        edges.push_back(e);
        degree[i] += 1;
        degree[j] += 1;
      }
    }
  }

  std::vector<int> labels(n);
  std::vector<bool> known(n, true);
  for (int i = 0; i < n; ++i) {
    const int latent = group_of(i);  // group-aligned latent label
    labels[i] = unit(rng) < cfg.label_flip ? 1 - latent : latent;
  }

  Vector sensitive(n);
  for (int i = 0; i < n; ++i) sensitive[i] = group_of(i) == 0 ? -1.0 : 1.0;

  Matrix features = Matrix::Zero(n, cfg.feature_dim);
  for (int i = 0; i < n; ++i) {
    features(i, labels[i]) = 1.0;
    features(i, 2 + group_of(i)) = 1.0;
  }
  if (cfg.feature_noise > 0.0) {
    std::normal_distribution<double> noise(0.0, cfg.feature_noise);
    for (int i = 0; i < n; ++i) {
      for (int c = 0; c < cfg.feature_dim; ++c) {
        features(i, c) += noise(rng);
      }
    }
  }

  return Dataset{Graph(n, edges), std::move(features), std::move(sensitive),
                 std::move(labels), std::move(known)};
}

SplitMasks split_nodes(const std::vector<bool>& label_known,
                       const std::array<double, 3>& fractions,
                       std::uint64_t seed) {
  const double total = fractions[0] + fractions[1] + fractions[2];
  if (std::abs(total - 1.0) > 1e-9) {
    throw Error(ErrorKind::invalid_config,
                "split fractions must sum to 1, got " + format_double(total));
  }
  IndexSet known;
  for (int i = 0; i < static_cast<int>(label_known.size()); ++i) {
    if (label_known[i]) known.push_back(i);
  }
  std::mt19937_64 rng(seed);
  std::shuffle(known.begin(), known.end(), rng);

  const auto count = static_cast<long>(known.size());
  const long n_train = static_cast<long>(std::floor(fractions[0] * count));
  const long n_val = static_cast<long>(std::floor(fractions[1] * count));
  const long n_test = count - n_train - n_val;
  if (n_train < 1 || n_val < 1 || n_test < 1) {
    throw Error(ErrorKind::too_few_nodes,
                "not enough labeled nodes (" + std::to_string(count) +
                    ") for a " + format_double(fractions[0]) + "/" +
                    format_double(fractions[1]) + "/" +
                    format_double(fractions[2]) + " split");
  }
  SplitMasks masks;
  masks.train.assign(known.begin(), known.begin() + n_train);
  masks.val.assign(known.begin() + n_train, known.begin() + n_train + n_val);
  masks.test.assign(known.begin() + n_train + n_val, known.end());
  std::sort(masks.train.begin(), masks.train.end());
  std::sort(masks.val.begin(), masks.val.end());
  std::sort(masks.test.begin(), masks.test.end());
  return masks;
}

}  // namespace fairgf
