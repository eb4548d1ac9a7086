#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>

#include "dataset.hpp"
#include "test_support.hpp"

using namespace fairgf;

namespace {

const std::filesystem::path kFixtures{FAIRGF_FIXTURE_DIR};

// Scratch directory for files written by the tests.
std::filesystem::path scratch_dir() {
  const auto dir =
      std::filesystem::temp_directory_path() / "fairgf_dataset_tests";
  std::filesystem::create_directories(dir);
  return dir;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path);
  out << text;
}

}  // namespace

TEST_CASE("loading the documented 3-node fixture") {
  const Dataset d = load_dataset(kFixtures / "toy_nodes.csv",
                                 kFixtures / "toy_edges.txt", ColumnSchema{});
  CHECK(d.num_nodes() == 3);
  CHECK(d.num_features() == 2);
  CHECK(d.graph.degrees() == std::vector<int>{1, 2, 1});
  CHECK(d.graph.edges() == std::vector<Edge>{{0, 1}, {1, 2}});

  CHECK(d.sensitive[0] == -1.0);
  CHECK(d.sensitive[1] == 1.0);
  CHECK(d.sensitive[2] == 1.0);

  CHECK(d.labels == std::vector<int>{1, 0, 0});
  CHECK(d.label_known == std::vector<bool>{true, true, false});

  CHECK(d.features(0, 0) == 0.5);
  CHECK(d.features(0, 1) == 1.25);
  CHECK(d.features(1, 0) == -1.5);
  CHECK(d.features(1, 1) == 0.0);
  CHECK(d.features(2, 0) == 2.0);
  CHECK(d.features(2, 1) == 3.5);

  const DatasetStats stats = dataset_stats(d);
  CHECK(stats.group_neg == 1);
  CHECK(stats.group_pos == 2);
  CHECK(stats.inter_edges == 1);
  CHECK(stats.intra_edges == 1);
  CHECK(stats.num_features == 2);
}

TEST_CASE("loader error paths") {
  const auto dir = scratch_dir();

  SUBCASE("missing schema column") {
    write_file(dir / "bad_nodes.csv", "id,f0,label\nn0,1,0\n");
    write_file(dir / "bad_edges.txt", "");
    try {
      load_dataset(dir / "bad_nodes.csv", dir / "bad_edges.txt",
                   ColumnSchema{});
      FAIL("missing column accepted");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::missing_column);
      CHECK(std::string(e.what()).find("sensitive") != std::string::npos);
    }
  }

  SUBCASE("edge referencing an unknown id") {
    write_file(dir / "n.csv", "id,f0,sensitive,label\nn0,1,0,0\nn1,2,1,1\n");
    write_file(dir / "e.txt", "n0 zz\n");
    try {
      load_dataset(dir / "n.csv", dir / "e.txt", ColumnSchema{});
      FAIL("unknown id accepted");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::unknown_node_id);
      CHECK(std::string(e.what()).find("zz") != std::string::npos);
    }
  }

  SUBCASE("non-binary sensitive value") {
    write_file(dir / "n2.csv", "id,f0,sensitive,label\nn0,1,2,0\n");
    write_file(dir / "e2.txt", "");
    try {
      load_dataset(dir / "n2.csv", dir / "e2.txt", ColumnSchema{});
      FAIL("sensitive=2 accepted");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::sensitive_not_binary);
    }
  }

  SUBCASE("labels outside {0,1,-1,empty} are rejected") {
    write_file(dir / "n4.csv", "id,f0,sensitive,label\nn0,1,0,2\n");
    write_file(dir / "e4.txt", "");
    try {
      load_dataset(dir / "n4.csv", dir / "e4.txt", ColumnSchema{});
      FAIL("label=2 accepted");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::parse_error);
    }
  }

  SUBCASE("missing file is an io error") {
    try {
      load_dataset(dir / "nope.csv", dir / "nope.txt", ColumnSchema{});
      FAIL("missing file accepted");
    } catch (const Error& e) {
      CHECK(e.cls() == ErrorClass::io);
    }
  }

  SUBCASE("duplicated undirected pairs in the file are collapsed") {
    write_file(dir / "n3.csv", "id,f0,sensitive,label\na,1,0,0\nb,2,1,1\n");
    write_file(dir / "e3.txt", "a b\nb a\na,b\n");
    const Dataset d =
        load_dataset(dir / "n3.csv", dir / "e3.txt", ColumnSchema{});
    CHECK(d.graph.edges() == std::vector<Edge>{{0, 1}});
  }
}

TEST_CASE("column standardization is optional and off by default") {
  const auto dir = scratch_dir();
  write_file(dir / "std.csv",
             "id,f0,sensitive,label\na,1,0,0\nb,3,1,1\nc,5,0,1\n");
  write_file(dir / "std_e.txt", "a b\nb c\n");
  const Dataset raw =
      load_dataset(dir / "std.csv", dir / "std_e.txt", ColumnSchema{});
  CHECK(raw.features(0, 0) == 1.0);

  const Dataset scaled =
      load_dataset(dir / "std.csv", dir / "std_e.txt", ColumnSchema{}, true);
  CHECK(scaled.features.col(0).mean() == doctest::Approx(0.0).epsilon(1e-12));
  const double sd =
      std::sqrt(scaled.features.col(0).squaredNorm() / 2.0);
  CHECK(sd == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("dataset stats on a hand case") {
  // 2-node path with s = [+1, -1]: one inter edge, nothing intra
  Dataset d{build_graph(2, {{0, 1}}), Matrix::Zero(2, 1), Vector(2),
            {1, 0}, {true, true}};
  d.sensitive << 1.0, -1.0;
  const DatasetStats stats = dataset_stats(d);
  CHECK(stats.inter_edges == 1);
  CHECK(stats.intra_edges == 0);
  CHECK(stats.group_neg + stats.group_pos == 2);
}

TEST_CASE("SBM generation") {
  SbmConfig cfg;
  cfg.group_neg = 50;
  cfg.group_pos = 50;
  cfg.p_intra = 0.2;
  cfg.p_inter = 0.02;
  cfg.label_flip = 0.1;
  cfg.feature_dim = 6;
  cfg.feature_noise = 0.05;
  cfg.seed = 31;

  SUBCASE("deterministic under the seed") {
    const Dataset a = generate_sbm(cfg);
    const Dataset b = generate_sbm(cfg);
    CHECK(a.graph.edges() == b.graph.edges());
    CHECK(a.labels == b.labels);
    CHECK((a.features - b.features).cwiseAbs().maxCoeff() == 0.0);
  }

  SUBCASE("stats match a direct enumeration oracle") {
    const Dataset d = generate_sbm(cfg);
    long inter = 0, intra = 0;
    for (const Edge& e : d.graph.edges()) {
      const bool same = (e.first < 50) == (e.second < 50);
      (same ? intra : inter) += 1;
    }
    const DatasetStats stats = dataset_stats(d);
    CHECK(stats.inter_edges == inter);
    CHECK(stats.intra_edges == intra);
    CHECK(stats.group_neg == 50);
    CHECK(stats.group_pos == 50);
  }

  SUBCASE("every node has positive degree even under sparse draws") {
    SbmConfig sparse = cfg;
    sparse.p_intra = 0.001;
    sparse.p_inter = 0.0;
    sparse.seed = 7;
    const Dataset d = generate_sbm(sparse);
    for (int deg : d.graph.degrees()) CHECK(deg >= 1);
  }

  SUBCASE("label flip rate lands within 3 sigma of binomial") {
    SbmConfig big = cfg;
    big.group_neg = 400;
    big.group_pos = 400;
    big.label_flip = 0.2;
    big.p_intra = 0.02;
    big.p_inter = 0.01;
    const Dataset d = generate_sbm(big);
    long flips = 0;
    for (int i = 0; i < 800; ++i) {
      const int latent = i < 400 ? 0 : 1;
      if (d.labels[i] != latent) ++flips;
    }
    const double expected = 800 * 0.2;
    const double sigma = std::sqrt(800 * 0.2 * 0.8);
    CHECK(std::abs(double(flips) - expected) <= 3.0 * sigma);
  }

  SUBCASE("equal probabilities behave like an ER control") {
    SbmConfig er = cfg;
    er.group_neg = 120;
    er.group_pos = 80;
    er.p_intra = 0.05;
    er.p_inter = 0.05;
    er.seed = 99;
    const Dataset d = generate_sbm(er);
    const DatasetStats stats = dataset_stats(d);
    // cross pairs: 120*80; within pairs: C(120,2)+C(80,2)
    const double cross_pairs = 120.0 * 80.0;
    const double within_pairs = (120.0 * 119.0 + 80.0 * 79.0) / 2.0;
    const double expected_inter = 0.05 * cross_pairs;
    const double sigma = std::sqrt(cross_pairs * 0.05 * 0.95);
    CHECK(std::abs(double(stats.inter_edges) - expected_inter) <=
          3.0 * sigma + 2.0);  // +2 absorbs isolated-node patch edges
    const double expected_intra = 0.05 * within_pairs;
    const double sigma_intra = std::sqrt(within_pairs * 0.05 * 0.95);
    CHECK(std::abs(double(stats.intra_edges) - expected_intra) <=
          3.0 * sigma_intra + 2.0);
  }

  SUBCASE("noise-free separable construction") {
    SbmConfig clean = cfg;
    clean.label_flip = 0.0;
    clean.feature_noise = 0.0;
    const Dataset d = generate_sbm(clean);
    for (int i = 0; i < d.num_nodes(); ++i) {
      CHECK(d.features(i, d.labels[i]) == 1.0);
      CHECK(d.features(i, 1 - d.labels[i]) == 0.0);
    }
  }

  SUBCASE("config validation") {
    SbmConfig bad = cfg;
    bad.p_inter = 0.5;
    bad.p_intra = 0.1;
    CHECK_THROWS_AS(generate_sbm(bad), Error);
    bad = cfg;
    bad.label_flip = 0.6;
    CHECK_THROWS_AS(generate_sbm(bad), Error);
    bad = cfg;
    bad.feature_dim = 2;
    CHECK_THROWS_AS(generate_sbm(bad), Error);
    // equality of probabilities is allowed (ER control case)
    SbmConfig er = cfg;
    er.p_inter = er.p_intra;
    CHECK_NOTHROW(generate_sbm(er));
  }
}

TEST_CASE("save/load round trip is exact") {
  SbmConfig cfg;
  cfg.group_neg = 40;
  cfg.group_pos = 60;
  cfg.p_intra = 0.15;
  cfg.p_inter = 0.02;
  cfg.label_flip = 0.1;
  cfg.feature_dim = 5;
  cfg.feature_noise = 0.3;
  cfg.seed = 1234;
  const Dataset original = generate_sbm(cfg);

  const auto dir = scratch_dir();
  save_dataset(original, dir / "rt_nodes.csv", dir / "rt_edges.txt");
  const Dataset loaded =
      load_dataset(dir / "rt_nodes.csv", dir / "rt_edges.txt", ColumnSchema{});

  CHECK(loaded.num_nodes() == original.num_nodes());
  CHECK(loaded.graph.edges() == original.graph.edges());
  CHECK(loaded.labels == original.labels);
  CHECK(loaded.label_known == original.label_known);
  CHECK((loaded.sensitive - original.sensitive).cwiseAbs().maxCoeff() == 0.0);
  CHECK((loaded.features - original.features).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("split_nodes") {
  std::vector<bool> known(10, true);

  SUBCASE("floor sizing with the remainder going to test") {
    const SplitMasks m = split_nodes(known, {0.4, 0.3, 0.3}, 17);
    CHECK(m.train.size() == 4);
    CHECK(m.val.size() == 3);
    CHECK(m.test.size() == 3);
  }

  SUBCASE("deterministic, disjoint, covering") {
    const SplitMasks a = split_nodes(known, {0.4, 0.3, 0.3}, 21);
    const SplitMasks b = split_nodes(known, {0.4, 0.3, 0.3}, 21);
    CHECK(a.train == b.train);
    CHECK(a.val == b.val);
    CHECK(a.test == b.test);

    std::set<int> all;
    for (int i : a.train) all.insert(i);
    for (int i : a.val) all.insert(i);
    for (int i : a.test) all.insert(i);
    CHECK(all.size() == 10);  // disjoint and covering of 10 knowns
  }

  SUBCASE("unknown labels stay out of every mask") {
    std::vector<bool> partial(10, true);
    partial[3] = partial[7] = false;
    const SplitMasks m = split_nodes(partial, {0.4, 0.3, 0.3}, 5);
    std::set<int> all;
    for (int i : m.train) all.insert(i);
    for (int i : m.val) all.insert(i);
    for (int i : m.test) all.insert(i);
    CHECK(all.size() == 8);
    CHECK(all.count(3) == 0);
    CHECK(all.count(7) == 0);
  }

  SUBCASE("too few nodes") {
    std::vector<bool> two(2, true);
    try {
      split_nodes(two, {0.4, 0.3, 0.3}, 1);
      FAIL("empty split accepted");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::too_few_nodes);
    }
  }

  SUBCASE("fractions must sum to one") {
    CHECK_THROWS_AS(split_nodes(known, {0.5, 0.3, 0.3}, 1), Error);
  }
}
