#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "doctest.h"
#include "surrocae/config.hpp"
#include "surrocae/dataset.hpp"
#include "surrocae/errors.hpp"

#include "../vendor/json.hpp"

namespace {

using surrocae::ConfigError;
using surrocae::PipelineConfig;
using surrocae::Problem;
using surrocae::SamplingKind;

std::string burgers_text() {
  return R"({
    "problem": "burgers",
    "sampling": {
      "distribution": "uniform",
      "n": 100,
      "seed": 7,
      "parameters": [{"name": "nu", "lo": 0.0, "hi": 1.0}]
    },
    "solver": {"n_x": 200, "n_t": 100},
    "cae": {"latent": 8},
    "ffnn": {"hidden": [32, 32, 32, 32]},
    "cae_train": {"epochs": 2000},
    "ffnn_train": {"epochs": 30000, "batch_size": 100},
    "mc": {"n_mc": 3000}
  })";
}

std::string elasticity_text() {
  return R"({
    "problem": "elasticity",
    "threads": 2,
    "sampling": {
      "distribution": "lhs-lognormal",
      "n": 60,
      "seed": 11,
      "parameters": [
        {"name": "E1", "mean": 30e9, "sd": 7.5e9},
        {"name": "E2", "mean": 30e9, "sd": 7.5e9},
        {"name": "E3", "mean": 30e9, "sd": 7.5e9}
      ]
    },
    "solver": {
      "geometry": {"element_size": 0.6},
      "motion": {"steps": 150, "dt": 0.04}
    },
    "cae": {"latent": 16, "filters": [64, 32]},
    "ffnn": {"hidden": [32, 32]},
    "cae_train": {"epochs": 500, "batch_size": 8},
    "ffnn_train": {"epochs": 10000, "batch_size": 60},
    "mc": {"n_mc": 500}
  })";
}

// Edits one JSON path in an otherwise valid config so each rejection test
// changes a single thing.
std::string patched(const std::string& base, const std::string& pointer,
                    const nlohmann::json& value) {
  nlohmann::json doc = nlohmann::json::parse(base);
  doc[nlohmann::json::json_pointer(pointer)] = value;
  return doc.dump();
}

std::string erased(const std::string& base, const std::string& pointer,
                   const std::string& key) {
  nlohmann::json doc = nlohmann::json::parse(base);
  doc[nlohmann::json::json_pointer(pointer)].erase(key);
  return doc.dump();
}

}  // namespace

TEST_SUITE("config") {

TEST_CASE("published schema file matches the embedded copy") {
  std::ifstream in(SURROCAE_CONFIG_DIR "/schema.json");
  REQUIRE(in.good());
  const std::string file_text{std::istreambuf_iterator<char>(in),
                              std::istreambuf_iterator<char>()};
  const auto file_doc = nlohmann::json::parse(file_text);
  const auto embedded = nlohmann::json::parse(surrocae::config_schema_text());
  CHECK(file_doc == embedded);
  CHECK(embedded.at("required").size() == 7);
}

TEST_CASE("a grid config parses and resolves every default") {
  PipelineConfig c = surrocae::parse_config_text(burgers_text());

  CHECK(c.problem == Problem::burgers);
  CHECK(c.threads == 1);
  CHECK(c.sampling.kind == SamplingKind::uniform);
  CHECK(c.sampling.n == 100);
  CHECK(c.sampling.seed == 7);
  REQUIRE(c.sampling.uniform.size() == 1);
  CHECK(c.sampling.uniform[0].name == "nu");
  CHECK(c.sampling.names() == std::vector<std::string>{"nu"});

  CHECK(c.burgers.n_x == 200);
  CHECK(c.burgers.x_min == -1.0);
  CHECK(c.burgers.t_max == 5.0);

  CHECK(c.cae.latent == 8);
  CHECK(c.cae.filters1 == 64);
  CHECK(c.cae.kernel == 5);
  CHECK(c.cae.pool == 0);

  CHECK(c.cae_train.epochs == 2000);
  CHECK(c.cae_train.learning_rate == 1e-4);
  CHECK(c.cae_train.batch_size == 16);
  CHECK(c.cae_train.seed == 7);
  CHECK(c.cae_train.shuffle);
  CHECK(c.ffnn_train.batch_size == 100);

  CHECK(c.mc.n_mc == 3000);
  CHECK(c.mc.seed == 8);
  REQUIRE(c.mc.probes.size() == 2);
  CHECK(c.mc.probes[0].name == "u_left");
  CHECK(c.mc.probes[0].row == 49);
  CHECK(c.mc.probes[0].col == 49);
  CHECK(c.mc.probes[1].row == 150);
  CHECK(c.mc.probes[1].col == 49);

  CHECK(c.convergence.latent_dims == std::vector<int>{2, 4, 8});
  CHECK(c.convergence.dataset_sizes == std::vector<int>{25, 50, 100});
  CHECK(c.convergence.n_eval == 20);
  CHECK(c.convergence.eval_seed == (7ull ^ 0x9e3779b97f4a7c15ull));
  CHECK(c.outputs.dataset == "dataset.bin");

  CHECK(surrocae::solution_shape(c) ==
        std::pair<std::size_t, std::size_t>{200, 100});
  CHECK(surrocae::solver_fingerprint(c) ==
        "burgers;n_x=200;n_t=100;x_min=-1;x_max=1;t_max=5");
}

TEST_CASE("a wall config parses and sizes itself from the mesh") {
  PipelineConfig c = surrocae::parse_config_text(elasticity_text());

  CHECK(c.problem == Problem::elasticity);
  CHECK(c.threads == 2);
  CHECK(c.sampling.kind == SamplingKind::lhs_lognormal);
  REQUIRE(c.sampling.lognormal.size() == 3);
  CHECK(c.sampling.lognormal[2].mean == 30e9);

  CHECK(c.elasticity.geometry.element_size == 0.6);
  CHECK(c.elasticity.geometry.n_stories == 3);
  CHECK(c.elasticity.motion_steps == 150);
  CHECK(c.elasticity.motion_dt == 0.04);
  CHECK(c.elasticity.motion_seed == 42);
  CHECK(c.elasticity.motion_peak == 3.0);

  const auto shape = surrocae::solution_shape(c);
  CHECK(shape.first == 252);
  CHECK(shape.second == 150);

  const std::string fp = surrocae::solver_fingerprint(c);
  CHECK(fp.find("elasticity;") == 0);
  CHECK(fp.find("stories=3") != std::string::npos);
  CHECK(fp.find("motion=synthetic;steps=150;dt=0.040000000000000001;seed=42") !=
        std::string::npos);

  REQUIRE(c.mc.probes.size() == 3);
  CHECK(c.mc.probes[0].name == "story1_x");
  CHECK(c.mc.probes[0].col == 75);
  CHECK(c.mc.probes[0].row < c.mc.probes[1].row);
  CHECK(c.mc.probes[2].row < 252);

  const auto arch = surrocae::build_cae_arch(c);
  // length trace 150 -> 75 -> 38; only a window of 2 divides that.
  CHECK(arch.encoder[2].window == 2);
}

TEST_CASE("a motion file contributes its content hash to the fingerprint") {
  PipelineConfig c = surrocae::parse_config_text(elasticity_text());
  const std::string path =
      SURROCAE_DATA_DIR "/synthetic_ground_motion_reduced.csv";
  c.elasticity.motion_file = path;

  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  const std::string bytes{std::istreambuf_iterator<char>(in),
                          std::istreambuf_iterator<char>()};
  char expect[20];
  std::snprintf(expect, sizeof expect, "%016llx",
                static_cast<unsigned long long>(
                    surrocae::fnv1a64(bytes.data(), bytes.size())));

  const std::string fp = surrocae::solver_fingerprint(c);
  CHECK(fp.find(std::string("motion=csv#") + expect) != std::string::npos);
  CHECK(fp.find(path) == std::string::npos);
}

TEST_CASE("schema violations name the offending path") {
  const std::string base = burgers_text();

  CHECK_THROWS_WITH_AS(surrocae::parse_config_text("{nope"),
                       doctest::Contains("not valid JSON"), ConfigError);
  CHECK_THROWS_WITH_AS(surrocae::parse_config_text(patched(base, "/junk", 1)),
                       doctest::Contains("unknown key 'junk'"), ConfigError);
  CHECK_THROWS_WITH_AS(
      surrocae::parse_config_text(patched(base, "/problem", "heat")),
      doctest::Contains("/problem"), ConfigError);
  CHECK_THROWS_WITH_AS(
      surrocae::parse_config_text(patched(base, "/sampling/n", 0)),
      doctest::Contains("/sampling/n"), ConfigError);
  CHECK_THROWS_WITH_AS(
      surrocae::parse_config_text(erased(base, "/sampling", "seed")),
      doctest::Contains("missing required key 'seed'"), ConfigError);
  CHECK_THROWS_WITH_AS(
      surrocae::parse_config_text(patched(
          base, "/sampling/parameters/0",
          nlohmann::json{{"name", "nu"}, {"lo", 0.0}, {"sd", 1.0}})),
      doctest::Contains("/sampling/parameters/0"), ConfigError);
  CHECK_THROWS_WITH_AS(
      surrocae::parse_config_text(
          patched(base, "/cae/filters", nlohmann::json{8, 8, 8})),
      doctest::Contains("at most 2"), ConfigError);
  CHECK_THROWS_WITH_AS(
      surrocae::parse_config_text(
          patched(base, "/cae_train/learning_rate", 0.0)),
      doctest::Contains("/cae_train/learning_rate"), ConfigError);
  CHECK_THROWS_WITH_AS(
      surrocae::parse_config_text(patched(base, "/solver",
                                          nlohmann::json::object())),
      doctest::Contains("0 of 2 allowed layouts"), ConfigError);
  CHECK_THROWS_WITH_AS(
      surrocae::parse_config_text(patched(base, "/threads", 0)),
      doctest::Contains("/threads"), ConfigError);
  CHECK_THROWS_WITH_AS(
      surrocae::parse_config_text(patched(base, "/ffnn/hidden",
                                          nlohmann::json::array())),
      doctest::Contains("at least 1"), ConfigError);
}

TEST_CASE("cross-field validation catches consistent-looking nonsense") {
  // Problem and solver layout disagree.
  nlohmann::json doc = nlohmann::json::parse(elasticity_text());
  doc["problem"] = "burgers";
  doc["sampling"] = nlohmann::json::parse(
      R"({"distribution": "uniform", "n": 60, "seed": 1,
          "parameters": [{"name": "nu", "lo": 0, "hi": 1}]})");
  CHECK_THROWS_WITH_AS(surrocae::parse_config_text(doc.dump()),
                       doctest::Contains("needs the grid layout"),
                       ConfigError);

  const std::string base = burgers_text();
  CHECK_THROWS_WITH_AS(
      surrocae::parse_config_text(patched(
          base, "/sampling/parameters",
          nlohmann::json::parse(R"([{"name":"a","lo":0,"hi":1},
                                    {"name":"b","lo":0,"hi":1}])"))),
      doctest::Contains("exactly one parameter"), ConfigError);
  CHECK_THROWS_WITH_AS(
      surrocae::parse_config_text(patched(
          base, "/mc/probes",
          nlohmann::json::parse(
              R"([{"name":"edge","row":200,"col":0}])"))),
      doctest::Contains("outside the solution matrix"), ConfigError);
  CHECK_THROWS_WITH_AS(
      surrocae::parse_config_text(patched(base, "/cae_train/batch_size", 101)),
      doctest::Contains("exceeds the dataset size"), ConfigError);
  CHECK_THROWS_WITH_AS(
      surrocae::parse_config_text(
          patched(base, "/sampling/distribution", "lognormal")),
      doctest::Contains("log-normal sampling expects"), ConfigError);
  // Pool search exhausts: 4 time points collapse to length 1 after two
  // strided convolutions.
  CHECK_THROWS_WITH_AS(
      surrocae::parse_config_text(patched(base, "/solver/n_t", 4)),
      doctest::Contains("no pooling window"), ConfigError);

  nlohmann::json wall = nlohmann::json::parse(elasticity_text());
  wall["sampling"]["parameters"].erase(2);
  CHECK_THROWS_WITH_AS(surrocae::parse_config_text(wall.dump()),
                       doctest::Contains("one modulus parameter per story"),
                       ConfigError);
}

TEST_CASE("reseeding rewires every stage seed from one value") {
  PipelineConfig c = surrocae::parse_config_text(burgers_text());
  surrocae::reseed_config(c, 1234);
  CHECK(c.sampling.seed == 1234);
  CHECK(c.cae_train.seed == 1234);
  CHECK(c.ffnn_train.seed == 1234);
  CHECK(c.mc.seed == 1235);
  CHECK(c.convergence.eval_seed == (1234ull ^ 0x9e3779b97f4a7c15ull));
}

TEST_CASE("config files load from disk") {
  const std::string path =
      (std::filesystem::temp_directory_path() / "surrocae_config_test.json")
          .string();
  {
    std::ofstream out(path);
    out << burgers_text();
  }
  PipelineConfig c = surrocae::load_config(path);
  CHECK(c.sampling.n == 100);
  std::remove(path.c_str());

  CHECK_THROWS_AS(surrocae::load_config(path), surrocae::IoError);
}

TEST_CASE("the compact knobs expand to the documented default stack") {
  PipelineConfig c = surrocae::parse_config_text(burgers_text());
  const auto arch = surrocae::build_cae_arch(c);
  const auto dflt = surrocae::default_burgers_cae();
  REQUIRE(arch.encoder.size() == dflt.encoder.size());
  REQUIRE(arch.decoder.size() == dflt.decoder.size());
  CHECK(arch.latent_dim == dflt.latent_dim);
  CHECK(arch.encoder[2].window == 5);

  const auto ffnn = surrocae::build_ffnn_arch(c);
  CHECK(ffnn.input_dim == 1);
  CHECK(ffnn.output_dim == 8);
  CHECK(ffnn.hidden == std::vector<std::size_t>{32, 32, 32, 32});

  const auto wide = surrocae::build_ffnn_arch(c, 4);
  CHECK(wide.output_dim == 4);
}

}  // TEST_SUITE
