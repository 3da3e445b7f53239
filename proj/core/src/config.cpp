#include "surrocae/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>

#include "serialize_json.hpp"
#include "surrocae/dataset.hpp"
#include "surrocae/errors.hpp"
#include "surrocae/ground_motion.hpp"

namespace surrocae {
namespace {

using detail::json;

// Subset of JSON Schema sufficient for the published schema: type, enum,
// numeric bounds, required/properties/additionalProperties, items with
// min/maxItems, and oneOf. Violations throw ConfigError with the JSON
// pointer of the offending value.

bool type_matches(const json& v, const std::string& t) {
  if (t == "object") return v.is_object();
  if (t == "array") return v.is_array();
  if (t == "string") return v.is_string();
  if (t == "boolean") return v.is_boolean();
  if (t == "integer") return v.is_number_integer();
  if (t == "number") return v.is_number();
  return false;
}

void check_schema(const json& schema, const json& value,
                  const std::string& path);

bool schema_accepts(const json& schema, const json& value) {
  try {
    check_schema(schema, value, "");
    return true;
  } catch (const ConfigError&) {
    return false;
  }
}

void check_schema(const json& schema, const json& value,
                  const std::string& path) {
  const std::string where = path.empty() ? "/" : path;

  if (auto it = schema.find("enum"); it != schema.end()) {
    bool ok = false;
    for (const auto& option : *it) ok = ok || option == value;
    if (!ok) {
      throw ConfigError(where + ": " + value.dump() + " is not one of " +
                        it->dump());
    }
  }
  if (auto it = schema.find("type"); it != schema.end()) {
    const std::string t = it->get<std::string>();
    if (!type_matches(value, t)) {
      throw ConfigError(where + ": expected " + t + ", got " + value.dump());
    }
  }
  if (value.is_number()) {
    const double x = value.get<double>();
    if (auto it = schema.find("minimum");
        it != schema.end() && x < it->get<double>()) {
      throw ConfigError(where + ": " + value.dump() + " is below the minimum " +
                        it->dump());
    }
    if (auto it = schema.find("exclusiveMinimum");
        it != schema.end() && x <= it->get<double>()) {
      throw ConfigError(where + ": " + value.dump() + " must be above " +
                        it->dump());
    }
    if (auto it = schema.find("maximum");
        it != schema.end() && x > it->get<double>()) {
      throw ConfigError(where + ": " + value.dump() + " is above the maximum " +
                        it->dump());
    }
  }
  if (value.is_object()) {
    if (auto it = schema.find("required"); it != schema.end()) {
      for (const auto& name : *it) {
        if (!value.contains(name.get<std::string>())) {
          throw ConfigError(where + ": missing required key '" +
                            name.get<std::string>() + "'");
        }
      }
    }
    const auto props = schema.find("properties");
    const bool closed = schema.value("additionalProperties", json(true)) ==
                        json(false);
    for (const auto& [key, sub] : value.items()) {
      if (props != schema.end() && props->contains(key)) {
        check_schema(props->at(key), sub, path + "/" + key);
      } else if (closed) {
        throw ConfigError(where + ": unknown key '" + key + "'");
      }
    }
  }
  if (value.is_array()) {
    if (auto it = schema.find("minItems");
        it != schema.end() && value.size() < it->get<std::size_t>()) {
      throw ConfigError(where + ": needs at least " + it->dump() + " items");
    }
    if (auto it = schema.find("maxItems");
        it != schema.end() && value.size() > it->get<std::size_t>()) {
      throw ConfigError(where + ": allows at most " + it->dump() + " items");
    }
    if (auto items = schema.find("items"); items != schema.end()) {
      for (std::size_t i = 0; i < value.size(); ++i) {
        check_schema(*items, value[i], path + "/" + std::to_string(i));
      }
    }
  }
  if (auto it = schema.find("oneOf"); it != schema.end()) {
    std::size_t matches = 0;
    for (const auto& option : *it) {
      if (schema_accepts(option, value)) ++matches;
    }
    if (matches != 1) {
      throw ConfigError(where + ": matches " + std::to_string(matches) +
                        " of " + std::to_string(it->size()) +
                        " allowed layouts");
    }
  }
}

const json& parsed_schema() {
  static const json schema = json::parse(config_schema_text());
  return schema;
}

SamplingKind kind_from(const std::string& s) {
  if (s == "uniform") return SamplingKind::uniform;
  if (s == "lhs-uniform") return SamplingKind::lhs_uniform;
  if (s == "lognormal") return SamplingKind::lognormal;
  if (s == "lhs-lognormal") return SamplingKind::lhs_lognormal;
  throw ConfigError("unknown sampling distribution '" + s + "'");
}

TrainConfig parse_train(const json& j, std::uint64_t default_seed) {
  TrainConfig t;
  t.epochs = j.at("epochs").get<std::size_t>();
  t.learning_rate = j.value("learning_rate", 1e-4);
  t.batch_size = j.value("batch_size", std::size_t{16});
  t.seed = j.value("seed", default_seed);
  t.shuffle = j.value("shuffle", true);
  return t;
}

constexpr std::uint64_t kEvalSeedSalt = 0x9e3779b97f4a7c15ull;

PipelineConfig from_json(const json& doc) {
  PipelineConfig c;
  c.problem = doc.at("problem") == "burgers" ? Problem::burgers
                                             : Problem::elasticity;
  c.threads = doc.value("threads", 1);

  const json& s = doc.at("sampling");
  c.sampling.kind = kind_from(s.at("distribution").get<std::string>());
  c.sampling.n = s.at("n").get<std::size_t>();
  c.sampling.seed = s.at("seed").get<std::uint64_t>();
  for (const json& p : s.at("parameters")) {
    if (c.sampling.is_lognormal()) {
      if (!p.contains("mean")) {
        throw ConfigError(
            "/sampling/parameters: log-normal sampling expects {name, mean, "
            "sd} entries");
      }
      c.sampling.lognormal.push_back(
          {p.at("name").get<std::string>(), p.at("mean").get<double>(),
           p.at("sd").get<double>()});
    } else {
      if (!p.contains("lo")) {
        throw ConfigError(
            "/sampling/parameters: uniform sampling expects {name, lo, hi} "
            "entries");
      }
      c.sampling.uniform.push_back({p.at("name").get<std::string>(),
                                    p.at("lo").get<double>(),
                                    p.at("hi").get<double>()});
    }
  }

  const json& sol = doc.at("solver");
  if (c.problem == Problem::burgers) {
    if (!sol.contains("n_x")) {
      throw ConfigError(
          "/solver: problem 'burgers' needs the grid layout {n_x, n_t, ...}");
    }
    c.burgers.n_x = sol.at("n_x").get<std::size_t>();
    c.burgers.n_t = sol.at("n_t").get<std::size_t>();
    c.burgers.x_min = sol.value("x_min", -1.0);
    c.burgers.x_max = sol.value("x_max", 1.0);
    c.burgers.t_max = sol.value("t_max", 5.0);
  } else {
    if (!sol.contains("geometry")) {
      throw ConfigError(
          "/solver: problem 'elasticity' needs the wall layout {geometry, "
          "motion, ...}");
    }
    const json& g = sol.at("geometry");
    WallGeometry& geo = c.elasticity.geometry;
    geo.width = g.value("width", geo.width);
    geo.n_stories = g.value("stories", geo.n_stories);
    geo.story_height = g.value("story_height", geo.story_height);
    geo.opening_width = g.value("opening_width", geo.opening_width);
    geo.opening_height = g.value("opening_height", geo.opening_height);
    geo.element_size = g.value("element_size", geo.element_size);
    c.elasticity.poisson = sol.value("poisson", c.elasticity.poisson);
    c.elasticity.density = sol.value("density", c.elasticity.density);
    c.elasticity.thickness = sol.value("thickness", c.elasticity.thickness);
    if (sol.contains("damping")) {
      c.elasticity.damping_alpha_m = sol.at("damping").value("alpha_m", 0.0);
      c.elasticity.damping_beta_k = sol.at("damping").value("beta_k", 0.0);
    }
    const json& m = sol.at("motion");
    if (m.contains("file")) {
      c.elasticity.motion_file = m.at("file").get<std::string>();
    } else {
      c.elasticity.motion_steps = m.at("steps").get<std::size_t>();
      c.elasticity.motion_dt = m.at("dt").get<double>();
      c.elasticity.motion_seed = m.value("seed", c.elasticity.motion_seed);
      c.elasticity.motion_peak = m.value("peak", c.elasticity.motion_peak);
    }
  }

  const json& cae = doc.at("cae");
  c.cae.latent = cae.at("latent").get<int>();
  if (cae.contains("filters")) {
    c.cae.filters1 = cae.at("filters").at(0).get<int>();
    c.cae.filters2 = cae.at("filters").at(1).get<int>();
  }
  c.cae.kernel = cae.value("kernel", c.cae.kernel);
  c.cae.stride = cae.value("stride", c.cae.stride);
  c.cae.padding = cae.value("padding", c.cae.padding);
  c.cae.pool = cae.value("pool", c.cae.pool);

  c.ffnn_hidden = doc.at("ffnn").at("hidden").get<std::vector<int>>();
  c.cae_train = parse_train(doc.at("cae_train"), c.sampling.seed);
  c.ffnn_train = parse_train(doc.at("ffnn_train"), c.sampling.seed);

  if (doc.contains("mc")) {
    const json& mc = doc.at("mc");
    c.mc.n_mc = mc.at("n_mc").get<std::size_t>();
    c.mc.seed = mc.value("seed", c.sampling.seed + 1);
    if (mc.contains("probes")) {
      for (const json& p : mc.at("probes")) {
        c.mc.probes.push_back({p.at("name").get<std::string>(),
                               p.at("row").get<std::size_t>(),
                               p.at("col").get<std::size_t>()});
      }
    }
  }

  c.convergence.eval_seed = c.sampling.seed ^ kEvalSeedSalt;
  if (doc.contains("convergence")) {
    const json& cv = doc.at("convergence");
    c.convergence.latent_dims =
        cv.value("latent_dims", c.convergence.latent_dims);
    c.convergence.dataset_sizes =
        cv.value("dataset_sizes", c.convergence.dataset_sizes);
    c.convergence.n_eval = cv.value("n_eval", c.convergence.n_eval);
    c.convergence.eval_seed = cv.value("eval_seed", c.convergence.eval_seed);
  }

  if (doc.contains("outputs")) {
    const json& o = doc.at("outputs");
    c.outputs.dataset = o.value("dataset", c.outputs.dataset);
    c.outputs.cae_checkpoint =
        o.value("cae_checkpoint", c.outputs.cae_checkpoint);
    c.outputs.ffnn_checkpoint =
        o.value("ffnn_checkpoint", c.outputs.ffnn_checkpoint);
    c.outputs.report_dir = o.value("report_dir", c.outputs.report_dir);
  }
  return c;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

GroundMotion config_motion(const ElasticityPipelineConfig& e) {
  if (!e.motion_file.empty()) return load_ground_motion_csv(e.motion_file);
  return synthetic_ground_motion(e.motion_steps, e.motion_dt, e.motion_seed,
                                 e.motion_peak);
}

}  // namespace

std::vector<std::string> SamplingConfig::names() const {
  std::vector<std::string> out;
  if (is_lognormal()) {
    for (const auto& p : lognormal) out.push_back(p.name);
  } else {
    for (const auto& p : uniform) out.push_back(p.name);
  }
  return out;
}

PipelineConfig parse_config_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  check_schema(parsed_schema(), doc, "");
  PipelineConfig c;
  try {
    c = from_json(doc);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad config value: ") + e.what());
  }
  if (c.mc.n_mc > 0 && c.mc.probes.empty()) c.mc.probes = default_probes(c);
  validate_config(c);
  return c;
}

PipelineConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config " + path);
  const std::string text{std::istreambuf_iterator<char>(in),
                         std::istreambuf_iterator<char>()};
  return parse_config_text(text);
}

void reseed_config(PipelineConfig& c, std::uint64_t seed) {
  c.sampling.seed = seed;
  c.cae_train.seed = seed;
  c.ffnn_train.seed = seed;
  c.mc.seed = seed + 1;
  c.convergence.eval_seed = seed ^ kEvalSeedSalt;
}

std::pair<std::size_t, std::size_t> solution_shape(const PipelineConfig& c) {
  if (c.problem == Problem::burgers) return {c.burgers.n_x, c.burgers.n_t};
  const WallMesh mesh = build_wall_mesh(c.elasticity.geometry);
  const GroundMotion motion = config_motion(c.elasticity);
  return {mesh.n_free_dofs, motion.accel.size()};
}

CaeArchitecture build_cae_arch(const PipelineConfig& c, int latent) {
  const auto [d, t] = solution_shape(c);
  const auto make = [&](int pool) {
    return make_conv_cae(d, t, static_cast<std::size_t>(latent),
                         static_cast<std::size_t>(c.cae.filters1),
                         static_cast<std::size_t>(c.cae.filters2),
                         static_cast<std::size_t>(c.cae.kernel),
                         static_cast<std::size_t>(c.cae.stride),
                         static_cast<std::size_t>(c.cae.padding),
                         static_cast<std::size_t>(pool));
  };
  if (c.cae.pool > 0) return make(c.cae.pool);
  for (int window : {5, 4, 3, 2}) {
    try {
      return make(window);
    } catch (const ConfigError&) {
    } catch (const ShapeError&) {
    }
  }
  throw ConfigError(
      "no pooling window in 5..2 fits the encoder trace; set cae.pool "
      "explicitly or adjust kernel/stride");
}

CaeArchitecture build_cae_arch(const PipelineConfig& c) {
  return build_cae_arch(c, c.cae.latent);
}

FfnnArchitecture build_ffnn_arch(const PipelineConfig& c, int latent) {
  FfnnArchitecture arch;
  arch.input_dim = c.sampling.dim();
  arch.output_dim = static_cast<std::size_t>(latent);
  arch.hidden.assign(c.ffnn_hidden.begin(), c.ffnn_hidden.end());
  validate_ffnn(arch);
  return arch;
}

FfnnArchitecture build_ffnn_arch(const PipelineConfig& c) {
  return build_ffnn_arch(c, c.cae.latent);
}

std::string solver_fingerprint(const PipelineConfig& c) {
  if (c.problem == Problem::burgers) {
    const auto& b = c.burgers;
    return "burgers;n_x=" + std::to_string(b.n_x) +
           ";n_t=" + std::to_string(b.n_t) + ";x_min=" + fmt(b.x_min) +
           ";x_max=" + fmt(b.x_max) + ";t_max=" + fmt(b.t_max);
  }
  const auto& e = c.elasticity;
  const auto& g = e.geometry;
  std::string motion;
  if (!e.motion_file.empty()) {
    std::ifstream in(e.motion_file, std::ios::binary);
    if (!in) throw IoError("cannot open motion file " + e.motion_file);
    const std::string bytes{std::istreambuf_iterator<char>(in),
                            std::istreambuf_iterator<char>()};
    char hex[20];
    std::snprintf(hex, sizeof hex, "%016llx",
                  static_cast<unsigned long long>(
                      fnv1a64(bytes.data(), bytes.size())));
    motion = std::string("csv#") + hex;
  } else {
    motion = "synthetic;steps=" + std::to_string(e.motion_steps) +
             ";dt=" + fmt(e.motion_dt) + ";seed=" +
             std::to_string(e.motion_seed) + ";peak=" + fmt(e.motion_peak);
  }
  return "elasticity;width=" + fmt(g.width) +
         ";stories=" + std::to_string(g.n_stories) +
         ";story_height=" + fmt(g.story_height) +
         ";opening=" + fmt(g.opening_width) + "x" + fmt(g.opening_height) +
         ";element=" + fmt(g.element_size) + ";poisson=" + fmt(e.poisson) +
         ";density=" + fmt(e.density) + ";thickness=" + fmt(e.thickness) +
         ";damping=" + fmt(e.damping_alpha_m) + "," + fmt(e.damping_beta_k) +
         ";motion=" + motion;
}

std::vector<ProbeSpec> default_probes(const PipelineConfig& c) {
  std::vector<ProbeSpec> out;
  if (c.problem == Problem::burgers) {
    // Off-center stations either side of the midpoint, halfway through the
    // record; chosen to sit where the solution still moves late in time.
    const double fx_left = 0.24625, fx_right = 0.75375, ft = 49.0 / 99.0;
    const auto nearest = [](double f, std::size_t n) {
      return static_cast<std::size_t>(
          std::llround(f * static_cast<double>(n - 1)));
    };
    const std::size_t col = nearest(ft, c.burgers.n_t);
    out.push_back({"u_left", nearest(fx_left, c.burgers.n_x), col});
    out.push_back({"u_right", nearest(fx_right, c.burgers.n_x), col});
    return out;
  }
  const WallMesh mesh = build_wall_mesh(c.elasticity.geometry);
  const auto [d, t] = solution_shape(c);
  (void)d;
  for (std::size_t i = 0; i < mesh.monitored_nodes.size(); ++i) {
    const std::ptrdiff_t dof = mesh.dof(mesh.monitored_nodes[i], 0);
    if (dof < 0) continue;
    out.push_back({"story" + std::to_string(i + 1) + "_x",
                   static_cast<std::size_t>(dof), t / 2});
  }
  return out;
}

void validate_config(const PipelineConfig& c) {
  if (c.threads < 1) throw ConfigError("threads must be at least 1");
  if (c.sampling.n == 0) throw ConfigError("sampling needs n >= 1");
  if (c.sampling.dim() == 0) {
    throw ConfigError("sampling needs at least one parameter");
  }
  if (c.sampling.is_lognormal()) {
    for (const auto& p : c.sampling.lognormal) {
      if (!(p.mean > 0.0) || !(p.sd > 0.0)) {
        throw ConfigError("log-normal parameter '" + p.name +
                          "' needs positive mean and sd");
      }
    }
  } else {
    for (const auto& p : c.sampling.uniform) {
      if (p.hi < p.lo) {
        throw ConfigError("parameter '" + p.name + "' has hi < lo");
      }
    }
  }

  if (c.problem == Problem::burgers) {
    if (c.sampling.dim() != 1) {
      throw ConfigError(
          "the viscous problem takes exactly one parameter (the viscosity)");
    }
    const auto& b = c.burgers;
    if (b.n_x < 3 || b.n_t < 2 || !(b.x_max > b.x_min) || !(b.t_max > 0.0)) {
      throw ConfigError("solver grid is degenerate");
    }
  } else {
    if (c.sampling.dim() != c.elasticity.geometry.n_stories) {
      throw ConfigError("expected one modulus parameter per story (" +
                        std::to_string(c.elasticity.geometry.n_stories) +
                        "), got " + std::to_string(c.sampling.dim()));
    }
    const auto& e = c.elasticity;
    if (e.motion_file.empty() &&
        (e.motion_steps < 2 || !(e.motion_dt > 0.0) ||
         !(e.motion_peak > 0.0))) {
      throw ConfigError("synthetic motion needs steps >= 2, dt > 0, peak > 0");
    }
    if (!(e.poisson >= 0.0) || !(e.poisson < 0.5) || !(e.density > 0.0) ||
        !(e.thickness > 0.0)) {
      throw ConfigError("material constants are out of range");
    }
  }

  const auto [d, t] = solution_shape(c);
  (void)build_cae_arch(c);
  (void)build_ffnn_arch(c);

  if (c.cae_train.batch_size > c.sampling.n) {
    throw ConfigError("cae_train batch size exceeds the dataset size");
  }
  if (c.ffnn_train.batch_size > c.sampling.n) {
    throw ConfigError("ffnn_train batch size exceeds the dataset size");
  }

  for (const auto& p : c.mc.probes) {
    if (p.row >= d || p.col >= t) {
      throw ConfigError("probe '" + p.name + "' at (" +
                        std::to_string(p.row) + ", " + std::to_string(p.col) +
                        ") is outside the solution matrix (" +
                        std::to_string(d) + " x " + std::to_string(t) + ")");
    }
  }

  if (c.convergence.latent_dims.empty() || c.convergence.dataset_sizes.empty()) {
    throw ConfigError("convergence study needs latent dims and dataset sizes");
  }
  for (const int l : c.convergence.latent_dims) {
    if (l < 1) throw ConfigError("convergence latent dims must be positive");
  }
  for (const int n : c.convergence.dataset_sizes) {
    if (n < 1) throw ConfigError("convergence dataset sizes must be positive");
  }
  if (c.convergence.n_eval == 0) {
    throw ConfigError("convergence study needs n_eval >= 1");
  }

  if (c.outputs.dataset.empty() || c.outputs.cae_checkpoint.empty() ||
      c.outputs.ffnn_checkpoint.empty() || c.outputs.report_dir.empty()) {
    throw ConfigError("output paths must be nonempty");
  }
}

}  // namespace surrocae
