#include "surrocae/checkpoint.hpp"

#include <bit>
#include <cstdint>
#include <fstream>
#include <vector>

#include "serialize_json.hpp"
#include "surrocae/errors.hpp"

namespace surrocae {
namespace {

static_assert(std::endian::native == std::endian::little,
              "checkpoint blobs are written as native little-endian float32");
static_assert(sizeof(Scalar) == 4);

constexpr int kFormatVersion = 1;

using detail::json;

void write_u64(std::ofstream& out, std::uint64_t v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

std::uint64_t read_u64(std::ifstream& in, const std::string& path) {
  std::uint64_t v = 0;
  in.read(reinterpret_cast<char*>(&v), sizeof v);
  if (!in) throw IoError(path + ": truncated checkpoint");
  return v;
}

json meta_to_json(const TrainMeta& m) {
  json j;
  j["seed"] = m.seed;
  j["epochs"] = m.epochs;
  j["final_loss"] = m.final_loss;
  return j;
}

TrainMeta meta_from_json(const json& j) {
  TrainMeta m;
  m.seed = j.value("seed", std::uint64_t{0});
  m.epochs = j.value("epochs", std::size_t{0});
  m.final_loss = j.value("final_loss", 0.0);
  return m;
}

void write_container(const std::string& path, const json& header,
                     const std::vector<const Tensor<Scalar>*>& weights) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write checkpoint " + path);
  const std::string text = header.dump();
  write_u64(out, text.size());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  for (const Tensor<Scalar>* w : weights) {
    write_u64(out, w->size() * sizeof(Scalar));
    out.write(reinterpret_cast<const char*>(w->data()),
              static_cast<std::streamsize>(w->size() * sizeof(Scalar)));
  }
  if (!out) throw IoError("write failed for checkpoint " + path);
}

json read_header(std::ifstream& in, const std::string& path,
                 const std::string& expected_kind) {
  const std::uint64_t len = read_u64(in, path);
  if (len == 0 || len > (std::uint64_t{1} << 30)) {
    throw IoError(path + ": implausible header length");
  }
  std::string text(len, '\0');
  in.read(text.data(), static_cast<std::streamsize>(len));
  if (!in) throw IoError(path + ": truncated checkpoint header");
  json header;
  try {
    header = json::parse(text);
  } catch (const json::exception& e) {
    throw IoError(path + ": bad checkpoint header: " + e.what());
  }
  if (header.value("format_version", -1) != kFormatVersion) {
    throw IoError(path + ": unsupported checkpoint format version");
  }
  if (header.value("kind", "") != expected_kind) {
    throw IoError(path + ": expected a " + expected_kind +
                  " checkpoint, found '" + header.value("kind", "") + "'");
  }
  return header;
}

void read_blobs(std::ifstream& in, const std::string& path,
                const std::vector<Tensor<Scalar>*>& weights) {
  for (Tensor<Scalar>* w : weights) {
    const std::uint64_t len = read_u64(in, path);
    if (len != w->size() * sizeof(Scalar)) {
      throw IoError(path + ": weight blob of " + std::to_string(len) +
                    " bytes does not match the declared shape (" +
                    std::to_string(w->size() * sizeof(Scalar)) + " expected)");
    }
    in.read(reinterpret_cast<char*>(w->data()),
            static_cast<std::streamsize>(len));
    if (!in) throw IoError(path + ": truncated weight blob");
  }
  // A well-formed container ends exactly after the last blob.
  char extra;
  if (in.read(&extra, 1)) {
    throw IoError(path + ": trailing bytes after the last weight blob");
  }
}

json weight_manifest(const std::vector<const Tensor<Scalar>*>& weights) {
  json arr = json::array();
  for (const Tensor<Scalar>* w : weights) {
    arr.push_back(json{{"shape", w->shape()}});
  }
  return arr;
}

}  // namespace

void save_cae(const CaeModel& model, const std::string& path) {
  std::vector<const Tensor<Scalar>*> weights = model.encoder.parameters();
  for (const Tensor<Scalar>* p : model.decoder.parameters()) {
    weights.push_back(p);
  }
  json header;
  header["format_version"] = kFormatVersion;
  header["kind"] = "cae";
  header["architecture"] = detail::cae_arch_to_json(model.arch);
  header["normalization"] = {{"offset", model.norm.offset},
                             {"scale", model.norm.scale}};
  header["meta"] = meta_to_json(model.meta);
  header["weights"] = weight_manifest(weights);
  write_container(path, header, weights);
}

CaeModel load_cae(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open checkpoint " + path);
  json header = read_header(in, path, "cae");

  CaeArchitecture arch;
  TrainMeta meta;
  Normalization norm;
  try {
    arch = detail::cae_arch_from_json(header.at("architecture"));
    meta = meta_from_json(header.value("meta", json::object()));
    const json& jn = header.at("normalization");
    norm.offset = jn.at("offset").get<Scalar>();
    norm.scale = jn.at("scale").get<Scalar>();
  } catch (const json::exception& e) {
    throw IoError(path + ": bad checkpoint header: " + e.what());
  }

  CaeModel model = init_cae(arch, meta.seed);
  model.meta = meta;
  model.norm = norm;
  std::vector<Tensor<Scalar>*> weights = model.encoder.parameters();
  for (Tensor<Scalar>* p : model.decoder.parameters()) weights.push_back(p);
  read_blobs(in, path, weights);
  return model;
}

void save_ffnn(const FfnnModel& model, const std::string& path) {
  std::vector<const Tensor<Scalar>*> weights = model.net.parameters();
  json header;
  header["format_version"] = kFormatVersion;
  header["kind"] = "ffnn";
  header["architecture"] = detail::ffnn_arch_to_json(model.arch);
  header["param_lo"] = model.param_lo;
  header["param_hi"] = model.param_hi;
  header["meta"] = meta_to_json(model.meta);
  header["weights"] = weight_manifest(weights);
  write_container(path, header, weights);
}

FfnnModel load_ffnn(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open checkpoint " + path);
  json header = read_header(in, path, "ffnn");

  FfnnArchitecture arch;
  TrainMeta meta;
  std::vector<Scalar> lo, hi;
  try {
    arch = detail::ffnn_arch_from_json(header.at("architecture"));
    meta = meta_from_json(header.value("meta", json::object()));
    lo = header.at("param_lo").get<std::vector<Scalar>>();
    hi = header.at("param_hi").get<std::vector<Scalar>>();
  } catch (const json::exception& e) {
    throw IoError(path + ": bad checkpoint header: " + e.what());
  }
  if (lo.size() != arch.input_dim || hi.size() != arch.input_dim) {
    throw IoError(path + ": parameter range size does not match input width");
  }

  FfnnModel model = init_ffnn(arch, meta.seed);
  model.meta = meta;
  model.param_lo = std::move(lo);
  model.param_hi = std::move(hi);
  std::vector<Tensor<Scalar>*> weights = model.net.parameters();
  read_blobs(in, path, weights);
  return model;
}

}  // namespace surrocae
