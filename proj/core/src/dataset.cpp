#include "surrocae/dataset.hpp"

#include <algorithm>
#include <bit>
#include <fstream>
#include <limits>

#include "serialize_json.hpp"
#include "surrocae/errors.hpp"

namespace surrocae {

std::uint64_t fnv1a64(const void* data, std::size_t size,
                      std::uint64_t basis) {
  const auto* p = static_cast<const unsigned char*>(data);
  std::uint64_t h = basis;
  for (std::size_t i = 0; i < size; ++i) {
    h ^= p[i];
    h *= 1099511628211ull;
  }
  return h;
}

namespace {

static_assert(std::endian::native == std::endian::little,
              "dataset blocks are written as native little-endian float32");

constexpr int kFormatVersion = 1;
constexpr const char* kKind = "snapshot-dataset";

using detail::json;

void check_consistent(const SnapshotDataset& ds) {
  if (ds.solutions.rank() != 3 || ds.params.rank() != 2) {
    throw ShapeError("dataset expects params (n, p) and solutions (n, d, t)");
  }
  if (ds.params.extent(0) != ds.n_samples()) {
    throw ShapeError("dataset has " + std::to_string(ds.n_samples()) +
                     " solutions but " + std::to_string(ds.params.extent(0)) +
                     " parameter rows");
  }
  if (ds.param_names.size() != ds.n_params()) {
    throw ShapeError("dataset names " + std::to_string(ds.param_names.size()) +
                     " parameters but stores " +
                     std::to_string(ds.n_params()));
  }
  if (ds.time_axis.size() != ds.n_time()) {
    throw ShapeError("dataset time axis length " +
                     std::to_string(ds.time_axis.size()) +
                     " does not match " + std::to_string(ds.n_time()) +
                     " solution columns");
  }
}

json stats_json(const SnapshotDataset& ds) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (std::size_t i = 0; i < ds.solutions.size(); ++i) {
    lo = std::min(lo, static_cast<double>(ds.solutions[i]));
    hi = std::max(hi, static_cast<double>(ds.solutions[i]));
  }
  std::vector<double> plo(ds.n_params(), std::numeric_limits<double>::infinity());
  std::vector<double> phi(ds.n_params(), -std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < ds.n_samples(); ++i) {
    for (std::size_t j = 0; j < ds.n_params(); ++j) {
      const double v = ds.params(i, j);
      plo[j] = std::min(plo[j], v);
      phi[j] = std::max(phi[j], v);
    }
  }
  json s;
  s["solution_min"] = lo;
  s["solution_max"] = hi;
  s["param_min"] = plo;
  s["param_max"] = phi;
  return s;
}

}  // namespace

void save_dataset(const SnapshotDataset& ds, const std::string& path) {
  check_consistent(ds);

  json header;
  header["format_version"] = kFormatVersion;
  header["kind"] = kKind;
  header["n_samples"] = ds.n_samples();
  header["n_dofs"] = ds.n_dofs();
  header["n_time"] = ds.n_time();
  header["dtype"] = "float32";
  header["param_names"] = ds.param_names;
  header["solver"] = ds.solver;
  header["time_axis"] = ds.time_axis;
  header["stats"] = stats_json(ds);

  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write dataset " + path);
  const std::string text = header.dump();
  const std::uint64_t len = text.size();
  out.write(reinterpret_cast<const char*>(&len), sizeof len);
  out.write(text.data(), static_cast<std::streamsize>(text.size()));

  const auto* params = reinterpret_cast<const char*>(ds.params.data());
  const auto* sols = reinterpret_cast<const char*>(ds.solutions.data());
  const std::size_t param_bytes = ds.params.size() * sizeof(Scalar);
  const std::size_t sol_bytes = ds.solutions.size() * sizeof(Scalar);
  out.write(params, static_cast<std::streamsize>(param_bytes));
  out.write(sols, static_cast<std::streamsize>(sol_bytes));

  std::uint64_t sum = fnv1a64(params, param_bytes);
  sum = fnv1a64(sols, sol_bytes, sum);
  out.write(reinterpret_cast<const char*>(&sum), sizeof sum);
  if (!out) throw IoError("write failed for dataset " + path);
}

SnapshotDataset load_dataset(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open dataset " + path);

  std::uint64_t header_len = 0;
  in.read(reinterpret_cast<char*>(&header_len), sizeof header_len);
  if (!in) throw IoError(path + ": truncated dataset");
  if (header_len == 0 || header_len > (std::uint64_t{1} << 30)) {
    throw IoError(path + ": implausible header length");
  }
  std::string text(header_len, '\0');
  in.read(text.data(), static_cast<std::streamsize>(header_len));
  if (!in) throw IoError(path + ": truncated dataset header");

  json header;
  try {
    header = json::parse(text);
  } catch (const json::exception& e) {
    throw IoError(path + ": bad dataset header: " + e.what());
  }

  SnapshotDataset ds;
  std::size_t n = 0, d = 0, t = 0;
  try {
    if (header.value("format_version", -1) != kFormatVersion) {
      throw IoError(path + ": unsupported dataset format version");
    }
    const std::string kind = header.value("kind", "");
    if (kind != kKind) {
      throw IoError(path + ": expected a " + kKind + " file, found '" + kind +
                    "'");
    }
    const std::string dtype = header.value("dtype", "");
    if (dtype != "float32") {
      throw IoError(path + ": unsupported dtype '" + dtype + "'");
    }
    n = header.at("n_samples").get<std::size_t>();
    d = header.at("n_dofs").get<std::size_t>();
    t = header.at("n_time").get<std::size_t>();
    ds.param_names = header.at("param_names").get<std::vector<std::string>>();
    ds.solver = header.value("solver", "");
    ds.time_axis = header.at("time_axis").get<std::vector<double>>();
  } catch (const json::exception& e) {
    throw IoError(path + ": bad dataset header: " + e.what());
  }
  if (n == 0 || d == 0 || t == 0 || ds.param_names.empty() ||
      ds.time_axis.size() != t) {
    throw IoError(path + ": dataset header is internally inconsistent");
  }

  ds.params = Tensor<Scalar>({n, ds.param_names.size()});
  ds.solutions = Tensor<Scalar>({n, d, t});
  auto* params = reinterpret_cast<char*>(ds.params.data());
  auto* sols = reinterpret_cast<char*>(ds.solutions.data());
  const std::size_t param_bytes = ds.params.size() * sizeof(Scalar);
  const std::size_t sol_bytes = ds.solutions.size() * sizeof(Scalar);
  in.read(params, static_cast<std::streamsize>(param_bytes));
  in.read(sols, static_cast<std::streamsize>(sol_bytes));
  std::uint64_t stored = 0;
  in.read(reinterpret_cast<char*>(&stored), sizeof stored);
  if (!in) throw IoError(path + ": dataset shorter than its header promises");
  char extra = 0;
  in.read(&extra, 1);
  if (!in.eof()) throw IoError(path + ": trailing bytes after the checksum");

  std::uint64_t sum = fnv1a64(params, param_bytes);
  sum = fnv1a64(sols, sol_bytes, sum);
  if (sum != stored) throw IoError(path + ": dataset checksum mismatch");
  return ds;
}

}  // namespace surrocae
