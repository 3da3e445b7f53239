#include "surrocae/ground_motion.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "surrocae/errors.hpp"
#include "surrocae/rng.hpp"

namespace surrocae {
namespace {

std::string trimmed(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_number(const std::string& field, const std::string& path,
                    std::size_t line_no) {
  const char* begin = field.c_str();
  char* end = nullptr;
  double value = std::strtod(begin, &end);
  if (end == begin || *end != '\0') {
    throw IoError(path + ":" + std::to_string(line_no) +
                  ": not a number: '" + field + "'");
  }
  return value;
}

}  // namespace

GroundMotion load_ground_motion_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open ground motion file " + path);

  std::string line;
  if (!std::getline(in, line)) {
    throw IoError(path + ": empty file, expected a 't,accel' header");
  }
  std::string header = trimmed(line);
  for (char& c : header) {
    c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  if (header != "t,accel") {
    throw IoError(path + ": expected header 't,accel', got '" + trimmed(line) +
                  "'");
  }

  std::vector<double> times;
  std::vector<double> accel;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    std::string row = trimmed(line);
    if (row.empty()) continue;
    std::size_t comma = row.find(',');
    if (comma == std::string::npos) {
      throw IoError(path + ":" + std::to_string(line_no) +
                    ": expected two comma-separated columns");
    }
    times.push_back(parse_number(trimmed(row.substr(0, comma)), path, line_no));
    accel.push_back(
        parse_number(trimmed(row.substr(comma + 1)), path, line_no));
  }
  if (times.size() < 2) {
    throw IoError(path + ": need at least two samples");
  }

  GroundMotion motion;
  motion.dt = times[1] - times[0];
  if (!(motion.dt > 0.0)) {
    throw IoError(path + ": time column must be strictly increasing");
  }
  for (std::size_t j = 0; j < times.size(); ++j) {
    double expected = times[0] + static_cast<double>(j) * motion.dt;
    if (std::abs(times[j] - expected) > 1e-6 * motion.dt) {
      throw IoError(path + ": non-uniform sampling at row " +
                    std::to_string(j + 2) + " (t = " +
                    std::to_string(times[j]) + ", expected " +
                    std::to_string(expected) + ")");
    }
  }
  motion.accel = std::move(accel);
  return motion;
}

void save_ground_motion_csv(const GroundMotion& motion,
                            const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write ground motion file " + path);
  out << "t,accel\n";
  char buf[64];
  for (std::size_t j = 0; j < motion.accel.size(); ++j) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g\n",
                  static_cast<double>(j) * motion.dt, motion.accel[j]);
    out << buf;
  }
  if (!out) throw IoError("write failed for " + path);
}

GroundMotion synthetic_ground_motion(std::size_t n_steps, double dt,
                                     std::uint64_t seed, double peak_accel) {
  if (n_steps < 2) throw ConfigError("need at least two samples");
  if (!(dt > 0.0)) throw ConfigError("dt must be positive");
  if (!(peak_accel > 0.0)) throw ConfigError("peak acceleration must be positive");

  constexpr std::size_t kComponents = 24;
  constexpr double kFreqLo = 0.5;   // Hz
  constexpr double kFreqHi = 10.0;  // Hz
  const double duration = static_cast<double>(n_steps - 1) * dt;
  const double two_pi = 2.0 * std::numbers::pi;

  Rng rng = Rng(seed).substream(0x6d6f74696f6eull);
  std::vector<double> phase(kComponents);
  for (double& p : phase) p = rng.uniform(0.0, two_pi);

  // Rise, hold, exponential tail.
  const double t_rise = 0.15 * duration;
  const double t_hold = 0.60 * duration;
  const double decay = 4.0 / (duration - t_hold);
  auto envelope = [&](double t) {
    if (t < t_rise) {
      double r = t / t_rise;
      return r * r;
    }
    if (t <= t_hold) return 1.0;
    return std::exp(-decay * (t - t_hold));
  };

  GroundMotion motion;
  motion.dt = dt;
  motion.accel.resize(n_steps);
  double peak = 0.0;
  for (std::size_t j = 0; j < n_steps; ++j) {
    double t = static_cast<double>(j) * dt;
    double sum = 0.0;
    for (std::size_t k = 0; k < kComponents; ++k) {
      double frac = static_cast<double>(k) / (kComponents - 1);
      double freq = kFreqLo * std::pow(kFreqHi / kFreqLo, frac);
      sum += std::sin(two_pi * freq * t + phase[k]);
    }
    motion.accel[j] = envelope(t) * sum;
    peak = std::max(peak, std::abs(motion.accel[j]));
  }
  double scale = peak_accel / peak;
  for (double& a : motion.accel) a *= scale;
  return motion;
}

}  // namespace surrocae
