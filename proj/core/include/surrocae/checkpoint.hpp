#pragma once

#include <string>

#include "surrocae/model.hpp"

namespace surrocae {

/// Model container: an 8-byte little-endian header length, a JSON header
/// (format version, kind, architecture, normalization constants, training
/// metadata, weight manifest), then one length-prefixed little-endian float32
/// blob per weight tensor in declaration order. save -> load round-trips
/// predictions bit-exactly.
void save_cae(const CaeModel& model, const std::string& path);
CaeModel load_cae(const std::string& path);

void save_ffnn(const FfnnModel& model, const std::string& path);
FfnnModel load_ffnn(const std::string& path);

}  // namespace surrocae
