#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "surrocae/activation.hpp"

namespace surrocae {

/// One layer of a sequential stack. Which fields matter depends on the kind;
/// validate_cae / validate_ffnn reject specs whose irrelevant fields are set.
struct LayerSpec {
  enum class Kind { conv, deconv, avg_pool, avg_unpool, flatten, reshape, dense };

  Kind kind = Kind::dense;
  nn::Activation act = nn::Activation::linear;
  std::size_t filters = 0;   // conv: filter count; deconv: output channels
  std::size_t kernel = 0;
  std::size_t stride = 1;
  std::size_t padding = 0;   // conv only (symmetric zeros)
  std::size_t crop = 0;      // deconv only (trailing positions dropped)
  std::size_t window = 0;    // pool / unpool
  std::size_t units = 0;     // dense output width
  std::size_t channels = 0;  // reshape target (channels, length)
  std::size_t length = 0;

  static LayerSpec conv1d(std::size_t filters, std::size_t kernel,
                          std::size_t stride, std::size_t padding,
                          nn::Activation act);
  static LayerSpec deconv1d(std::size_t filters, std::size_t kernel,
                            std::size_t stride, std::size_t crop,
                            nn::Activation act);
  static LayerSpec avg_pool(std::size_t window);
  static LayerSpec avg_unpool(std::size_t window);
  static LayerSpec flatten();
  static LayerSpec reshape(std::size_t channels, std::size_t length);
  static LayerSpec dense(std::size_t units, nn::Activation act);
};

/// Autoencoder over solution matrices shaped (rows, cols): rows are spatial
/// DOFs (convolution channels), cols the time axis the 1-d kernels slide on.
struct CaeArchitecture {
  std::size_t input_rows = 0;
  std::size_t input_cols = 0;
  std::size_t latent_dim = 0;
  std::vector<LayerSpec> encoder;
  std::vector<LayerSpec> decoder;
};

struct FfnnArchitecture {
  std::size_t input_dim = 0;
  std::size_t output_dim = 0;
  std::vector<std::size_t> hidden;  // widths, all with hidden_act
  nn::Activation hidden_act = nn::Activation::relu;
  nn::Activation output_act = nn::Activation::linear;
};

struct TrainConfig {
  std::size_t epochs = 1;
  double learning_rate = 1e-4;
  std::size_t batch_size = 16;
  std::uint64_t seed = 0;
  bool shuffle = true;
};

/// Shape of the data flowing between layers: (channels, length) until a
/// flatten/dense, a bare width afterwards.
struct TraceShape {
  bool flat = false;
  std::size_t channels = 0;
  std::size_t length = 0;
  std::size_t width = 0;  // meaningful when flat

  std::string str() const;
  bool operator==(const TraceShape&) const = default;
};

TraceShape apply_layer(const TraceShape& in, const LayerSpec& layer);

/// Proves encoder: (rows, cols) -> latent and decoder: latent -> (rows, cols)
/// hold exactly; throws ConfigError/ShapeError with the offending layer index
/// otherwise. Encoder layers must come from {conv, avg_pool, flatten, dense},
/// decoder layers from {dense, reshape, avg_unpool, deconv}.
void validate_cae(const CaeArchitecture& arch);

void validate_ffnn(const FfnnArchitecture& arch);

/// Builds the decoder that runs the encoder backwards: dense widths, pool
/// windows, kernel/stride geometry are reused, deconv crops are solved so
/// every intermediate length matches the encoder trace exactly. Hidden layers
/// keep their mirrored activation; the final layer is forced linear.
std::vector<LayerSpec> mirror_decoder(std::size_t input_rows,
                                      std::size_t input_cols,
                                      const std::vector<LayerSpec>& encoder);

/// Two-stage conv encoder with average pooling and a dense bottleneck, plus
/// the mirrored decoder. Throws if the geometry does not compose (e.g. the
/// pool window would drop a remainder the mirror cannot restore).
CaeArchitecture make_conv_cae(std::size_t rows, std::size_t cols,
                              std::size_t latent, std::size_t filters1,
                              std::size_t filters2, std::size_t kernel,
                              std::size_t stride, std::size_t padding,
                              std::size_t pool_window);

/// (200, 100) -> Conv(64) -> Conv(32) -> AvgPool(5) -> Flatten -> Dense(8).
CaeArchitecture default_burgers_cae();

/// Structural variant: latent 64 with wider filters, sized to the mesh.
CaeArchitecture default_structural_cae(std::size_t rows, std::size_t cols);

FfnnArchitecture default_burgers_ffnn();

}  // namespace surrocae
