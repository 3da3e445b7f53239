#include "surrocae/architecture.hpp"

#include <algorithm>

#include "surrocae/errors.hpp"
#include "surrocae/layers.hpp"
#include "surrocae/pooling.hpp"

namespace surrocae {

LayerSpec LayerSpec::conv1d(std::size_t filters, std::size_t kernel,
                            std::size_t stride, std::size_t padding,
                            nn::Activation act) {
  LayerSpec s;
  s.kind = Kind::conv;
  s.filters = filters;
  s.kernel = kernel;
  s.stride = stride;
  s.padding = padding;
  s.act = act;
  return s;
}

LayerSpec LayerSpec::deconv1d(std::size_t filters, std::size_t kernel,
                              std::size_t stride, std::size_t crop,
                              nn::Activation act) {
  LayerSpec s;
  s.kind = Kind::deconv;
  s.filters = filters;
  s.kernel = kernel;
  s.stride = stride;
  s.crop = crop;
  s.act = act;
  return s;
}

LayerSpec LayerSpec::avg_pool(std::size_t window) {
  LayerSpec s;
  s.kind = Kind::avg_pool;
  s.window = window;
  return s;
}

LayerSpec LayerSpec::avg_unpool(std::size_t window) {
  LayerSpec s;
  s.kind = Kind::avg_unpool;
  s.window = window;
  return s;
}

LayerSpec LayerSpec::flatten() {
  LayerSpec s;
  s.kind = Kind::flatten;
  return s;
}

LayerSpec LayerSpec::reshape(std::size_t channels, std::size_t length) {
  LayerSpec s;
  s.kind = Kind::reshape;
  s.channels = channels;
  s.length = length;
  return s;
}

LayerSpec LayerSpec::dense(std::size_t units, nn::Activation act) {
  LayerSpec s;
  s.kind = Kind::dense;
  s.units = units;
  s.act = act;
  return s;
}

std::string TraceShape::str() const {
  if (flat) return "(" + std::to_string(width) + ")";
  return "(" + std::to_string(channels) + ", " + std::to_string(length) + ")";
}

TraceShape apply_layer(const TraceShape& in, const LayerSpec& layer) {
  TraceShape out;
  switch (layer.kind) {
    case LayerSpec::Kind::conv: {
      if (in.flat) throw ShapeError("conv needs a (channels, length) input");
      if (layer.filters == 0 || layer.kernel == 0)
        throw ConfigError("conv needs filters and a kernel size");
      out.channels = layer.filters;
      out.length = nn::conv1d_output_len(in.length, layer.kernel, layer.stride,
                                         layer.padding);
      return out;
    }
    case LayerSpec::Kind::deconv: {
      if (in.flat) throw ShapeError("deconv needs a (channels, length) input");
      if (layer.filters == 0 || layer.kernel == 0)
        throw ConfigError("deconv needs filters and a kernel size");
      out.channels = layer.filters;
      out.length = nn::deconv1d_output_len(in.length, layer.kernel,
                                           layer.stride, layer.crop);
      return out;
    }
    case LayerSpec::Kind::avg_pool: {
      if (in.flat) throw ShapeError("pool needs a (channels, length) input");
      out.channels = in.channels;
      out.length = nn::pool1d_output_len(in.length, layer.window);
      return out;
    }
    case LayerSpec::Kind::avg_unpool: {
      if (in.flat) throw ShapeError("unpool needs a (channels, length) input");
      if (layer.window == 0) throw ConfigError("unpool window must be >= 1");
      out.channels = in.channels;
      out.length = in.length * layer.window;
      return out;
    }
    case LayerSpec::Kind::flatten: {
      if (in.flat) throw ShapeError("flatten applied to already flat data");
      out.flat = true;
      out.width = in.channels * in.length;
      return out;
    }
    case LayerSpec::Kind::reshape: {
      if (!in.flat) throw ShapeError("reshape needs flat input");
      if (layer.channels * layer.length != in.width)
        throw ShapeError("reshape to (" + std::to_string(layer.channels) +
                         ", " + std::to_string(layer.length) +
                         ") does not preserve " + std::to_string(in.width) +
                         " values");
      out.channels = layer.channels;
      out.length = layer.length;
      return out;
    }
    case LayerSpec::Kind::dense: {
      if (!in.flat) throw ShapeError("dense needs flat input, add a flatten");
      if (layer.units == 0) throw ConfigError("dense needs a positive width");
      out.flat = true;
      out.width = layer.units;
      return out;
    }
  }
  throw ConfigError("unknown layer kind");
}

namespace {

TraceShape trace_stack(TraceShape shape, const std::vector<LayerSpec>& stack,
                       const char* which,
                       const std::vector<LayerSpec::Kind>& allowed) {
  for (std::size_t i = 0; i < stack.size(); ++i) {
    if (std::find(allowed.begin(), allowed.end(), stack[i].kind) ==
        allowed.end()) {
      throw ConfigError(std::string(which) + " layer " + std::to_string(i) +
                        ": kind not allowed in this stack");
    }
    try {
      shape = apply_layer(shape, stack[i]);
    } catch (const Error& e) {
      throw ConfigError(std::string(which) + " layer " + std::to_string(i) +
                        ": " + e.what());
    }
  }
  return shape;
}

}  // namespace

void validate_cae(const CaeArchitecture& arch) {
  if (arch.input_rows == 0 || arch.input_cols == 0)
    throw ConfigError("autoencoder input shape must be positive");
  if (arch.latent_dim == 0) throw ConfigError("latent dimension must be >= 1");
  if (arch.latent_dim >= arch.input_rows * arch.input_cols)
    throw ConfigError("latent dimension must compress the input");
  if (arch.encoder.empty() || arch.decoder.empty())
    throw ConfigError("encoder and decoder must both be non-empty");

  using K = LayerSpec::Kind;
  TraceShape in{false, arch.input_rows, arch.input_cols, 0};
  TraceShape enc = trace_stack(in, arch.encoder, "encoder",
                               {K::conv, K::avg_pool, K::flatten, K::dense});
  if (!enc.flat || enc.width != arch.latent_dim) {
    throw ConfigError("encoder output is " + enc.str() + ", expected (" +
                      std::to_string(arch.latent_dim) + ")");
  }

  TraceShape lat{true, 0, 0, arch.latent_dim};
  TraceShape dec = trace_stack(lat, arch.decoder, "decoder",
                               {K::dense, K::reshape, K::avg_unpool, K::deconv});
  if (dec.flat || dec.channels != arch.input_rows ||
      dec.length != arch.input_cols) {
    throw ConfigError("decoder output is " + dec.str() + ", expected " +
                      in.str());
  }
}

void validate_ffnn(const FfnnArchitecture& arch) {
  if (arch.input_dim == 0 || arch.output_dim == 0)
    throw ConfigError("network input and output widths must be positive");
  for (std::size_t w : arch.hidden) {
    if (w == 0) throw ConfigError("hidden layer width must be positive");
  }
}

std::vector<LayerSpec> mirror_decoder(std::size_t input_rows,
                                      std::size_t input_cols,
                                      const std::vector<LayerSpec>& encoder) {
  // Forward trace so each mirrored layer knows the shape it must restore.
  std::vector<TraceShape> shapes;
  shapes.push_back({false, input_rows, input_cols, 0});
  for (const LayerSpec& l : encoder) {
    shapes.push_back(apply_layer(shapes.back(), l));
  }

  std::vector<LayerSpec> decoder;
  for (std::size_t i = encoder.size(); i-- > 0;) {
    const LayerSpec& l = encoder[i];
    const TraceShape& before = shapes[i];   // shape the mirror must produce
    const TraceShape& after = shapes[i + 1];
    switch (l.kind) {
      case LayerSpec::Kind::dense:
        decoder.push_back(LayerSpec::dense(before.width, l.act));
        break;
      case LayerSpec::Kind::flatten:
        decoder.push_back(LayerSpec::reshape(before.channels, before.length));
        break;
      case LayerSpec::Kind::avg_pool: {
        if (after.length * l.window != before.length) {
          throw ConfigError(
              "pool at layer " + std::to_string(i) + " drops a remainder (" +
              std::to_string(before.length) + " -> " +
              std::to_string(after.length) + " with window " +
              std::to_string(l.window) + "), the mirror cannot restore it");
        }
        decoder.push_back(LayerSpec::avg_unpool(l.window));
        break;
      }
      case LayerSpec::Kind::conv: {
        const std::size_t natural = (after.length - 1) * l.stride + l.kernel;
        if (natural < before.length) {
          throw ConfigError("conv at layer " + std::to_string(i) +
                            " cannot be mirrored: transposed output " +
                            std::to_string(natural) + " is shorter than " +
                            std::to_string(before.length));
        }
        decoder.push_back(LayerSpec::deconv1d(before.channels, l.kernel,
                                              l.stride,
                                              natural - before.length, l.act));
        break;
      }
      default:
        throw ConfigError("encoder may only contain conv/pool/flatten/dense");
    }
  }
  if (!decoder.empty()) decoder.back().act = nn::Activation::linear;
  return decoder;
}

CaeArchitecture make_conv_cae(std::size_t rows, std::size_t cols,
                              std::size_t latent, std::size_t filters1,
                              std::size_t filters2, std::size_t kernel,
                              std::size_t stride, std::size_t padding,
                              std::size_t pool_window) {
  CaeArchitecture arch;
  arch.input_rows = rows;
  arch.input_cols = cols;
  arch.latent_dim = latent;
  arch.encoder = {
      LayerSpec::conv1d(filters1, kernel, stride, padding, nn::Activation::relu),
      LayerSpec::conv1d(filters2, kernel, stride, padding, nn::Activation::relu),
      LayerSpec::avg_pool(pool_window),
      LayerSpec::flatten(),
      LayerSpec::dense(latent, nn::Activation::linear),
  };
  arch.decoder = mirror_decoder(rows, cols, arch.encoder);
  validate_cae(arch);
  return arch;
}

CaeArchitecture default_burgers_cae() {
  return make_conv_cae(200, 100, 8, 64, 32, 5, 2, 2, 5);
}

CaeArchitecture default_structural_cae(std::size_t rows, std::size_t cols) {
  // Pick the largest pool window <= 5 that keeps every length conforming.
  for (std::size_t pool = 5; pool >= 1; --pool) {
    try {
      return make_conv_cae(rows, cols, 64, 256, 128, 5, 2, 2, pool);
    } catch (const ConfigError&) {
      if (pool == 1) throw;
    }
  }
  throw ConfigError("no conforming pool window");
}

FfnnArchitecture default_burgers_ffnn() {
  FfnnArchitecture arch;
  arch.input_dim = 1;
  arch.output_dim = 8;
  arch.hidden = {32, 32, 32, 32};
  return arch;
}

}  // namespace surrocae
