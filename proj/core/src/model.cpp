#include "surrocae/model.hpp"

#include <cmath>
#include <utility>

#include "surrocae/errors.hpp"

namespace surrocae {
namespace {

using nn::Activation;

Tensor<Scalar> uniform_tensor(const std::vector<std::size_t>& shape,
                              double bound, Rng& rng) {
  Tensor<Scalar> t(shape);
  for (std::size_t i = 0; i < t.size(); ++i) {
    t[i] = static_cast<Scalar>(rng.uniform(-bound, bound));
  }
  return t;
}

double glorot_bound(std::size_t fan_in, std::size_t fan_out) {
  return std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
}

}  // namespace

LayerStack::LayerStack(const std::vector<LayerSpec>& specs, TraceShape shape,
                       Rng rng) {
  layers_.reserve(specs.size());
  for (std::size_t i = 0; i < specs.size(); ++i) {
    const LayerSpec& spec = specs[i];
    StackLayer layer;
    layer.spec = spec;
    Rng stream = rng.substream(i);
    switch (spec.kind) {
      case LayerSpec::Kind::dense: {
        if (!shape.flat) throw ConfigError("dense layer on unflattened data");
        nn::DenseLayer<Scalar> d;
        d.weights = uniform_tensor({spec.units, shape.width},
                                   glorot_bound(shape.width, spec.units),
                                   stream);
        d.bias = Tensor<Scalar>({spec.units});
        d.act = spec.act;
        layer.weights = std::move(d);
        break;
      }
      case LayerSpec::Kind::conv: {
        if (shape.flat) throw ConfigError("conv layer on flat data");
        nn::Conv1dLayer<Scalar> c;
        c.filters = uniform_tensor(
            {spec.filters, shape.channels, spec.kernel},
            glorot_bound(shape.channels * spec.kernel,
                         spec.filters * spec.kernel),
            stream);
        c.bias = Tensor<Scalar>({spec.filters});
        c.stride = spec.stride;
        c.padding = spec.padding;
        c.act = spec.act;
        layer.weights = std::move(c);
        break;
      }
      case LayerSpec::Kind::deconv: {
        if (shape.flat) throw ConfigError("deconv layer on flat data");
        nn::Deconv1dLayer<Scalar> c;
        c.filters = uniform_tensor(
            {shape.channels, spec.filters, spec.kernel},
            glorot_bound(shape.channels * spec.kernel,
                         spec.filters * spec.kernel),
            stream);
        c.bias = Tensor<Scalar>({spec.filters});
        c.stride = spec.stride;
        c.crop = spec.crop;
        c.act = spec.act;
        layer.weights = std::move(c);
        break;
      }
      default:
        break;  // shape-only layers carry no weights
    }
    shape = apply_layer(shape, spec);
    layers_.push_back(std::move(layer));
  }
}

Tensor<Scalar> LayerStack::forward(const Tensor<Scalar>& x,
                                   StackTape* tape) const {
  if (tape) {
    tape->entries.clear();
    tape->entries.resize(layers_.size());
  }
  Tensor<Scalar> cur = x;
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    const StackLayer& layer = layers_[i];
    StackTape::Entry* e = tape ? &tape->entries[i] : nullptr;
    switch (layer.spec.kind) {
      case LayerSpec::Kind::dense:
        cur = nn::dense_forward(cur,
                                std::get<nn::DenseLayer<Scalar>>(layer.weights),
                                e ? &e->dense : nullptr);
        break;
      case LayerSpec::Kind::conv:
        cur = nn::conv1d_forward(
            cur, std::get<nn::Conv1dLayer<Scalar>>(layer.weights),
            e ? &e->conv : nullptr);
        break;
      case LayerSpec::Kind::deconv:
        cur = nn::deconv1d_forward(
            cur, std::get<nn::Deconv1dLayer<Scalar>>(layer.weights),
            e ? &e->deconv : nullptr);
        break;
      case LayerSpec::Kind::avg_pool:
        cur = nn::avg_pool1d(cur, layer.spec.window, e ? &e->pool : nullptr);
        break;
      case LayerSpec::Kind::avg_unpool:
        if (e) e->in_shape = cur.shape();
        cur = nn::avg_unpool1d(cur, layer.spec.window);
        break;
      case LayerSpec::Kind::flatten: {
        if (cur.rank() != 2 && cur.rank() != 3)
          throw ShapeError("flatten: expected (channels,len) data");
        if (e) e->in_shape = cur.shape();
        if (cur.rank() == 3)
          cur = cur.reshaped({cur.extent(0), cur.extent(1) * cur.extent(2)});
        else
          cur = cur.reshaped({cur.extent(0) * cur.extent(1)});
        break;
      }
      case LayerSpec::Kind::reshape: {
        if (cur.rank() != 1 && cur.rank() != 2)
          throw ShapeError("reshape: expected flat data");
        if (e) e->in_shape = cur.shape();
        const std::size_t c = layer.spec.channels, l = layer.spec.length;
        if (cur.rank() == 2)
          cur = cur.reshaped({cur.extent(0), c, l});
        else
          cur = cur.reshaped({c, l});
        break;
      }
    }
  }
  return cur;
}

Tensor<Scalar> LayerStack::backward(const Tensor<Scalar>& grad_out,
                                    const StackTape& tape,
                                    std::vector<Tensor<Scalar>>& grads) const {
  if (tape.entries.size() != layers_.size())
    throw StateError("backward: tape does not match this stack");
  grads.clear();
  // Parameter slots in declaration order: one pass to lay them out.
  std::vector<std::size_t> offset(layers_.size(), 0);
  std::size_t n_params = 0;
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    offset[i] = n_params;
    if (!std::holds_alternative<std::monostate>(layers_[i].weights))
      n_params += 2;  // weights + bias
  }
  grads.resize(n_params);

  Tensor<Scalar> grad = grad_out;
  for (std::size_t i = layers_.size(); i-- > 0;) {
    const StackLayer& layer = layers_[i];
    const StackTape::Entry& e = tape.entries[i];
    switch (layer.spec.kind) {
      case LayerSpec::Kind::dense: {
        auto g = nn::dense_backward(
            grad, std::get<nn::DenseLayer<Scalar>>(layer.weights), e.dense);
        grads[offset[i]] = std::move(g.weights);
        grads[offset[i] + 1] = std::move(g.bias);
        grad = std::move(g.input);
        break;
      }
      case LayerSpec::Kind::conv: {
        auto g = nn::conv1d_backward(
            grad, std::get<nn::Conv1dLayer<Scalar>>(layer.weights), e.conv);
        grads[offset[i]] = std::move(g.filters);
        grads[offset[i] + 1] = std::move(g.bias);
        grad = std::move(g.input);
        break;
      }
      case LayerSpec::Kind::deconv: {
        auto g = nn::deconv1d_backward(
            grad, std::get<nn::Deconv1dLayer<Scalar>>(layer.weights), e.deconv);
        grads[offset[i]] = std::move(g.filters);
        grads[offset[i] + 1] = std::move(g.bias);
        grad = std::move(g.input);
        break;
      }
      case LayerSpec::Kind::avg_pool:
        grad = nn::avg_pool1d_backward(grad, e.pool);
        break;
      case LayerSpec::Kind::avg_unpool:
        grad = nn::avg_unpool1d_backward(grad, layer.spec.window);
        if (grad.shape() != e.in_shape) grad = grad.reshaped(e.in_shape);
        break;
      case LayerSpec::Kind::flatten:
      case LayerSpec::Kind::reshape:
        grad = grad.reshaped(e.in_shape);
        break;
    }
  }
  return grad;
}

std::vector<Tensor<Scalar>*> LayerStack::parameters() {
  std::vector<Tensor<Scalar>*> out;
  for (StackLayer& layer : layers_) {
    if (auto* d = std::get_if<nn::DenseLayer<Scalar>>(&layer.weights)) {
      out.push_back(&d->weights);
      out.push_back(&d->bias);
    } else if (auto* c = std::get_if<nn::Conv1dLayer<Scalar>>(&layer.weights)) {
      out.push_back(&c->filters);
      out.push_back(&c->bias);
    } else if (auto* v = std::get_if<nn::Deconv1dLayer<Scalar>>(&layer.weights)) {
      out.push_back(&v->filters);
      out.push_back(&v->bias);
    }
  }
  return out;
}

std::vector<const Tensor<Scalar>*> LayerStack::parameters() const {
  std::vector<const Tensor<Scalar>*> out;
  for (const Tensor<Scalar>* p :
       const_cast<LayerStack*>(this)->parameters()) {
    out.push_back(p);
  }
  return out;
}

CaeModel init_cae(const CaeArchitecture& arch, std::uint64_t seed) {
  validate_cae(arch);
  CaeModel model;
  model.arch = arch;
  model.meta.seed = seed;
  Rng root(seed);
  TraceShape in{false, arch.input_rows, arch.input_cols, 0};
  model.encoder = LayerStack(arch.encoder, in, root.substream(1));
  TraceShape lat{true, 0, 0, arch.latent_dim};
  model.decoder = LayerStack(arch.decoder, lat, root.substream(2));
  return model;
}

std::vector<LayerSpec> ffnn_specs(const FfnnArchitecture& arch) {
  std::vector<LayerSpec> specs;
  for (std::size_t w : arch.hidden) {
    specs.push_back(LayerSpec::dense(w, arch.hidden_act));
  }
  specs.push_back(LayerSpec::dense(arch.output_dim, arch.output_act));
  return specs;
}

FfnnModel init_ffnn(const FfnnArchitecture& arch, std::uint64_t seed) {
  validate_ffnn(arch);
  FfnnModel model;
  model.arch = arch;
  model.meta.seed = seed;
  model.param_lo.assign(arch.input_dim, 0.0f);
  model.param_hi.assign(arch.input_dim, 1.0f);
  TraceShape in{true, 0, 0, arch.input_dim};
  model.net = LayerStack(ffnn_specs(arch), in, Rng(seed).substream(3));
  return model;
}

LatentVector cae_encode(const Tensor<Scalar>& u, const CaeModel& model) {
  if (u.rank() != 2 || u.extent(0) != model.arch.input_rows ||
      u.extent(1) != model.arch.input_cols) {
    throw ShapeError("encode: input is " + shape_string(u) + ", model wants (" +
                     std::to_string(model.arch.input_rows) + ", " +
                     std::to_string(model.arch.input_cols) + ")");
  }
  Tensor<Scalar> n(u.shape());
  for (std::size_t i = 0; i < u.size(); ++i) {
    n[i] = (u[i] - model.norm.offset) * model.norm.scale;
  }
  Tensor<Scalar> z = model.encoder.forward(n);
  return LatentVector(z.data(), z.data() + z.size());
}

Tensor<Scalar> cae_decode(const LatentVector& z, const CaeModel& model) {
  if (z.size() != model.arch.latent_dim) {
    throw ShapeError("decode: latent has " + std::to_string(z.size()) +
                     " entries, model wants " +
                     std::to_string(model.arch.latent_dim));
  }
  Tensor<Scalar> zt({z.size()});
  for (std::size_t i = 0; i < z.size(); ++i) zt[i] = z[i];
  Tensor<Scalar> n = model.decoder.forward(zt);
  Tensor<Scalar> u(n.shape());
  for (std::size_t i = 0; i < n.size(); ++i) {
    u[i] = n[i] / model.norm.scale + model.norm.offset;
  }
  return u;
}

LatentVector ffnn_apply(const std::vector<double>& theta,
                        const FfnnModel& model) {
  if (theta.size() != model.arch.input_dim) {
    throw ShapeError("ffnn: got " + std::to_string(theta.size()) +
                     " parameters, model wants " +
                     std::to_string(model.arch.input_dim));
  }
  Tensor<Scalar> x({theta.size()});
  for (std::size_t i = 0; i < theta.size(); ++i) {
    const Scalar lo = model.param_lo[i];
    const Scalar hi = model.param_hi[i];
    const Scalar span = hi - lo;
    x[i] = span > 0.0f
               ? (static_cast<Scalar>(theta[i]) - lo) / span
               : 0.0f;
  }
  Tensor<Scalar> z = model.net.forward(x);
  return LatentVector(z.data(), z.data() + z.size());
}

PredictResult predict(const std::vector<double>& theta, const FfnnModel& ffnn,
                      const CaeModel& cae) {
  if (ffnn.arch.output_dim != cae.arch.latent_dim) {
    throw ConfigError("checkpoints disagree on the latent width: network emits " +
                      std::to_string(ffnn.arch.output_dim) +
                      ", autoencoder expects " +
                      std::to_string(cae.arch.latent_dim));
  }
  PredictResult result;
  for (std::size_t i = 0; i < theta.size() && i < ffnn.param_lo.size(); ++i) {
    if (theta[i] < static_cast<double>(ffnn.param_lo[i]) ||
        theta[i] > static_cast<double>(ffnn.param_hi[i])) {
      result.theta_out_of_range = true;
    }
  }
  Tensor<Scalar> u = cae_decode(ffnn_apply(theta, ffnn), cae);

  result.solution.values = Tensor<double>(u.shape());
  for (std::size_t i = 0; i < u.size(); ++i) {
    result.solution.values[i] = static_cast<double>(u[i]);
  }
  // The surrogate does not know physical time; callers that do can relabel.
  result.solution.time_axis.resize(u.extent(1));
  for (std::size_t j = 0; j < u.extent(1); ++j) {
    result.solution.time_axis[j] = static_cast<double>(j);
  }
  return result;
}

Tensor<Scalar> to_float(const Tensor<double>& values) {
  Tensor<Scalar> out(values.shape());
  for (std::size_t i = 0; i < values.size(); ++i) {
    out[i] = static_cast<Scalar>(values[i]);
  }
  return out;
}

}  // namespace surrocae
