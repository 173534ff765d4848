#include "hxnn/hmlp.hpp"

#include "hxnn/error.hpp"
#include "random.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace hxnn {

double SplitActivation::apply(double v) const noexcept {
  if (kind == ActivationKind::SplitReLU) return v > 0.0 ? v : 0.0;
  return 1.0 / (1.0 + std::exp(-v));
}

double SplitActivation::derivative(double input, double output) const noexcept {
  if (kind == ActivationKind::SplitReLU) return input > 0.0 ? 1.0 : 0.0;
  return output * (1.0 - output);
}

std::string_view to_string(ActivationKind kind) {
  return kind == ActivationKind::SplitReLU ? "relu" : "sigmoid";
}

ActivationKind parse_activation(std::string_view name) {
  if (name == "sigmoid" || name == "split-sigmoid") return ActivationKind::SplitSigmoid;
  if (name == "relu" || name == "split-relu") return ActivationKind::SplitReLU;
  throw Error(ErrorKind::InvalidArgument,
              "unknown activation '" + std::string(name) + "'");
}

HNumber split_apply(SplitActivation act, std::span<const double> x) {
  HNumber r(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) r[k] = act.apply(x[k]);
  return r;
}

void SampleSet::push_back(std::span<const double> in,
                          std::span<const double> target) {
  if (in.size() != inputs * dim || target.size() != dim) {
    throw DimensionError("sample does not match " + std::to_string(inputs) +
                         " inputs of dimension " + std::to_string(dim));
  }
  x.insert(x.end(), in.begin(), in.end());
  t.insert(t.end(), target.begin(), target.end());
}

HMLPParams::HMLPParams(Algebra algebra, std::size_t inputs, std::size_t hidden,
                       SplitActivation activation)
    : algebra_(std::move(algebra)),
      inputs_(inputs),
      hidden_(hidden),
      activation_(activation) {
  if (inputs == 0 || hidden == 0) {
    throw Error(ErrorKind::InvalidArgument,
                "network needs at least one input and one hidden unit");
  }
  hidden_weights.assign(hidden * inputs * dim(), 0.0);
  hidden_biases.assign(hidden * dim(), 0.0);
  output_weights.assign(hidden * dim(), 0.0);
}

HNumber forward(const HMLPParams& params, std::span<const double> x) {
  const std::size_t dim = params.dim();
  if (x.size() != params.inputs() * dim) {
    throw DimensionError("forward: expected " + std::to_string(params.inputs()) +
                         " inputs of dimension " + std::to_string(dim) +
                         ", got " + std::to_string(x.size()) + " coefficients");
  }
  const Algebra& alg = params.algebra();
  HNumber out(dim), s(dim), prod(dim);
  for (std::size_t i = 0; i < params.hidden(); ++i) {
    std::fill(s.coeffs.begin(), s.coeffs.end(), 0.0);
    for (std::size_t k = 0; k < params.inputs(); ++k) {
      mul_direct_into(alg, params.hidden_weight(i, k), x.subspan(k * dim, dim),
                      prod.coeffs);
      for (std::size_t c = 0; c < dim; ++c) s[c] += prod[c];
    }
    const auto theta = params.hidden_bias(i);
    for (std::size_t c = 0; c < dim; ++c) s[c] += theta[c];
    const HNumber h = split_apply(params.activation(), s);
    mul_direct_into(alg, params.output_weight(i), h, prod.coeffs);
    for (std::size_t c = 0; c < dim; ++c) out[c] += prod[c];
  }
  return out;
}

HNumber forward(const HMLPParams& params, std::span<const HNumber> x) {
  std::vector<double> flat;
  for (const auto& v : x) {
    if (v.size() != params.dim()) {
      throw DimensionError("forward: input of length " + std::to_string(v.size()) +
                           " for dimension " + std::to_string(params.dim()));
    }
    flat.insert(flat.end(), v.coeffs.begin(), v.coeffs.end());
  }
  return forward(params, std::span<const double>(flat));
}

namespace {

void check_batch(const HMLPParams& params, const SampleSet& batch) {
  if (batch.size() == 0) {
    throw Error(ErrorKind::InvalidArgument, "empty batch");
  }
  if (batch.inputs != params.inputs() || batch.dim != params.dim() ||
      batch.x.size() != batch.size() * batch.inputs * batch.dim) {
    throw DimensionError("batch shape does not match the network");
  }
}

// Forward and backward for one sample at a time over the sparse matrix form
// of the product.
class SampleGradient {
 public:
  explicit SampleGradient(const HMLPParams& params)
      : kernel_(build_bilinear_matrices(params.algebra())),
        dim_(params.dim()),
        pre_(params.hidden() * dim_),
        post_(params.hidden() * dim_),
        tmp_(dim_),
        out_(dim_),
        gout_(dim_),
        gpre_(dim_) {}

  // Adds scale * d|out - t|^2 / d(param) into `grad`; returns |out - t|^2.
  double accumulate(const HMLPParams& p, const double* x, const double* t,
                    double scale, GradientBundle& grad) {
    const std::size_t dim = dim_;
    const std::size_t m = p.hidden();
    const std::size_t n_in = p.inputs();
    const SplitActivation act = p.activation();

    std::fill(out_.begin(), out_.end(), 0.0);
    for (std::size_t i = 0; i < m; ++i) {
      double* s = pre_.data() + i * dim;
      std::copy_n(p.hidden_biases.data() + i * dim, dim, s);
      for (std::size_t k = 0; k < n_in; ++k) {
        kernel_.mul(p.hidden_weights.data() + (i * n_in + k) * dim, x + k * dim,
                    tmp_.data());
        for (std::size_t c = 0; c < dim; ++c) s[c] += tmp_[c];
      }
      double* h = post_.data() + i * dim;
      for (std::size_t c = 0; c < dim; ++c) h[c] = act.apply(s[c]);
      kernel_.mul(p.output_weights.data() + i * dim, h, tmp_.data());
      for (std::size_t c = 0; c < dim; ++c) out_[c] += tmp_[c];
    }

    double sq = 0.0;
    for (std::size_t c = 0; c < dim; ++c) {
      const double e = out_[c] - t[c];
      sq += e * e;
      gout_[c] = 2.0 * scale * e;
    }

    for (std::size_t i = 0; i < m; ++i) {
      const double* s = pre_.data() + i * dim;
      const double* h = post_.data() + i * dim;
      std::fill(tmp_.begin(), tmp_.end(), 0.0);
      kernel_.mul_grad(p.output_weights.data() + i * dim, h, gout_.data(),
                       grad.output_weights.data() + i * dim, tmp_.data());
      for (std::size_t c = 0; c < dim; ++c) {
        gpre_[c] = tmp_[c] * act.derivative(s[c], h[c]);
        grad.hidden_biases[i * dim + c] += gpre_[c];
      }
      for (std::size_t k = 0; k < n_in; ++k) {
        const std::size_t off = (i * n_in + k) * dim;
        kernel_.mul_grad(p.hidden_weights.data() + off, x + k * dim,
                         gpre_.data(), grad.hidden_weights.data() + off, nullptr);
      }
    }
    return sq;
  }

 private:
  SparseBilinear kernel_;
  std::size_t dim_;
  std::vector<double> pre_, post_, tmp_, out_, gout_, gpre_;
};

GradientBundle zero_gradient(const HMLPParams& p) {
  return {std::vector<double>(p.hidden_weights.size(), 0.0),
          std::vector<double>(p.hidden_biases.size(), 0.0),
          std::vector<double>(p.output_weights.size(), 0.0)};
}

void zero(GradientBundle& g) {
  std::fill(g.hidden_weights.begin(), g.hidden_weights.end(), 0.0);
  std::fill(g.hidden_biases.begin(), g.hidden_biases.end(), 0.0);
  std::fill(g.output_weights.begin(), g.output_weights.end(), 0.0);
}

void step(std::vector<double>& w, const std::vector<double>& g, double lr) {
  for (std::size_t k = 0; k < w.size(); ++k) w[k] -= lr * g[k];
}

}  // namespace

double loss_mse(const HMLPParams& params, const SampleSet& batch) {
  check_batch(params, batch);
  double total = 0.0;
  for (std::size_t s = 0; s < batch.size(); ++s) {
    const HNumber e = sub(forward(params, batch.input(s)), batch.target(s));
    const double a = abs(e);
    total += a * a;
  }
  return total / static_cast<double>(batch.size());
}

GradientBundle backward(const HMLPParams& params, const SampleSet& batch) {
  check_batch(params, batch);
  GradientBundle grad = zero_gradient(params);
  SampleGradient sg(params);
  const double scale = 1.0 / static_cast<double>(batch.size());
  for (std::size_t s = 0; s < batch.size(); ++s) {
    sg.accumulate(params, batch.input(s).data(), batch.target(s).data(), scale,
                  grad);
  }
  return grad;
}

HMLPParams init(const Algebra& algebra, std::size_t inputs, std::size_t hidden,
                SplitActivation activation, std::uint64_t seed) {
  HMLPParams p(algebra, inputs, hidden, activation);
  p.seed = seed;
  const double bound =
      1.0 / std::sqrt(static_cast<double>(inputs * algebra.dim()));
  auto rng = detail::make_rng(seed, detail::Stream::Init);
  for (auto* v : {&p.hidden_weights, &p.hidden_biases, &p.output_weights}) {
    for (double& w : *v) w = detail::uniform(rng, -bound, bound);
  }
  return p;
}

TrainResult train_sgd(HMLPParams params, const SampleSet& data,
                      const TrainOptions& options) {
  check_batch(params, data);
  if (options.epochs == 0) {
    throw Error(ErrorKind::InvalidArgument, "training needs at least one epoch");
  }
  if (options.batch_size == 0) {
    throw Error(ErrorKind::InvalidArgument, "batch size must be positive");
  }
  if (!(options.learning_rate >= 0.0) || !std::isfinite(options.learning_rate)) {
    throw Error(ErrorKind::InvalidArgument,
                "learning rate must be finite and non-negative");
  }

  const std::size_t count = data.size();
  std::vector<std::size_t> order(count);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::vector<double> sample_loss(count, 0.0);
  auto rng = detail::make_rng(options.seed, detail::Stream::Shuffle);

  SampleGradient sg(params);
  GradientBundle grad = zero_gradient(params);
  TrainResult result;
  result.loss_trace.reserve(options.epochs);

  for (std::size_t epoch = 1; epoch <= options.epochs; ++epoch) {
    detail::shuffle(order, rng);
    for (std::size_t start = 0; start < count; start += options.batch_size) {
      const std::size_t end = std::min(count, start + options.batch_size);
      const double scale = 1.0 / static_cast<double>(end - start);
      zero(grad);
      for (std::size_t b = start; b < end; ++b) {
        const std::size_t s = order[b];
        sample_loss[s] = sg.accumulate(params, data.input(s).data(),
                                       data.target(s).data(), scale, grad);
      }
      step(params.hidden_weights, grad.hidden_weights, options.learning_rate);
      step(params.hidden_biases, grad.hidden_biases, options.learning_rate);
      step(params.output_weights, grad.output_weights, options.learning_rate);
    }
    // Summed in sample order so the value does not depend on the shuffle.
    double total = 0.0;
    for (double l : sample_loss) total += l;
    const double mean = total / static_cast<double>(count);
    if (!std::isfinite(mean)) {
      throw DivergenceError(epoch, std::move(result.loss_trace));
    }
    result.loss_trace.push_back(mean);
  }
  result.params = std::move(params);
  return result;
}

}  // namespace hxnn
