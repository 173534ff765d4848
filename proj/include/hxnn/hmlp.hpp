#pragma once

// Single-hidden-layer hypercomplex perceptron
//
//   out(x) = sum_i alpha_i * psi(sum_k y_ik * x_k + theta_i)
//
// with weights multiplied on the left and psi applied coefficient-wise.

#include "hxnn/algebra.hpp"
#include "hxnn/bilinear.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace hxnn {

enum class ActivationKind { SplitSigmoid, SplitReLU };

struct SplitActivation {
  ActivationKind kind = ActivationKind::SplitSigmoid;

  double apply(double v) const noexcept;
  /// Derivative expressed through the input and the activation output.
  /// ReLU uses 0 at the kink.
  double derivative(double input, double output) const noexcept;
};

/// "sigmoid" / "relu".
std::string_view to_string(ActivationKind kind);
ActivationKind parse_activation(std::string_view name);

HNumber split_apply(SplitActivation act, std::span<const double> x);

/// Flat sample storage: `count` rows of `inputs` hypercomplex inputs and one
/// hypercomplex target, coefficients contiguous.
struct SampleSet {
  std::size_t inputs = 0;
  std::size_t dim = 0;
  std::vector<double> x;  // count * inputs * dim
  std::vector<double> t;  // count * dim

  std::size_t size() const noexcept { return dim ? t.size() / dim : 0; }
  std::span<const double> input(std::size_t s) const {
    return {x.data() + s * inputs * dim, inputs * dim};
  }
  std::span<const double> target(std::size_t s) const {
    return {t.data() + s * dim, dim};
  }
  void push_back(std::span<const double> in, std::span<const double> target);
};

class HMLPParams {
 public:
  HMLPParams() = default;
  /// Zero-initialised network; throws InvalidArgument for N or M of zero.
  HMLPParams(Algebra algebra, std::size_t inputs, std::size_t hidden,
             SplitActivation activation);

  const Algebra& algebra() const noexcept { return algebra_; }
  std::size_t dim() const noexcept { return algebra_.dim(); }
  std::size_t inputs() const noexcept { return inputs_; }
  std::size_t hidden() const noexcept { return hidden_; }
  SplitActivation activation() const noexcept { return activation_; }

  std::span<double> hidden_weight(std::size_t i, std::size_t k) {
    return {hidden_weights.data() + (i * inputs_ + k) * dim(), dim()};
  }
  std::span<const double> hidden_weight(std::size_t i, std::size_t k) const {
    return {hidden_weights.data() + (i * inputs_ + k) * dim(), dim()};
  }
  std::span<double> hidden_bias(std::size_t i) {
    return {hidden_biases.data() + i * dim(), dim()};
  }
  std::span<const double> hidden_bias(std::size_t i) const {
    return {hidden_biases.data() + i * dim(), dim()};
  }
  std::span<double> output_weight(std::size_t i) {
    return {output_weights.data() + i * dim(), dim()};
  }
  std::span<const double> output_weight(std::size_t i) const {
    return {output_weights.data() + i * dim(), dim()};
  }

  /// y_ik, row-major over (i, k, coefficient).
  std::vector<double> hidden_weights;
  /// theta_i.
  std::vector<double> hidden_biases;
  /// alpha_i.
  std::vector<double> output_weights;
  std::uint64_t seed = 0;

 private:
  Algebra algebra_;
  std::size_t inputs_ = 0;
  std::size_t hidden_ = 0;
  SplitActivation activation_;
};

/// dL/d(param) for every trainable coefficient, laid out like HMLPParams.
struct GradientBundle {
  std::vector<double> hidden_weights;
  std::vector<double> hidden_biases;
  std::vector<double> output_weights;
};

/// `x` holds N hypercomplex inputs back to back (N * dim coefficients).
HNumber forward(const HMLPParams& params, std::span<const double> x);
HNumber forward(const HMLPParams& params, std::span<const HNumber> x);

/// Mean over the batch of |out(x) - t|^2. Throws InvalidArgument when empty.
double loss_mse(const HMLPParams& params, const SampleSet& batch);

/// Exact gradient of loss_mse.
GradientBundle backward(const HMLPParams& params, const SampleSet& batch);

/// Uniform in +-1/sqrt(N * dim) for every coefficient, drawn in the order
/// hidden weights, hidden biases, output weights.
HMLPParams init(const Algebra& algebra, std::size_t inputs, std::size_t hidden,
                SplitActivation activation, std::uint64_t seed);

struct TrainOptions {
  std::size_t epochs = 1;
  std::size_t batch_size = 32;
  double learning_rate = 0.01;
  std::uint64_t seed = 0;
};

struct TrainResult {
  HMLPParams params;
  /// Mean per-sample loss of each epoch, measured before each batch update.
  std::vector<double> loss_trace;
};

/// Plain mini-batch gradient descent with a per-epoch seeded shuffle.
/// Throws DivergenceError when an epoch produces a non-finite loss.
TrainResult train_sgd(HMLPParams params, const SampleSet& data,
                      const TrainOptions& options);

/// Text checkpoint. The algebra is stored by zoo name when the name
/// resolves to identical constants, inline otherwise; coefficients are
/// written as hexadecimal floats.
std::string save_checkpoint(const HMLPParams& params);
HMLPParams load_checkpoint(std::string_view text);

}  // namespace hxnn
