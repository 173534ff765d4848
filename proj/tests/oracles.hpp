#pragma once

// Reference implementations that share no code with the library paths they
// check: the product through explicit bilinear-form matrices built from the
// structure constants, a plain scalar perceptron, and central differences.

#include "hxnn/algebra.hpp"
#include "hxnn/hmlp.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

namespace hxnn::oracle {

using Matrix = std::vector<std::vector<double>>;

inline std::vector<Matrix> form_matrices(const Algebra& alg) {
  const std::size_t d = alg.dim();
  std::vector<Matrix> b(d, Matrix(d, std::vector<double>(d, 0.0)));
  b[0][0][0] = 1.0;
  for (std::size_t j = 1; j < d; ++j) b[j][0][j] = b[j][j][0] = 1.0;
  for (std::size_t j = 0; j < d; ++j)
    for (std::size_t a = 1; a < d; ++a)
      for (std::size_t c = 1; c < d; ++c) b[j][a][c] = alg.constants().at(a, c, j);
  return b;
}

inline std::vector<double> product(const std::vector<Matrix>& b, const double* x,
                                   const double* y) {
  const std::size_t d = b.size();
  std::vector<double> out(d, 0.0);
  for (std::size_t j = 0; j < d; ++j) {
    double acc = 0.0;
    for (std::size_t r = 0; r < d; ++r) {
      double row = 0.0;
      for (std::size_t c = 0; c < d; ++c) row += b[j][r][c] * y[c];
      acc += x[r] * row;
    }
    out[j] = acc;
  }
  return out;
}

/// Network output with every product routed through the form matrices.
inline std::vector<double> flat_forward(const HMLPParams& p, std::span<const double> x) {
  const auto b = form_matrices(p.algebra());
  const std::size_t d = p.dim();
  std::vector<double> out(d, 0.0);
  for (std::size_t i = 0; i < p.hidden(); ++i) {
    std::vector<double> s(p.hidden_bias(i).begin(), p.hidden_bias(i).end());
    for (std::size_t k = 0; k < p.inputs(); ++k) {
      const auto yx = product(b, p.hidden_weight(i, k).data(), x.data() + k * d);
      for (std::size_t c = 0; c < d; ++c) s[c] += yx[c];
    }
    for (auto& v : s) {
      v = p.activation().kind == ActivationKind::SplitReLU ? std::max(v, 0.0)
                                                           : 1.0 / (1.0 + std::exp(-v));
    }
    const auto ah = product(b, p.output_weight(i).data(), s.data());
    for (std::size_t c = 0; c < d; ++c) out[c] += ah[c];
  }
  return out;
}

/// Textbook one-hidden-layer real perceptron.
struct ScalarMLP {
  std::size_t inputs = 0;
  std::size_t hidden = 0;
  bool relu = false;
  std::vector<std::vector<double>> w;  // [i][k]
  std::vector<double> theta;
  std::vector<double> alpha;

  double act(double v) const { return relu ? (v > 0 ? v : 0.0) : 1.0 / (1.0 + std::exp(-v)); }
  double dact(double v) const {
    if (relu) return v > 0 ? 1.0 : 0.0;
    const double s = act(v);
    return s * (1.0 - s);
  }

  double output(const std::vector<double>& x) const {
    double o = 0.0;
    for (std::size_t i = 0; i < hidden; ++i) {
      double z = theta[i];
      for (std::size_t k = 0; k < inputs; ++k) z += w[i][k] * x[k];
      o += alpha[i] * act(z);
    }
    return o;
  }

  double loss(const std::vector<std::vector<double>>& xs, const std::vector<double>& ts) const {
    double l = 0.0;
    for (std::size_t s = 0; s < xs.size(); ++s) {
      const double e = output(xs[s]) - ts[s];
      l += e * e;
    }
    return l / static_cast<double>(xs.size());
  }

  struct Grad {
    std::vector<std::vector<double>> w;
    std::vector<double> theta, alpha;
  };

  Grad gradient(const std::vector<std::vector<double>>& xs, const std::vector<double>& ts) const {
    Grad g{std::vector<std::vector<double>>(hidden, std::vector<double>(inputs, 0.0)),
           std::vector<double>(hidden, 0.0), std::vector<double>(hidden, 0.0)};
    const double n = static_cast<double>(xs.size());
    for (std::size_t s = 0; s < xs.size(); ++s) {
      const double e = output(xs[s]) - ts[s];
      for (std::size_t i = 0; i < hidden; ++i) {
        double z = theta[i];
        for (std::size_t k = 0; k < inputs; ++k) z += w[i][k] * xs[s][k];
        g.alpha[i] += 2.0 * e * act(z) / n;
        const double dz = 2.0 * e * alpha[i] * dact(z) / n;
        g.theta[i] += dz;
        for (std::size_t k = 0; k < inputs; ++k) g.w[i][k] += dz * xs[s][k];
      }
    }
    return g;
  }
};

/// Central difference of f with respect to v[idx].
inline double central_difference(std::vector<double>& v, std::size_t idx, double h,
                                 const std::function<double()>& f) {
  const double saved = v[idx];
  v[idx] = saved + h;
  const double up = f();
  v[idx] = saved - h;
  const double down = f();
  v[idx] = saved;
  return (up - down) / (2.0 * h);
}

inline bool close(double analytic, double numeric, double rel, double floor) {
  const double diff = std::fabs(analytic - numeric);
  return diff <= floor || diff <= rel * std::max(std::fabs(analytic), std::fabs(numeric));
}

struct GradCheck {
  std::size_t checked = 0;
  std::size_t failed = 0;
  double worst_rel = 0.0;
  double worst_abs = 0.0;
};

/// Compares backward() against central differences of loss_mse for every
/// trainable coefficient.
inline GradCheck check_gradient(HMLPParams p, const SampleSet& batch, double h = 1e-6,
                                double rel = 1e-5, double floor = 1e-8) {
  const GradientBundle g = backward(p, batch);
  GradCheck out;
  auto run = [&](std::vector<double>& values, const std::vector<double>& analytic) {
    for (std::size_t k = 0; k < values.size(); ++k) {
      const double num = central_difference(values, k, h, [&] { return loss_mse(p, batch); });
      ++out.checked;
      const double diff = std::fabs(analytic[k] - num);
      const double scale = std::max(std::fabs(analytic[k]), std::fabs(num));
      out.worst_abs = std::max(out.worst_abs, diff);
      if (scale > 0.0) out.worst_rel = std::max(out.worst_rel, diff / scale);
      if (!close(analytic[k], num, rel, floor)) ++out.failed;
    }
  };
  run(p.hidden_weights, g.hidden_weights);
  run(p.hidden_biases, g.hidden_biases);
  run(p.output_weights, g.output_weights);
  return out;
}

}  // namespace hxnn::oracle
