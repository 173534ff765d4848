#pragma once

// Approximation experiments: sample a compact box, fit a network with
// train_sgd, and measure the error on an independent held-out sample.

#include "hxnn/algebra.hpp"
#include "hxnn/hmlp.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace hxnn {

enum class TargetKind { Square, ProductPair, SplitSin, Affine };

std::string_view to_string(TargetKind kind);
TargetKind parse_target(std::string_view name);

/// Continuous target on H^N. With inputs x_1..x_N:
///   Square       sum_k x_k x_k
///   ProductPair  x_1 x_2 (N = 2 only)
///   SplitSin     sin applied coefficient-wise to sum_k x_k
///   Affine       sum_k a x_k + b
struct TargetFunction {
  TargetKind kind = TargetKind::Square;
  HNumber a;  // Affine only; empty means the real unit
  HNumber b;  // Affine only; empty means zero

  HNumber evaluate(const Algebra& alg, std::size_t inputs,
                   std::span<const double> x) const;
};

struct Box {
  double lo = -1.0;
  double hi = 1.0;
};

struct ExperimentConfig {
  std::string algebra_source = "real";
  Algebra algebra;
  TargetFunction target;
  std::size_t inputs = 1;
  std::size_t hidden = 8;
  SplitActivation activation;
  std::size_t samples = 256;
  Box box;
  std::size_t epochs = 100;
  std::size_t batch_size = 32;
  double learning_rate = 0.05;
  std::uint64_t seed = 0;
  /// Points per axis of a dense evaluation grid for the sup error; 0 uses
  /// the held-out sample. Only for N = 1 and dimension <= 2.
  std::size_t grid_points = 0;

  /// Throws InvalidArgument when fields are inconsistent.
  void validate() const;
};

/// `key: value` lines; '#' starts a comment line. The algebra is a zoo name
/// or a spec file path relative to `base_dir`.
ExperimentConfig parse_config(std::string_view text,
                              const std::filesystem::path& base_dir = {});
ExperimentConfig load_config(const std::filesystem::path& path);
std::string serialize_config(const ExperimentConfig& cfg);

/// FNV-1a over the serialized config and algebra, as 16 hex digits.
std::string config_hash(const ExperimentConfig& cfg);

enum class DataSplit { Train, Holdout };

struct Dataset {
  Algebra algebra;
  std::size_t inputs = 0;
  Box box;
  std::uint64_t seed = 0;
  SampleSet samples;
};

/// Inputs i.i.d. uniform per coefficient on the box; train and held-out
/// samples come from disjoint generator streams.
Dataset generate_dataset(const ExperimentConfig& cfg,
                         DataSplit split = DataSplit::Train);

/// Regular grid over the box for N = 1, dimension <= 2.
SampleSet grid_samples(const ExperimentConfig& cfg);

struct Evaluation {
  double mse = 0.0;
  double sup_error = 0.0;
  std::size_t sup_index = 0;
  std::size_t samples = 0;
};

Evaluation evaluate(const HMLPParams& params, const SampleSet& samples);

/// Held-out evaluation; the sup error comes from the grid when configured.
Evaluation evaluate(const HMLPParams& params, const ExperimentConfig& cfg);

struct RunReport {
  std::string config_hash;
  std::string algebra;
  std::string target;
  std::size_t inputs = 0;
  std::size_t hidden = 0;
  std::string activation;
  std::uint64_t seed = 0;
  std::size_t epochs = 0;
  double initial_loss = 0.0;
  double train_mse = 0.0;
  double holdout_mse = 0.0;
  double sup_error = 0.0;
  std::size_t sup_index = 0;
  double seconds = 0.0;
  std::vector<double> loss_trace;
  /// Empty on success.
  std::string error;
};

/// Report with the config fields filled in and no results.
RunReport report_for(const ExperimentConfig& cfg);

struct RunOutcome {
  RunReport report;
  HMLPParams params;
};

/// init -> train_sgd -> held-out evaluation. Rethrows DivergenceError with
/// the partial loss trace.
RunOutcome run_experiment(const ExperimentConfig& cfg);

/// Runs every config, up to `threads` at a time; rows keep input order and
/// failures are recorded in the row's error field.
std::vector<RunReport> sweep(const std::vector<ExperimentConfig>& cfgs,
                             unsigned threads = 1);

std::string render_text(const RunReport& r);
/// Stable across runs: everything except wall-clock time.
std::string render_machine(const RunReport& r);
std::string csv_header();
std::string render_csv_row(const RunReport& r);

}  // namespace hxnn
