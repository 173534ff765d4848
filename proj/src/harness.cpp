#include "hxnn/harness.hpp"

#include "hxnn/error.hpp"
#include "hxnn/zoo.hpp"
#include "random.hpp"

#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <thread>

namespace hxnn {

std::string_view to_string(TargetKind kind) {
  switch (kind) {
    case TargetKind::Square: return "square";
    case TargetKind::ProductPair: return "product-pair";
    case TargetKind::SplitSin: return "split-sin";
    case TargetKind::Affine: return "affine";
  }
  return "square";
}

TargetKind parse_target(std::string_view name) {
  if (name == "square") return TargetKind::Square;
  if (name == "product-pair") return TargetKind::ProductPair;
  if (name == "split-sin") return TargetKind::SplitSin;
  if (name == "affine") return TargetKind::Affine;
  throw Error(ErrorKind::InvalidArgument, "unknown target '" + std::string(name) + "'");
}

HNumber TargetFunction::evaluate(const Algebra& alg, std::size_t inputs,
                                 std::span<const double> x) const {
  const std::size_t dim = alg.dim();
  if (x.size() != inputs * dim) {
    throw DimensionError("target: expected " + std::to_string(inputs * dim) +
                         " coefficients, got " + std::to_string(x.size()));
  }
  auto in = [&](std::size_t k) { return x.subspan(k * dim, dim); };
  HNumber out(dim);
  switch (kind) {
    case TargetKind::Square:
      for (std::size_t k = 0; k < inputs; ++k) {
        out = add(out, mul_direct(alg, in(k), in(k)));
      }
      break;
    case TargetKind::ProductPair:
      if (inputs != 2) {
        throw Error(ErrorKind::InvalidArgument, "product-pair target needs N = 2");
      }
      out = mul_direct(alg, in(0), in(1));
      break;
    case TargetKind::SplitSin:
      for (std::size_t k = 0; k < inputs; ++k) out = add(out, in(k));
      for (double& c : out.coeffs) c = std::sin(c);
      break;
    case TargetKind::Affine: {
      const HNumber ca = a.size() ? a : embed(1.0, dim);
      const HNumber cb = b.size() ? b : HNumber(dim);
      if (ca.size() != dim || cb.size() != dim) {
        throw DimensionError("affine coefficients do not match the algebra");
      }
      for (std::size_t k = 0; k < inputs; ++k) {
        out = add(out, mul_direct(alg, ca, in(k)));
      }
      out = add(out, cb);
      break;
    }
  }
  return out;
}

void ExperimentConfig::validate() const {
  auto bad = [](const std::string& m) { throw Error(ErrorKind::InvalidArgument, m); };
  if (inputs == 0) bad("N must be at least 1");
  if (hidden == 0) bad("M must be at least 1");
  if (samples == 0) bad("samples must be at least 1");
  if (!(box.lo < box.hi) || !std::isfinite(box.lo) || !std::isfinite(box.hi)) {
    bad("box must satisfy lo < hi");
  }
  if (batch_size == 0) bad("batch_size must be at least 1");
  if (!(learning_rate >= 0.0) || !std::isfinite(learning_rate)) {
    bad("learning_rate must be finite and non-negative");
  }
  if (target.kind == TargetKind::ProductPair && inputs != 2) {
    bad("product-pair target needs N = 2");
  }
  if (target.kind == TargetKind::Affine) {
    if ((target.a.size() && target.a.size() != algebra.dim()) ||
        (target.b.size() && target.b.size() != algebra.dim())) {
      bad("affine coefficients must have " + std::to_string(algebra.dim()) + " entries");
    }
  }
  if (grid_points == 1) bad("grid_points must be 0 or at least 2");
  if (grid_points > 0 && (inputs != 1 || algebra.dim() > 2)) {
    bad("a dense grid is only available for N = 1 and dimension <= 2");
  }
}

// ---------------------------------------------------------------------------
// Config files

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_ws(std::string_view s) {
  std::vector<std::string> out;
  std::istringstream in{std::string(s)};
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

template <typename T>
T parse_number(const std::string& s, std::size_t line) {
  T v{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw ParseError(line, "malformed number '" + s + "'");
  }
  return v;
}

HNumber parse_coeffs(const std::string& s, std::size_t line) {
  HNumber out;
  for (const auto& tok : split_ws(s)) out.coeffs.push_back(parse_number<double>(tok, line));
  return out;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot read '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string join_coeffs(const HNumber& h) {
  std::string s;
  for (std::size_t k = 0; k < h.size(); ++k) {
    if (k) s += ' ';
    s += format_double(h[k]);
  }
  return s;
}

}  // namespace

ExperimentConfig parse_config(std::string_view text,
                              const std::filesystem::path& base_dir) {
  ExperimentConfig cfg;
  std::map<std::string, std::pair<std::string, std::size_t>> kv;
  std::size_t line_no = 0;
  std::istringstream in{std::string(text)};
  std::string raw;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = trim(raw);
    if (line.empty() || line[0] == '#') continue;
    const auto colon = line.find(':');
    if (colon == std::string::npos) throw ParseError(line_no, "expected 'key: value'");
    const std::string key = trim(line.substr(0, colon));
    if (!kv.emplace(key, std::pair{trim(line.substr(colon + 1)), line_no}).second) {
      throw ParseError(line_no, "duplicate key '" + key + "'");
    }
  }

  auto take = [&](const char* key) -> std::optional<std::pair<std::string, std::size_t>> {
    const auto it = kv.find(key);
    if (it == kv.end()) return std::nullopt;
    auto v = it->second;
    kv.erase(it);
    return v;
  };
  auto rethrow_at = [](std::size_t line, auto&& fn) {
    try {
      fn();
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      throw ParseError(line, e.what());
    }
  };

  const auto alg = take("algebra");
  if (!alg) throw ParseError(0, "missing 'algebra:'");
  cfg.algebra_source = alg->first;
  rethrow_at(alg->second, [&] {
    if (zoo::is_zoo_name(alg->first)) {
      cfg.algebra = zoo::resolve(alg->first);
    } else {
      std::filesystem::path p(alg->first);
      if (p.is_relative()) p = base_dir / p;
      const std::string spec = read_file(p);
      try {
        cfg.algebra = parse_algebra(spec);
      } catch (const ParseError& e) {
        throw ParseError(alg->second, p.string() + ": " + e.what());
      }
    }
  });

  const auto target = take("target");
  if (!target) throw ParseError(0, "missing 'target:'");
  rethrow_at(target->second, [&] { cfg.target.kind = parse_target(target->first); });

  if (auto v = take("N")) cfg.inputs = parse_number<std::size_t>(v->first, v->second);
  if (auto v = take("M")) cfg.hidden = parse_number<std::size_t>(v->first, v->second);
  if (auto v = take("activation")) {
    rethrow_at(v->second, [&] { cfg.activation.kind = parse_activation(v->first); });
  }
  if (auto v = take("samples")) cfg.samples = parse_number<std::size_t>(v->first, v->second);
  if (auto v = take("box")) {
    const auto parts = split_ws(v->first);
    if (parts.size() != 2) throw ParseError(v->second, "box needs '<lo> <hi>'");
    cfg.box.lo = parse_number<double>(parts[0], v->second);
    cfg.box.hi = parse_number<double>(parts[1], v->second);
  }
  if (auto v = take("epochs")) cfg.epochs = parse_number<std::size_t>(v->first, v->second);
  if (auto v = take("batch_size")) cfg.batch_size = parse_number<std::size_t>(v->first, v->second);
  if (auto v = take("learning_rate")) cfg.learning_rate = parse_number<double>(v->first, v->second);
  if (auto v = take("seed")) cfg.seed = parse_number<std::uint64_t>(v->first, v->second);
  if (auto v = take("grid_points")) cfg.grid_points = parse_number<std::size_t>(v->first, v->second);
  if (auto v = take("affine_a")) cfg.target.a = parse_coeffs(v->first, v->second);
  if (auto v = take("affine_b")) cfg.target.b = parse_coeffs(v->first, v->second);

  if (!kv.empty()) {
    const auto& [key, val] = *kv.begin();
    throw ParseError(val.second, "unknown key '" + key + "'");
  }
  rethrow_at(0, [&] { cfg.validate(); });
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  try {
    return parse_config(text, path.parent_path());
  } catch (const ParseError& e) {
    throw ParseError(0, path.string() + ": " + e.what());
  }
}

std::string serialize_config(const ExperimentConfig& cfg) {
  std::ostringstream out;
  out << "algebra: " << cfg.algebra_source << '\n'
      << "target: " << to_string(cfg.target.kind) << '\n'
      << "N: " << cfg.inputs << '\n'
      << "M: " << cfg.hidden << '\n'
      << "activation: " << to_string(cfg.activation.kind) << '\n'
      << "samples: " << cfg.samples << '\n'
      << "box: " << format_double(cfg.box.lo) << ' ' << format_double(cfg.box.hi) << '\n'
      << "epochs: " << cfg.epochs << '\n'
      << "batch_size: " << cfg.batch_size << '\n'
      << "learning_rate: " << format_double(cfg.learning_rate) << '\n'
      << "seed: " << cfg.seed << '\n';
  if (cfg.grid_points) out << "grid_points: " << cfg.grid_points << '\n';
  if (cfg.target.a.size()) out << "affine_a: " << join_coeffs(cfg.target.a) << '\n';
  if (cfg.target.b.size()) out << "affine_b: " << join_coeffs(cfg.target.b) << '\n';
  return out.str();
}

std::string config_hash(const ExperimentConfig& cfg) {
  const std::string text = serialize_config(cfg) + serialize_algebra(cfg.algebra);
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

// ---------------------------------------------------------------------------
// Data

Dataset generate_dataset(const ExperimentConfig& cfg, DataSplit split) {
  cfg.validate();
  Dataset ds;
  ds.algebra = cfg.algebra;
  ds.inputs = cfg.inputs;
  ds.box = cfg.box;
  ds.seed = cfg.seed;
  ds.samples.inputs = cfg.inputs;
  ds.samples.dim = cfg.algebra.dim();
  auto rng = detail::make_rng(cfg.seed, split == DataSplit::Train
                                            ? detail::Stream::TrainData
                                            : detail::Stream::Holdout);
  std::vector<double> x(cfg.inputs * cfg.algebra.dim());
  for (std::size_t s = 0; s < cfg.samples; ++s) {
    for (double& c : x) c = detail::uniform(rng, cfg.box.lo, cfg.box.hi);
    const HNumber t = cfg.target.evaluate(cfg.algebra, cfg.inputs, x);
    ds.samples.push_back(x, t);
  }
  return ds;
}

SampleSet grid_samples(const ExperimentConfig& cfg) {
  cfg.validate();
  if (cfg.grid_points == 0) {
    throw Error(ErrorKind::InvalidArgument, "grid_points is not set");
  }
  const std::size_t dim = cfg.algebra.dim();
  const std::size_t g = cfg.grid_points;
  SampleSet out;
  out.inputs = 1;
  out.dim = dim;
  auto coord = [&](std::size_t k) {
    return cfg.box.lo + (cfg.box.hi - cfg.box.lo) * static_cast<double>(k) /
                            static_cast<double>(g - 1);
  };
  std::vector<double> x(dim);
  std::size_t total = 1;
  for (std::size_t c = 0; c < dim; ++c) total *= g;
  for (std::size_t idx = 0; idx < total; ++idx) {
    std::size_t rest = idx;
    for (std::size_t c = 0; c < dim; ++c) {
      x[c] = coord(rest % g);
      rest /= g;
    }
    out.push_back(x, cfg.target.evaluate(cfg.algebra, 1, x));
  }
  return out;
}

Evaluation evaluate(const HMLPParams& params, const SampleSet& samples) {
  if (samples.size() == 0) throw Error(ErrorKind::InvalidArgument, "empty sample set");
  Evaluation ev;
  ev.samples = samples.size();
  double total = 0.0;
  for (std::size_t s = 0; s < samples.size(); ++s) {
    const double err = abs(sub(forward(params, samples.input(s)), samples.target(s)));
    total += err * err;
    if (s == 0 || err > ev.sup_error) {
      ev.sup_error = err;
      ev.sup_index = s;
    }
  }
  ev.mse = total / static_cast<double>(samples.size());
  return ev;
}

Evaluation evaluate(const HMLPParams& params, const ExperimentConfig& cfg) {
  const Dataset holdout = generate_dataset(cfg, DataSplit::Holdout);
  Evaluation ev = evaluate(params, holdout.samples);
  if (cfg.grid_points) {
    const Evaluation grid = evaluate(params, grid_samples(cfg));
    ev.sup_error = grid.sup_error;
    ev.sup_index = grid.sup_index;
  }
  return ev;
}

// ---------------------------------------------------------------------------
// Runs

RunReport report_for(const ExperimentConfig& cfg) {
  RunReport r;
  r.config_hash = config_hash(cfg);
  r.algebra = cfg.algebra.name();
  r.target = std::string(to_string(cfg.target.kind));
  r.inputs = cfg.inputs;
  r.hidden = cfg.hidden;
  r.activation = std::string(to_string(cfg.activation.kind));
  r.seed = cfg.seed;
  r.epochs = cfg.epochs;
  return r;
}

RunOutcome run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const auto t0 = std::chrono::steady_clock::now();
  RunOutcome out;
  out.report = report_for(cfg);
  RunReport& r = out.report;

  const Dataset train = generate_dataset(cfg, DataSplit::Train);
  out.params = init(cfg.algebra, cfg.inputs, cfg.hidden, cfg.activation, cfg.seed);
  r.initial_loss = loss_mse(out.params, train.samples);

  if (cfg.epochs > 0) {
    TrainResult tr = train_sgd(std::move(out.params), train.samples,
                               {cfg.epochs, cfg.batch_size, cfg.learning_rate, cfg.seed});
    out.params = std::move(tr.params);
    r.loss_trace = std::move(tr.loss_trace);
    r.train_mse = loss_mse(out.params, train.samples);
  } else {
    r.train_mse = r.initial_loss;
  }

  const Evaluation ev = evaluate(out.params, cfg);
  r.holdout_mse = ev.mse;
  r.sup_error = ev.sup_error;
  r.sup_index = ev.sup_index;
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

std::vector<RunReport> sweep(const std::vector<ExperimentConfig>& cfgs,
                             unsigned threads) {
  if (cfgs.empty()) throw Error(ErrorKind::InvalidArgument, "sweep needs at least one config");
  std::vector<RunReport> rows(cfgs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < cfgs.size(); i = next++) {
      try {
        rows[i] = run_experiment(cfgs[i]).report;
      } catch (const DivergenceError& e) {
        rows[i] = report_for(cfgs[i]);
        rows[i].loss_trace = e.partial_trace();
        rows[i].error = e.what();
      } catch (const std::exception& e) {
        rows[i] = report_for(cfgs[i]);
        rows[i].error = e.what();
      }
    }
  };
  const unsigned n = std::max(1u, std::min<unsigned>(threads, cfgs.size()));
  if (n == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < n; ++t) pool.emplace_back(worker);
  }
  return rows;
}

// ---------------------------------------------------------------------------
// Rendering

std::string render_text(const RunReport& r) {
  std::ostringstream out;
  out << "config " << r.config_hash << "\n"
      << "algebra " << r.algebra << ", target " << r.target << ", N=" << r.inputs
      << ", M=" << r.hidden << ", activation " << r.activation << "\n"
      << "seed " << r.seed << ", epochs " << r.epochs << "\n";
  if (!r.error.empty()) {
    out << "error: " << r.error << "\n";
    if (!r.loss_trace.empty()) {
      out << "last finite loss " << format_double(r.loss_trace.back()) << " after "
          << r.loss_trace.size() << " epochs\n";
    }
    return out.str();
  }
  out << "initial loss  " << format_double(r.initial_loss) << "\n"
      << "train mse     " << format_double(r.train_mse) << "\n"
      << "holdout mse   " << format_double(r.holdout_mse) << "\n"
      << "sup error     " << format_double(r.sup_error) << " (sample " << r.sup_index << ")\n"
      << "seconds       " << r.seconds << "\n";
  return out.str();
}

std::string render_machine(const RunReport& r) {
  std::ostringstream out;
  out << "config_hash " << r.config_hash << "\n"
      << "algebra " << r.algebra << "\n"
      << "target " << r.target << "\n"
      << "N " << r.inputs << "\n"
      << "M " << r.hidden << "\n"
      << "activation " << r.activation << "\n"
      << "seed " << r.seed << "\n"
      << "epochs " << r.epochs << "\n"
      << "status " << (r.error.empty() ? "ok" : "error") << "\n";
  if (!r.error.empty()) out << "error " << r.error << "\n";
  out << "initial_loss " << format_double(r.initial_loss) << "\n"
      << "train_mse " << format_double(r.train_mse) << "\n"
      << "holdout_mse " << format_double(r.holdout_mse) << "\n"
      << "sup_error " << format_double(r.sup_error) << "\n"
      << "sup_index " << r.sup_index << "\n"
      << "loss_trace";
  for (double v : r.loss_trace) out << ' ' << format_double(v);
  out << "\n";
  return out.str();
}

std::string csv_header() {
  return "config_hash,algebra,target,M,activation,train_mse,holdout_mse,sup_error,"
         "seconds,seed,status\n";
}

std::string render_csv_row(const RunReport& r) {
  std::ostringstream out;
  std::string status = r.error.empty() ? "ok" : "error: " + r.error;
  for (char& c : status) {
    if (c == ',' || c == '"') c = ';';
  }
  char secs[32];
  std::snprintf(secs, sizeof secs, "%.3f", r.seconds);
  out << r.config_hash << ',' << r.algebra << ',' << r.target << ',' << r.hidden
      << ',' << r.activation << ',' << format_double(r.train_mse) << ','
      << format_double(r.holdout_mse) << ',' << format_double(r.sup_error) << ','
      << secs << ',' << r.seed << ',' << status << "\n";
  return out.str();
}

}  // namespace hxnn
