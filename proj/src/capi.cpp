#include "hxnn/hxnn.h"

#include "hxnn/bilinear.hpp"
#include "hxnn/error.hpp"
#include "hxnn/harness.hpp"
#include "hxnn/hmlp.hpp"
#include "hxnn/zoo.hpp"

#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

struct hxnn_algebra {
  hxnn::Algebra value;
};
struct hxnn_config {
  hxnn::ExperimentConfig value;
};
struct hxnn_model {
  hxnn::HMLPParams value;
};
struct hxnn_report {
  hxnn::RunReport value;
};

namespace {

thread_local std::string g_last_error;

hxnn_status status_of(hxnn::ErrorKind kind) {
  switch (kind) {
    case hxnn::ErrorKind::Dimension: return HXNN_E_DIMENSION;
    case hxnn::ErrorKind::Parse: return HXNN_E_PARSE;
    case hxnn::ErrorKind::InvalidArgument: return HXNN_E_ARGUMENT;
    case hxnn::ErrorKind::NotFound: return HXNN_E_NOT_FOUND;
    case hxnn::ErrorKind::Io: return HXNN_E_IO;
    case hxnn::ErrorKind::Divergence: return HXNN_E_DIVERGENCE;
  }
  return HXNN_E_INTERNAL;
}

// Runs fn, translating exceptions into status codes and g_last_error.
template <typename Fn>
hxnn_status guarded(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return HXNN_OK;
  } catch (const hxnn::Error& e) {
    g_last_error = e.what();
    return status_of(e.kind());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return HXNN_E_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return HXNN_E_INTERNAL;
  }
}

void require(const void* p, const char* what) {
  if (!p) {
    throw hxnn::Error(hxnn::ErrorKind::InvalidArgument,
                      std::string(what) + " must not be null");
  }
}

char* dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

std::string read_file(const char* path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw hxnn::Error(hxnn::ErrorKind::Io, std::string("cannot read '") + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string coefficient(const hxnn::StructureConstants& sc, std::size_t a,
                        std::size_t b, std::size_t g) {
  return sc.has_exact() ? hxnn::format_rational(sc.exact_at(a, b, g))
                        : hxnn::format_double(sc.at(a, b, g));
}

// i_a i_b as a readable linear combination, e.g. "-k" or "1/2 + 3 i".
std::string product_string(const hxnn::Algebra& alg, std::size_t a, std::size_t b) {
  const auto& sc = alg.constants();
  std::string out;
  for (std::size_t g = 0; g < alg.dim(); ++g) {
    if (sc.at(a, b, g) == 0.0) continue;
    std::string c = coefficient(sc, a, b, g);
    const bool neg = c[0] == '-';
    if (neg) c.erase(0, 1);
    std::string term;
    if (g == 0) {
      term = c;
    } else {
      term = (c == "1" || c == "1.0") ? alg.basis_label(g) : c + " " + alg.basis_label(g);
    }
    if (out.empty()) {
      out = neg ? "-" + term : term;
    } else {
      out += neg ? " - " + term : " + " + term;
    }
  }
  return out.empty() ? "0" : out;
}

std::string describe(const hxnn::Algebra& alg) {
  std::ostringstream out;
  out << "algebra " << alg.name() << "\n"
      << "dimension " << alg.dim() << "\n"
      << "units";
  for (const auto& l : alg.unit_labels()) out << ' ' << l;
  out << "\n"
      << "constants " << (alg.constants().has_exact() ? "exact" : "float") << "\n";
  for (std::size_t a = 1; a <= alg.units(); ++a) {
    for (std::size_t b = 1; b <= alg.units(); ++b) {
      out << "  " << alg.basis_label(a) << " * " << alg.basis_label(b) << " = "
          << product_string(alg, a, b) << "\n";
    }
  }
  return out.str();
}

std::string render_evaluation(const hxnn::Evaluation& ev, std::uint64_t seed,
                              hxnn_format format) {
  std::ostringstream out;
  using hxnn::format_double;
  switch (format) {
    case HXNN_FORMAT_CSV:
      out << "samples,mse,sup_error,sup_index,seed\n"
          << ev.samples << ',' << format_double(ev.mse) << ','
          << format_double(ev.sup_error) << ',' << ev.sup_index << ',' << seed << "\n";
      break;
    case HXNN_FORMAT_MACHINE:
      out << "samples " << ev.samples << "\n"
          << "mse " << format_double(ev.mse) << "\n"
          << "sup_error " << format_double(ev.sup_error) << "\n"
          << "sup_index " << ev.sup_index << "\n"
          << "seed " << seed << "\n";
      break;
    default:
      out << "samples    " << ev.samples << "\n"
          << "mse        " << format_double(ev.mse) << "\n"
          << "sup error  " << format_double(ev.sup_error) << " (sample "
          << ev.sup_index << ")\n"
          << "seed       " << seed << "\n";
  }
  return out.str();
}

std::string render_report(const hxnn::RunReport& r, hxnn_format format) {
  switch (format) {
    case HXNN_FORMAT_CSV: return hxnn::csv_header() + hxnn::render_csv_row(r);
    case HXNN_FORMAT_MACHINE: return hxnn::render_machine(r);
    default: return hxnn::render_text(r);
  }
}

}  // namespace

extern "C" {

const char* hxnn_last_error(void) { return g_last_error.c_str(); }

const char* hxnn_version(void) { return "1.0.0"; }

void hxnn_string_free(char* s) { std::free(s); }

hxnn_status hxnn_algebra_list(char** out) {
  return guarded([&] {
    require(out, "out");
    std::string s;
    for (const auto& n : hxnn::zoo::named_algebras()) s += n + "\n";
    s += "octonion\ncayley-dickson-<levels 0..5>\nclifford-<p>-<q>-<r>\n";
    *out = dup(s);
  });
}

hxnn_status hxnn_algebra_resolve(const char* source, hxnn_algebra** out) {
  return guarded([&] {
    require(source, "source");
    require(out, "out");
    *out = nullptr;
    if (hxnn::zoo::is_zoo_name(source)) {
      *out = new hxnn_algebra{hxnn::zoo::resolve(source)};
      return;
    }
    if (!std::filesystem::is_regular_file(source)) {
      throw hxnn::Error(hxnn::ErrorKind::NotFound,
                        std::string("unknown algebra or missing file '") + source + "'");
    }
    const std::string text = read_file(source);
    try {
      *out = new hxnn_algebra{hxnn::parse_algebra(text)};
    } catch (const hxnn::ParseError& e) {
      throw hxnn::ParseError(0, std::string(source) + ": " + e.what());
    }
  });
}

hxnn_status hxnn_algebra_parse(const char* text, hxnn_algebra** out) {
  return guarded([&] {
    require(text, "text");
    require(out, "out");
    *out = nullptr;
    *out = new hxnn_algebra{hxnn::parse_algebra(text)};
  });
}

void hxnn_algebra_free(hxnn_algebra* alg) { delete alg; }

size_t hxnn_algebra_dim(const hxnn_algebra* alg) { return alg ? alg->value.dim() : 0; }

hxnn_status hxnn_algebra_name(const hxnn_algebra* alg, char** out) {
  return guarded([&] {
    require(alg, "algebra");
    require(out, "out");
    *out = dup(alg->value.name());
  });
}

hxnn_status hxnn_algebra_serialize(const hxnn_algebra* alg, char** out) {
  return guarded([&] {
    require(alg, "algebra");
    require(out, "out");
    *out = dup(hxnn::serialize_algebra(alg->value));
  });
}

hxnn_status hxnn_algebra_describe(const hxnn_algebra* alg, char** out) {
  return guarded([&] {
    require(alg, "algebra");
    require(out, "out");
    *out = dup(describe(alg->value));
  });
}

hxnn_status hxnn_algebra_mul(const hxnn_algebra* alg, const double* a, const double* b,
                             double* out, size_t dim) {
  return guarded([&] {
    require(alg, "algebra");
    require(a, "a");
    require(b, "b");
    require(out, "out");
    hxnn::mul_direct_into(alg->value, {a, dim}, {b, dim}, {out, dim});
  });
}

hxnn_status hxnn_algebra_check(const hxnn_algebra* alg, hxnn_format format, char** out,
                               int* degenerate) {
  return guarded([&] {
    require(alg, "algebra");
    require(out, "out");
    const auto report = hxnn::check_degeneracy(alg->value);
    *out = dup(format == HXNN_FORMAT_MACHINE ? hxnn::render_machine(report)
                                             : hxnn::render_text(report));
    if (degenerate) *degenerate = report.verdict == hxnn::Verdict::Degenerate;
  });
}

hxnn_status hxnn_config_load(const char* path, hxnn_config** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = nullptr;
    *out = new hxnn_config{hxnn::load_config(path)};
  });
}

hxnn_status hxnn_config_parse(const char* text, const char* base_dir, hxnn_config** out) {
  return guarded([&] {
    require(text, "text");
    require(out, "out");
    *out = nullptr;
    *out = new hxnn_config{
        hxnn::parse_config(text, base_dir ? std::filesystem::path(base_dir)
                                          : std::filesystem::path())};
  });
}

void hxnn_config_free(hxnn_config* cfg) { delete cfg; }

void hxnn_config_set_seed(hxnn_config* cfg, uint64_t seed) {
  if (cfg) cfg->value.seed = seed;
}

uint64_t hxnn_config_seed(const hxnn_config* cfg) { return cfg ? cfg->value.seed : 0; }

hxnn_status hxnn_config_serialize(const hxnn_config* cfg, char** out) {
  return guarded([&] {
    require(cfg, "config");
    require(out, "out");
    *out = dup(hxnn::serialize_config(cfg->value));
  });
}

hxnn_status hxnn_train(const hxnn_config* cfg, hxnn_model** model, hxnn_report** report) {
  if (model) *model = nullptr;
  if (report) *report = nullptr;
  return guarded([&] {
    require(cfg, "config");
    require(model, "model");
    require(report, "report");
    try {
      hxnn::RunOutcome outcome = hxnn::run_experiment(cfg->value);
      *model = new hxnn_model{std::move(outcome.params)};
      *report = new hxnn_report{std::move(outcome.report)};
    } catch (const hxnn::DivergenceError& e) {
      hxnn::RunReport r = hxnn::report_for(cfg->value);
      r.loss_trace = e.partial_trace();
      r.error = e.what();
      *report = new hxnn_report{std::move(r)};
      throw;
    }
  });
}

hxnn_status hxnn_evaluate(const hxnn_model* model, const hxnn_config* cfg,
                          hxnn_format format, char** out) {
  return guarded([&] {
    require(model, "model");
    require(cfg, "config");
    require(out, "out");
    const auto& p = model->value;
    const auto& c = cfg->value;
    if (p.inputs() != c.inputs || !(p.algebra().constants() == c.algebra.constants())) {
      throw hxnn::Error(hxnn::ErrorKind::InvalidArgument,
                        "model (" + p.algebra().name() + ", N=" +
                            std::to_string(p.inputs()) + ") does not match config (" +
                            c.algebra.name() + ", N=" + std::to_string(c.inputs) + ")");
    }
    *out = dup(render_evaluation(hxnn::evaluate(p, c), c.seed, format));
  });
}

hxnn_status hxnn_report_render(const hxnn_report* report, hxnn_format format, char** out) {
  return guarded([&] {
    require(report, "report");
    require(out, "out");
    *out = dup(render_report(report->value, format));
  });
}

double hxnn_report_holdout_mse(const hxnn_report* report) {
  return report ? report->value.holdout_mse : 0.0;
}

void hxnn_report_free(hxnn_report* report) { delete report; }

hxnn_status hxnn_sweep(const hxnn_config* const* cfgs, size_t count, unsigned threads,
                       hxnn_format format, char** out) {
  return guarded([&] {
    require(cfgs, "configs");
    require(out, "out");
    std::vector<hxnn::ExperimentConfig> list;
    for (size_t i = 0; i < count; ++i) {
      require(cfgs[i], "config");
      list.push_back(cfgs[i]->value);
    }
    const auto rows = hxnn::sweep(list, threads);
    std::string s;
    if (format == HXNN_FORMAT_CSV) s = hxnn::csv_header();
    for (const auto& r : rows) {
      if (format == HXNN_FORMAT_CSV) {
        s += hxnn::render_csv_row(r);
      } else if (format == HXNN_FORMAT_MACHINE) {
        s += hxnn::render_machine(r) + "\n";
      } else {
        s += hxnn::render_text(r) + "\n";
      }
    }
    *out = dup(s);
  });
}

hxnn_status hxnn_model_save(const hxnn_model* model, const char* path) {
  return guarded([&] {
    require(model, "model");
    require(path, "path");
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw hxnn::Error(hxnn::ErrorKind::Io, std::string("cannot write '") + path + "'");
    f << hxnn::save_checkpoint(model->value);
    if (!f.flush()) {
      throw hxnn::Error(hxnn::ErrorKind::Io, std::string("cannot write '") + path + "'");
    }
  });
}

hxnn_status hxnn_model_load(const char* path, hxnn_model** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = nullptr;
    const std::string text = read_file(path);
    try {
      *out = new hxnn_model{hxnn::load_checkpoint(text)};
    } catch (const hxnn::ParseError& e) {
      throw hxnn::ParseError(0, std::string(path) + ": " + e.what());
    }
  });
}

void hxnn_model_free(hxnn_model* model) { delete model; }

size_t hxnn_model_inputs(const hxnn_model* model) { return model ? model->value.inputs() : 0; }

size_t hxnn_model_dim(const hxnn_model* model) { return model ? model->value.dim() : 0; }

hxnn_status hxnn_model_forward(const hxnn_model* model, const double* x, size_t x_len,
                               double* out, size_t out_len) {
  return guarded([&] {
    require(model, "model");
    require(x, "x");
    require(out, "out");
    const hxnn::HNumber y = hxnn::forward(model->value, std::span<const double>(x, x_len));
    if (out_len != y.size()) {
      throw hxnn::DimensionError("output buffer holds " + std::to_string(out_len) +
                                 " coefficients, model produces " +
                                 std::to_string(y.size()));
    }
    std::copy(y.coeffs.begin(), y.coeffs.end(), out);
  });
}

}  // extern "C"
