// Command-line front end over the hxnn C API.
//
//   hxnn-cli algebra list
//   hxnn-cli algebra info <source>
//   hxnn-cli algebra check <source> [--format text|machine]
//   hxnn-cli algebra export <name> [--out path]
//   hxnn-cli train <config> --out <model> [--seed n] [--format f]
//   hxnn-cli eval <model> <config> [--seed n] [--format f]
//   hxnn-cli sweep <config-dir> [--out csv] [--threads n] [--seed n] [--format f]
//
// Exit codes: 0 success, 1 usage, 2 input or parse error, 3 runtime error.

#include "hxnn/hxnn.h"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace {

enum Exit { kOk = 0, kUsage = 1, kInput = 2, kRuntime = 3 };

struct Failure {
  int code;
};

int exit_code(hxnn_status s) {
  switch (s) {
    case HXNN_OK: return kOk;
    case HXNN_E_DIVERGENCE:
    case HXNN_E_INTERNAL: return kRuntime;
    default: return kInput;
  }
}

void check(hxnn_status s) {
  if (s != HXNN_OK) {
    std::cerr << "error: " << hxnn_last_error() << "\n";
    throw Failure{exit_code(s)};
  }
}

template <typename T, void (*Free)(T*)>
struct Deleter {
  void operator()(T* p) const { Free(p); }
};
using AlgebraPtr = std::unique_ptr<hxnn_algebra, Deleter<hxnn_algebra, hxnn_algebra_free>>;
using ConfigPtr = std::unique_ptr<hxnn_config, Deleter<hxnn_config, hxnn_config_free>>;
using ModelPtr = std::unique_ptr<hxnn_model, Deleter<hxnn_model, hxnn_model_free>>;
using ReportPtr = std::unique_ptr<hxnn_report, Deleter<hxnn_report, hxnn_report_free>>;

// Takes ownership of a string returned by the library.
std::string take(char* s) {
  std::string out = s ? s : "";
  hxnn_string_free(s);
  return out;
}

AlgebraPtr load_algebra(const std::string& source) {
  hxnn_algebra* a = nullptr;
  check(hxnn_algebra_resolve(source.c_str(), &a));
  return AlgebraPtr(a);
}

ConfigPtr load_config(const std::string& path, std::optional<std::uint64_t> seed) {
  hxnn_config* c = nullptr;
  check(hxnn_config_load(path.c_str(), &c));
  ConfigPtr cfg(c);
  if (seed) hxnn_config_set_seed(cfg.get(), *seed);
  return cfg;
}

void write_output(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f || !(f << text) || !f.flush()) {
    std::cerr << "error: cannot write '" << path << "'\n";
    throw Failure{kInput};
  }
}

const std::map<std::string, hxnn_format> kFormats = {
    {"text", HXNN_FORMAT_TEXT}, {"csv", HXNN_FORMAT_CSV}, {"machine", HXNN_FORMAT_MACHINE}};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hypercomplex algebras and hypercomplex-valued perceptrons"};
  app.require_subcommand(1);

  hxnn_format format = HXNN_FORMAT_TEXT;
  std::string out_path;
  std::optional<std::uint64_t> seed;
  unsigned threads = 1;
  std::string source, config_path, model_path, config_dir;

  auto add_format = [&](CLI::App* cmd) {
    cmd->add_option("--format", format, "Output format")
        ->transform(CLI::CheckedTransformer(kFormats, CLI::ignore_case));
  };

  auto* algebra = app.add_subcommand("algebra", "Inspect, classify and export algebras");
  algebra->require_subcommand(1);
  auto* list = algebra->add_subcommand("list", "List zoo algebras");
  auto* info = algebra->add_subcommand("info", "Show units and the product table");
  info->add_option("source", source, "Zoo name or algebra spec file")->required();
  auto* check_cmd = algebra->add_subcommand("check", "Classify as degenerate or non-degenerate");
  check_cmd->add_option("source", source, "Zoo name or algebra spec file")->required();
  add_format(check_cmd);
  auto* exp = algebra->add_subcommand("export", "Write an algebra spec file");
  exp->add_option("name", source, "Zoo name")->required();
  exp->add_option("--out", out_path, "Destination (default: standard output)");

  auto* train = app.add_subcommand("train", "Train a network and write a checkpoint");
  train->add_option("config", config_path, "Experiment config")->required();
  train->add_option("--out", out_path, "Checkpoint path")->required();
  train->add_option("--seed", seed, "Override the config seed");
  add_format(train);

  auto* eval = app.add_subcommand("eval", "Evaluate a stored model on a fresh sample");
  eval->add_option("model", model_path, "Checkpoint")->required();
  eval->add_option("config", config_path, "Experiment config describing the data")->required();
  eval->add_option("--seed", seed, "Override the config seed");
  add_format(eval);

  auto* sweep = app.add_subcommand("sweep", "Run every *.cfg in a directory");
  sweep->add_option("dir", config_dir, "Directory of experiment configs")->required();
  sweep->add_option("--out", out_path, "CSV destination (default: standard output)");
  sweep->add_option("--threads", threads, "Concurrent runs")->check(CLI::PositiveNumber);
  sweep->add_option("--seed", seed, "Override every config seed");
  add_format(sweep);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (list->parsed()) {
      char* s = nullptr;
      check(hxnn_algebra_list(&s));
      std::cout << take(s);
    } else if (info->parsed()) {
      auto alg = load_algebra(source);
      char* s = nullptr;
      check(hxnn_algebra_describe(alg.get(), &s));
      std::cout << take(s);
    } else if (check_cmd->parsed()) {
      auto alg = load_algebra(source);
      char* s = nullptr;
      check(hxnn_algebra_check(alg.get(),
                               format == HXNN_FORMAT_MACHINE ? HXNN_FORMAT_MACHINE
                                                             : HXNN_FORMAT_TEXT,
                               &s, nullptr));
      std::cout << take(s);
    } else if (exp->parsed()) {
      auto alg = load_algebra(source);
      char* s = nullptr;
      check(hxnn_algebra_serialize(alg.get(), &s));
      write_output(take(s), out_path);
    } else if (train->parsed()) {
      auto cfg = load_config(config_path, seed);
      hxnn_model* m = nullptr;
      hxnn_report* r = nullptr;
      const hxnn_status st = hxnn_train(cfg.get(), &m, &r);
      ModelPtr model(m);
      ReportPtr report(r);
      const std::string err = st == HXNN_OK ? "" : hxnn_last_error();
      if (report) {
        char* s = nullptr;
        check(hxnn_report_render(report.get(), format, &s));
        std::cout << take(s);
      }
      if (st != HXNN_OK) {
        std::cerr << "error: " << err << "\n";
        return exit_code(st);
      }
      check(hxnn_model_save(model.get(), out_path.c_str()));
      std::cerr << "wrote model to " << out_path << " (seed "
                << hxnn_config_seed(cfg.get()) << ")\n";
    } else if (eval->parsed()) {
      hxnn_model* m = nullptr;
      check(hxnn_model_load(model_path.c_str(), &m));
      ModelPtr model(m);
      auto cfg = load_config(config_path, seed);
      char* s = nullptr;
      check(hxnn_evaluate(model.get(), cfg.get(), format, &s));
      std::cout << take(s);
    } else if (sweep->parsed()) {
      namespace fs = std::filesystem;
      std::error_code ec;
      if (!fs::is_directory(config_dir, ec)) {
        std::cerr << "error: '" << config_dir << "' is not a directory\n";
        return kInput;
      }
      std::vector<fs::path> files;
      for (const auto& entry : fs::directory_iterator(config_dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".cfg") {
          files.push_back(entry.path());
        }
      }
      std::sort(files.begin(), files.end());
      if (files.empty()) {
        std::cerr << "error: no *.cfg files in '" << config_dir << "'\n";
        return kInput;
      }
      std::vector<ConfigPtr> cfgs;
      std::vector<const hxnn_config*> raw;
      for (const auto& f : files) {
        cfgs.push_back(load_config(f.string(), seed));
        raw.push_back(cfgs.back().get());
        std::cerr << "config " << f.filename().string() << " seed "
                  << hxnn_config_seed(cfgs.back().get()) << "\n";
      }
      const hxnn_format table = out_path.empty() ? format : HXNN_FORMAT_CSV;
      char* s = nullptr;
      check(hxnn_sweep(raw.data(), raw.size(), threads, table, &s));
      write_output(take(s), out_path);
    }
  } catch (const Failure& f) {
    return f.code;
  }
  return kOk;
}
