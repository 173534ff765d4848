#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "hxnn/hxnn.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <string>

namespace {

std::string take(char* s) {
  std::string out = s ? s : "";
  hxnn_string_free(s);
  return out;
}

const char* kConfig =
    "algebra: complex\ntarget: square\nN: 1\nM: 4\nsamples: 64\nepochs: 5\n"
    "batch_size: 8\nlearning_rate: 0.02\nseed: 5\n";

}  // namespace

TEST_CASE("version and list") {
  CHECK(std::string(hxnn_version()).size() > 0);
  char* s = nullptr;
  REQUIRE(hxnn_algebra_list(&s) == HXNN_OK);
  const std::string list = take(s);
  CHECK(list.find("quaternion\n") != std::string::npos);
  CHECK(list.find("hyperbolic-quaternion\n") != std::string::npos);
}

TEST_CASE("algebras") {
  hxnn_algebra* q = nullptr;
  REQUIRE(hxnn_algebra_resolve("quaternion", &q) == HXNN_OK);
  CHECK(hxnn_algebra_dim(q) == 4);

  char* s = nullptr;
  REQUIRE(hxnn_algebra_name(q, &s) == HXNN_OK);
  CHECK(take(s) == "quaternion");

  const double i[4] = {0, 1, 0, 0}, j[4] = {0, 0, 1, 0};
  double out[4];
  REQUIRE(hxnn_algebra_mul(q, i, j, out, 4) == HXNN_OK);
  CHECK(out[3] == 1.0);
  CHECK(hxnn_algebra_mul(q, i, j, out, 3) == HXNN_E_DIMENSION);
  CHECK(std::string(hxnn_last_error()).size() > 0);

  int degenerate = -1;
  REQUIRE(hxnn_algebra_check(q, HXNN_FORMAT_MACHINE, &s, &degenerate) == HXNN_OK);
  CHECK(degenerate == 0);
  CHECK(take(s).ends_with("verdict NonDegenerate\n"));

  REQUIRE(hxnn_algebra_describe(q, &s) == HXNN_OK);
  CHECK(take(s).find("i * j = k") != std::string::npos);

  REQUIRE(hxnn_algebra_serialize(q, &s) == HXNN_OK);
  const std::string spec = take(s);
  hxnn_algebra* back = nullptr;
  REQUIRE(hxnn_algebra_parse(spec.c_str(), &back) == HXNN_OK);
  CHECK(hxnn_algebra_dim(back) == 4);
  hxnn_algebra_free(back);
  hxnn_algebra_free(q);

  hxnn_algebra* dual = nullptr;
  REQUIRE(hxnn_algebra_resolve("dual", &dual) == HXNN_OK);
  REQUIRE(hxnn_algebra_check(dual, HXNN_FORMAT_TEXT, &s, &degenerate) == HXNN_OK);
  CHECK(degenerate == 1);
  CHECK(take(s).find("verdict Degenerate") != std::string::npos);
  hxnn_algebra_free(dual);
}

TEST_CASE("status codes") {
  hxnn_algebra* a = nullptr;
  CHECK(hxnn_algebra_resolve("nosuch", &a) == HXNN_E_NOT_FOUND);
  CHECK(a == nullptr);
  CHECK(std::string(hxnn_last_error()).find("nosuch") != std::string::npos);
  CHECK(hxnn_algebra_parse("units: i\nprod 1 1 : 1\n", &a) == HXNN_E_PARSE);
  CHECK(std::string(hxnn_last_error()).find("line 2") != std::string::npos);
  CHECK(hxnn_algebra_resolve(nullptr, &a) == HXNN_E_ARGUMENT);
  CHECK(hxnn_algebra_list(nullptr) == HXNN_E_ARGUMENT);

  hxnn_config* c = nullptr;
  CHECK(hxnn_config_parse("algebra: complex\n", nullptr, &c) == HXNN_E_PARSE);
  CHECK(hxnn_config_load("/nonexistent/x.cfg", &c) == HXNN_E_IO);
  hxnn_model* m = nullptr;
  CHECK(hxnn_model_load("/nonexistent/x.model", &m) == HXNN_E_IO);

  hxnn_algebra_free(nullptr);
  hxnn_config_free(nullptr);
  hxnn_model_free(nullptr);
  hxnn_report_free(nullptr);
  hxnn_string_free(nullptr);
}

TEST_CASE("train, save, load, evaluate") {
  hxnn_config* cfg = nullptr;
  REQUIRE(hxnn_config_parse(kConfig, nullptr, &cfg) == HXNN_OK);
  CHECK(hxnn_config_seed(cfg) == 5);
  hxnn_config_set_seed(cfg, 9);
  CHECK(hxnn_config_seed(cfg) == 9);
  char* s = nullptr;
  REQUIRE(hxnn_config_serialize(cfg, &s) == HXNN_OK);
  CHECK(take(s).find("seed: 9\n") != std::string::npos);

  hxnn_model* model = nullptr;
  hxnn_report* report = nullptr;
  REQUIRE(hxnn_train(cfg, &model, &report) == HXNN_OK);
  REQUIRE(model != nullptr);
  REQUIRE(report != nullptr);
  CHECK(std::isfinite(hxnn_report_holdout_mse(report)));
  CHECK(hxnn_model_inputs(model) == 1);
  CHECK(hxnn_model_dim(model) == 2);

  REQUIRE(hxnn_report_render(report, HXNN_FORMAT_MACHINE, &s) == HXNN_OK);
  const std::string machine = take(s);
  CHECK(machine.find("seed 9\n") != std::string::npos);
  REQUIRE(hxnn_report_render(report, HXNN_FORMAT_CSV, &s) == HXNN_OK);
  CHECK(take(s).starts_with("config_hash,"));

  const auto path = std::filesystem::temp_directory_path() / "hxnn_capi_test.model";
  REQUIRE(hxnn_model_save(model, path.c_str()) == HXNN_OK);
  hxnn_model* loaded = nullptr;
  REQUIRE(hxnn_model_load(path.c_str(), &loaded) == HXNN_OK);
  const double x[2] = {0.3, -0.4};
  double a[2], b[2];
  REQUIRE(hxnn_model_forward(model, x, 2, a, 2) == HXNN_OK);
  REQUIRE(hxnn_model_forward(loaded, x, 2, b, 2) == HXNN_OK);
  CHECK(a[0] == b[0]);
  CHECK(a[1] == b[1]);
  CHECK(hxnn_model_forward(model, x, 1, a, 2) == HXNN_E_DIMENSION);

  REQUIRE(hxnn_evaluate(loaded, cfg, HXNN_FORMAT_MACHINE, &s) == HXNN_OK);
  const std::string ev = take(s);
  CHECK(ev.find("mse ") != std::string::npos);
  CHECK(ev.find("sup_error ") != std::string::npos);
  std::filesystem::remove(path);

  // Same seed, same bytes.
  hxnn_model* model2 = nullptr;
  hxnn_report* report2 = nullptr;
  REQUIRE(hxnn_train(cfg, &model2, &report2) == HXNN_OK);
  REQUIRE(hxnn_report_render(report2, HXNN_FORMAT_MACHINE, &s) == HXNN_OK);
  CHECK(take(s) == machine);

  const hxnn_config* list[2] = {cfg, cfg};
  REQUIRE(hxnn_sweep(list, 2, 2, HXNN_FORMAT_CSV, &s) == HXNN_OK);
  const std::string csv = take(s);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);
  CHECK(hxnn_sweep(list, 0, 1, HXNN_FORMAT_CSV, &s) == HXNN_E_ARGUMENT);

  hxnn_model_free(model2);
  hxnn_report_free(report2);
  hxnn_model_free(loaded);
  hxnn_model_free(model);
  hxnn_report_free(report);
  hxnn_config_free(cfg);
}

TEST_CASE("divergence still yields a report") {
  hxnn_config* cfg = nullptr;
  REQUIRE(hxnn_config_parse("algebra: complex\ntarget: square\nactivation: relu\n"
                            "box: -1e100 1e100\nlearning_rate: 1e6\nepochs: 3\n",
                            nullptr, &cfg) == HXNN_OK);
  hxnn_model* model = nullptr;
  hxnn_report* report = nullptr;
  CHECK(hxnn_train(cfg, &model, &report) == HXNN_E_DIVERGENCE);
  CHECK(model == nullptr);
  REQUIRE(report != nullptr);
  char* s = nullptr;
  REQUIRE(hxnn_report_render(report, HXNN_FORMAT_MACHINE, &s) == HXNN_OK);
  CHECK(take(s).find("status error\n") != std::string::npos);
  hxnn_report_free(report);
  hxnn_config_free(cfg);
}
