/*
 * hxnn C API: hypercomplex algebras and hypercomplex-valued perceptrons.
 *
 * Every object is an opaque handle released with its *_free function.
 * Functions return an hxnn_status; on failure hxnn_last_error() returns a
 * thread-local description of the most recent error. Strings handed out
 * through `char**` parameters are owned by the caller and released with
 * hxnn_string_free().
 */
#ifndef HXNN_H
#define HXNN_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define HXNN_API __declspec(dllexport)
#else
#define HXNN_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum hxnn_status {
  HXNN_OK = 0,
  HXNN_E_ARGUMENT = 1,   /* invalid argument or inconsistent configuration */
  HXNN_E_PARSE = 2,      /* malformed algebra, config or model text */
  HXNN_E_NOT_FOUND = 3,  /* unknown algebra name */
  HXNN_E_IO = 4,         /* file could not be read or written */
  HXNN_E_DIMENSION = 5,  /* operand lengths disagree */
  HXNN_E_DIVERGENCE = 6, /* training produced a non-finite loss */
  HXNN_E_INTERNAL = 7
} hxnn_status;

typedef enum hxnn_format {
  HXNN_FORMAT_TEXT = 0,
  HXNN_FORMAT_CSV = 1,
  HXNN_FORMAT_MACHINE = 2
} hxnn_format;

typedef struct hxnn_algebra hxnn_algebra;
typedef struct hxnn_config hxnn_config;
typedef struct hxnn_model hxnn_model;
typedef struct hxnn_report hxnn_report;

HXNN_API const char* hxnn_last_error(void);
HXNN_API const char* hxnn_version(void);
HXNN_API void hxnn_string_free(char* s);

/* ---- algebras ---------------------------------------------------------- */

/* Newline-separated zoo names followed by the family spellings. */
HXNN_API hxnn_status hxnn_algebra_list(char** out);

/* A zoo name, a family spelling ("clifford-1-1-0", "cayley-dickson-3") or
 * a path to an algebra spec file. */
HXNN_API hxnn_status hxnn_algebra_resolve(const char* source, hxnn_algebra** out);
HXNN_API hxnn_status hxnn_algebra_parse(const char* text, hxnn_algebra** out);
HXNN_API void hxnn_algebra_free(hxnn_algebra* alg);

HXNN_API size_t hxnn_algebra_dim(const hxnn_algebra* alg);
HXNN_API hxnn_status hxnn_algebra_name(const hxnn_algebra* alg, char** out);
HXNN_API hxnn_status hxnn_algebra_serialize(const hxnn_algebra* alg, char** out);
/* Human-readable summary: dimension, units and the unit product table. */
HXNN_API hxnn_status hxnn_algebra_describe(const hxnn_algebra* alg, char** out);

/* out = a * b; all three arrays hold `dim` coefficients. */
HXNN_API hxnn_status hxnn_algebra_mul(const hxnn_algebra* alg, const double* a,
                                      const double* b, double* out, size_t dim);

/* Degeneracy report in text or machine format; *degenerate receives 1 for a
 * degenerate algebra, 0 otherwise (may be NULL). */
HXNN_API hxnn_status hxnn_algebra_check(const hxnn_algebra* alg, hxnn_format format,
                                        char** out, int* degenerate);

/* ---- experiment configs ------------------------------------------------ */

HXNN_API hxnn_status hxnn_config_load(const char* path, hxnn_config** out);
/* base_dir resolves relative algebra paths; may be NULL. */
HXNN_API hxnn_status hxnn_config_parse(const char* text, const char* base_dir,
                                       hxnn_config** out);
HXNN_API void hxnn_config_free(hxnn_config* cfg);
HXNN_API void hxnn_config_set_seed(hxnn_config* cfg, uint64_t seed);
HXNN_API uint64_t hxnn_config_seed(const hxnn_config* cfg);
HXNN_API hxnn_status hxnn_config_serialize(const hxnn_config* cfg, char** out);

/* ---- training and evaluation ------------------------------------------- */

/* Trains per the config. On HXNN_E_DIVERGENCE *report still receives a
 * report carrying the partial loss trace and *model is NULL. */
HXNN_API hxnn_status hxnn_train(const hxnn_config* cfg, hxnn_model** model,
                                hxnn_report** report);

/* Held-out MSE and sup error of a stored model on a fresh sample drawn as
 * the config describes. */
HXNN_API hxnn_status hxnn_evaluate(const hxnn_model* model, const hxnn_config* cfg,
                                   hxnn_format format, char** out);

HXNN_API hxnn_status hxnn_report_render(const hxnn_report* report, hxnn_format format,
                                        char** out);
HXNN_API double hxnn_report_holdout_mse(const hxnn_report* report);
HXNN_API void hxnn_report_free(hxnn_report* report);

/* Runs every config and renders the table (CSV includes a header row).
 * Per-run failures are recorded in their rows; the call still succeeds. */
HXNN_API hxnn_status hxnn_sweep(const hxnn_config* const* cfgs, size_t count,
                                unsigned threads, hxnn_format format, char** out);

/* ---- models ------------------------------------------------------------ */

HXNN_API hxnn_status hxnn_model_save(const hxnn_model* model, const char* path);
HXNN_API hxnn_status hxnn_model_load(const char* path, hxnn_model** out);
HXNN_API void hxnn_model_free(hxnn_model* model);
HXNN_API size_t hxnn_model_inputs(const hxnn_model* model);
HXNN_API size_t hxnn_model_dim(const hxnn_model* model);

/* x holds inputs*dim coefficients, out receives dim. */
HXNN_API hxnn_status hxnn_model_forward(const hxnn_model* model, const double* x,
                                        size_t x_len, double* out, size_t out_len);

#ifdef __cplusplus
}
#endif

#endif /* HXNN_H */
