#ifndef OPINION_C_H
#define OPINION_C_H

/*
 * C interface to the opinion-dynamics library.
 *
 * Every function returns an opn_status. On failure opn_last_error() holds a
 * message for the calling thread until the next call into the library.
 * Strings and arrays handed out by the library are released with opn_free().
 */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(OPN_BUILDING_LIBRARY)
#    define OPN_API __declspec(dllexport)
#  else
#    define OPN_API __declspec(dllimport)
#  endif
#else
#  define OPN_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum opn_status {
  OPN_OK = 0,
  OPN_ERR_USAGE = 1,      /* null pointer or meaningless argument combination */
  OPN_ERR_VALIDATION = 2, /* malformed input, failed precondition, missing file */
  OPN_ERR_NUMERICAL = 3,  /* solver failure, ambiguous spectrum, exhausted budget */
  OPN_ERR_INTERNAL = 4
} opn_status;

typedef struct opn_system opn_system;

OPN_API const char* opn_version(void);
OPN_API const char* opn_last_error(void);
OPN_API void opn_free(void* p);

/* Logging threshold: 0 error, 1 info, 2 debug. Overrides OPINION_LOG. */
OPN_API opn_status opn_set_log_level(int level);

/* source: path to a system JSON file, or "fixture:NAME". */
OPN_API opn_status opn_system_load(const char* source, opn_system** out);
OPN_API opn_status opn_system_from_json(const char* json, opn_system** out);
OPN_API void opn_system_free(opn_system* sys);
OPN_API opn_status opn_system_dims(const opn_system* sys, size_t* agents, size_t* issues);

/* Initial opinions bundled with the system (fixture or "x0" field).
 * *len is 0 and *data NULL when none were given. */
OPN_API opn_status opn_system_x0(const opn_system* sys, double** data, size_t* len);
OPN_API opn_status opn_system_json(const opn_system* sys, char** json);

/* Fixture catalog as a JSON array of {name, description, agents, issues}. */
OPN_API opn_status opn_fixture_list(char** json);

/* Row-major matrix from a CSV file ('#' comments allowed). */
OPN_API opn_status opn_csv_read(const char* path, double** data, size_t* rows, size_t* cols);

typedef struct opn_analyze_options {
  double tol_eig;     /* default 1e-8 */
  const double* x0;   /* optional; enables the limit prediction */
  size_t x0_len;
} opn_analyze_options;

OPN_API void opn_analyze_options_init(opn_analyze_options* opt);
OPN_API opn_status opn_analyze(const opn_system* sys, const opn_analyze_options* opt, char** json);

typedef struct opn_sim_options {
  long max_steps;        /* default 10000 */
  double tol_conv;       /* default 1e-10 */
  int window;            /* default 10 */
  double overflow_guard; /* default 1e12 */
  long stride;           /* default 1 */
  int multi_issue;       /* -1 auto (multi-issue when a MiDS matrix is present), 0 no, 1 yes */
} opn_sim_options;

OPN_API void opn_sim_options_init(opn_sim_options* opt);

/* csv: k, xi_1.., spread. summary: JSON with stop reason and final values.
 * Either output pointer may be NULL. */
OPN_API opn_status opn_simulate(const opn_system* sys, const double* x0, size_t x0_len, const opn_sim_options* opt,
                                char** csv, char** summary);

typedef enum opn_stepsize_method {
  OPN_STEP_DIRECT = 0,
  OPN_STEP_COROLLARY1 = 1,
  OPN_STEP_CUBIC = 2,
  OPN_STEP_CUBIC_PAPER = 3,
  OPN_STEP_HB = 4
} opn_stepsize_method;

typedef struct opn_stepsize_options {
  opn_stepsize_method method; /* default OPN_STEP_DIRECT */
  int eps_equals_rho;         /* 1: eps tied to rho (default); 0: eps fixed */
  double epsilon;             /* used when eps_equals_rho == 0 */
  double grid;                /* default 1e-3 */
  double rho_max;             /* <= 0 selects the default */
  double check_rho;           /* > 0: attach per-eigenvalue diagnostics at this rho */
} opn_stepsize_options;

OPN_API void opn_stepsize_options_init(opn_stepsize_options* opt);

/* laplacian: row-major n x n. json: region report. csv: rho, max_magnitude. */
OPN_API opn_status opn_stepsize(const double* laplacian, size_t n, const opn_stepsize_options* opt, char** json,
                                char** csv);

typedef struct opn_estimate_options {
  long samples;    /* default 2N */
  uint64_t seed;   /* default 1 */
  double gamma0;   /* > 0 grows the sample set from `samples` until gamma_star <= gamma0 */
  long m_cap;      /* default 1000 */
  double box;      /* default 1 */
  double noise;    /* default 0 */
  long violation_trials; /* > 0 estimates the violation probability */
} opn_estimate_options;

OPN_API void opn_estimate_options_init(opn_estimate_options* opt);
OPN_API opn_status opn_estimate(const opn_system* truth, const opn_estimate_options* opt, char** json);

typedef enum opn_bound_formula { OPN_BOUND_CAMPI = 0, OPN_BOUND_PAPER = 1 } opn_bound_formula;

OPN_API opn_status opn_sample_bound(long d, double epsilon, double beta, opn_bound_formula formula, long* m,
                                    double* tail);

typedef struct opn_reproduce_options {
  double tol_eig;      /* default 1e-8 */
  uint64_t seed;       /* default 1 */
  const char* out_dir; /* default "." */
} opn_reproduce_options;

OPN_API void opn_reproduce_options_init(opn_reproduce_options* opt);

/* json: the run report; *matches is 1 when the verdict equals the expected one. */
OPN_API opn_status opn_reproduce(const char* name, const opn_reproduce_options* opt, char** json, int* matches);

/* JSON array of experiment names. */
OPN_API opn_status opn_reproduce_list(char** json);

#ifdef __cplusplus
}
#endif

#endif
