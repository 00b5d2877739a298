#ifndef TUMORDELAY_H
#define TUMORDELAY_H

/* C interface to the delayed tumor-growth library.
 *
 * Every fallible call returns a td_status. On failure a message describing
 * the error is available from td_last_error() on the same thread until the
 * next call. Strings returned through char** are owned by the caller and are
 * released with td_string_free(). */

#include <stddef.h>

#if defined(_WIN32)
#define TD_API __declspec(dllexport)
#else
#define TD_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum td_status {
    TD_OK = 0,
    TD_ERR_INVALID_PARAMS = 1,
    TD_ERR_NON_POSITIVE_ARGUMENT = 2,
    TD_ERR_ARGUMENT_OVERFLOW = 3,
    TD_ERR_RADIUS_OUT_OF_RANGE = 4,
    TD_ERR_NON_POSITIVE_STATE = 5,
    TD_ERR_BRACKET_NOT_FOUND = 6,
    TD_ERR_INCONSISTENT_STATE = 7,
    TD_ERR_COEFFICIENT_ORDER = 8,
    TD_ERR_INVALID_STEP_COUNT = 9,
    TD_ERR_HISTORY_DOMAIN = 10,
    TD_ERR_NON_POSITIVE_HISTORY = 11,
    TD_ERR_TIME_OUT_OF_RANGE = 12,
    TD_ERR_NO_CROSSING = 13,
    TD_ERR_HYPOTHESIS_VIOLATED = 14,
    TD_ERR_RESIDUAL_TOO_LARGE = 15,
    TD_ERR_HORIZON_TOO_SHORT = 16,
    TD_ERR_BRACKET_INVALID = 17,
    TD_ERR_CONFIG_PARSE = 18,
    TD_ERR_EMPTY_TRAJECTORY = 19,
    TD_ERR_TAU1_OUT_OF_RANGE = 20,
    TD_ERR_NO_POSITIVE_EQUILIBRIUM = 21,
    TD_ERR_IO = 22,
    TD_ERR_CONTRACT_VIOLATION = 23,
    TD_ERR_INVALID_ARGUMENT = 24,
    TD_ERR_INTERNAL = 99
} td_status;

/* alpha_dirichlet != 0 selects the Dirichlet boundary (alpha = infinity);
 * alpha is then ignored. */
typedef struct td_model_params {
    double gamma;
    double mu;
    double sigma_tilde;
    double sigma_inf;
    double alpha;
    int alpha_dirichlet;
} td_model_params;

typedef struct td_stationary_state {
    double omega_s;
    double radius_s;
    double residual;
} td_stationary_state;

typedef enum td_equilibrium { TD_EQ_TRIVIAL = 0, TD_EQ_POSITIVE = 1 } td_equilibrium;

typedef struct td_linear_coeffs {
    double b1;
    double b2;
    td_equilibrium about;
} td_linear_coeffs;

typedef enum td_trivial_regime {
    TD_TRIVIAL_UNSTABLE_NO_HOPF = 0,
    TD_TRIVIAL_STABLE_WITH_HOPF = 1,
    TD_TRIVIAL_DEGENERATE = 2
} td_trivial_regime;

typedef struct td_hopf_result {
    double tau2_star;
    double omega_c;
    double residual;
    int branch;
} td_hopf_result;

typedef enum td_oscillation_kind {
    TD_CONVERGENT_MONOTONE = 0,
    TD_CONVERGENT_OSCILLATORY = 1,
    TD_SUSTAINED = 2,
    TD_GROWING = 3,
    TD_POSITIVITY_LOSS = 4
} td_oscillation_kind;

typedef struct td_classification_settings {
    double amplitude_floor;
    double rate_tol;
    double transient_fraction;
    double min_delay_spans;
} td_classification_settings;

typedef struct td_oscillation {
    td_oscillation_kind kind;
    int has_envelope_rate;
    double envelope_rate;
    size_t peak_count;
} td_oscillation;

typedef struct td_trajectory td_trajectory;
typedef struct td_config td_config;
typedef struct td_sweep_spec td_sweep_spec;

TD_API const char* td_version(void);
TD_API const char* td_status_name(td_status status);
TD_API const char* td_last_error(void);
TD_API void td_string_free(char* s);

TD_API td_model_params td_default_params(void);
TD_API td_classification_settings td_default_classification(void);

/* Model functions. */
TD_API td_status td_eval_basis(double x, double* f, double* g, double* p);
TD_API td_status td_eval_l(double x, const td_model_params* params, double* l, double* l_prime);
TD_API td_status td_nutrient_profile(double r, double radius, const td_model_params* params,
                                     double* sigma);
TD_API td_status td_dde_rhs(double omega_tau1, double omega_tau2, const td_model_params* params,
                            double* rate);

/* Equilibria. *exists is set to 0 when there is no positive equilibrium. */
TD_API td_status td_find_positive_stationary(const td_model_params* params,
                                             td_stationary_state* state, int* exists);
TD_API td_status td_linearize_positive(const td_model_params* params,
                                       const td_stationary_state* state,
                                       td_linear_coeffs* coeffs);
TD_API td_status td_linearize_trivial(const td_model_params* params, td_linear_coeffs* coeffs);
TD_API td_status td_classify_trivial(const td_model_params* params, td_trivial_regime* regime,
                                     double* tau1_bound);
TD_API td_status td_tau1_admissible_bound(const td_linear_coeffs* coeffs, double* bound);

/* Hopf threshold. */
TD_API td_status td_critical_delay(const td_linear_coeffs* coeffs, double tau1,
                                   td_hopf_result* result);
TD_API td_status td_critical_delay_by_simulation(const td_model_params* params, double tau1,
                                                 double tau2_lo, double tau2_hi, double t_end,
                                                 int steps_per_delay, double* tau2_star);

/* Integration. Sampled histories take n (t, omega) pairs with t ascending. */
TD_API td_status td_integrate_constant(const td_model_params* params, double tau1, double tau2,
                                       double omega0, double t_end, int steps_per_delay,
                                       td_trajectory** out);
TD_API td_status td_integrate_sampled(const td_model_params* params, double tau1, double tau2,
                                      const double* t, const double* omega, size_t n,
                                      double t_end, int steps_per_delay, td_trajectory** out);
TD_API void td_trajectory_free(td_trajectory* traj);
TD_API size_t td_trajectory_node_count(const td_trajectory* traj);
TD_API td_status td_trajectory_node(const td_trajectory* traj, size_t index, double* t,
                                    double* omega, double* domega);
TD_API td_status td_trajectory_sample(const td_trajectory* traj, double t, double* omega,
                                      double* radius);
/* *positivity_lost is 1 when the run stopped early; *t_fail is then set. */
TD_API td_status td_trajectory_status(const td_trajectory* traj, int* positivity_lost,
                                      double* t_fail);
TD_API td_status td_trajectory_write_csv(const td_trajectory* traj, const char* path);
/* omega_s may be NaN to omit the reference line. */
TD_API td_status td_trajectory_plot_svg(const td_trajectory* traj, const char* title,
                                        double omega_s, int show_radius, char** svg);
/* settings may be NULL for the defaults. */
TD_API td_status td_classify_trajectory(const td_trajectory* traj, double omega_s,
                                        const td_classification_settings* settings,
                                        td_oscillation* result);
TD_API const char* td_oscillation_kind_name(td_oscillation_kind kind);

/* Experiment configs. */
TD_API td_status td_config_default(td_config** out);
TD_API td_status td_config_load(const char* path, td_config** out);
TD_API td_status td_config_parse(const char* json, td_config** out);
TD_API td_status td_config_to_json(const td_config* config, char** json);
TD_API td_status td_config_set_t_end(td_config* config, double t_end);
TD_API td_status td_config_set_steps_per_delay(td_config* config, int steps_per_delay);
TD_API td_status td_config_params(const td_config* config, td_model_params* params);
TD_API td_status td_config_delays(const td_config* config, double* tau1, double* tau2);
TD_API void td_config_free(td_config* config);

/* Runs one simulation and writes <out_dir>/<stem>.{csv,svg,json} as requested
 * by the config. A recorded numerical failure sets *numerical_failure = 1 and
 * still returns TD_OK. record_json may be NULL. */
TD_API td_status td_run_simulation(const td_config* config, const char* out_dir,
                                   const char* stem, char** record_json,
                                   int* numerical_failure);
TD_API td_status td_simulate_classify(const td_config* config, char** record_json,
                                      int* numerical_failure);

/* method is "char", "sim" or "both". *numerical_failure (may be NULL) is set
 * when a requested critical delay could not be computed; the reason is in the
 * report. */
TD_API td_status td_hopf_report(const td_config* config, const char* method, char** json,
                                int* numerical_failure);

/* Critical-delay sweeps over (tau1, alpha). */
TD_API td_status td_sweep_default(td_sweep_spec** out);
TD_API td_status td_sweep_load(const char* path, td_sweep_spec** out);
TD_API td_status td_sweep_parse(const char* json, td_sweep_spec** out);
TD_API td_status td_sweep_set_method(td_sweep_spec* spec, const char* method);
TD_API td_status td_sweep_set_simulation(td_sweep_spec* spec, double t_end, int steps_per_delay);
TD_API td_status td_sweep_set_threads(td_sweep_spec* spec, unsigned threads);
/* Writes <name>.csv, <name>.full.csv and <name>.meta.json. *na_cells counts
 * cells without a value and *failed_cells those among them that failed
 * numerically rather than by a hypothesis gate (no positive equilibrium, tau1
 * above the admissible bound). Either may be NULL. */
TD_API td_status td_run_sweep(const td_sweep_spec* spec, const char* out_dir, const char* name,
                              size_t* na_cells, size_t* failed_cells);
TD_API void td_sweep_free(td_sweep_spec* spec);

#ifdef __cplusplus
}
#endif

#endif /* TUMORDELAY_H */
