/* repbasis — random truncated representative additive k-bases.
 *
 * C interface to the repbasis core: exact representation counting over
 * random subsets of {0,...,n}, disjoint-representation packing, the analytic
 * rate constants and tail bounds, and seeded Monte Carlo experiments.
 *
 * Conventions:
 *   - Every fallible call returns rb_status; RB_OK is 0.  Outputs are written
 *     through pointers only on success.
 *   - Objects behind rb_*_t handles are created by rb_*_create/rb_* factory
 *     calls and released with the matching rb_*_free (free accepts NULL).
 *   - All randomness is a pure function of the 64-bit seeds passed in.  Trial
 *     t of a run uses rb_derive_seed(master_seed, RB_STREAM_TRIAL, t).
 */
#ifndef REPBASIS_H
#define REPBASIS_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum rb_status {
  RB_OK = 0,
  RB_ERR_INVALID_ARGUMENT = 1,
  RB_ERR_ALPHA_OUT_OF_RANGE = 2,
  RB_ERR_K_TOO_SMALL = 3,
  RB_ERR_N_TOO_SMALL = 4,
  RB_ERR_ETA_NEGATIVE = 5,
  RB_ERR_EPS_NEGATIVE = 6,
  RB_ERR_XI_NOT_POSITIVE = 7,
  RB_ERR_LAMBDA_NOT_POSITIVE = 8,
  RB_ERR_XI_EPS_CONSTRAINT = 9,
  RB_ERR_EMPTY_WINDOW = 10,
  RB_ERR_P_OUT_OF_RANGE = 11,
  RB_ERR_MEMBERS_INVALID = 12,
  RB_ERR_COUNT_OVERFLOW = 13,
  RB_ERR_BUDGET_EXCEEDED = 14,
  RB_ERR_CAP_EXCEEDED = 15,
  RB_ERR_N_CAP_EXCEEDED = 16,
  RB_ERR_NO_LOWER_ROOT = 17,
  RB_ERR_CJ_TOO_SMALL = 18,
  RB_ERR_TRIALS_TOO_SMALL = 19,
  RB_ERR_INTERNAL = 100
} rb_status;

/* Stable name of a status code, e.g. "ALPHA_OUT_OF_RANGE". */
const char* rb_status_name(rb_status status);

/* Message of the most recent failure on this thread (empty string if none). */
const char* rb_last_error_message(void);

const char* rb_version(void);

/* ---- seeds ------------------------------------------------------------ */

enum {
  RB_STREAM_TRIAL = 1,
  RB_STREAM_JSAMPLE = 2,
  RB_STREAM_SCAN_POINT = 3,
  RB_STREAM_INSTANCE = 4
};

/* Documented seed mixing: mix(mix(master ^ mix(stream)) ^ mix(index)) with
 * the splitmix64 finalizer as mix. */
uint64_t rb_derive_seed(uint64_t master, uint64_t stream, uint64_t index);

/* ---- model ------------------------------------------------------------ */

typedef struct rb_params {
  int64_t n;
  int32_t k;
  double alpha;
  double eta;
  double eps;
  double xi;
  double lambda;
  double a_const;
} rb_params;

/* Defaults: k=2, alpha=0.5, eta=0, eps=0.5, xi=0.1, lambda=1, a_const=0. */
void rb_params_init(rb_params* params, int64_t n);

rb_status rb_validate_params(const rb_params* params);

rb_status rb_window(int64_t n, int32_t k, double alpha, int64_t* lo,
                    int64_t* hi);

/* ---- sampling ---------------------------------------------------------- */

typedef enum rb_rule_tag {
  RB_RULE_THM21 = 0,
  RB_RULE_THM31 = 1,
  RB_RULE_AV2 = 2,
  RB_RULE_AVK = 3,
  RB_RULE_LOGPOWER = 4,
  RB_RULE_RAW = 5
} rb_rule_tag;

typedef struct rb_rule {
  int32_t tag;     /* rb_rule_tag */
  double alpha;
  double eta;      /* THM21 */
  double eps;      /* THM31 / LOGPOWER */
  double a_const;  /* AV2 / AVK */
  double coeff;    /* LOGPOWER K */
  double p;        /* RAW */
  int32_t k;       /* THM31 / AVK */
} rb_rule;

rb_status rb_probability_for(const rb_rule* rule, int64_t n, double* p,
                             int32_t* clamped);

typedef struct rb_sample rb_sample;

rb_status rb_sample_create(int64_t n, double p, uint64_t seed,
                           rb_sample** out);
rb_status rb_sample_from_members(int64_t n, const int64_t* members,
                                 size_t count, rb_sample** out);
void rb_sample_free(rb_sample* sample);
int64_t rb_sample_n(const rb_sample* sample);
size_t rb_sample_size(const rb_sample* sample);
/* Copies up to capacity members; returns the total member count. */
size_t rb_sample_members(const rb_sample* sample, int64_t* buffer,
                         size_t capacity);

/* ---- counting ----------------------------------------------------------- */

typedef enum rb_count_mode {
  RB_COUNT_DISTINCT = 0,
  RB_COUNT_MULTISET = 1
} rb_count_mode;

typedef struct rb_profile rb_profile;

rb_status rb_count_all(const rb_sample* sample, int32_t k, int32_t mode,
                       rb_profile** out);
rb_status rb_count_fast_k2(const rb_sample* sample, rb_profile** out);
void rb_profile_free(rb_profile* profile);
/* Index range is [0, k*n]. */
int64_t rb_profile_span(const rb_profile* profile);
uint64_t rb_profile_at(const rb_profile* profile, int64_t j);
rb_status rb_profile_total(const rb_profile* profile, uint64_t* total);

rb_status rb_count_brute(const rb_sample* sample, int32_t k, int64_t j,
                         int32_t mode, uint64_t node_budget, uint64_t* count);

typedef struct rb_reps rb_reps;

rb_status rb_enumerate_reps(const rb_sample* sample, int32_t k, int64_t j,
                            uint64_t cap, rb_reps** out);
void rb_reps_free(rb_reps* reps);
size_t rb_reps_size(const rb_reps* reps);
int32_t rb_reps_k(const rb_reps* reps);
/* Writes the i-th representation (k ascending values) into buffer. */
rb_status rb_reps_get(const rb_reps* reps, size_t index, int64_t* buffer);
rb_status rb_reps_from_array(int32_t k, const int64_t* flat, size_t rep_count,
                             rb_reps** out);

rb_status rb_rho_max(int64_t n, int32_t k, int64_t j, int64_t n_cap,
                     uint64_t* rho);
rb_status rb_rho_lower_bound(int64_t n, int32_t k, double alpha,
                             double* bound);

/* ---- packing ------------------------------------------------------------ */

typedef enum rb_pack_method {
  RB_PACK_EXACT = 0,
  RB_PACK_GREEDY = 1
} rb_pack_method;

typedef struct rb_packing rb_packing;

rb_status rb_pack_exact(const rb_reps* reps, size_t cap, rb_packing** out);
rb_status rb_pack_greedy(const rb_reps* reps, rb_packing** out);
void rb_packing_free(rb_packing* packing);
uint64_t rb_packing_y_star(const rb_packing* packing);
int32_t rb_packing_method(const rb_packing* packing);
uint64_t rb_packing_w(const rb_packing* packing);
size_t rb_packing_chosen_count(const rb_packing* packing);
/* Index (into the packed rb_reps) of the i-th chosen representation. */
size_t rb_packing_chosen_at(const rb_packing* packing, size_t index);

/* w and the by-intersection-size split (sizes 1..k-1). */
rb_status rb_overlap_pairs(const rb_reps* reps, uint64_t pair_budget,
                           uint64_t* w, uint64_t* by_size /* k-1 slots */);

/* ---- bounds -------------------------------------------------------------- */

rb_status rb_expected_count(uint64_t rho, double p, int32_t k, double* value);

typedef struct rb_chernoff {
  double delta0;
  double eps0;
  double band_lo_mult;
  double band_hi_mult;
} rb_chernoff;

rb_status rb_chernoff_solve(double alpha, double eta, double lambda_target,
                            double gamma_target, rb_chernoff* out);
rb_status rb_chernoff_f(double alpha, double eta, double delta, double* value);
rb_status rb_chernoff_g(double alpha, double eta, double eps, double* value);

typedef struct rb_constants_out {
  double k_const;       /* K_{alpha,k} */
  uint64_t c_k;         /* (3k-1)^{k-1} k! */
  double gamma_j;
  double med_gap_coeff; /* 40 sqrt(k) */
} rb_constants_out;

rb_status rb_constants(double alpha, int32_t k, double eps, double xi,
                       double c_j, rb_constants_out* out);

typedef struct rb_talagrand {
  double lower_threshold;
  double lower_bound;
  double m_upper;
} rb_talagrand;

rb_status rb_talagrand_tail(double med, double t, int32_t k,
                            rb_talagrand* out);

rb_status rb_av_limit_prob(double a_const, double alpha, int32_t k,
                           double* value);

rb_status rb_expected_overlap_exact(int64_t n, int32_t k, double p, int64_t j,
                                    int64_t n_cap, double* exact,
                                    uint64_t* pairs_by_size /* k-1 slots */);
rb_status rb_expected_overlap_estimate(int64_t n, int32_t k, double* value);

/* ---- experiments ---------------------------------------------------------- */

typedef enum rb_band_mode {
  RB_BAND_PROOF = 0,
  RB_BAND_FIXED = 1
} rb_band_mode;

typedef struct rb_band {
  int32_t mode;  /* rb_band_mode */
  double c_lo;
  double c_hi;
  double target_gamma;
  double target_lambda;
} rb_band;

void rb_band_init(rb_band* band);

typedef enum rb_j_strategy {
  RB_JS_ALL = 0,
  RB_JS_SAMPLED = 1
} rb_j_strategy;

typedef struct rb_trial_config {
  rb_params params;
  rb_rule rule;
  rb_band band;
  int64_t trials;
  uint64_t master_seed;
  int32_t j_strategy;   /* rb_j_strategy */
  int32_t sampled_js;   /* extra random window points in the per-j report */
  int32_t with_packing; /* also compute Y* and W per reported j */
  int32_t threads;      /* 0 = hardware concurrency */
  uint64_t enum_cap;
  uint64_t exact_pack_cap;
} rb_trial_config;

void rb_trial_config_init(rb_trial_config* config, int64_t n);

typedef struct rb_resolved_band {
  int32_t mode;
  double lo;
  double hi;
  double delta0;
  double eps0;
  double gamma_effective;
  int32_t gamma_clamped;
  double e_min;
  double e_max;
} rb_resolved_band;

rb_status rb_resolve_band(const rb_params* params, const rb_band* band,
                          rb_resolved_band* out);

typedef struct rb_j_stats {
  int64_t j;
  uint64_t rho;
  double mean_y;
  double var_y;
  uint64_t median_y;
  double mean_ystar;
  double mean_w;
  double in_band_fraction;
} rb_j_stats;

typedef struct rb_trial_report rb_trial_report;

rb_status rb_run_trials(const rb_trial_config* config, rb_trial_report** out);
void rb_trial_report_free(rb_trial_report* report);
double rb_trial_report_p(const rb_trial_report* report);
int32_t rb_trial_report_p_clamped(const rb_trial_report* report);
void rb_trial_report_window(const rb_trial_report* report, int64_t* lo,
                            int64_t* hi);
void rb_trial_report_band(const rb_trial_report* report,
                          rb_resolved_band* band);
double rb_trial_report_x_zero(const rb_trial_report* report);
double rb_trial_report_coverage(const rb_trial_report* report);
uint64_t rb_trial_report_sandwich_violations(const rb_trial_report* report);
double rb_trial_report_elapsed_seconds(const rb_trial_report* report);
size_t rb_trial_report_num_js(const rb_trial_report* report);
rb_status rb_trial_report_j_stats(const rb_trial_report* report, size_t index,
                                  rb_j_stats* out);

typedef struct rb_scan_point {
  double axis;
  double estimate;
  double std_error;
  int64_t trials;
  double analytic;
  int32_t skipped;
} rb_scan_point;

typedef struct rb_scan_report rb_scan_report;

rb_status rb_threshold_scan(double alpha, int32_t k, int64_t n,
                            const double* a_grid, size_t grid_count,
                            int64_t trials, uint64_t master_seed,
                            int32_t threads, rb_scan_report** out);
rb_status rb_decay_scan(int32_t k, double alpha, double eps,
                        const int64_t* n_grid, size_t grid_count,
                        int64_t trials, uint64_t master_seed, int32_t threads,
                        rb_scan_report** out);
void rb_scan_report_free(rb_scan_report* report);
size_t rb_scan_report_size(const rb_scan_report* report);
rb_status rb_scan_report_point(const rb_scan_report* report, size_t index,
                               rb_scan_point* out);
/* Decay scans only; zero for threshold scans. */
double rb_scan_report_slope_raw(const rb_scan_report* report);
double rb_scan_report_slope_adjusted(const rb_scan_report* report);
double rb_scan_report_elapsed_seconds(const rb_scan_report* report);

typedef struct rb_median_check {
  int64_t j;
  int64_t trials;
  double emp_mean;
  double emp_median;
  double gap;
  double bound;
  int32_t pass;
} rb_median_check;

rb_status rb_concentration_check(const rb_params* params, const rb_rule* rule,
                                 int64_t trials, uint64_t master_seed,
                                 int64_t j, int32_t threads,
                                 rb_median_check* out);

#ifdef __cplusplus
}
#endif

#endif /* REPBASIS_H */
