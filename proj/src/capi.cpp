#include "repbasis.h"

#include <cstring>
#include <new>
#include <string>

#include "repbasis/experiments.hpp"
#include "repbasis/rng.hpp"

using namespace repbasis;

namespace {

thread_local std::string g_last_error;

static_assert(static_cast<int>(ErrorCode::InvalidArgument) ==
              RB_ERR_INVALID_ARGUMENT);
static_assert(static_cast<int>(ErrorCode::AlphaOutOfRange) ==
              RB_ERR_ALPHA_OUT_OF_RANGE);
static_assert(static_cast<int>(ErrorCode::TrialsTooSmall) ==
              RB_ERR_TRIALS_TOO_SMALL);

template <typename F>
rb_status guard(F&& body) {
  try {
    body();
    g_last_error.clear();
    return RB_OK;
  } catch (const Error& e) {
    g_last_error = e.what();
    return static_cast<rb_status>(static_cast<int>(e.code()));
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return RB_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return RB_ERR_INTERNAL;
  }
}

rb_status require(bool ok, const char* what) {
  if (ok) return RB_OK;
  g_last_error = what;
  return RB_ERR_INVALID_ARGUMENT;
}

ExperimentParams to_params(const rb_params& p) {
  ExperimentParams out;
  out.n = p.n;
  out.k = p.k;
  out.alpha = p.alpha;
  out.eta = p.eta;
  out.eps = p.eps;
  out.xi = p.xi;
  out.lambda = p.lambda;
  out.a_const = p.a_const;
  return out;
}

ProbabilityRule to_rule(const rb_rule& r) {
  switch (r.tag) {
    case RB_RULE_THM21: return ProbabilityRule::thm21(r.alpha, r.eta);
    case RB_RULE_THM31: return ProbabilityRule::thm31(r.alpha, r.k, r.eps);
    case RB_RULE_AV2: return ProbabilityRule::av2(r.alpha, r.a_const);
    case RB_RULE_AVK: return ProbabilityRule::avk(r.alpha, r.k, r.a_const);
    case RB_RULE_LOGPOWER: return ProbabilityRule::log_power(r.coeff, r.eps);
    case RB_RULE_RAW: return ProbabilityRule::raw(r.p);
    default: fail(ErrorCode::InvalidArgument, "unknown rule tag");
  }
}

BandPolicy to_band(const rb_band& b) {
  BandPolicy out;
  out.mode = b.mode == RB_BAND_FIXED ? BandMode::FixedMultipliers
                                     : BandMode::ProofDerived;
  out.c_lo = b.c_lo;
  out.c_hi = b.c_hi;
  out.target_gamma = b.target_gamma;
  out.target_lambda = b.target_lambda;
  return out;
}

void from_resolved(const ResolvedBand& band, rb_resolved_band* out) {
  out->mode = band.mode == BandMode::FixedMultipliers ? RB_BAND_FIXED
                                                      : RB_BAND_PROOF;
  out->lo = band.lo;
  out->hi = band.hi;
  out->delta0 = band.delta0;
  out->eps0 = band.eps0;
  out->gamma_effective = band.gamma_effective;
  out->gamma_clamped = band.gamma_clamped ? 1 : 0;
  out->e_min = band.e_min;
  out->e_max = band.e_max;
}

TrialConfig to_trial_config(const rb_trial_config& c) {
  TrialConfig out;
  out.params = to_params(c.params);
  out.rule = to_rule(c.rule);
  out.band = to_band(c.band);
  out.trials = c.trials;
  out.master_seed = c.master_seed;
  out.strategy = c.j_strategy == RB_JS_SAMPLED ? JStrategy::Sampled
                                               : JStrategy::AllWindow;
  out.sampled_js = c.sampled_js;
  out.with_packing = c.with_packing != 0;
  out.threads = c.threads;
  if (c.enum_cap) out.enum_cap = c.enum_cap;
  if (c.exact_pack_cap) out.exact_pack_cap = c.exact_pack_cap;
  return out;
}

}  // namespace

struct rb_sample { BasisSample value; };
struct rb_profile { RepProfile value; };
struct rb_reps { RepList value; };
struct rb_packing { PackingResult value; };
struct rb_trial_report { TrialReport value; };
struct rb_scan_report { ScanReport value; };

extern "C" {

const char* rb_status_name(rb_status status) {
  if (status == RB_ERR_INTERNAL) return "INTERNAL";
  return error_code_name(static_cast<ErrorCode>(static_cast<int>(status)));
}

const char* rb_last_error_message(void) { return g_last_error.c_str(); }

const char* rb_version(void) { return "1.0.0"; }

uint64_t rb_derive_seed(uint64_t master, uint64_t stream, uint64_t index) {
  return derive_seed(master, stream, index);
}

void rb_params_init(rb_params* params, int64_t n) {
  params->n = n;
  params->k = 2;
  params->alpha = 0.5;
  params->eta = 0.0;
  params->eps = 0.5;
  params->xi = 0.1;
  params->lambda = 1.0;
  params->a_const = 0.0;
}

rb_status rb_validate_params(const rb_params* params) {
  if (rb_status s = require(params != nullptr, "params is null")) return s;
  return guard([&] { validate_params(to_params(*params)); });
}

rb_status rb_window(int64_t n, int32_t k, double alpha, int64_t* lo,
                    int64_t* hi) {
  if (rb_status s = require(lo && hi, "output pointer is null")) return s;
  return guard([&] {
    const Window w = window_of(n, k, alpha);
    *lo = w.lo;
    *hi = w.hi;
  });
}

rb_status rb_probability_for(const rb_rule* rule, int64_t n, double* p,
                             int32_t* clamped) {
  if (rb_status s = require(rule && p, "rule/p is null")) return s;
  return guard([&] {
    const ProbabilityValue v = probability_for(to_rule(*rule), n);
    *p = v.p;
    if (clamped) *clamped = v.clamped ? 1 : 0;
  });
}

rb_status rb_sample_create(int64_t n, double p, uint64_t seed,
                           rb_sample** out) {
  if (rb_status s = require(out != nullptr, "out is null")) return s;
  return guard([&] { *out = new rb_sample{sample_basis(n, p, seed)}; });
}

rb_status rb_sample_from_members(int64_t n, const int64_t* members,
                                 size_t count, rb_sample** out) {
  if (rb_status s = require(out && (members || count == 0), "bad arguments"))
    return s;
  return guard([&] {
    std::vector<long long> list(members, members + count);
    *out = new rb_sample{sample_from_members(n, std::move(list))};
  });
}

void rb_sample_free(rb_sample* sample) { delete sample; }

int64_t rb_sample_n(const rb_sample* sample) { return sample->value.n; }

size_t rb_sample_size(const rb_sample* sample) {
  return sample->value.members.size();
}

size_t rb_sample_members(const rb_sample* sample, int64_t* buffer,
                         size_t capacity) {
  const auto& members = sample->value.members;
  const size_t wanted = members.size() < capacity ? members.size() : capacity;
  for (size_t i = 0; i < wanted; ++i) buffer[i] = members[i];
  return members.size();
}

rb_status rb_count_all(const rb_sample* sample, int32_t k, int32_t mode,
                       rb_profile** out) {
  if (rb_status s = require(sample && out, "bad arguments")) return s;
  return guard([&] {
    *out = new rb_profile{
        count_all(sample->value, k, static_cast<CountMode>(mode))};
  });
}

rb_status rb_count_fast_k2(const rb_sample* sample, rb_profile** out) {
  if (rb_status s = require(sample && out, "bad arguments")) return s;
  return guard([&] { *out = new rb_profile{count_fast_k2(sample->value)}; });
}

void rb_profile_free(rb_profile* profile) { delete profile; }

int64_t rb_profile_span(const rb_profile* profile) {
  return static_cast<int64_t>(profile->value.counts.size()) - 1;
}

uint64_t rb_profile_at(const rb_profile* profile, int64_t j) {
  return profile->value.at(j);
}

rb_status rb_profile_total(const rb_profile* profile, uint64_t* total) {
  if (rb_status s = require(profile && total, "bad arguments")) return s;
  return guard([&] { *total = profile->value.total(); });
}

rb_status rb_count_brute(const rb_sample* sample, int32_t k, int64_t j,
                         int32_t mode, uint64_t node_budget, uint64_t* count) {
  if (rb_status s = require(sample && count, "bad arguments")) return s;
  return guard([&] {
    *count = count_brute(sample->value, k, j, static_cast<CountMode>(mode),
                         node_budget ? node_budget : kDefaultBruteBudget);
  });
}

rb_status rb_enumerate_reps(const rb_sample* sample, int32_t k, int64_t j,
                            uint64_t cap, rb_reps** out) {
  if (rb_status s = require(sample && out, "bad arguments")) return s;
  return guard([&] {
    *out = new rb_reps{
        enumerate_reps(sample->value, k, j, cap ? cap : kDefaultEnumCap)};
  });
}

void rb_reps_free(rb_reps* reps) { delete reps; }

size_t rb_reps_size(const rb_reps* reps) { return reps->value.size(); }

int32_t rb_reps_k(const rb_reps* reps) { return reps->value.k; }

rb_status rb_reps_get(const rb_reps* reps, size_t index, int64_t* buffer) {
  if (rb_status s = require(reps && buffer, "bad arguments")) return s;
  if (rb_status s = require(index < reps->value.size(), "index out of range"))
    return s;
  const long long* rep = reps->value.rep(index);
  for (int i = 0; i < reps->value.k; ++i) buffer[i] = rep[i];
  return RB_OK;
}

rb_status rb_reps_from_array(int32_t k, const int64_t* flat, size_t rep_count,
                             rb_reps** out) {
  if (rb_status s = require(out && (flat || rep_count == 0) && k >= 1,
                            "bad arguments"))
    return s;
  return guard([&] {
    RepList list;
    list.k = k;
    list.flat.assign(flat, flat + rep_count * static_cast<size_t>(k));
    *out = new rb_reps{std::move(list)};
  });
}

rb_status rb_rho_max(int64_t n, int32_t k, int64_t j, int64_t n_cap,
                     uint64_t* rho) {
  if (rb_status s = require(rho != nullptr, "rho is null")) return s;
  return guard(
      [&] { *rho = rho_max(n, k, j, n_cap > 0 ? n_cap : kDefaultRhoNCap); });
}

rb_status rb_rho_lower_bound(int64_t n, int32_t k, double alpha,
                             double* bound) {
  if (rb_status s = require(bound != nullptr, "bound is null")) return s;
  return guard([&] { *bound = rho_lower_bound(n, k, alpha); });
}

rb_status rb_pack_exact(const rb_reps* reps, size_t cap, rb_packing** out) {
  if (rb_status s = require(reps && out, "bad arguments")) return s;
  return guard([&] {
    *out = new rb_packing{
        pack_exact(reps->value, cap ? cap : kDefaultExactPackCap)};
  });
}

rb_status rb_pack_greedy(const rb_reps* reps, rb_packing** out) {
  if (rb_status s = require(reps && out, "bad arguments")) return s;
  return guard([&] { *out = new rb_packing{pack_greedy(reps->value)}; });
}

void rb_packing_free(rb_packing* packing) { delete packing; }

uint64_t rb_packing_y_star(const rb_packing* packing) {
  return packing->value.y_star;
}

int32_t rb_packing_method(const rb_packing* packing) {
  return packing->value.method == PackMethod::Exact ? RB_PACK_EXACT
                                                    : RB_PACK_GREEDY;
}

uint64_t rb_packing_w(const rb_packing* packing) { return packing->value.w; }

size_t rb_packing_chosen_count(const rb_packing* packing) {
  return packing->value.chosen.size();
}

size_t rb_packing_chosen_at(const rb_packing* packing, size_t index) {
  return packing->value.chosen[index];
}

rb_status rb_overlap_pairs(const rb_reps* reps, uint64_t pair_budget,
                           uint64_t* w, uint64_t* by_size) {
  if (rb_status s = require(reps && w, "bad arguments")) return s;
  return guard([&] {
    const OverlapCount overlap = overlap_pairs(
        reps->value, pair_budget ? pair_budget : kDefaultOverlapBudget);
    *w = overlap.w;
    if (by_size)
      for (size_t i = 0; i < overlap.by_size.size(); ++i)
        by_size[i] = overlap.by_size[i];
  });
}

rb_status rb_expected_count(uint64_t rho, double p, int32_t k, double* value) {
  if (rb_status s = require(value != nullptr, "value is null")) return s;
  return guard([&] { *value = expected_count(rho, p, k); });
}

rb_status rb_chernoff_solve(double alpha, double eta, double lambda_target,
                            double gamma_target, rb_chernoff* out) {
  if (rb_status s = require(out != nullptr, "out is null")) return s;
  return guard([&] {
    const ChernoffSolution sol =
        chernoff_solve(alpha, eta, lambda_target, gamma_target);
    out->delta0 = sol.delta0;
    out->eps0 = sol.eps0;
    out->band_lo_mult = sol.band_lo_mult;
    out->band_hi_mult = sol.band_hi_mult;
  });
}

rb_status rb_chernoff_f(double alpha, double eta, double delta,
                        double* value) {
  if (rb_status s = require(value != nullptr, "value is null")) return s;
  return guard([&] { *value = chernoff_f(alpha, eta, delta); });
}

rb_status rb_chernoff_g(double alpha, double eta, double eps, double* value) {
  if (rb_status s = require(value != nullptr, "value is null")) return s;
  return guard([&] { *value = chernoff_g(alpha, eta, eps); });
}

rb_status rb_constants(double alpha, int32_t k, double eps, double xi,
                       double c_j, rb_constants_out* out) {
  if (rb_status s = require(out != nullptr, "out is null")) return s;
  return guard([&] {
    const RateConstants c = constants(alpha, k, eps, xi, c_j);
    out->k_const = c.k_const;
    out->c_k = c.c_k;
    out->gamma_j = c.gamma_j;
    out->med_gap_coeff = c.med_gap_coeff;
  });
}

rb_status rb_talagrand_tail(double med, double t, int32_t k,
                            rb_talagrand* out) {
  if (rb_status s = require(out != nullptr, "out is null")) return s;
  return guard([&] {
    const TalagrandTail tail = talagrand_tail(med, t, k);
    out->lower_threshold = tail.lower_threshold;
    out->lower_bound = tail.lower_bound;
    out->m_upper = tail.m_upper;
  });
}

rb_status rb_av_limit_prob(double a_const, double alpha, int32_t k,
                           double* value) {
  if (rb_status s = require(value != nullptr, "value is null")) return s;
  return guard([&] { *value = av_limit_prob(a_const, alpha, k); });
}

rb_status rb_expected_overlap_exact(int64_t n, int32_t k, double p, int64_t j,
                                    int64_t n_cap, double* exact,
                                    uint64_t* pairs_by_size) {
  if (rb_status s = require(exact != nullptr, "exact is null")) return s;
  return guard([&] {
    const OverlapExpectation e =
        expected_overlap_exact(n, k, p, j, n_cap > 0 ? n_cap : 400);
    *exact = e.exact;
    if (pairs_by_size)
      for (size_t i = 0; i < e.pairs_by_size.size(); ++i)
        pairs_by_size[i] = e.pairs_by_size[i];
  });
}

rb_status rb_expected_overlap_estimate(int64_t n, int32_t k, double* value) {
  if (rb_status s = require(value != nullptr, "value is null")) return s;
  return guard([&] { *value = expected_overlap_estimate(n, k); });
}

void rb_band_init(rb_band* band) {
  band->mode = RB_BAND_PROOF;
  band->c_lo = 0.5;
  band->c_hi = 4.0;
  band->target_gamma = 1.0;
  band->target_lambda = 1.0;
}

void rb_trial_config_init(rb_trial_config* config, int64_t n) {
  rb_params_init(&config->params, n);
  config->rule.tag = RB_RULE_THM21;
  config->rule.alpha = 0.5;
  config->rule.eta = 0.0;
  config->rule.eps = 0.0;
  config->rule.a_const = 0.0;
  config->rule.coeff = 1.0;
  config->rule.p = 0.0;
  config->rule.k = 2;
  rb_band_init(&config->band);
  config->trials = 1;
  config->master_seed = 0;
  config->j_strategy = RB_JS_ALL;
  config->sampled_js = 0;
  config->with_packing = 0;
  config->threads = 0;
  config->enum_cap = 0;
  config->exact_pack_cap = 0;
}

rb_status rb_resolve_band(const rb_params* params, const rb_band* band,
                          rb_resolved_band* out) {
  if (rb_status s = require(params && band && out, "bad arguments")) return s;
  return guard([&] {
    const ResolvedBand resolved = resolve_band(to_params(*params), to_band(*band));
    from_resolved(resolved, out);
  });
}

rb_status rb_run_trials(const rb_trial_config* config, rb_trial_report** out) {
  if (rb_status s = require(config && out, "bad arguments")) return s;
  return guard(
      [&] { *out = new rb_trial_report{run_trials(to_trial_config(*config))}; });
}

void rb_trial_report_free(rb_trial_report* report) { delete report; }

double rb_trial_report_p(const rb_trial_report* report) {
  return report->value.p;
}

int32_t rb_trial_report_p_clamped(const rb_trial_report* report) {
  return report->value.p_clamped ? 1 : 0;
}

void rb_trial_report_window(const rb_trial_report* report, int64_t* lo,
                            int64_t* hi) {
  if (lo) *lo = report->value.window.lo;
  if (hi) *hi = report->value.window.hi;
}

void rb_trial_report_band(const rb_trial_report* report,
                          rb_resolved_band* band) {
  from_resolved(report->value.band, band);
}

double rb_trial_report_x_zero(const rb_trial_report* report) {
  return report->value.x_zero_fraction;
}

double rb_trial_report_coverage(const rb_trial_report* report) {
  return report->value.coverage_fraction;
}

uint64_t rb_trial_report_sandwich_violations(const rb_trial_report* report) {
  return report->value.sandwich_violations;
}

double rb_trial_report_elapsed_seconds(const rb_trial_report* report) {
  return report->value.elapsed_seconds;
}

size_t rb_trial_report_num_js(const rb_trial_report* report) {
  return report->value.per_j.size();
}

rb_status rb_trial_report_j_stats(const rb_trial_report* report, size_t index,
                                  rb_j_stats* out) {
  if (rb_status s = require(report && out, "bad arguments")) return s;
  if (rb_status s =
          require(index < report->value.per_j.size(), "index out of range"))
    return s;
  const JStats& stats = report->value.per_j[index];
  out->j = stats.j;
  out->rho = stats.rho;
  out->mean_y = stats.mean_y;
  out->var_y = stats.var_y;
  out->median_y = stats.median_y;
  out->mean_ystar = stats.mean_ystar;
  out->mean_w = stats.mean_w;
  out->in_band_fraction = stats.in_band_fraction;
  return RB_OK;
}

rb_status rb_threshold_scan(double alpha, int32_t k, int64_t n,
                            const double* a_grid, size_t grid_count,
                            int64_t trials, uint64_t master_seed,
                            int32_t threads, rb_scan_report** out) {
  if (rb_status s = require(out && (a_grid || grid_count == 0),
                            "bad arguments"))
    return s;
  return guard([&] {
    std::vector<double> grid(a_grid, a_grid + grid_count);
    *out = new rb_scan_report{
        threshold_scan(alpha, k, n, grid, trials, master_seed, threads)};
  });
}

rb_status rb_decay_scan(int32_t k, double alpha, double eps,
                        const int64_t* n_grid, size_t grid_count,
                        int64_t trials, uint64_t master_seed, int32_t threads,
                        rb_scan_report** out) {
  if (rb_status s = require(out && (n_grid || grid_count == 0),
                            "bad arguments"))
    return s;
  return guard([&] {
    std::vector<long long> grid(n_grid, n_grid + grid_count);
    *out = new rb_scan_report{
        decay_scan(k, alpha, eps, grid, trials, master_seed, threads)};
  });
}

void rb_scan_report_free(rb_scan_report* report) { delete report; }

size_t rb_scan_report_size(const rb_scan_report* report) {
  return report->value.points.size();
}

rb_status rb_scan_report_point(const rb_scan_report* report, size_t index,
                               rb_scan_point* out) {
  if (rb_status s = require(report && out, "bad arguments")) return s;
  if (rb_status s =
          require(index < report->value.points.size(), "index out of range"))
    return s;
  const ScanPoint& point = report->value.points[index];
  out->axis = point.axis;
  out->estimate = point.estimate;
  out->std_error = point.std_error;
  out->trials = point.trials;
  out->analytic = point.analytic;
  out->skipped = point.skipped ? 1 : 0;
  return RB_OK;
}

double rb_scan_report_slope_raw(const rb_scan_report* report) {
  return report->value.slope_raw;
}

double rb_scan_report_slope_adjusted(const rb_scan_report* report) {
  return report->value.slope_adjusted;
}

double rb_scan_report_elapsed_seconds(const rb_scan_report* report) {
  return report->value.elapsed_seconds;
}

rb_status rb_concentration_check(const rb_params* params, const rb_rule* rule,
                                 int64_t trials, uint64_t master_seed,
                                 int64_t j, int32_t threads,
                                 rb_median_check* out) {
  if (rb_status s = require(params && rule && out, "bad arguments")) return s;
  return guard([&] {
    const MedianCheck check = concentration_check(
        to_params(*params), to_rule(*rule), trials, master_seed, j, threads);
    out->j = check.j;
    out->trials = check.trials;
    out->emp_mean = check.emp_mean;
    out->emp_median = check.emp_median;
    out->gap = check.gap;
    out->bound = check.bound;
    out->pass = check.pass ? 1 : 0;
  });
}

}  // extern "C"
