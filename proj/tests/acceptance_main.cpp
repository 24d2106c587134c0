// Acceptance suite: runs every gate criterion end to end against the shared
// library's C interface and prints one pass/fail line per criterion.
// Exit status is the number of failed criteria.
//
// Monte Carlo criteria run with pinned master seeds so the suite is
// deterministic; estimates and tolerances are as stated per criterion.
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "repbasis.h"

namespace {

int g_failures = 0;

class Timer {
 public:
  Timer() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

void report(const char* id, bool pass, const std::string& details) {
  std::printf("[%s] %s: %s\n", pass ? "PASS" : "FAIL", id, details.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

void require_ok(rb_status status, const char* what) {
  if (status != RB_OK) {
    std::printf("[FAIL] setup: %s: %s (%s)\n", what, rb_status_name(status),
                rb_last_error_message());
    std::exit(99);
  }
}

std::string fmt(const char* format, ...) {
  char buffer[512];
  va_list args;
  va_start(args, format);
  std::vsnprintf(buffer, sizeof(buffer), format, args);
  va_end(args);
  return buffer;
}

// ---- C1: count_all == count_brute on random small instances ----------------

void criterion_1() {
  Timer timer;
  const std::uint64_t master = 1001;
  std::uint64_t mismatches = 0, comparisons = 0;
  for (int i = 0; i < 200; ++i) {
    const std::uint64_t h = rb_derive_seed(master, RB_STREAM_INSTANCE, i);
    const std::int64_t n = 2 + static_cast<std::int64_t>(h % 29);  // [2, 30]
    const int k = 2 + static_cast<int>((h >> 8) % 3);
    const double p = 0.2 + 0.3 * static_cast<double>((h >> 16) % 3);
    rb_sample* sample = nullptr;
    require_ok(rb_sample_create(n, p, rb_derive_seed(master, RB_STREAM_TRIAL, i),
                                &sample),
               "C1 sample");
    for (std::int32_t mode : {RB_COUNT_DISTINCT, RB_COUNT_MULTISET}) {
      rb_profile* profile = nullptr;
      require_ok(rb_count_all(sample, k, mode, &profile), "C1 count_all");
      for (std::int64_t j = 0; j <= static_cast<std::int64_t>(k) * n; ++j) {
        std::uint64_t brute = 0;
        require_ok(rb_count_brute(sample, k, j, mode, 0, &brute),
                   "C1 count_brute");
        ++comparisons;
        if (brute != rb_profile_at(profile, j)) ++mismatches;
      }
      rb_profile_free(profile);
    }
    rb_sample_free(sample);
  }
  const double elapsed = timer.seconds();
  report("C1", mismatches == 0 && elapsed < 60.0,
         fmt("oracle equivalence: 200 instances, %llu comparisons, "
             "%llu mismatches, %.1fs",
             (unsigned long long)comparisons, (unsigned long long)mismatches,
             elapsed));
}

// ---- C2: rho_max closed form vs brute force ---------------------------------

void criterion_2() {
  std::uint64_t bad = 0;
  for (std::int64_t n = 1; n <= 200; ++n) {
    std::vector<std::uint64_t> hist(static_cast<std::size_t>(2 * n) + 1, 0);
    for (std::int64_t a = 0; a <= n; ++a)
      for (std::int64_t b = a + 1; b <= n; ++b)
        ++hist[static_cast<std::size_t>(a + b)];
    for (std::int64_t j = 0; j <= 2 * n; ++j) {
      std::uint64_t rho = 0;
      require_ok(rb_rho_max(n, 2, j, 0, &rho), "C2 rho_max");
      const std::int64_t m = j <= n ? j : 2 * n - j;
      const std::uint64_t closed = static_cast<std::uint64_t>((m + 1) / 2);
      if (rho != hist[static_cast<std::size_t>(j)] || rho != closed) ++bad;
    }
  }
  report("C2", bad == 0,
         fmt("capacity closed form ceil(min(j,2n-j)/2) for all n <= 200: "
             "%llu mismatches",
             (unsigned long long)bad));
}

// ---- C3: fast k=2 path equals the DP bit-exactly ----------------------------

void criterion_3() {
  Timer timer;
  const std::uint64_t master = 303;
  std::uint64_t bad = 0;
  for (int i = 0; i < 100; ++i) {
    // n log-uniform over [100, 1e5].
    const double u = static_cast<double>(i) / 99.0;
    const std::int64_t n =
        static_cast<std::int64_t>(std::llround(100.0 * std::pow(1000.0, u)));
    rb_rule rule;
    std::memset(&rule, 0, sizeof(rule));
    rule.tag = RB_RULE_THM21;
    rule.alpha = 0.5;
    double p = 0.0;
    int32_t clamped = 0;
    require_ok(rb_probability_for(&rule, n, &p, &clamped), "C3 p");
    const double mult[3] = {0.6, 1.0, 1.4};
    p = std::min(1.0, p * mult[i % 3]);
    rb_sample* sample = nullptr;
    require_ok(rb_sample_create(n, p, rb_derive_seed(master, RB_STREAM_TRIAL, i),
                                &sample),
               "C3 sample");
    rb_profile* fast = nullptr;
    rb_profile* reference = nullptr;
    require_ok(rb_count_fast_k2(sample, &fast), "C3 fast");
    require_ok(rb_count_all(sample, 2, RB_COUNT_DISTINCT, &reference),
               "C3 count_all");
    for (std::int64_t j = 0; j <= 2 * n; ++j)
      if (rb_profile_at(fast, j) != rb_profile_at(reference, j)) ++bad;
    rb_profile_free(fast);
    rb_profile_free(reference);
    rb_sample_free(sample);
  }
  report("C3", bad == 0,
         fmt("fast k=2 path bit-exact vs DP on 100 samples up to n=1e5: "
             "%llu mismatches, %.1fs",
             (unsigned long long)bad, timer.seconds()));
}

// ---- C4: k=2 representations of one target pack to their full count --------

void criterion_4() {
  const std::uint64_t master = 404;
  std::uint64_t bad = 0;
  for (int i = 0; i < 100; ++i) {
    const std::uint64_t h = rb_derive_seed(master, RB_STREAM_INSTANCE, i);
    const std::int64_t n = 20 + static_cast<std::int64_t>(h % 101);
    const double p = 0.2 + 0.3 * static_cast<double>((h >> 16) % 3);
    rb_sample* sample = nullptr;
    require_ok(rb_sample_create(n, p, rb_derive_seed(master, RB_STREAM_TRIAL, i),
                                &sample),
               "C4 sample");
    rb_profile* profile = nullptr;
    require_ok(rb_count_fast_k2(sample, &profile), "C4 profile");
    for (std::int64_t j = 0; j <= 2 * n; ++j) {
      rb_reps* reps = nullptr;
      require_ok(rb_enumerate_reps(sample, 2, j, 0, &reps), "C4 reps");
      rb_packing* packing = nullptr;
      require_ok(rb_pack_exact(reps, 0, &packing), "C4 pack");
      if (rb_packing_y_star(packing) != rb_profile_at(profile, j)) ++bad;
      rb_packing_free(packing);
      rb_reps_free(reps);
    }
    rb_profile_free(profile);
    rb_sample_free(sample);
  }
  report("C4", bad == 0,
         fmt("pack_exact equals the k=2 count on 100 samples, all targets: "
             "%llu mismatches",
             (unsigned long long)bad));
}

// ---- C5: Bin(rho, p^2) law at j = n ----------------------------------------

void criterion_5() {
  Timer timer;
  rb_trial_config config;
  rb_trial_config_init(&config, 1000);
  config.params.eta = 0.5;
  config.rule.tag = RB_RULE_THM21;
  config.rule.alpha = 0.5;
  config.rule.eta = 0.5;
  config.band.mode = RB_BAND_FIXED;
  config.band.c_lo = 0.0;
  config.band.c_hi = 1e280;
  config.trials = 10000;
  config.master_seed = 505;
  rb_trial_report* run = nullptr;
  require_ok(rb_run_trials(&config, &run), "C5 run");

  const double p = rb_trial_report_p(run);
  const double p2 = p * p;
  const double rho = 500.0;
  const double mean_expected = rho * p2;
  const double var_expected = rho * p2 * (1.0 - p2);
  const double mean_tol = 3.0 * std::sqrt(var_expected / 10000.0);

  bool found = false;
  double mean_err = 0.0, var_ratio = 0.0;
  for (std::size_t i = 0; i < rb_trial_report_num_js(run); ++i) {
    rb_j_stats stats;
    require_ok(rb_trial_report_j_stats(run, i, &stats), "C5 stats");
    if (stats.j != 1000) continue;
    found = true;
    mean_err = std::abs(stats.mean_y - mean_expected);
    var_ratio = stats.var_y / var_expected;
  }
  rb_trial_report_free(run);
  const bool pass =
      found && mean_err <= mean_tol && std::abs(var_ratio - 1.0) <= 0.10;
  report("C5", pass,
         fmt("Bin(rho, p^2) at j=n: |mean err| %.4f <= %.4f, var ratio %.4f "
             "in [0.9, 1.1], 1e4 trials, %.1fs",
             mean_err, mean_tol, var_ratio, timer.seconds()));
}

// ---- C6: representative-band trend ------------------------------------------

void criterion_6() {
  Timer timer;
  double x_zero[3] = {0, 0, 0};
  const std::int64_t grid[3] = {1000, 10000, 100000};
  for (int i = 0; i < 3; ++i) {
    rb_trial_config config;
    rb_trial_config_init(&config, grid[i]);
    config.params.eta = 0.5;
    config.rule.tag = RB_RULE_THM21;
    config.rule.alpha = 0.5;
    config.rule.eta = 0.5;
    config.band.mode = RB_BAND_PROOF;  // targets lambda = gamma = 1
    config.trials = 200;
    config.master_seed = 1606;
    rb_trial_report* run = nullptr;
    require_ok(rb_run_trials(&config, &run), "C6 run");
    x_zero[i] = rb_trial_report_x_zero(run);
    rb_trial_report_free(run);
  }
  const bool pass = x_zero[0] <= x_zero[1] && x_zero[1] <= x_zero[2] &&
                    x_zero[2] >= 0.9;
  report("C6", pass,
         fmt("P(X=0) trend at n=1e3/1e4/1e5: %.3f <= %.3f <= %.3f, last >= "
             "0.9, %.1fs",
             x_zero[0], x_zero[1], x_zero[2], timer.seconds()));
}

// ---- C7: log-power rule leaves the log-n band -------------------------------

void criterion_7() {
  Timer timer;
  rb_trial_config config;
  rb_trial_config_init(&config, 100000);
  config.params.eta = 0.5;
  config.rule.tag = RB_RULE_LOGPOWER;
  config.rule.coeff = 1.0;
  config.rule.eps = 1.0;
  config.band.mode = RB_BAND_PROOF;  // the k=2 log-n scale band
  config.trials = 200;
  config.master_seed = 707;
  rb_trial_report* run = nullptr;
  require_ok(rb_run_trials(&config, &run), "C7 run");
  const double x_zero = rb_trial_report_x_zero(run);
  rb_trial_report_free(run);
  report("C7", x_zero <= 0.1,
         fmt("log^{1+eps} regime stays out of the log-n band: x_zero %.3f <= "
             "0.1, %.1fs",
             x_zero, timer.seconds()));
}

// ---- C8: AV limit point and threshold monotonicity --------------------------

void criterion_8() {
  Timer timer;
  const double grid[3] = {-4.0, 0.0, 4.0};
  rb_scan_report* scan = nullptr;
  require_ok(
      rb_threshold_scan(0.5, 2, 100000, grid, 3, 1000, 1808, 0, &scan),
      "C8 scan");
  rb_scan_point points[3];
  for (int i = 0; i < 3; ++i)
    require_ok(rb_scan_report_point(scan, i, &points[i]), "C8 point");
  rb_scan_report_free(scan);

  const double limit = std::exp(-1.0);
  const double diff = std::abs(points[1].estimate - limit);
  const bool pass = diff <= 0.07 &&
                    points[0].estimate < points[1].estimate &&
                    points[1].estimate < points[2].estimate;
  report("C8", pass,
         fmt("AV point A=0: |%.4f - %.4f| = %.4f <= 0.07; grid %.3f < %.3f < "
             "%.3f, %.1fs",
             points[1].estimate, limit, diff, points[0].estimate,
             points[1].estimate, points[2].estimate, timer.seconds()));
}

// ---- C9: sandwich + overlap decay -------------------------------------------

void criterion_9() {
  Timer timer;
  rb_trial_config config;
  rb_trial_config_init(&config, 1000);
  config.params.k = 3;
  config.params.eps = 0.5;
  config.params.xi = 0.1;
  config.rule.tag = RB_RULE_THM31;
  config.rule.alpha = 0.5;
  config.rule.k = 3;
  config.rule.eps = 0.5;
  config.j_strategy = RB_JS_SAMPLED;
  config.sampled_js = 0;
  config.with_packing = 1;
  config.trials = 10000;
  config.master_seed = 909;
  rb_trial_report* run = nullptr;
  require_ok(rb_run_trials(&config, &run), "C9 run");
  const std::uint64_t violations = rb_trial_report_sandwich_violations(run);
  rb_trial_report_free(run);

  const std::int64_t n_grid[3] = {1000, 10000, 100000};
  rb_scan_report* decay = nullptr;
  require_ok(rb_decay_scan(3, 0.5, 0.5, n_grid, 3, 400, 910, 0, &decay),
             "C9 decay");
  rb_scan_point points[3];
  for (int i = 0; i < 3; ++i)
    require_ok(rb_scan_report_point(decay, i, &points[i]), "C9 point");
  const double slope = rb_scan_report_slope_adjusted(decay);
  const double slope_raw = rb_scan_report_slope_raw(decay);
  rb_scan_report_free(decay);

  const bool decreasing = points[0].estimate > points[1].estimate &&
                          points[1].estimate > points[2].estimate;
  const bool slope_ok = std::abs(slope - (-1.0 / 3.0)) <= 0.15;
  report("C9", violations == 0 && decreasing && slope_ok,
         fmt("sandwich violations %llu/1e4; mean W %.0f > %.0f > %.0f; "
             "log-normalized slope %.3f (raw %.3f) within -1/3 +- 0.15, %.1fs",
             (unsigned long long)violations, points[0].estimate,
             points[1].estimate, points[2].estimate, slope, slope_raw,
             timer.seconds()));
}

// ---- C10: median-mean gap ----------------------------------------------------

void criterion_10() {
  Timer timer;
  rb_params params;
  rb_params_init(&params, 10000);
  params.k = 3;
  params.eps = 0.5;
  params.xi = 0.1;
  rb_rule rule;
  std::memset(&rule, 0, sizeof(rule));
  rule.tag = RB_RULE_THM31;
  rule.alpha = 0.5;
  rule.k = 3;
  rule.eps = 0.5;
  rb_median_check check;
  require_ok(
      rb_concentration_check(&params, &rule, 10000, 1010, 15000, 0, &check),
      "C10 check");
  report("C10", check.pass != 0,
         fmt("median-mean gap of Y*: |%.2f - %.2f| = %.2f <= 40 sqrt(k mean) "
             "= %.2f, 1e4 trials, %.1fs",
             check.emp_median, check.emp_mean, check.gap, check.bound,
             timer.seconds()));
}

// ---- C11: bounds arithmetic ---------------------------------------------------

void criterion_11() {
  bool pass = true;

  rb_constants_out constants;
  require_ok(rb_constants(0.5, 3, 0.0, 0.1, 1.0, &constants), "C11 constants");
  if (std::abs(constants.k_const - 576.0) > 1e-9) pass = false;
  if (constants.c_k != 384) pass = false;

  std::uint64_t grid_bad = 0;
  for (double med : {1.0, 5.5, 10.0, 123.456, 1e4}) {
    for (double t : {0.5, 1.0, 2.0, 5.0, 10.0}) {
      for (int k : {2, 3, 5, 8}) {
        rb_talagrand tail;
        require_ok(rb_talagrand_tail(med, t, k, &tail), "C11 tail");
        const double back =
            tail.m_upper - t * std::sqrt(static_cast<double>(k) * tail.m_upper);
        if (std::abs(back - med) > 1e-9 * med) ++grid_bad;
      }
    }
  }
  if (grid_bad != 0) pass = false;

  double f_value = 0.0;
  require_ok(rb_chernoff_f(1.0, 0.0, std::exp(1.0) - 1.0, &f_value),
             "C11 f");
  const double f_err = std::abs(f_value - 1.0);
  if (f_err > 1e-12) pass = false;

  double av = 0.0;
  require_ok(rb_av_limit_prob(0.0, 0.5, 3, &av), "C11 av");
  const double av_err = std::abs(av - 0.6065306597126334);
  if (av_err > 1e-12) pass = false;

  report("C11", pass,
         fmt("K=%.0f, C_3=%llu, m round-trip bad %llu/100, |f(e-1)-1| = "
             "%.1e, |av(0)-e^{-1/2}| = %.1e",
             constants.k_const, (unsigned long long)constants.c_k,
             (unsigned long long)grid_bad, f_err, av_err));
}

// ---- C12: byte-identical reports across thread counts -------------------------

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void criterion_12() {
  const char* env = std::getenv("REPBASIS_CLI");
  const std::string cli = env ? env : "./tools/repbasis";
  bool pass = true;
  std::string details;
  for (const char* format : {"json", "csv"}) {
    const std::string base =
        cli + " trials --n 2000 --k 2 --alpha 0.5 --eta 0.5 --trials 40"
              " --seed 123 --sampled-js 4 --packing --format " + format;
    const std::string file_a = std::string("acc12_a.") + format;
    const std::string file_b = std::string("acc12_b.") + format;
    const int status_a = std::system(
        (base + " --threads 1 --out " + file_a + " 2>/dev/null").c_str());
    const int status_b = std::system(
        (base + " --threads 8 --out " + file_b + " 2>/dev/null").c_str());
    const std::string bytes_a = slurp(file_a);
    const std::string bytes_b = slurp(file_b);
    std::remove(file_a.c_str());
    std::remove(file_b.c_str());
    const bool ok = WIFEXITED(status_a) && WEXITSTATUS(status_a) == 0 &&
                    WIFEXITED(status_b) && WEXITSTATUS(status_b) == 0 &&
                    !bytes_a.empty() && bytes_a == bytes_b;
    if (!ok) pass = false;
    details += fmt("%s %s (%zu bytes) ", format, ok ? "identical" : "DIFFER",
                   bytes_a.size());
  }
  report("C12", pass, "threads=1 vs threads=8 reports: " + details);
}

}  // namespace

int main() {
  Timer total;
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  criterion_10();
  criterion_11();
  criterion_12();
  std::printf("%d/12 criteria passed in %.1fs\n", 12 - g_failures,
              total.seconds());
  return g_failures;
}
