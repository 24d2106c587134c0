#include "repbasis/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <functional>
#include <mutex>
#include <thread>

#include "repbasis/rng.hpp"

namespace repbasis {

namespace {

int resolve_threads(int threads, long long trials) {
  if (threads <= 0) {
    const unsigned hw = std::thread::hardware_concurrency();
    threads = hw == 0 ? 1 : static_cast<int>(hw);
  }
  if (static_cast<long long>(threads) > trials)
    threads = static_cast<int>(trials);
  return std::max(threads, 1);
}

// Runs worker(t) for every t in [0, trials) across a thread pool.  Results
// must be written into per-trial slots so aggregation is schedule-free.
// Failing trials are collected and the lowest failing index is reported.
void parallel_trials(long long trials, int threads,
                     const std::function<void(long long)>& worker) {
  threads = resolve_threads(threads, trials);
  std::atomic<long long> next{0};
  std::mutex error_mutex;
  long long first_bad = -1;
  ErrorCode bad_code = ErrorCode::Ok;
  std::string bad_message;

  auto body = [&]() {
    for (;;) {
      const long long t = next.fetch_add(1, std::memory_order_relaxed);
      if (t >= trials) return;
      try {
        worker(t);
      } catch (const Error& e) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (first_bad < 0 || t < first_bad) {
          first_bad = t;
          bad_code = e.code();
          bad_message = e.what();
        }
      }
    }
  };

  if (threads == 1) {
    body();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int i = 0; i < threads; ++i) pool.emplace_back(body);
    for (auto& th : pool) th.join();
  }
  if (first_bad >= 0)
    fail(bad_code, "trial " + std::to_string(first_bad) + ": " + bad_message);
}

double factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

// Capacity-over-n^{k-1} estimate of the window constant C(j), clamped below
// by the analytic bound alpha^{k-1}/(k!(k-1)!) (which also serves as the
// fallback beyond the exact-capacity cap).
double c_of_j(long long n, int k, double alpha, long long j) {
  const double floor_value =
      std::pow(alpha, k - 1) / (factorial(k) * factorial(k - 1));
  double rho;
  try {
    rho = static_cast<double>(rho_max(n, k, j));
  } catch (const Error&) {
    return floor_value;
  }
  return std::max(rho / std::pow(static_cast<double>(n), k - 1), floor_value);
}

// Sample variance from exact integer accumulators; one double division keeps
// the result schedule-independent.
double sample_variance(unsigned long long count, unsigned __int128 sum,
                       unsigned __int128 sum_sq) {
  if (count < 2) return 0.0;
  const unsigned __int128 num_pos = static_cast<unsigned __int128>(count) * sum_sq;
  const unsigned __int128 num_neg = sum * sum;
  const double numerator = num_pos >= num_neg
                               ? static_cast<double>(num_pos - num_neg)
                               : -static_cast<double>(num_neg - num_pos);
  return numerator / (static_cast<double>(count) * static_cast<double>(count - 1));
}

std::uint64_t lower_median(std::vector<std::uint64_t> values) {
  if (values.empty()) return 0;
  std::sort(values.begin(), values.end());
  return values[(values.size() - 1) / 2];
}

// Y(j) for a single target via the k = 2 pair structure: count members a with
// a < j - a and j - a also a member.
std::uint64_t count_k2_at(const BasisSample& sample, long long j) {
  std::uint64_t y = 0;
  for (long long a : sample.members) {
    const long long b = j - a;
    if (b <= a) break;
    if (b <= sample.n && sample.contains(b)) ++y;
  }
  return y;
}

struct SlopeFit {
  double raw = 0.0;
  double adjusted = 0.0;
};

SlopeFit fit_decay_slopes(const std::vector<ScanPoint>& points, int k) {
  std::vector<double> xs, ys, ys_adj;
  for (const auto& pt : points) {
    if (pt.skipped || pt.estimate <= 0.0) continue;
    const double x = std::log(pt.axis);
    xs.push_back(x);
    ys.push_back(std::log(pt.estimate));
    ys_adj.push_back(std::log(pt.estimate) -
                     (static_cast<double>(k) + 1.0) / k * std::log(x));
  }
  SlopeFit fit;
  if (xs.size() < 2) return fit;
  const auto slope = [&](const std::vector<double>& y) {
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) { mx += xs[i]; my += y[i]; }
    mx /= static_cast<double>(xs.size());
    my /= static_cast<double>(xs.size());
    double num = 0, den = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      num += (xs[i] - mx) * (y[i] - my);
      den += (xs[i] - mx) * (xs[i] - mx);
    }
    return den > 0 ? num / den : 0.0;
  };
  fit.raw = slope(ys);
  fit.adjusted = slope(ys_adj);
  return fit;
}

}  // namespace

ResolvedBand resolve_band(const ExperimentParams& params,
                          const BandPolicy& policy) {
  validate_params(params);
  validate_band_policy(policy);
  const long long n = params.n;
  const int k = params.k;
  const double ln = std::log(static_cast<double>(n));

  ResolvedBand band;
  band.mode = policy.mode;
  if (policy.mode == BandMode::FixedMultipliers) {
    band.lo = policy.c_lo * ln;
    band.hi = policy.c_hi * ln;
    return band;
  }

  const Window window = window_of(n, k, params.alpha);
  const long long mid = static_cast<long long>(k) * n / 2;
  if (k == 2) {
    const ProbabilityValue anchor =
        probability_for(ProbabilityRule::thm21(params.alpha, params.eta), n);
    const double p2 = anchor.p * anchor.p;
    band.e_min = static_cast<double>(rho_max(n, 2, window.lo)) * p2;
    band.e_max = static_cast<double>(rho_max(n, 2, mid)) * p2;

    double gamma = policy.target_gamma;
    const double gamma_sup = params.eta * params.alpha / 2.0;
    if (gamma >= gamma_sup) {
      // The requested lower rate has no root; any gamma in (0, eta*alpha/2)
      // works, so fall back to the midpoint of the attainable range.
      if (!(gamma_sup > 0.0))
        fail(ErrorCode::NoLowerRoot,
             "proof-derived lower band needs eta*alpha > 0");
      gamma = gamma_sup / 2.0;
      band.gamma_clamped = true;
    }
    const ChernoffSolution sol =
        chernoff_solve(params.alpha, params.eta, policy.target_lambda, gamma);
    band.delta0 = sol.delta0;
    band.eps0 = sol.eps0;
    band.gamma_effective = gamma;
    band.lo = sol.band_lo_mult * band.e_min;
    band.hi = sol.band_hi_mult * band.e_max;
    return band;
  }

  // k >= 3: the proof's bracketing [gamma_n log n, C_k delta_n log n] with
  // C(j) estimated at the window edge and midpoint (the window is symmetric).
  const double c_edge = c_of_j(n, k, params.alpha, window.lo);
  const double c_mid = c_of_j(n, k, params.alpha, mid);
  const RateConstants edge =
      constants(params.alpha, k, params.eps, params.xi, c_edge);
  const RateConstants center =
      constants(params.alpha, k, params.eps, params.xi, c_mid);
  const double gamma_n = std::min(edge.gamma_j, center.gamma_j);
  const double t = std::sqrt(5.0 * ln);
  const double delta_edge =
      talagrand_tail(c_edge * edge.k_const * ln, t, k).m_upper / ln;
  const double delta_mid =
      talagrand_tail(c_mid * center.k_const * ln, t, k).m_upper / ln;
  const double delta_n = std::max(delta_edge, delta_mid);
  band.gamma_effective = gamma_n;
  band.delta0 = delta_n;
  band.e_min = c_edge * edge.k_const * ln;
  band.e_max = c_mid * center.k_const * ln;
  band.lo = gamma_n * ln;
  band.hi = static_cast<double>(center.c_k) * delta_n * ln;
  return band;
}

TrialReport run_trials(const TrialConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  validate_params(config.params);
  if (config.trials < 1)
    fail(ErrorCode::TrialsTooSmall, "at least one trial is required");

  const long long n = config.params.n;
  const int k = config.params.k;
  const Window window = window_of(n, k, config.params.alpha);
  const ProbabilityValue pv = probability_for(config.rule, n);
  const ResolvedBand band = resolve_band(config.params, config.band);

  // Reported targets: window endpoints, midpoint, and optional sampled points.
  std::vector<long long> js = {window.lo, static_cast<long long>(k) * n / 2,
                               window.hi};
  if (config.sampled_js > 0) {
    Rng rng(derive_seed(config.master_seed, kStreamJSample, 0));
    for (int i = 0; i < config.sampled_js; ++i)
      js.push_back(window.lo +
                   static_cast<long long>(rng.next_below(
                       static_cast<std::uint64_t>(window.length()))));
  }
  std::sort(js.begin(), js.end());
  js.erase(std::unique(js.begin(), js.end()), js.end());
  const std::size_t num_js = js.size();

  const long long trials = config.trials;
  const std::size_t ut = static_cast<std::size_t>(trials);
  std::vector<std::uint8_t> in_band_flag(ut, 0), covered_flag(ut, 0),
      sandwich_bad(ut, 0);
  std::vector<std::vector<std::uint64_t>> y_slots(
      num_js, std::vector<std::uint64_t>(ut, 0));
  std::vector<std::vector<std::uint64_t>> ystar_slots, w_slots;
  if (config.with_packing) {
    ystar_slots.assign(num_js, std::vector<std::uint64_t>(ut, 0));
    w_slots.assign(num_js, std::vector<std::uint64_t>(ut, 0));
  }

  const bool all_window = config.strategy == JStrategy::AllWindow;

  parallel_trials(trials, config.threads, [&](long long t) {
    const std::uint64_t seed =
        derive_seed(config.master_seed, kStreamTrial,
                    static_cast<std::uint64_t>(t));
    const BasisSample sample = sample_basis(n, pv.p, seed);
    const std::size_t st = static_cast<std::size_t>(t);

    bool in_band = true;
    bool covered = true;
    std::vector<std::uint64_t> y_at(num_js, 0);

    if (k == 2) {
      const RepProfile profile = count_fast_k2(sample);
      if (all_window) {
        for (long long j = window.lo; j <= window.hi; ++j) {
          const double y = static_cast<double>(profile.at(j));
          covered = covered && y >= 1.0;
          in_band = in_band && y >= band.lo && y <= band.hi;
          if (!covered && !in_band) break;
        }
      }
      for (std::size_t i = 0; i < num_js; ++i) y_at[i] = profile.at(js[i]);
    } else if (all_window) {
      const RepProfile profile = count_all(sample, k, CountMode::Distinct);
      for (long long j = window.lo; j <= window.hi; ++j) {
        const double y = static_cast<double>(profile.at(j));
        covered = covered && y >= 1.0;
        in_band = in_band && y >= band.lo && y <= band.hi;
        if (!covered && !in_band) break;
      }
      for (std::size_t i = 0; i < num_js; ++i) y_at[i] = profile.at(js[i]);
    } else {
      for (std::size_t i = 0; i < num_js; ++i)
        y_at[i] = enumerate_reps(sample, k, js[i], config.enum_cap).size();
    }

    if (!all_window) {
      for (std::size_t i = 0; i < num_js; ++i) {
        const double y = static_cast<double>(y_at[i]);
        covered = covered && y >= 1.0;
        in_band = in_band && y >= band.lo && y <= band.hi;
      }
    }

    if (config.with_packing) {
      for (std::size_t i = 0; i < num_js; ++i) {
        std::uint64_t ystar, w;
        if (k == 2) {
          // 2-sums of a common target are pairwise disjoint.
          ystar = y_at[i];
          w = 0;
        } else {
          const RepList reps =
              enumerate_reps(sample, k, js[i], config.enum_cap);
          const std::size_t cap = std::min<std::size_t>(config.exact_pack_cap, 64);
          const PackingResult packed = reps.size() <= cap
                                           ? pack_exact(reps, cap)
                                           : pack_greedy(reps);
          ystar = packed.y_star;
          w = packed.w;
        }
        ystar_slots[i][st] = ystar;
        w_slots[i][st] = w;
        if (!(ystar <= y_at[i] && y_at[i] <= ystar + w)) sandwich_bad[st] = 1;
      }
    }

    for (std::size_t i = 0; i < num_js; ++i) y_slots[i][st] = y_at[i];
    in_band_flag[st] = in_band ? 1 : 0;
    covered_flag[st] = covered ? 1 : 0;
  });

  TrialReport report;
  report.params = config.params;
  report.rule_tag = config.rule.tag_name();
  report.p = pv.p;
  report.p_clamped = pv.clamped;
  report.window = window;
  report.band = band;
  report.trials = trials;
  report.master_seed = config.master_seed;
  report.strategy = config.strategy;
  report.with_packing = config.with_packing;

  std::uint64_t x_zero = 0, covered_total = 0, sandwich = 0;
  for (std::size_t t = 0; t < ut; ++t) {
    x_zero += in_band_flag[t];
    covered_total += covered_flag[t];
    sandwich += sandwich_bad[t];
  }
  report.x_zero_fraction =
      static_cast<double>(x_zero) / static_cast<double>(trials);
  report.coverage_fraction =
      static_cast<double>(covered_total) / static_cast<double>(trials);
  report.sandwich_violations = sandwich;

  report.per_j.resize(num_js);
  for (std::size_t i = 0; i < num_js; ++i) {
    JStats& stats = report.per_j[i];
    stats.j = js[i];
    try {
      stats.rho = rho_max(n, k, js[i]);
    } catch (const Error&) {
      stats.rho = 0;
    }
    unsigned __int128 sum = 0, sum_sq = 0;
    std::uint64_t in_band_count = 0;
    for (std::size_t t = 0; t < ut; ++t) {
      const std::uint64_t y = y_slots[i][t];
      sum += y;
      sum_sq += static_cast<unsigned __int128>(y) * y;
      const double yd = static_cast<double>(y);
      if (yd >= band.lo && yd <= band.hi) ++in_band_count;
    }
    stats.mean_y = static_cast<double>(sum) / static_cast<double>(trials);
    stats.var_y = sample_variance(static_cast<unsigned long long>(trials), sum,
                                  sum_sq);
    stats.median_y = lower_median(y_slots[i]);
    stats.in_band_fraction =
        static_cast<double>(in_band_count) / static_cast<double>(trials);
    if (config.with_packing) {
      unsigned __int128 sum_star = 0, sum_w = 0;
      for (std::size_t t = 0; t < ut; ++t) {
        sum_star += ystar_slots[i][t];
        sum_w += w_slots[i][t];
      }
      stats.mean_ystar =
          static_cast<double>(sum_star) / static_cast<double>(trials);
      stats.mean_w = static_cast<double>(sum_w) / static_cast<double>(trials);
    }
  }

  report.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return report;
}

ScanReport threshold_scan(double alpha, int k, long long n,
                          const std::vector<double>& a_grid, long long trials,
                          std::uint64_t master_seed, int threads) {
  const auto start = std::chrono::steady_clock::now();
  if (trials < 1)
    fail(ErrorCode::TrialsTooSmall, "at least one trial is required");
  const Window window = window_of(n, k, alpha);

  ScanReport report;
  report.axis = "a_const";
  report.points.reserve(a_grid.size());

  for (std::size_t idx = 0; idx < a_grid.size(); ++idx) {
    const double a = a_grid[idx];
    ScanPoint point;
    point.axis = a;
    point.trials = trials;
    point.analytic = av_limit_prob(a, alpha, k);

    const ProbabilityRule rule = k == 2
                                     ? ProbabilityRule::av2(alpha, a)
                                     : ProbabilityRule::avk(alpha, k, a);
    double p;
    try {
      p = probability_for(rule, n).p;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::POutOfRange) throw;
      point.skipped = true;
      report.points.push_back(point);
      continue;
    }

    const std::uint64_t point_seed =
        derive_seed(master_seed, kStreamScanPoint, idx);
    std::vector<std::uint8_t> covered(static_cast<std::size_t>(trials), 0);
    parallel_trials(trials, threads, [&](long long t) {
      const std::uint64_t seed =
          derive_seed(point_seed, kStreamTrial, static_cast<std::uint64_t>(t));
      const BasisSample sample = sample_basis(n, p, seed);
      const RepProfile profile = k == 2
                                     ? count_fast_k2(sample)
                                     : count_all(sample, k, CountMode::Distinct);
      bool all = true;
      for (long long j = window.lo; j <= window.hi; ++j)
        if (profile.at(j) == 0) { all = false; break; }
      covered[static_cast<std::size_t>(t)] = all ? 1 : 0;
    });

    std::uint64_t hits = 0;
    for (std::uint8_t c : covered) hits += c;
    const double q = static_cast<double>(hits) / static_cast<double>(trials);
    point.estimate = q;
    point.std_error = std::sqrt(q * (1.0 - q) / static_cast<double>(trials));
    report.points.push_back(point);
  }

  report.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return report;
}

ScanReport decay_scan(int k, double alpha, double eps,
                      const std::vector<long long>& n_grid, long long trials,
                      std::uint64_t master_seed, int threads) {
  const auto start = std::chrono::steady_clock::now();
  if (k < 3)
    fail(ErrorCode::KTooSmall, "decay scan needs k >= 3 (W vanishes for k = 2)");
  if (trials < 1)
    fail(ErrorCode::TrialsTooSmall, "at least one trial is required");

  ScanReport report;
  report.axis = "n";
  report.points.reserve(n_grid.size());

  for (std::size_t idx = 0; idx < n_grid.size(); ++idx) {
    const long long n = n_grid[idx];
    const long long j = static_cast<long long>(k) * n / 2;
    const double p =
        probability_for(ProbabilityRule::thm31(alpha, k, eps), n).p;

    const std::uint64_t point_seed =
        derive_seed(master_seed, kStreamScanPoint, idx);
    std::vector<std::uint64_t> w_slots(static_cast<std::size_t>(trials), 0);
    parallel_trials(trials, threads, [&](long long t) {
      const std::uint64_t seed =
          derive_seed(point_seed, kStreamTrial, static_cast<std::uint64_t>(t));
      const BasisSample sample = sample_basis(n, p, seed);
      const RepList reps = enumerate_reps(sample, k, j);
      w_slots[static_cast<std::size_t>(t)] = overlap_pairs(reps).w;
    });

    unsigned __int128 sum = 0, sum_sq = 0;
    for (std::uint64_t w : w_slots) {
      sum += w;
      sum_sq += static_cast<unsigned __int128>(w) * w;
    }
    ScanPoint point;
    point.axis = static_cast<double>(n);
    point.trials = trials;
    point.estimate = static_cast<double>(sum) / static_cast<double>(trials);
    point.std_error = std::sqrt(
        sample_variance(static_cast<unsigned long long>(trials), sum, sum_sq) /
        static_cast<double>(trials));
    point.analytic = expected_overlap_estimate(n, k);
    report.points.push_back(point);
  }

  const SlopeFit fit = fit_decay_slopes(report.points, k);
  report.slope_raw = fit.raw;
  report.slope_adjusted = fit.adjusted;
  report.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return report;
}

MedianCheck concentration_check(const ExperimentParams& params,
                                const ProbabilityRule& rule, long long trials,
                                std::uint64_t master_seed, long long j,
                                int threads) {
  validate_params(params);
  if (trials < 1)
    fail(ErrorCode::TrialsTooSmall, "at least one trial is required");
  const long long n = params.n;
  const int k = params.k;
  if (j < 0 || j > static_cast<long long>(k) * n)
    fail(ErrorCode::InvalidArgument, "j outside [0, k*n]");
  const double p = probability_for(rule, n).p;

  std::vector<std::uint64_t> values(static_cast<std::size_t>(trials), 0);
  parallel_trials(trials, threads, [&](long long t) {
    const std::uint64_t seed =
        derive_seed(master_seed, kStreamTrial, static_cast<std::uint64_t>(t));
    const BasisSample sample = sample_basis(n, p, seed);
    std::uint64_t ystar;
    if (k == 2) {
      ystar = count_k2_at(sample, j);  // Y* = Y at k = 2
    } else {
      const RepList reps = enumerate_reps(sample, k, j);
      ystar = reps.size() <= kDefaultExactPackCap
                  ? pack_exact(reps).y_star
                  : pack_greedy_size(reps);
    }
    values[static_cast<std::size_t>(t)] = ystar;
  });

  unsigned __int128 sum = 0;
  for (std::uint64_t v : values) sum += v;

  MedianCheck check;
  check.j = j;
  check.trials = trials;
  check.emp_mean = static_cast<double>(sum) / static_cast<double>(trials);
  check.emp_median = static_cast<double>(lower_median(values));
  check.gap = std::abs(check.emp_median - check.emp_mean);
  check.bound = 40.0 * std::sqrt(static_cast<double>(k) * check.emp_mean);
  check.pass = check.gap <= check.bound;
  return check;
}

}  // namespace repbasis
