#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>

#include "repbasis/experiments.hpp"
#include "repbasis/rng.hpp"

using namespace repbasis;

namespace {

template <typename F>
ErrorCode error_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::Ok;
}

ExperimentParams params_k2(long long n, double alpha = 0.5, double eta = 0.5) {
  ExperimentParams p;
  p.n = n;
  p.k = 2;
  p.alpha = alpha;
  p.eta = eta;
  return p;
}

bool reports_equal(const TrialReport& a, const TrialReport& b) {
  if (std::memcmp(&a.p, &b.p, sizeof(double)) != 0) return false;
  if (a.x_zero_fraction != b.x_zero_fraction) return false;
  if (a.coverage_fraction != b.coverage_fraction) return false;
  if (a.sandwich_violations != b.sandwich_violations) return false;
  if (a.per_j.size() != b.per_j.size()) return false;
  for (std::size_t i = 0; i < a.per_j.size(); ++i) {
    const JStats& x = a.per_j[i];
    const JStats& y = b.per_j[i];
    if (x.j != y.j || x.rho != y.rho || x.median_y != y.median_y) return false;
    if (std::memcmp(&x.mean_y, &y.mean_y, sizeof(double)) != 0) return false;
    if (std::memcmp(&x.var_y, &y.var_y, sizeof(double)) != 0) return false;
    if (std::memcmp(&x.mean_ystar, &y.mean_ystar, sizeof(double)) != 0)
      return false;
    if (std::memcmp(&x.mean_w, &y.mean_w, sizeof(double)) != 0) return false;
    if (std::memcmp(&x.in_band_fraction, &y.in_band_fraction, sizeof(double)) !=
        0)
      return false;
  }
  return true;
}

}  // namespace

TEST_CASE("fixed band resolves to multiples of log n") {
  BandPolicy policy;
  policy.mode = BandMode::FixedMultipliers;
  policy.c_lo = 0.5;
  policy.c_hi = 4.0;
  const ResolvedBand band = resolve_band(params_k2(1000), policy);
  CHECK(band.lo == doctest::Approx(0.5 * std::log(1000.0)));
  CHECK(band.hi == doctest::Approx(4.0 * std::log(1000.0)));
}

TEST_CASE("proof band for k=2 anchors at the thm21 scale") {
  BandPolicy policy;  // proof-derived, targets 1/1
  const ExperimentParams p = params_k2(100000);
  const ResolvedBand band = resolve_band(p, policy);
  CHECK(band.gamma_clamped);  // gamma=1 >= eta*alpha/2 = 0.125
  CHECK(band.gamma_effective == doctest::Approx(0.0625));
  CHECK(band.lo > 0.0);
  CHECK(band.lo < 1.0);  // eps0 * E_min is tiny at this scale
  CHECK(band.hi > band.lo);
  // E anchors: rho(window lo) p^2 and rho(n) p^2 at the THM21 probability.
  const double p2 = 4.5 * std::log(1e5) / 1e5;
  CHECK(band.e_min == doctest::Approx(25000.0 * p2).epsilon(1e-12));
  CHECK(band.e_max == doctest::Approx(50000.0 * p2).epsilon(1e-12));
  CHECK(band.hi == doctest::Approx((1.0 + band.delta0) * band.e_max));

  // eta = 0 leaves no attainable gamma at all.
  BandPolicy strict;
  CHECK(error_of([&] { resolve_band(params_k2(1000, 0.5, 0.0), strict); }) ==
        ErrorCode::NoLowerRoot);
}

TEST_CASE("proof band for k=3 uses the gamma_n / C_k delta_n bracketing") {
  ExperimentParams p;
  p.n = 500;
  p.k = 3;
  p.alpha = 0.5;
  p.eps = 0.5;
  p.xi = 0.1;
  BandPolicy policy;
  const ResolvedBand band = resolve_band(p, policy);
  const double ln = std::log(500.0);
  CHECK(band.gamma_effective > 0.0);
  CHECK(band.lo == doctest::Approx(band.gamma_effective * ln));
  CHECK(band.hi > band.lo);
  CHECK(band.hi == doctest::Approx(384.0 * band.delta0 * ln));
}

TEST_CASE("p=1 runs are fully deterministic") {
  TrialConfig config;
  config.params = params_k2(60);
  config.rule = ProbabilityRule::raw(1.0);
  config.band.mode = BandMode::FixedMultipliers;
  config.band.c_lo = 0.0;
  config.band.c_hi = 1e280;
  config.trials = 5;
  config.master_seed = 1;

  const TrialReport report = run_trials(config);
  CHECK(report.x_zero_fraction == 1.0);
  CHECK(report.coverage_fraction == 1.0);
  for (const JStats& stats : report.per_j) {
    CHECK(stats.mean_y == doctest::Approx(static_cast<double>(stats.rho)));
    CHECK(stats.var_y == 0.0);
    CHECK(stats.median_y == stats.rho);
  }

  // Raise c_lo above rho(lo)/log n: the band now excludes every trial.
  const double rho_lo = static_cast<double>(rho_max(60, 2, 30));
  config.band.c_lo = (rho_lo + 1.0) / std::log(60.0);
  const TrialReport strict = run_trials(config);
  CHECK(strict.x_zero_fraction == 0.0);
}

TEST_CASE("trials=0 is rejected; a single trial reproduces its sample") {
  TrialConfig config;
  config.params = params_k2(300);
  config.rule = ProbabilityRule::raw(0.4);
  config.band.mode = BandMode::FixedMultipliers;
  config.band.c_lo = 0.0;
  config.band.c_hi = 1e280;
  config.trials = 0;
  CHECK(error_of([&] { run_trials(config); }) == ErrorCode::TrialsTooSmall);

  config.trials = 1;
  config.master_seed = 99;
  const TrialReport report = run_trials(config);
  const BasisSample sample =
      sample_basis(300, 0.4, derive_seed(99, kStreamTrial, 0));
  const RepProfile profile = count_fast_k2(sample);
  for (const JStats& stats : report.per_j) {
    CHECK(stats.mean_y ==
          doctest::Approx(static_cast<double>(profile.at(stats.j))));
    CHECK(stats.median_y == profile.at(stats.j));
    CHECK(stats.var_y == 0.0);
  }
}

TEST_CASE("reports are identical across thread counts") {
  TrialConfig config;
  config.params = params_k2(400);
  config.rule = ProbabilityRule::thm21(0.5, 0.5);
  config.trials = 60;
  config.master_seed = 31415;
  config.sampled_js = 5;
  config.with_packing = true;

  config.threads = 1;
  const TrialReport serial = run_trials(config);
  config.threads = 4;
  const TrialReport parallel = run_trials(config);
  CHECK(reports_equal(serial, parallel));

  config.params.k = 3;
  config.params.eps = 0.5;
  config.params.xi = 0.1;
  config.rule = ProbabilityRule::thm31(0.5, 3, 0.5);
  config.strategy = JStrategy::Sampled;
  config.threads = 1;
  const TrialReport serial3 = run_trials(config);
  config.threads = 4;
  const TrialReport parallel3 = run_trials(config);
  CHECK(reports_equal(serial3, parallel3));
}

TEST_CASE("x_zero never exceeds coverage when the band floor is positive") {
  TrialConfig config;
  config.params = params_k2(500);
  config.rule = ProbabilityRule::thm21(0.5, 0.5);
  config.trials = 100;
  config.master_seed = 2718;
  const TrialReport report = run_trials(config);
  CHECK(report.band.lo > 0.0);
  CHECK(report.x_zero_fraction <= report.coverage_fraction);
  for (const JStats& stats : report.per_j)
    CHECK(stats.mean_y <= static_cast<double>(stats.rho));
}

TEST_CASE("empirical mean at the central target follows Bin(rho, p^2)") {
  TrialConfig config;
  config.params = params_k2(1000);
  config.rule = ProbabilityRule::thm21(0.5, 0.5);
  config.trials = 2000;
  config.master_seed = 505050;
  const TrialReport report = run_trials(config);
  const double p2 = report.p * report.p;
  const double rho = 500.0;
  const double expected = rho * p2;
  const double sigma = std::sqrt(rho * p2 * (1 - p2) / 2000.0);
  bool found = false;
  for (const JStats& stats : report.per_j)
    if (stats.j == 1000) {
      found = true;
      CHECK(std::abs(stats.mean_y - expected) <= 3 * sigma);
    }
  CHECK(found);
}

TEST_CASE("packing path obeys the sandwich in every trial") {
  TrialConfig config;
  config.params.n = 300;
  config.params.k = 3;
  config.params.alpha = 0.5;
  config.params.eps = 0.5;
  config.params.xi = 0.1;
  config.rule = ProbabilityRule::thm31(0.5, 3, 0.5);
  config.strategy = JStrategy::Sampled;
  config.sampled_js = 2;
  config.with_packing = true;
  config.trials = 60;
  config.master_seed = 606;
  const TrialReport report = run_trials(config);
  CHECK(report.sandwich_violations == 0);
  for (const JStats& stats : report.per_j) {
    CHECK(stats.mean_ystar <= stats.mean_y + 1e-9);
    CHECK(stats.mean_y <= stats.mean_ystar + stats.mean_w + 1e-9);
  }
}

TEST_CASE("threshold scan estimates rise with A") {
  const ScanReport report =
      threshold_scan(0.5, 2, 3000, {-4.0, 0.0, 4.0}, 300, 515253);
  REQUIRE(report.points.size() == 3);
  for (const ScanPoint& point : report.points) {
    CHECK(!point.skipped);
    CHECK(point.std_error ==
          doctest::Approx(std::sqrt(point.estimate * (1 - point.estimate) /
                                    300.0)));
    CHECK(point.analytic == doctest::Approx(av_limit_prob(point.axis, 0.5, 2)));
  }
  CHECK(report.points[0].estimate < report.points[1].estimate);
  CHECK(report.points[1].estimate < report.points[2].estimate);
}

TEST_CASE("threshold scan skips grid points where the rule is undefined") {
  const ScanReport report =
      threshold_scan(0.5, 2, 100, {-1000.0, 0.0}, 50, 7);
  REQUIRE(report.points.size() == 2);
  CHECK(report.points[0].skipped);
  CHECK(!report.points[1].skipped);
}

TEST_CASE("decay scan needs k >= 3 and yields positive means") {
  CHECK(error_of([] { decay_scan(2, 0.5, 0.5, {1000}, 10, 1); }) ==
        ErrorCode::KTooSmall);

  const ScanReport report = decay_scan(3, 0.5, 0.5, {300, 900}, 60, 99);
  REQUIRE(report.points.size() == 2);
  for (const ScanPoint& point : report.points) {
    CHECK(point.estimate > 0.0);
    CHECK(point.analytic > 0.0);
  }
  CHECK(report.slope_raw != 0.0);
  CHECK(report.slope_adjusted < report.slope_raw);
}

TEST_CASE("coverage is nonincreasing as the window widens") {
  // Same raw p and master seed; only alpha moves.  A wider window can only
  // lose coverage, trial by trial.
  double prev = -1.0;
  for (double alpha : {0.2, 0.4, 0.6, 0.8}) {
    TrialConfig config;
    config.params = params_k2(600, alpha, 0.5);
    config.rule = ProbabilityRule::raw(0.12);
    config.band.mode = BandMode::FixedMultipliers;
    config.band.c_lo = 0.0;
    config.band.c_hi = 1e280;
    config.trials = 150;
    config.master_seed = 4242;
    const double coverage = run_trials(config).coverage_fraction;
    if (prev >= 0.0) CHECK(prev <= coverage);
    prev = coverage;
  }
}

TEST_CASE("tail frequencies stay under the Chernoff rates") {
  const long long n = 1000;
  const ExperimentParams params = params_k2(n);
  BandPolicy policy;  // proof mode, targets 1/1 (gamma clamps to 0.0625)
  const ResolvedBand band = resolve_band(params, policy);
  const double p = probability_for(ProbabilityRule::thm21(0.5, 0.5), n).p;
  const Window window = window_of(n, 2, 0.5);

  const int trials = 3000;
  int upper_hits = 0, lower_hits = 0;
  for (int t = 0; t < trials; ++t) {
    const BasisSample sample =
        sample_basis(n, p, derive_seed(889900, kStreamTrial, t));
    const RepProfile profile = count_fast_k2(sample);
    if (static_cast<double>(profile.at(n)) >
        (1.0 + band.delta0) * band.e_max)
      ++upper_hits;
    if (static_cast<double>(profile.at(window.lo)) <
        band.eps0 * band.e_min)
      ++lower_hits;
  }
  const double q_upper = static_cast<double>(upper_hits) / trials;
  const double q_lower = static_cast<double>(lower_hits) / trials;
  const double se_upper = std::sqrt(q_upper * (1 - q_upper) / trials);
  const double se_lower = std::sqrt(q_lower * (1 - q_lower) / trials);
  const double bound_upper =
      std::pow(static_cast<double>(n), -params.lambda - 1.0);
  const double bound_lower =
      std::pow(static_cast<double>(n), -band.gamma_effective - 1.0);
  CHECK(q_upper <= bound_upper + 3 * se_upper);
  CHECK(q_lower <= bound_lower + 3 * se_lower);
}

TEST_CASE("failing trials abort with the failing index") {
  TrialConfig config;
  config.params.n = 400;
  config.params.k = 3;
  config.params.alpha = 0.5;
  config.params.eps = 0.5;
  config.params.xi = 0.1;
  config.rule = ProbabilityRule::thm31(0.5, 3, 0.5);
  config.strategy = JStrategy::Sampled;
  config.with_packing = true;
  config.trials = 4;
  config.master_seed = 5;
  config.enum_cap = 1;  // every trial blows the enumeration cap
  try {
    run_trials(config);
    FAIL("expected CAP_EXCEEDED");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::CapExceeded);
    CHECK(std::string(e.what()).find("trial 0") != std::string::npos);
  }
}

TEST_CASE("concentration check handles the degenerate p=0 case") {
  ExperimentParams p = params_k2(200);
  const MedianCheck check =
      concentration_check(p, ProbabilityRule::raw(0.0), 50, 1, 200);
  CHECK(check.emp_mean == 0.0);
  CHECK(check.emp_median == 0.0);
  CHECK(check.gap == 0.0);
  CHECK(check.bound == 0.0);
  CHECK(check.pass);
}

TEST_CASE("concentration check passes comfortably at moderate scale") {
  ExperimentParams p = params_k2(2000);
  const MedianCheck check = concentration_check(
      p, ProbabilityRule::thm21(0.5, 0.5), 500, 424242, 2000);
  CHECK(check.pass);
  CHECK(check.gap <= check.bound);
  CHECK(check.bound ==
        doctest::Approx(40.0 * std::sqrt(2.0 * check.emp_mean)));
}
