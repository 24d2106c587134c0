#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "repbasis/bounds.hpp"
#include "repbasis/model.hpp"
#include "repbasis/packing.hpp"
#include "repbasis/sampling.hpp"

namespace repbasis {

enum class JStrategy : int {
  AllWindow = 0,  // evaluate the band at every window target
  Sampled = 1,    // endpoints + midpoint + sampled_js random window points
};

struct TrialConfig {
  ExperimentParams params;
  ProbabilityRule rule;
  BandPolicy band;
  long long trials = 1;
  std::uint64_t master_seed = 0;
  JStrategy strategy = JStrategy::AllWindow;
  int sampled_js = 0;       // extra random window points in the per-j report
  bool with_packing = false;
  int threads = 0;          // 0 = hardware concurrency
  std::uint64_t enum_cap = kDefaultEnumCap;
  std::size_t exact_pack_cap = kDefaultExactPackCap;
};

struct ResolvedBand {
  BandMode mode = BandMode::ProofDerived;
  double lo = 0.0;
  double hi = 0.0;
  double delta0 = 0.0;           // upper multiplier is 1 + delta0 (k = 2)
  double eps0 = 0.0;             // lower multiplier (k = 2)
  double gamma_effective = 0.0;  // gamma actually used for the lower rate
  bool gamma_clamped = false;    // target_gamma was unattainable and was reduced
  double e_min = 0.0;            // expectation anchors at the thm21/thm31 p
  double e_max = 0.0;
};

// Proof-derived bands are anchored at the log-representative probability
// scale for (params.alpha, params.eta) resp. (params.alpha, k, params.eps),
// independent of the sampling rule, so off-scale rules register as
// out-of-band.  When target_gamma is unattainable (>= eta*alpha/2) the
// effective gamma is clamped to eta*alpha/4 and flagged.
ResolvedBand resolve_band(const ExperimentParams& params,
                          const BandPolicy& policy);

struct JStats {
  long long j = 0;
  std::uint64_t rho = 0;  // capacity, 0 when beyond the k >= 4 cap
  double mean_y = 0.0;
  double var_y = 0.0;  // sample variance
  std::uint64_t median_y = 0;  // lower median
  double mean_ystar = 0.0;
  double mean_w = 0.0;
  double in_band_fraction = 0.0;
};

struct TrialReport {
  ExperimentParams params;
  std::string rule_tag;
  double p = 0.0;
  bool p_clamped = false;
  Window window;
  ResolvedBand band;
  long long trials = 0;
  std::uint64_t master_seed = 0;
  JStrategy strategy = JStrategy::AllWindow;
  bool with_packing = false;
  std::vector<JStats> per_j;
  double x_zero_fraction = 0.0;
  double coverage_fraction = 0.0;
  std::uint64_t sandwich_violations = 0;  // Y* <= Y <= Y* + W failures (expected 0)
  double elapsed_seconds = 0.0;  // wall clock; excluded from serialized reports
};

// Per trial t the sample is drawn with derive_seed(master_seed, trial stream, t),
// so the report is a pure function of the configuration regardless of thread
// count or scheduling.
TrialReport run_trials(const TrialConfig& config);

struct ScanPoint {
  double axis = 0.0;
  double estimate = 0.0;
  double std_error = 0.0;
  long long trials = 0;
  double analytic = 0.0;
  bool skipped = false;  // rule undefined at this grid point
};

struct ScanReport {
  std::string axis;  // "a_const" or "n"
  std::vector<ScanPoint> points;
  double slope_raw = 0.0;       // decay: log-log slope of mean W against n
  double slope_adjusted = 0.0;  // decay: slope after removing (log n)^{(k+1)/k}
  double elapsed_seconds = 0.0;
};

// Coverage probability (every window target represented at least once) along
// a grid of threshold constants A, with the analytic limit alongside.
ScanReport threshold_scan(double alpha, int k, long long n,
                          const std::vector<double>& a_grid, long long trials,
                          std::uint64_t master_seed, int threads = 0);

// Mean overlap count W at j = floor(k n / 2) under the thm31 rule,
// along a grid of n.  k >= 3 (W vanishes identically for k = 2).
ScanReport decay_scan(int k, double alpha, double eps,
                      const std::vector<long long>& n_grid, long long trials,
                      std::uint64_t master_seed, int threads = 0);

struct MedianCheck {
  long long j = 0;
  long long trials = 0;
  double emp_mean = 0.0;
  double emp_median = 0.0;  // lower median
  double gap = 0.0;
  double bound = 0.0;  // 40 sqrt(k * emp_mean)
  bool pass = false;
};

// Median-mean gap of Y*(j) against the 40 sqrt(k E) bound; Y* is Y itself
// for k = 2.
MedianCheck concentration_check(const ExperimentParams& params,
                                const ProbabilityRule& rule, long long trials,
                                std::uint64_t master_seed, long long j,
                                int threads = 0);

}  // namespace repbasis
