#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "repbasis/errors.hpp"

namespace repbasis {

// All tuning scalars in one place.  "log" is the natural logarithm throughout
// the library.
struct ExperimentParams {
  long long n = 0;     // ground set is {0, ..., n}
  int k = 2;           // summand count, >= 2
  double alpha = 0.5;  // window shape, in (0, 1)
  double eta = 0.0;    // k=2 rate slack, >= 0
  double eps = 0.5;    // k>=3 rate slack (enters K_{alpha,k}), >= 0
  double xi = 0.1;     // Talagrand exponent slack, > 0; must satisfy xi < eps/4 for k >= 3
  double lambda = 1.0; // upper-tail exponent target, > 0
  double a_const = 0.0;// threshold-rule constant A (A_n frozen to a constant)
};

struct Window {
  long long lo = 0;
  long long hi = 0;
  long long length() const { return hi - lo + 1; }
  bool contains(long long j) const { return j >= lo && j <= hi; }
};

// [ceil(alpha*n), floor((k-alpha)*n)]; endpoints round inward so every window
// target genuinely lies in [alpha*n, (k-alpha)*n].
Window window_of(long long n, int k, double alpha);

// Returns its argument unchanged when every invariant holds; throws a named
// error for the first violated field otherwise.  The xi < eps/4 coupling is
// enforced only for k >= 3, where both slacks are in play.
const ExperimentParams& validate_params(const ExperimentParams& params);

// A sampled subset of {0, ..., n} along with the metadata that produced it.
struct BasisSample {
  long long n = 0;
  double p = -1.0;  // -1 when built from an explicit member list
  std::uint64_t seed = 0;
  std::string rule_tag;  // "explicit" when built from a member list
  std::vector<long long> members;  // strictly increasing, each in [0, n]

  bool contains(long long value) const;
};

// Validates and wraps an explicit member list (strictly increasing, in [0,n]).
BasisSample sample_from_members(long long n, std::vector<long long> members);

enum class BandMode : int {
  ProofDerived = 0,      // [eps0 * E_min, (1 + delta0) * E_max]
  FixedMultipliers = 1,  // [c_lo * log n, c_hi * log n]
};

// Operationalizes the "represented order log n times" event at finite n.
struct BandPolicy {
  BandMode mode = BandMode::ProofDerived;
  double c_lo = 0.5;
  double c_hi = 4.0;
  double target_gamma = 1.0;
  double target_lambda = 1.0;
};

void validate_band_policy(const BandPolicy& band);

}  // namespace repbasis
