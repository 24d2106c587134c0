#pragma once

#include <cstdint>
#include <vector>

#include "repbasis/counting.hpp"

namespace repbasis {

// Exact finite-n expectation of the representation count: rho * p^k.
double expected_count(std::uint64_t rho, double p, int k);

// Upper-tail Chernoff rate: (1/alpha + eta/2) * ((1+delta) log(1+delta) - delta).
// Strictly increasing and unbounded for delta > 0.
double chernoff_f(double alpha, double eta, double delta);

// Lower-tail Chernoff rate: (1 - 2 eps + 2 eps log eps) * (1 + eta*alpha/2),
// strictly decreasing on (0, 1/e] with limit 1 + eta*alpha/2 at 0+.
double chernoff_g(double alpha, double eta, double eps);

struct ChernoffSolution {
  double delta0 = 0.0;       // f(delta0) = lambda_target + 1
  double eps0 = 0.0;         // g(eps0) = 1 + gamma_target
  double band_lo_mult = 0.0; // eps0, applied to E_min
  double band_hi_mult = 0.0; // 1 + delta0, applied to E_max
};

// Bisection to 1e-12 on both monotone rates.  A lower root exists only when
// gamma_target < eta*alpha/2 (the limit of g at 0+ is 1 + eta*alpha/2);
// otherwise NO_LOWER_ROOT.
ChernoffSolution chernoff_solve(double alpha, double eta, double lambda_target,
                                double gamma_target);

struct RateConstants {
  double k_const = 0.0;        // K_{alpha,k} = (4+eps)(k!)^2 / alpha^{k-1}
  std::uint64_t c_k = 0;       // C_k = (3k-1)^{k-1} k!
  double gamma_j = 0.0;        // C(j) K - sqrt(4+4 xi) sqrt(k C(j) K)
  double med_gap_coeff = 0.0;  // 40 sqrt(k)
};

// Requires c_j >= alpha^{k-1} / (k!(k-1)!), which together with xi < eps/4
// makes gamma_j positive.
RateConstants constants(double alpha, int k, double eps, double xi,
                           double c_j);

struct TalagrandTail {
  double lower_threshold = 0.0;  // med - t sqrt(k med)
  double lower_bound = 0.0;      // 2 e^{-t^2/4}
  double m_upper = 0.0;          // solves m - t sqrt(k m) = med
};

TalagrandTail talagrand_tail(double med, double t, int k);

// exp{ -(2 alpha / (k-1)) e^{-A alpha^{k-1} / (k!(k-1)!)} }; at k = 2 this is
// the familiar exp{-2 alpha e^{-alpha A / 2}}.  Increasing in A, -> 1 as
// A -> +inf and -> 0 as A -> -inf.
double av_limit_prob(double a_const, double alpha, int k);

struct OverlapExpectation {
  double exact = 0.0;                     // sum_l N_l p^{2k-l}
  std::vector<std::uint64_t> pairs_by_size;
  std::uint64_t pairs_total = 0;
};

// Exact E[W] for target j over the full ground set {0..n}; quadratic in the
// number of representations, so gated by n_cap.
OverlapExpectation expected_overlap_exact(long long n, int k, double p,
                                          long long j, long long n_cap = 400);

// Order estimate n^{-1/k} (log n)^{(k+1)/k} for the expected overlap.
double expected_overlap_estimate(long long n, int k);

}  // namespace repbasis
