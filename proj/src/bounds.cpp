#include "repbasis/bounds.hpp"

#include <cmath>

#include "repbasis/packing.hpp"

namespace repbasis {

namespace {

double factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

// Bisection on a monotone function; the bracket must straddle the target.
template <typename F>
double bisect(F&& f, double lo, double hi, double target, bool increasing) {
  for (int iter = 0; iter < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(hi));
       ++iter) {
    const double mid = 0.5 * (lo + hi);
    const bool above = f(mid) > target;
    if (above == increasing) hi = mid;
    else lo = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

double expected_count(std::uint64_t rho, double p, int k) {
  if (k < 1) fail(ErrorCode::KTooSmall, "k must be at least 1");
  if (!(p >= 0.0 && p <= 1.0))
    fail(ErrorCode::POutOfRange, "p must lie in [0, 1]");
  return static_cast<double>(rho) * std::pow(p, k);
}

double chernoff_f(double alpha, double eta, double delta) {
  return (1.0 / alpha + eta / 2.0) *
         ((1.0 + delta) * std::log1p(delta) - delta);
}

double chernoff_g(double alpha, double eta, double eps) {
  return (1.0 - 2.0 * eps + 2.0 * eps * std::log(eps)) *
         (1.0 + eta * alpha / 2.0);
}

ChernoffSolution chernoff_solve(double alpha, double eta, double lambda_target,
                                double gamma_target) {
  if (!(alpha > 0.0)) fail(ErrorCode::AlphaOutOfRange, "alpha must be positive");
  if (eta < 0.0) fail(ErrorCode::EtaNegative, "eta must be nonnegative");
  if (!(lambda_target > 0.0))
    fail(ErrorCode::LambdaNotPositive, "lambda target must be positive");
  if (!(gamma_target > 0.0))
    fail(ErrorCode::InvalidArgument, "gamma target must be positive");
  if (gamma_target >= eta * alpha / 2.0)
    fail(ErrorCode::NoLowerRoot,
         "no eps0 exists: gamma target must be below eta*alpha/2");

  ChernoffSolution sol;

  // f is increasing and unbounded; expand the bracket until it covers the target.
  const double f_target = lambda_target + 1.0;
  double hi = 1.0;
  while (chernoff_f(alpha, eta, hi) < f_target) hi *= 2.0;
  sol.delta0 = bisect([&](double d) { return chernoff_f(alpha, eta, d); }, 0.0,
                      hi, f_target, /*increasing=*/true);

  // g is decreasing on (0, 1/e] from its limit 1 + eta*alpha/2 at 0+.
  const double g_target = 1.0 + gamma_target;
  sol.eps0 = bisect([&](double e) { return chernoff_g(alpha, eta, e); }, 1e-18,
                    std::exp(-1.0), g_target, /*increasing=*/false);

  sol.band_lo_mult = sol.eps0;
  sol.band_hi_mult = 1.0 + sol.delta0;
  return sol;
}

RateConstants constants(double alpha, int k, double eps, double xi,
                        double c_j) {
  if (!(alpha > 0.0 && alpha < 1.0))
    fail(ErrorCode::AlphaOutOfRange, "alpha must lie in (0, 1)");
  if (k < 2) fail(ErrorCode::KTooSmall, "k must be at least 2");
  if (eps < 0.0) fail(ErrorCode::EpsNegative, "eps must be nonnegative");
  if (!(xi > 0.0)) fail(ErrorCode::XiNotPositive, "xi must be positive");
  const double kfac = factorial(k);
  const double cj_floor = std::pow(alpha, k - 1) / (kfac * factorial(k - 1));
  if (c_j < cj_floor - 1e-12)
    fail(ErrorCode::CjTooSmall, "c_j below alpha^{k-1}/(k!(k-1)!)");

  RateConstants out;
  out.k_const = (4.0 + eps) * kfac * kfac / std::pow(alpha, k - 1);
  std::uint64_t ck = 1;
  for (int i = 0; i < k - 1; ++i)
    ck = checked_mul(ck, static_cast<std::uint64_t>(3 * k - 1));
  for (int i = 2; i <= k; ++i)
    ck = checked_mul(ck, static_cast<std::uint64_t>(i));
  out.c_k = ck;
  const double cjk = c_j * out.k_const;
  out.gamma_j = cjk - std::sqrt(4.0 + 4.0 * xi) * std::sqrt(k * cjk);
  out.med_gap_coeff = 40.0 * std::sqrt(static_cast<double>(k));
  return out;
}

TalagrandTail talagrand_tail(double med, double t, int k) {
  if (!(med > 0.0)) fail(ErrorCode::InvalidArgument, "med must be positive");
  if (!(t > 0.0)) fail(ErrorCode::InvalidArgument, "t must be positive");
  if (k < 1) fail(ErrorCode::KTooSmall, "k must be at least 1");
  TalagrandTail out;
  const double dk = static_cast<double>(k);
  out.lower_threshold = med - t * std::sqrt(dk * med);
  out.lower_bound = 2.0 * std::exp(-t * t / 4.0);
  const double half_root = 0.5 * std::sqrt(dk * t * t + 4.0 * med);
  const double m_sqrt = 0.5 * t * std::sqrt(dk) + half_root;
  out.m_upper = m_sqrt * m_sqrt;
  return out;
}

double av_limit_prob(double a_const, double alpha, int k) {
  if (!(alpha > 0.0 && alpha < 1.0))
    fail(ErrorCode::AlphaOutOfRange, "alpha must lie in (0, 1)");
  if (k < 2) fail(ErrorCode::KTooSmall, "k must be at least 2");
  const double denom = factorial(k) * factorial(k - 1);
  const double inner = std::exp(-a_const * std::pow(alpha, k - 1) / denom);
  return std::exp(-(2.0 * alpha / (k - 1)) * inner);
}

OverlapExpectation expected_overlap_exact(long long n, int k, double p,
                                          long long j, long long n_cap) {
  if (k < 2) fail(ErrorCode::KTooSmall, "k must be at least 2");
  if (!(p >= 0.0 && p <= 1.0))
    fail(ErrorCode::POutOfRange, "p must lie in [0, 1]");
  if (n > n_cap)
    fail(ErrorCode::NCapExceeded, "exact overlap expectation capped in n");
  std::vector<long long> full(static_cast<std::size_t>(n) + 1);
  for (long long i = 0; i <= n; ++i) full[static_cast<std::size_t>(i)] = i;
  BasisSample ground = sample_from_members(n, std::move(full));
  const RepList reps = enumerate_reps(ground, k, j);
  const OverlapCount overlap = overlap_pairs(reps);

  OverlapExpectation out;
  out.pairs_by_size = overlap.by_size;
  out.pairs_total = overlap.w;
  for (int l = 1; l <= k - 1; ++l)
    out.exact += static_cast<double>(overlap.by_size[static_cast<std::size_t>(l - 1)]) *
                 std::pow(p, 2 * k - l);
  return out;
}

double expected_overlap_estimate(long long n, int k) {
  if (k < 2) fail(ErrorCode::KTooSmall, "k must be at least 2");
  if (n < 2) fail(ErrorCode::NTooSmall, "n must be at least 2");
  const double dn = static_cast<double>(n);
  const double dk = static_cast<double>(k);
  return std::pow(dn, -1.0 / dk) *
         std::pow(std::log(dn), (dk + 1.0) / dk);
}

}  // namespace repbasis
