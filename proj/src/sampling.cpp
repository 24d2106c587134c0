#include "repbasis/sampling.hpp"

#include <cmath>

#include "repbasis/rng.hpp"

namespace repbasis {

namespace {

double factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0))
    fail(ErrorCode::AlphaOutOfRange, "alpha must lie in (0, 1)");
}

}  // namespace

ProbabilityRule ProbabilityRule::thm21(double alpha, double eta) {
  check_alpha(alpha);
  if (eta < 0.0) fail(ErrorCode::EtaNegative, "eta must be nonnegative");
  ProbabilityRule r;
  r.tag = RuleTag::Thm21;
  r.alpha = alpha;
  r.eta = eta;
  return r;
}

ProbabilityRule ProbabilityRule::thm31(double alpha, int k, double eps) {
  check_alpha(alpha);
  if (k < 2) fail(ErrorCode::KTooSmall, "k must be at least 2");
  if (eps < 0.0) fail(ErrorCode::EpsNegative, "eps must be nonnegative");
  ProbabilityRule r;
  r.tag = RuleTag::Thm31;
  r.alpha = alpha;
  r.k = k;
  r.eps = eps;
  return r;
}

ProbabilityRule ProbabilityRule::av2(double alpha, double a_const) {
  check_alpha(alpha);
  ProbabilityRule r;
  r.tag = RuleTag::Av2;
  r.alpha = alpha;
  r.a_const = a_const;
  return r;
}

ProbabilityRule ProbabilityRule::avk(double alpha, int k, double a_const) {
  check_alpha(alpha);
  if (k < 2) fail(ErrorCode::KTooSmall, "k must be at least 2");
  ProbabilityRule r;
  r.tag = RuleTag::Avk;
  r.alpha = alpha;
  r.k = k;
  r.a_const = a_const;
  return r;
}

ProbabilityRule ProbabilityRule::log_power(double coeff, double eps) {
  if (!(coeff > 0.0)) fail(ErrorCode::InvalidArgument, "K must be positive");
  if (!(eps > 0.0)) fail(ErrorCode::EpsNegative, "eps must be positive");
  ProbabilityRule r;
  r.tag = RuleTag::LogPower;
  r.coeff = coeff;
  r.eps = eps;
  return r;
}

ProbabilityRule ProbabilityRule::raw(double p) {
  if (!(p >= 0.0 && p <= 1.0))
    fail(ErrorCode::POutOfRange, "raw p must lie in [0, 1]");
  ProbabilityRule r;
  r.tag = RuleTag::Raw;
  r.p = p;
  return r;
}

const char* ProbabilityRule::tag_name() const {
  switch (tag) {
    case RuleTag::Thm21: return "thm21";
    case RuleTag::Thm31: return "thm31";
    case RuleTag::Av2: return "av2";
    case RuleTag::Avk: return "avk";
    case RuleTag::LogPower: return "logpower";
    case RuleTag::Raw: return "raw";
  }
  return "unknown";
}

ProbabilityValue probability_for(const ProbabilityRule& rule, long long n) {
  if (rule.tag == RuleTag::Raw) return {rule.p, false};
  if (n < 2) fail(ErrorCode::NTooSmall, "n must be at least 2 (log n > 0)");
  const double dn = static_cast<double>(n);
  const double ln = std::log(dn);
  double p2k = 0.0;  // p^k before the root
  int root = 2;
  switch (rule.tag) {
    case RuleTag::Thm21:
      p2k = (2.0 / rule.alpha + rule.eta) * ln / dn;
      root = 2;
      break;
    case RuleTag::Thm31: {
      const double kfac = factorial(rule.k);
      const double K = (4.0 + rule.eps) * kfac * kfac /
                       std::pow(rule.alpha, rule.k - 1);
      p2k = K * ln / std::pow(dn, rule.k - 1);
      root = rule.k;
      break;
    }
    case RuleTag::Av2: {
      const double lln = std::log(ln);
      p2k = ((2.0 / rule.alpha) * (ln - lln) + rule.a_const) / dn;
      root = 2;
      break;
    }
    case RuleTag::Avk: {
      const double lln = std::log(ln);
      const double c = factorial(rule.k) * factorial(rule.k - 1) /
                       std::pow(rule.alpha, rule.k - 1);
      p2k = (c * (ln - lln) + rule.a_const) / std::pow(dn, rule.k - 1);
      root = rule.k;
      break;
    }
    case RuleTag::LogPower:
      p2k = rule.coeff * std::pow(ln, 1.0 + rule.eps) / dn;
      root = 2;
      break;
    case RuleTag::Raw:
      break;  // handled above
  }
  if (p2k < 0.0)
    fail(ErrorCode::POutOfRange, "rule inner expression is negative at this n");
  double p = root == 2 ? std::sqrt(p2k) : std::pow(p2k, 1.0 / root);
  if (p > 1.0) return {1.0, true};
  return {p, false};
}

BasisSample sample_basis(long long n, double p, std::uint64_t seed) {
  if (n < 0) fail(ErrorCode::NTooSmall, "n must be nonnegative");
  if (!(p >= 0.0 && p <= 1.0))
    fail(ErrorCode::POutOfRange, "p must lie in [0, 1]");
  BasisSample sample;
  sample.n = n;
  sample.p = p;
  sample.seed = seed;
  sample.rule_tag = "raw";
  if (p >= 1.0) {
    sample.members.resize(static_cast<std::size_t>(n) + 1);
    for (long long i = 0; i <= n; ++i)
      sample.members[static_cast<std::size_t>(i)] = i;
    return sample;
  }
  Rng rng(seed);
  const std::uint64_t threshold = bernoulli_threshold(p);
  sample.members.reserve(
      static_cast<std::size_t>(p * static_cast<double>(n + 1) * 1.3) + 16);
  for (long long i = 0; i <= n; ++i)
    if (rng.next_u64() < threshold) sample.members.push_back(i);
  return sample;
}

}  // namespace repbasis
