#pragma once

#include <cstdint>
#include <string>

#include "repbasis/model.hpp"

namespace repbasis {

enum class RuleTag : int {
  Thm21 = 0,     // sqrt((2/alpha + eta) log n / n)
  Thm31 = 1,     // (K_{alpha,k} log n / n^{k-1})^{1/k}
  Av2 = 2,       // sqrt(((2/alpha)(log n - log log n) + A) / n)
  Avk = 3,       // ((k!(k-1)!/alpha^{k-1})(log n - log log n) + A)^{1/k} / n^{(k-1)/k}
  LogPower = 4,  // sqrt(K log^{1+eps} n / n)
  Raw = 5,       // fixed p
};

struct ProbabilityRule {
  RuleTag tag = RuleTag::Raw;
  double alpha = 0.5;
  double eta = 0.0;
  double eps = 0.0;
  double a_const = 0.0;
  double coeff = 1.0;  // the K of the LOGPOWER rule
  double p = 0.0;      // the fixed p of the RAW rule
  int k = 2;

  static ProbabilityRule thm21(double alpha, double eta);
  static ProbabilityRule thm31(double alpha, int k, double eps);
  static ProbabilityRule av2(double alpha, double a_const);
  static ProbabilityRule avk(double alpha, int k, double a_const);
  static ProbabilityRule log_power(double coeff, double eps);
  static ProbabilityRule raw(double p);

  const char* tag_name() const;
};

struct ProbabilityValue {
  double p = 0.0;
  bool clamped = false;  // formula exceeded 1 and was clipped
};

// Evaluates the rule's closed form at n.  Values above 1 clamp to 1 with the
// flag set (clamped runs are not evidence: the closed forms assume p -> 0).
// Throws N_TOO_SMALL for n < 2 and P_OUT_OF_RANGE when the AV inner
// expression is negative (the formula is undefined there).
ProbabilityValue probability_for(const ProbabilityRule& rule, long long n);

// Includes each of 0..n independently with probability p.  Pure function of
// (n, p, seed): the member list is reproducible bit-for-bit across platforms.
BasisSample sample_basis(long long n, double p, std::uint64_t seed);

}  // namespace repbasis
