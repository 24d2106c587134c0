#pragma once

#include <cstdint>
#include <vector>

#include "repbasis/model.hpp"

namespace repbasis {

// Representation counts are exact 64-bit integers; overflow is an error,
// never a wrap.
inline std::uint64_t checked_add(std::uint64_t a, std::uint64_t b) {
  if (UINT64_MAX - a < b)
    fail(ErrorCode::CountOverflow, "count exceeds 64-bit range");
  return a + b;
}

inline std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > UINT64_MAX / a)
    fail(ErrorCode::CountOverflow, "count exceeds 64-bit range");
  return a * b;
}

enum class CountMode : int {
  Distinct = 0,  // k-element subsets
  Multiset = 1,  // k-element multisets
};

struct RepProfile {
  long long n = 0;
  int k = 0;
  CountMode mode = CountMode::Distinct;
  std::vector<std::uint64_t> counts;  // indexed by j in [0, k*n]

  std::uint64_t at(long long j) const {
    return (j >= 0 && j < static_cast<long long>(counts.size()))
               ? counts[static_cast<std::size_t>(j)]
               : 0;
  }
  std::uint64_t total() const;
};

inline constexpr std::uint64_t kDefaultBruteBudget = 50'000'000;
inline constexpr std::uint64_t kDefaultEnumCap = 2'000'000;
inline constexpr long long kDefaultRhoNCap = 2500;

// counts[j] = number of k-subsets (Distinct) or k-multisets (Multiset) of the
// sample summing to j.  One pass over the members with a size-by-sum dynamic
// program; cost O(|A| * k * kn).
RepProfile count_all(const BasisSample& sample, int k, CountMode mode);

// k = 2, Distinct only.  Evaluates Y(j) = (c(j) - diag(j)) / 2, where c is
// the autoconvolution of the membership indicator, by iterating over member
// pairs directly.  Bit-exact equal to count_all.
RepProfile count_fast_k2(const BasisSample& sample);

// Exhaustive enumeration, the ground truth for equivalence tests.  The budget
// bounds visited search nodes.
std::uint64_t count_brute(const BasisSample& sample, int k, long long j,
                          CountMode mode,
                          std::uint64_t node_budget = kDefaultBruteBudget);

// Distinct-element representations of j, each ascending, listed in
// lexicographic order; stored flat with stride k.
struct RepList {
  int k = 0;
  std::vector<long long> flat;

  std::size_t size() const {
    return k > 0 ? flat.size() / static_cast<std::size_t>(k) : 0;
  }
  const long long* rep(std::size_t i) const {
    return flat.data() + i * static_cast<std::size_t>(k);
  }
};

RepList enumerate_reps(const BasisSample& sample, int k, long long j,
                       std::uint64_t cap = kDefaultEnumCap);

// Capacity: representations of j over the full ground set {0, ..., n}.
// k = 2 uses the closed form ceil(min(j, 2n-j)/2); k = 3 an exact O(n) sum of
// pair counts; k >= 4 the reference dynamic program, gated by n_cap.
std::uint64_t rho_max(long long n, int k, long long j,
                      long long n_cap = kDefaultRhoNCap);

// (alpha*n)^{k-1} / (k! (k-1)!), the analytic capacity lower bound.
double rho_lower_bound(long long n, int k, double alpha);

}  // namespace repbasis
