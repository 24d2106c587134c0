#pragma once

#include <cstdint>
#include <vector>

#include "repbasis/counting.hpp"

namespace repbasis {

inline constexpr std::size_t kDefaultExactPackCap = 64;
inline constexpr std::uint64_t kDefaultOverlapBudget = 200'000'000;

enum class PackMethod : int {
  Exact = 0,
  Greedy = 1,
};

struct OverlapCount {
  std::uint64_t w = 0;                     // unordered pairs sharing >= 1 element
  std::vector<std::uint64_t> by_size;      // by_size[l-1] = pairs with |intersection| = l
};

// Counts unordered pairs of representations with nonempty intersection,
// split by intersection size l in [1, k-1].  Quadratic in |reps|; the budget
// bounds examined pairs.
OverlapCount overlap_pairs(const RepList& reps,
                           std::uint64_t pair_budget = kDefaultOverlapBudget);

struct PackingResult {
  std::uint64_t y_star = 0;
  std::vector<std::size_t> chosen;  // indices into the input list, pairwise disjoint
  PackMethod method = PackMethod::Exact;
  std::uint64_t w = 0;
  std::vector<std::uint64_t> w_by_overlap;
};

// True maximum disjoint subfamily via branch and bound over the conflict
// graph, with the greedy value as the starting incumbent.  Instances above
// the cap raise CAP_EXCEEDED; callers fall back to pack_greedy.
PackingResult pack_exact(const RepList& reps,
                         std::size_t cap = kDefaultExactPackCap);

// Scans representations in lexicographic order, keeping each one disjoint
// from everything kept so far.  The result is maximal, hence
// y_star_greedy <= y_star_exact and Y <= y_star_greedy + W both hold.
PackingResult pack_greedy(const RepList& reps);

// The greedy packing size alone, skipping the overlap tally.
std::uint64_t pack_greedy_size(const RepList& reps);

}  // namespace repbasis
