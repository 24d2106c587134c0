#include "repbasis/packing.hpp"

#include <bit>
#include <unordered_set>

namespace repbasis {

namespace {

// Intersection size of two ascending arrays of length k.
int intersection_size(const long long* a, const long long* b, int k) {
  int ia = 0, ib = 0, shared = 0;
  while (ia < k && ib < k) {
    if (a[ia] < b[ib]) ++ia;
    else if (a[ia] > b[ib]) ++ib;
    else { ++shared; ++ia; ++ib; }
  }
  return shared;
}

}  // namespace

OverlapCount overlap_pairs(const RepList& reps, std::uint64_t pair_budget) {
  OverlapCount result;
  const int k = reps.k;
  result.by_size.assign(k > 1 ? static_cast<std::size_t>(k - 1) : 0, 0);
  const std::size_t m = reps.size();
  if (m < 2) return result;
  const std::uint64_t pairs =
      static_cast<std::uint64_t>(m) * (m - 1) / 2;
  if (pairs > pair_budget)
    fail(ErrorCode::BudgetExceeded, "overlap pair enumeration budget exceeded");
  for (std::size_t i = 0; i + 1 < m; ++i) {
    const long long* a = reps.rep(i);
    for (std::size_t j = i + 1; j < m; ++j) {
      const int shared = intersection_size(a, reps.rep(j), k);
      if (shared > 0) {
        ++result.w;
        if (shared <= k - 1)
          ++result.by_size[static_cast<std::size_t>(shared - 1)];
      }
    }
  }
  return result;
}

namespace {

// Scan in input order: enumerate_reps emits lexicographic order, so the
// canonical pipeline processes representations lexicographically.
std::vector<std::size_t> greedy_chosen(const RepList& reps) {
  const int k = reps.k;
  std::vector<std::size_t> chosen;
  std::unordered_set<long long> used;
  used.reserve(reps.size());
  for (std::size_t idx = 0; idx < reps.size(); ++idx) {
    const long long* r = reps.rep(idx);
    bool free = true;
    for (int i = 0; i < k; ++i)
      if (used.count(r[i])) { free = false; break; }
    if (!free) continue;
    for (int i = 0; i < k; ++i) used.insert(r[i]);
    chosen.push_back(idx);
  }
  return chosen;
}

}  // namespace

PackingResult pack_greedy(const RepList& reps) {
  PackingResult result;
  result.method = PackMethod::Greedy;
  result.chosen = greedy_chosen(reps);
  result.y_star = result.chosen.size();
  OverlapCount overlap = overlap_pairs(reps);
  result.w = overlap.w;
  result.w_by_overlap = std::move(overlap.by_size);
  return result;
}

std::uint64_t pack_greedy_size(const RepList& reps) {
  return greedy_chosen(reps).size();
}

namespace {

struct MisSearch {
  const std::vector<std::uint64_t>* adj;
  std::uint64_t best_mask = 0;
  int best = 0;

  void run(std::uint64_t candidates, std::uint64_t chosen_mask, int chosen) {
    if (chosen + std::popcount(candidates) <= best) return;
    if (candidates == 0) {
      best = chosen;
      best_mask = chosen_mask;
      return;
    }
    const int v = std::countr_zero(candidates);
    const std::uint64_t bit = 1ull << v;
    run(candidates & ~((*adj)[static_cast<std::size_t>(v)] | bit),
        chosen_mask | bit, chosen + 1);
    run(candidates & ~bit, chosen_mask, chosen);
  }
};

}  // namespace

PackingResult pack_exact(const RepList& reps, std::size_t cap) {
  const std::size_t m = reps.size();
  if (m > cap || m > 64)
    fail(ErrorCode::CapExceeded, "exact packing cap exceeded");
  PackingResult result;
  result.method = PackMethod::Exact;
  const int k = reps.k;
  if (m == 0) {
    result.w_by_overlap.assign(k > 1 ? static_cast<std::size_t>(k - 1) : 0, 0);
    return result;
  }

  std::vector<std::uint64_t> adj(m, 0);
  for (std::size_t i = 0; i + 1 < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j)
      if (intersection_size(reps.rep(i), reps.rep(j), k) > 0) {
        adj[i] |= 1ull << j;
        adj[j] |= 1ull << i;
      }

  // Greedy incumbent tightens the branch-and-bound from the start.
  PackingResult greedy = pack_greedy(reps);
  std::uint64_t greedy_mask = 0;
  for (std::size_t idx : greedy.chosen) greedy_mask |= 1ull << idx;

  MisSearch search;
  search.adj = &adj;
  search.best = static_cast<int>(greedy.y_star);
  search.best_mask = greedy_mask;
  const std::uint64_t all =
      m == 64 ? ~0ull : ((1ull << m) - 1);
  search.run(all, 0, 0);

  result.y_star = static_cast<std::uint64_t>(search.best);
  for (std::size_t i = 0; i < m; ++i)
    if (search.best_mask & (1ull << i)) result.chosen.push_back(i);
  result.w = greedy.w;
  result.w_by_overlap = std::move(greedy.w_by_overlap);
  return result;
}

}  // namespace repbasis
