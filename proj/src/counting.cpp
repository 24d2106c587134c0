#include "repbasis/counting.hpp"

#include <algorithm>
#include <cmath>

namespace repbasis {

namespace {

void check_k(int k) {
  if (k < 2) fail(ErrorCode::KTooSmall, "k must be at least 2");
}

long long profile_span(const BasisSample& sample, int k) {
  return static_cast<long long>(k) * sample.n;
}

}  // namespace

std::uint64_t RepProfile::total() const {
  std::uint64_t sum = 0;
  for (std::uint64_t c : counts) sum = checked_add(sum, c);
  return sum;
}

RepProfile count_all(const BasisSample& sample, int k, CountMode mode) {
  check_k(k);
  RepProfile profile;
  profile.n = sample.n;
  profile.k = k;
  profile.mode = mode;
  const long long span = profile_span(sample, k);
  profile.counts.assign(static_cast<std::size_t>(span) + 1, 0);

  // dp[s][sum] = number of s-element selections with the given sum.
  std::vector<std::vector<std::uint64_t>> dp(
      static_cast<std::size_t>(k) + 1,
      std::vector<std::uint64_t>(static_cast<std::size_t>(span) + 1, 0));
  dp[0][0] = 1;

  long long reach = 0;  // largest sum attainable so far, keeps early passes cheap
  for (long long m : sample.members) {
    reach = std::min(span, reach + (mode == CountMode::Multiset
                                        ? m * static_cast<long long>(k)
                                        : m));
    if (mode == CountMode::Distinct) {
      // 0/1 semantics: descending s so each member enters at most once.
      for (int s = k; s >= 1; --s) {
        auto& dst = dp[static_cast<std::size_t>(s)];
        const auto& src = dp[static_cast<std::size_t>(s - 1)];
        for (long long sum = reach; sum >= m; --sum)
          dst[static_cast<std::size_t>(sum)] =
              checked_add(dst[static_cast<std::size_t>(sum)],
                          src[static_cast<std::size_t>(sum - m)]);
      }
    } else {
      // Multiset semantics: ascending s and sum so a member can repeat.
      for (int s = 1; s <= k; ++s) {
        auto& dst = dp[static_cast<std::size_t>(s)];
        const auto& src = dp[static_cast<std::size_t>(s - 1)];
        for (long long sum = m; sum <= reach; ++sum)
          dst[static_cast<std::size_t>(sum)] =
              checked_add(dst[static_cast<std::size_t>(sum)],
                          src[static_cast<std::size_t>(sum - m)]);
      }
    }
  }
  profile.counts = std::move(dp[static_cast<std::size_t>(k)]);
  return profile;
}

RepProfile count_fast_k2(const BasisSample& sample) {
  RepProfile profile;
  profile.n = sample.n;
  profile.k = 2;
  profile.mode = CountMode::Distinct;
  profile.counts.assign(static_cast<std::size_t>(2 * sample.n) + 1, 0);
  const auto& m = sample.members;
  for (std::size_t a = 0; a < m.size(); ++a)
    for (std::size_t b = a + 1; b < m.size(); ++b)
      ++profile.counts[static_cast<std::size_t>(m[a] + m[b])];
  return profile;
}

namespace {

struct BruteState {
  const std::vector<long long>* members;
  int k;
  long long target;
  bool multiset;
  std::uint64_t budget;
  std::uint64_t nodes = 0;
  std::uint64_t hits = 0;

  void visit(std::size_t from, int depth, long long remaining) {
    if (++nodes > budget)
      fail(ErrorCode::BudgetExceeded, "brute-force enumeration budget exceeded");
    if (depth == k) {
      if (remaining == 0) ++hits;
      return;
    }
    const auto& mem = *members;
    for (std::size_t i = from; i < mem.size(); ++i) {
      if (mem[i] > remaining) break;  // members ascending, nonnegative
      visit(multiset ? i : i + 1, depth + 1, remaining - mem[i]);
    }
  }
};

}  // namespace

std::uint64_t count_brute(const BasisSample& sample, int k, long long j,
                          CountMode mode, std::uint64_t node_budget) {
  check_k(k);
  if (j < 0 || j > profile_span(sample, k)) return 0;
  BruteState state;
  state.members = &sample.members;
  state.k = k;
  state.target = j;
  state.multiset = mode == CountMode::Multiset;
  state.budget = node_budget;
  state.visit(0, 0, j);
  return state.hits;
}

namespace {

struct EnumState {
  const std::vector<long long>* members;
  int k;
  std::uint64_t cap;
  RepList* out;
  std::vector<long long> stack;

  void visit(std::size_t from, int depth, long long remaining) {
    const auto& mem = *members;
    if (depth == k - 1) {
      // Last slot: membership lookup instead of a scan.
      if (!stack.empty() && remaining <= stack.back()) return;
      if (remaining < 0) return;
      auto it = std::lower_bound(mem.begin() + static_cast<long long>(from),
                                 mem.end(), remaining);
      if (it == mem.end() || *it != remaining) return;
      if (out->size() >= cap)
        fail(ErrorCode::CapExceeded, "representation enumeration cap exceeded");
      out->flat.insert(out->flat.end(), stack.begin(), stack.end());
      out->flat.push_back(remaining);
      return;
    }
    for (std::size_t i = from; i < mem.size(); ++i) {
      if (mem[i] > remaining) break;
      stack.push_back(mem[i]);
      visit(i + 1, depth + 1, remaining - mem[i]);
      stack.pop_back();
    }
  }
};

}  // namespace

RepList enumerate_reps(const BasisSample& sample, int k, long long j,
                       std::uint64_t cap) {
  check_k(k);
  RepList reps;
  reps.k = k;
  if (j < 0 || j > profile_span(sample, k)) return reps;
  EnumState state;
  state.members = &sample.members;
  state.k = k;
  state.cap = cap;
  state.out = &reps;
  state.stack.reserve(static_cast<std::size_t>(k));
  state.visit(0, 0, j);
  return reps;
}

namespace {

// Distinct pairs b < c within [lo, n] summing to s.
long long pair_count_in_range(long long lo, long long n, long long s) {
  // b >= max(lo, s - n) and b <= ceil(s/2) - 1.
  const long long b_min = std::max(lo, s - n);
  const long long b_max = (s + 1) / 2 - 1;
  return std::max(0ll, b_max - b_min + 1);
}

}  // namespace

std::uint64_t rho_max(long long n, int k, long long j, long long n_cap) {
  check_k(k);
  if (n < 1) fail(ErrorCode::NTooSmall, "n must be at least 1");
  const long long span = static_cast<long long>(k) * n;
  if (j < 0 || j > span)
    fail(ErrorCode::InvalidArgument, "j outside [0, k*n]");
  if (k == 2) {
    const long long m = std::min(j, 2 * n - j);
    return static_cast<std::uint64_t>((m + 1) / 2);
  }
  if (k == 3) {
    // Sum over the smallest element a of the pair count completing to j.
    std::uint64_t total = 0;
    for (long long a = 0; a <= n; ++a) {
      const long long s = j - a;
      if (s < 2 * a + 3) break;  // smallest completion is (a+1) + (a+2)
      total = checked_add(
          total,
          static_cast<std::uint64_t>(pair_count_in_range(a + 1, n, s)));
    }
    return total;
  }
  if (n > n_cap)
    fail(ErrorCode::NCapExceeded, "ground-set DP capped for k >= 4");
  std::vector<long long> full(static_cast<std::size_t>(n) + 1);
  for (long long i = 0; i <= n; ++i) full[static_cast<std::size_t>(i)] = i;
  BasisSample ground;
  ground.n = n;
  ground.rule_tag = "ground";
  ground.members = std::move(full);
  return count_all(ground, k, CountMode::Distinct).at(j);
}

double rho_lower_bound(long long n, int k, double alpha) {
  check_k(k);
  if (!(alpha > 0.0 && alpha < 1.0))
    fail(ErrorCode::AlphaOutOfRange, "alpha must lie in (0, 1)");
  double kfac = 1.0, km1fac = 1.0;
  for (int i = 2; i <= k; ++i) kfac *= i;
  for (int i = 2; i <= k - 1; ++i) km1fac *= i;
  return std::pow(alpha * static_cast<double>(n), k - 1) / (kfac * km1fac);
}

}  // namespace repbasis
