#include "tcdc/combinatorics.hpp"

#include <algorithm>
#include <limits>

namespace tcdc {

long long binomial(long long n, long long k) {
  if (k < 0 || n < 0 || k > n) return 0;
  k = std::min(k, n - k);
  __int128 res = 1;
  for (long long i = 1; i <= k; ++i) {
    res = res * (n - k + i) / i;  // exact at every step: res = binom(n-k+i, i)
    if (res > std::numeric_limits<long long>::max())
      throw OverflowError("binomial: value exceeds 64 bits");
  }
  return static_cast<long long>(res);
}

std::vector<std::vector<int>> subsets_colex(int n, int k) {
  std::vector<std::vector<int>> out;
  if (k < 0 || n < 0 || k > n) return out;
  if (k == 0) {
    out.emplace_back();
    return out;
  }
  std::vector<int> c(k);
  for (int i = 0; i < k; ++i) c[i] = i + 1;
  for (;;) {
    out.push_back(c);
    // colex successor: bump the lowest position that can grow, reset below it.
    int i = 0;
    while (i + 1 < k && c[i] + 1 == c[i + 1]) ++i;
    if (c[i] + 1 > n) break;
    ++c[i];
    for (int p = 0; p < i; ++p) c[p] = p + 1;
  }
  return out;
}

long long colex_rank(const std::vector<int>& subset) {
  long long rank = 0;
  for (size_t i = 0; i < subset.size(); ++i)
    rank += binomial(subset[i] - 1, static_cast<long long>(i) + 1);
  return rank;
}

uint64_t subset_mask(const std::vector<int>& subset) {
  uint64_t m = 0;
  for (int v : subset) m |= uint64_t(1) << (v - 1);
  return m;
}

std::vector<int> mask_to_subset(uint64_t mask) {
  std::vector<int> out;
  for (int v = 1; mask != 0; ++v, mask >>= 1)
    if (mask & 1) out.push_back(v);
  return out;
}

}  // namespace tcdc
