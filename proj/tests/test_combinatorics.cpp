#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cstdint>
#include <vector>

#include "tcdc/combinatorics.hpp"
#include "tcdc/errors.hpp"

using tcdc::binomial;
using tcdc::colex_rank;
using tcdc::mask_to_subset;
using tcdc::subset_mask;
using tcdc::subsets_colex;

namespace {

// Oracle: Pascal triangle in unsigned 64-bit, valid through n = 60.
std::vector<std::vector<unsigned long long>> pascal(int n_max) {
  std::vector<std::vector<unsigned long long>> p(n_max + 1);
  for (int n = 0; n <= n_max; ++n) {
    p[n].assign(n + 1, 1);
    for (int k = 1; k < n; ++k) p[n][k] = p[n - 1][k - 1] + p[n - 1][k];
  }
  return p;
}

// Oracle: A before B in colex iff, at the largest element where they
// differ, B has the bigger one. With ascending vectors that is a reversed
// lexicographic comparison from the back.
bool colex_less(const std::vector<int>& a, const std::vector<int>& b) {
  for (size_t i = a.size(); i-- > 0;)
    if (a[i] != b[i]) return a[i] < b[i];
  return false;
}

std::vector<std::vector<int>> brute_subsets(int n, int k) {
  std::vector<std::vector<int>> out;
  for (uint64_t m = 0; m < (uint64_t(1) << n); ++m)
    if (__builtin_popcountll(m) == k) out.push_back(mask_to_subset(m));
  std::sort(out.begin(), out.end(), colex_less);
  return out;
}

}  // namespace

TEST_CASE("binomial against a Pascal triangle") {
  auto p = pascal(60);
  for (int n = 0; n <= 60; ++n)
    for (int k = 0; k <= n; ++k) {
      if (p[n][k] > uint64_t(INT64_MAX)) continue;
      CHECK(binomial(n, k) == (long long)p[n][k]);
    }
}

TEST_CASE("binomial edge cases and golden values") {
  CHECK(binomial(0, 0) == 1);
  CHECK(binomial(5, 0) == 1);
  CHECK(binomial(5, 5) == 1);
  CHECK(binomial(16, 2) == 120);
  CHECK(binomial(52, 5) == 2598960);
  CHECK(binomial(3, 4) == 0);
  CHECK(binomial(-1, 0) == 0);
  CHECK(binomial(5, -2) == 0);
  CHECK_THROWS_AS(binomial(70, 35), tcdc::OverflowError);
}

TEST_CASE("subsets_colex matches a brute-force sort") {
  for (int n = 0; n <= 7; ++n)
    for (int k = 0; k <= n; ++k) {
      auto got = subsets_colex(n, k);
      auto want = brute_subsets(n, k);
      REQUIRE(got.size() == want.size());
      CHECK((long long)got.size() == binomial(n, k));
      for (size_t i = 0; i < got.size(); ++i) {
        CHECK(got[i] == want[i]);
        CHECK(std::is_sorted(got[i].begin(), got[i].end()));
      }
    }
}

TEST_CASE("first subsets of {1..4} choose 2 in colex order") {
  auto got = subsets_colex(4, 2);
  REQUIRE(got.size() == 6);
  CHECK(got[0] == std::vector<int>{1, 2});
  CHECK(got[1] == std::vector<int>{1, 3});
  CHECK(got[2] == std::vector<int>{2, 3});
  CHECK(got[3] == std::vector<int>{1, 4});
  CHECK(got[4] == std::vector<int>{2, 4});
  CHECK(got[5] == std::vector<int>{3, 4});
}

TEST_CASE("colex_rank inverts the enumeration") {
  for (int n = 0; n <= 8; ++n)
    for (int k = 0; k <= n; ++k) {
      auto all = subsets_colex(n, k);
      for (size_t i = 0; i < all.size(); ++i) CHECK(colex_rank(all[i]) == (long long)i);
    }
}

TEST_CASE("masks round-trip") {
  for (int n = 0; n <= 10; ++n)
    for (const auto& sub : subsets_colex(n, std::min(n, 3))) {
      CHECK(mask_to_subset(subset_mask(sub)) == sub);
    }
  CHECK(subset_mask({1, 3, 64}) == ((uint64_t(1) << 0) | (uint64_t(1) << 2) | (uint64_t(1) << 63)));
  CHECK(mask_to_subset(0).empty());
}
