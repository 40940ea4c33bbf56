#pragma once

#include <cstdint>
#include <vector>

#include "tcdc/errors.hpp"

namespace tcdc {

// binom(n, k); 0 whenever k < 0, n < 0 or k > n. Exact, throws OverflowError
// if the value does not fit a signed 64-bit integer.
long long binomial(long long n, long long k);

// All k-subsets of {1..n} in colexicographic order (A before B iff the
// largest element where they differ lies in B). Elements ascending.
std::vector<std::vector<int>> subsets_colex(int n, int k);

// 0-based position of an ascending subset of {1..n} in that enumeration:
// rank = sum_i binom(c_i - 1, i), i = 1..k.
long long colex_rank(const std::vector<int>& subset);

// Bit (v-1) set for every element v.
uint64_t subset_mask(const std::vector<int>& subset);
std::vector<int> mask_to_subset(uint64_t mask);

}  // namespace tcdc
