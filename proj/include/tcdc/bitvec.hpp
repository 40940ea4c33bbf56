#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "tcdc/errors.hpp"

namespace tcdc {

// Packed bit string. Bit i lives at word i/64, position i%64. Unused high
// bits of the last word are kept zero so equality is plain word comparison.
class BitVec {
 public:
  BitVec() = default;
  explicit BitVec(size_t nbits) : w_((nbits + 63) / 64, 0), n_(nbits) {}

  size_t size() const { return n_; }
  bool empty() const { return n_ == 0; }

  bool get(size_t i) const { return (w_[i >> 6] >> (i & 63)) & 1; }
  void set(size_t i, bool v) {
    uint64_t m = uint64_t(1) << (i & 63);
    if (v)
      w_[i >> 6] |= m;
    else
      w_[i >> 6] &= ~m;
  }
  void flip(size_t i) { w_[i >> 6] ^= uint64_t(1) << (i & 63); }

  void append(const BitVec& other);
  void append_zeros(size_t n);
  BitVec slice(size_t pos, size_t len) const;

  // this ^= other; sizes must match.
  void xor_with(const BitVec& other);

  bool zero_range(size_t pos, size_t len) const;

  bool operator==(const BitVec& o) const { return n_ == o.n_ && w_ == o.w_; }
  bool operator!=(const BitVec& o) const { return !(*this == o); }

  // Deterministic content hash (covers length).
  uint64_t content_hash() const;

  // Fold the packed bytes into an FNV-1a accumulator.
  uint64_t fnv_into(uint64_t h) const;

 private:
  void clear_tail();

  std::vector<uint64_t> w_;
  size_t n_ = 0;
};

}  // namespace tcdc
