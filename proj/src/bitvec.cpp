#include "tcdc/bitvec.hpp"

#include "tcdc/hash.hpp"

namespace tcdc {

void BitVec::clear_tail() {
  size_t tail = n_ & 63;
  if (tail != 0 && !w_.empty()) w_.back() &= (uint64_t(1) << tail) - 1;
}

void BitVec::append(const BitVec& other) {
  size_t base = n_;
  append_zeros(other.n_);
  for (size_t i = 0; i < other.n_; ++i)
    if (other.get(i)) set(base + i, true);
}

void BitVec::append_zeros(size_t n) {
  n_ += n;
  w_.resize((n_ + 63) / 64, 0);
}

BitVec BitVec::slice(size_t pos, size_t len) const {
  if (pos + len > n_) throw RangeError("bitvec: slice out of range");
  BitVec out(len);
  for (size_t i = 0; i < len; ++i)
    if (get(pos + i)) out.set(i, true);
  return out;
}

void BitVec::xor_with(const BitVec& other) {
  if (n_ != other.n_) throw RangeError("bitvec: xor length mismatch");
  for (size_t i = 0; i < w_.size(); ++i) w_[i] ^= other.w_[i];
}

bool BitVec::zero_range(size_t pos, size_t len) const {
  if (pos + len > n_) throw RangeError("bitvec: range out of bounds");
  for (size_t i = 0; i < len; ++i)
    if (get(pos + i)) return false;
  return true;
}

uint64_t BitVec::content_hash() const {
  uint64_t h = mix64(n_);
  for (uint64_t w : w_) h = hash_combine(h, w);
  return h;
}

uint64_t BitVec::fnv_into(uint64_t h) const {
  size_t nbytes = (n_ + 7) / 8;
  for (size_t b = 0; b < nbytes; ++b) {
    uint8_t byte = uint8_t(w_[b >> 3] >> ((b & 7) * 8));
    h = fnv1a_byte(h, byte);
  }
  return h;
}

}  // namespace tcdc
