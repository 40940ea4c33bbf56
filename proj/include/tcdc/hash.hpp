#pragma once

#include <cstdint>

namespace tcdc {

// splitmix64 finalizer; the only randomness primitive used anywhere, so runs
// are reproducible across platforms from a single seed.
inline uint64_t mix64(uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline uint64_t hash_combine(uint64_t h, uint64_t v) {
  return mix64(h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2)));
}

inline uint64_t fnv1a_byte(uint64_t h, uint8_t b) {
  return (h ^ b) * 1099511628211ULL;
}

constexpr uint64_t kFnvOffset = 14695981039346656037ULL;

}  // namespace tcdc
