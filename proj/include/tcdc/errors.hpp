#pragma once

#include <stdexcept>
#include <string>

namespace tcdc {

// Base class for everything thrown by this library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A parameter is outside its admissible range (r, s, K, T, ...).
struct RangeError : Error { using Error::Error; };

// A structural divisibility requirement is violated (binom(K,r) | N, ...).
struct DivisibilityError : Error { using Error::Error; };

// Exact arithmetic left the representable range.
struct OverflowError : Error { using Error::Error; };

// Coded payload construction requested for s > 1 (formulas only there).
struct UnsupportedCascade : Error { using Error::Error; };

// A receiver could not reconstruct its needed values bit-exactly.
struct DecodeFailure : Error { using Error::Error; };

// A routed message set does not match what the receiver must obtain.
struct DeliveryError : Error { using Error::Error; };

// No admissible fat-tree arity for the requested server count.
struct ArityError : Error { using Error::Error; };

// More servers than the topology has slots.
struct CapacityError : Error { using Error::Error; };

// A payload cannot be cut into the equal pieces a switch must forward.
struct SplitError : Error { using Error::Error; };

// File output failed.
struct IoError : Error { using Error::Error; };

}  // namespace tcdc
