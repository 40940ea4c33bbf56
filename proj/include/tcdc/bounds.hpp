#pragma once

#include <vector>

#include "tcdc/errors.hpp"
#include "tcdc/rational.hpp"

namespace tcdc {

// Optimal total communication load for K servers at computation load r with
// s reducers per function (sum over the achievable multicast gains).
Rational l_star(int K, int r, int s);

// Optimal max-link load on a single-switch or fat-tree network:
// l_star/K + (s/K)(1 - r/K).
Rational d_star(int K, int r, int s);

struct ConverseTerms {
  Rational uplink_total;    // lower bound on sum of server uplink loads
  Rational downlink_total;  // lower bound on sum of server downlink loads
  Rational per_link_avg;    // (uplink + downlink) / K, i.e. d_star again
};

ConverseTerms converse_terms(int K, int r, int s);

// Total load of the uncoded shuffle: s(1 - r/K). At s=1 exceeds l_star by a
// factor of exactly r.
Rational uncoded_load(int K, int r, int s);

struct EnvelopePoint {
  Rational r;
  Rational value;
};

// Lower convex envelope of a set of points, evaluated exactly. Memory-shared
// placements realize any point on the envelope of the integer-r optima.
class ConvexEnvelope {
 public:
  // Points must have distinct r; any order.
  static ConvexEnvelope of_points(std::vector<EnvelopePoint> points);

  // Piecewise-linear interpolation; RangeError outside [r_min, r_max].
  Rational eval(const Rational& r) const;

  const std::vector<EnvelopePoint>& vertices() const { return hull_; }
  Rational r_min() const { return hull_.front().r; }
  Rational r_max() const { return hull_.back().r; }

 private:
  std::vector<EnvelopePoint> hull_;
};

// Envelope of d_star(K, ., s) over integer r in [1, K].
ConvexEnvelope d_star_envelope(int K, int s);

}  // namespace tcdc
