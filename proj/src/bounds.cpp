#include "tcdc/bounds.hpp"

#include <algorithm>
#include <string>

#include "tcdc/combinatorics.hpp"

namespace tcdc {

namespace {

void check_kr_range(const char* where, int K, int r, int s) {
  if (K < 1) throw RangeError(std::string(where) + ": K must be >= 1");
  if (r < 1 || r > K) throw RangeError(std::string(where) + ": r must be in [1, K]");
  if (s < 1 || s > K) throw RangeError(std::string(where) + ": s must be in [1, K]");
}

}  // namespace

Rational l_star(int K, int r, int s) {
  check_kr_range("l_star", K, r, s);
  Rational den = Rational(r) * Rational(binomial(K, r)) * Rational(binomial(K, s));
  Rational sum;
  int lo = std::max(r + 1, s);
  int hi = std::min(r + s, K);
  for (int t = lo; t <= hi; ++t) {
    Rational num = Rational(t) * Rational(binomial(K, t)) *
                   Rational(binomial(t - 2, r - 1)) * Rational(binomial(r, t - s));
    sum += num / den;
  }
  return sum;
}

Rational d_star(int K, int r, int s) {
  check_kr_range("d_star", K, r, s);
  Rational k(K);
  return l_star(K, r, s) / k + (Rational(s) / k) * (Rational(1) - Rational(r) / k);
}

ConverseTerms converse_terms(int K, int r, int s) {
  check_kr_range("converse_terms", K, r, s);
  ConverseTerms out;
  out.uplink_total = l_star(K, r, s);
  out.downlink_total = uncoded_load(K, r, s);
  out.per_link_avg = (out.uplink_total + out.downlink_total) / Rational(K);
  return out;
}

Rational uncoded_load(int K, int r, int s) {
  check_kr_range("uncoded_load", K, r, s);
  return Rational(s) * (Rational(1) - Rational(r) / Rational(K));
}

ConvexEnvelope ConvexEnvelope::of_points(std::vector<EnvelopePoint> points) {
  if (points.empty()) throw RangeError("envelope: no points");
  std::sort(points.begin(), points.end(),
            [](const EnvelopePoint& a, const EnvelopePoint& b) { return a.r < b.r; });
  for (size_t i = 1; i < points.size(); ++i)
    if (points[i].r == points[i - 1].r) throw RangeError("envelope: duplicate r");

  // Monotone chain, lower hull only. cross <= 0 drops points above or on the
  // chord, so collinear interior points vanish.
  ConvexEnvelope env;
  auto& h = env.hull_;
  for (const auto& p : points) {
    while (h.size() >= 2) {
      const auto& a = h[h.size() - 2];
      const auto& b = h[h.size() - 1];
      Rational cross = (b.r - a.r) * (p.value - a.value) - (b.value - a.value) * (p.r - a.r);
      if (cross <= Rational(0))
        h.pop_back();
      else
        break;
    }
    h.push_back(p);
  }
  return env;
}

Rational ConvexEnvelope::eval(const Rational& r) const {
  if (r < hull_.front().r || hull_.back().r < r)
    throw RangeError("envelope: evaluation point outside [r_min, r_max]");
  if (hull_.size() == 1) return hull_.front().value;
  size_t hi = 1;
  while (hull_[hi].r < r) ++hi;
  const auto& a = hull_[hi - 1];
  const auto& b = hull_[hi];
  return a.value + (b.value - a.value) * (r - a.r) / (b.r - a.r);
}

ConvexEnvelope d_star_envelope(int K, int s) {
  std::vector<EnvelopePoint> pts;
  pts.reserve(K);
  for (int r = 1; r <= K; ++r) pts.push_back({Rational(r), d_star(K, r, s)});
  return ConvexEnvelope::of_points(std::move(pts));
}

}  // namespace tcdc
