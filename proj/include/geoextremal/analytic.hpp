#pragma once

// Closed-form bounds on the minimum correlation and the parameters where its
// derivative jumps.

#include <cstdint>
#include <vector>

#include "geoextremal/geom.hpp"

namespace geoextremal {

struct BoundPair {
    double lower = 0.0;
    double upper = 0.0;
};

// Minimum correlation between two exponentials of any rates: 1 - pi^2/6.
inline constexpr double kExponentialMinCorr = 1.0 - 3.14159265358979323846 * 3.14159265358979323846 / 6.0;

// Upper bound g(p1, p2) obtained from floor(ab) <= ab in the product integrand.
double upper_bound_g(const GeoParam& p1, const GeoParam& p2);

// [g - sqrt(q1/q2) p2 / 2 - sqrt(q2/q1) p1 / 2,  g]. For p1 = p2 = p this is [g - p, g].
BoundPair bound_pair(const GeoParam& p1, const GeoParam& p2);

// bound_pair().lower minus p1 p2 / (4 sqrt(q1 q2)), the E[A1] E[A2] <= 1/4 term
// of the conditioned-exponential argument. Unlike the short form it holds
// for all p1, p2 < 1, including both close to 1.
double lower_bound_full(const GeoParam& p1, const GeoParam& p2);

// Bracket of -p / ln(1 - p) valid for 0 < p <= 1/2.
BoundPair log_envelope(double p);

// Equal-parameter kink: x = 1 - p solves x^i (1 + x^c) = 1.
struct KinkPoint {
    std::int64_t i = 1;
    std::int64_t c = 0;
    double x = 0.5;
    double p = 0.5;
};

KinkPoint kink_root(std::int64_t i, std::int64_t c);

// x^i + x^{i+c} - 1 evaluated through p, which is carried with more resolution than x.
double kink_residual(const KinkPoint& k);

// All kinks with p >= p_min, descending in p. Requires 0 < p_min <= 1/2.
std::vector<KinkPoint> enumerate_kinks(double p_min);
std::vector<KinkPoint> enumerate_kinks_serial(double p_min);

}  // namespace geoextremal
