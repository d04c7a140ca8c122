#pragma once

// Geometric distribution on {0, 1, 2, ...}: P(X = i) = p (1-p)^i.

#include <cstdint>

namespace geoextremal {

// Success probability of a Geometric law, validated to lie in (0, 1].
class GeoParam {
public:
    explicit GeoParam(double p);

    double p() const noexcept { return p_; }
    double q() const noexcept { return 1.0 - p_; }
    // ln(1-p), computed without forming 1-p. -inf when p = 1.
    double log_q() const noexcept { return log_q_; }
    bool degenerate() const noexcept { return p_ == 1.0; }

    // (1-p)^n and 1-(1-p)^n as direct powers, accurate to a few ulp for any n.
    double q_pow(double n) const noexcept;
    double one_minus_q_pow(double n) const noexcept;

    friend bool operator==(const GeoParam& a, const GeoParam& b) noexcept { return a.p_ == b.p_; }

private:
    double p_;
    double log_q_;
};

struct Moments {
    double mean;
    double variance;
};

double pmf(const GeoParam& p, std::int64_t i);
double cdf(const GeoParam& p, std::int64_t a);

// Pseudoinverse F^{-1}(u) = min{n : cdf(n) >= u}. Requires 0 <= u < 1.
std::int64_t quantile(const GeoParam& p, double u);

Moments moments(const GeoParam& p) noexcept;

// Throws DegenerateMarginal when p = 1; `name` identifies the argument in the message.
void require_nondegenerate(const GeoParam& p, const char* name);

}  // namespace geoextremal
