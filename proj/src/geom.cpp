#include "geoextremal/geom.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "geoextremal/errors.hpp"

namespace geoextremal {

GeoParam::GeoParam(double p) : p_(p), log_q_(0.0) {
    if (!(p > 0.0 && p <= 1.0)) {
        throw DomainError("geometric parameter must lie in (0, 1], got " + std::to_string(p));
    }
    log_q_ = std::log1p(-p);
}

double GeoParam::q_pow(double n) const noexcept {
    if (n == 0.0) return 1.0;
    if (degenerate()) return 0.0;
    return std::exp(n * log_q_);
}

double GeoParam::one_minus_q_pow(double n) const noexcept {
    if (n == 0.0) return 0.0;
    if (degenerate()) return 1.0;
    return -std::expm1(n * log_q_);
}

double pmf(const GeoParam& p, std::int64_t i) {
    if (i < 0) throw DomainError("pmf: index must be nonnegative");
    if (p.degenerate()) return i == 0 ? 1.0 : 0.0;
    return p.p() * p.q_pow(static_cast<double>(i));
}

double cdf(const GeoParam& p, std::int64_t a) {
    if (a < 0) throw DomainError("cdf: argument must be nonnegative");
    return p.one_minus_q_pow(static_cast<double>(a) + 1.0);
}

namespace {

// cdf extended with cdf(-1) = 0, for bracketing.
double cdf_ext(const GeoParam& p, std::int64_t a) { return a < 0 ? 0.0 : cdf(p, a); }

}  // namespace

std::int64_t quantile(const GeoParam& p, double u) {
    if (!(u >= 0.0 && u < 1.0)) {
        throw DomainError("quantile: u must lie in [0, 1), got " + std::to_string(u));
    }
    if (u <= p.p() || p.degenerate()) return 0;

    // The log ratio is only a starting guess; the bracket below is what decides.
    const double guess = std::floor(std::log1p(-u) / p.log_q());
    constexpr double kMax = static_cast<double>(std::numeric_limits<std::int64_t>::max() / 4);
    std::int64_t g = static_cast<std::int64_t>(std::min(std::max(guess, 0.0), kMax));

    // Invariant once established: cdf(lo - 1) < u <= cdf(hi).
    std::int64_t lo = g > 2 ? g - 2 : 0;
    std::int64_t hi = g + 2;
    for (std::int64_t step = 4; cdf_ext(p, lo - 1) >= u; step *= 2) lo = lo > step ? lo - step : 0;
    for (std::int64_t step = 4; cdf(p, hi) < u; step *= 2) hi += step;

    while (lo < hi) {
        const std::int64_t mid = lo + (hi - lo) / 2;
        if (cdf(p, mid) >= u) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    return lo;
}

Moments moments(const GeoParam& p) noexcept {
    const double q = p.q();
    return {q / p.p(), q / (p.p() * p.p())};
}

void require_nondegenerate(const GeoParam& p, const char* name) {
    if (p.degenerate()) {
        throw DegenerateMarginal(std::string(name) +
                                 ": p = 1 gives a constant marginal with zero variance; "
                                 "correlation is undefined");
    }
}

}  // namespace geoextremal
