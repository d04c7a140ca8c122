#include "geoextremal/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "geoextremal/errors.hpp"
#include "geoextremal/parallel.hpp"

namespace geoextremal {

namespace {

// p / ln(1 - p), which tends to -1 as p -> 0.
double p_over_log_q(const GeoParam& p) { return p.p() / p.log_q(); }

}  // namespace

double upper_bound_g(const GeoParam& p1, const GeoParam& p2) {
    require_nondegenerate(p1, "p1");
    require_nondegenerate(p2, "p2");
    const double s = std::sqrt(p1.q() * p2.q());
    const double zeta_term = 2.0 - std::numbers::pi * std::numbers::pi / 6.0;
    return p_over_log_q(p1) * p_over_log_q(p2) / s * zeta_term - s;
}

BoundPair bound_pair(const GeoParam& p1, const GeoParam& p2) {
    const double g = upper_bound_g(p1, p2);
    const double r12 = std::sqrt(p1.q() / p2.q());
    const double r21 = std::sqrt(p2.q() / p1.q());
    return {g - 0.5 * r12 * p2.p() - 0.5 * r21 * p1.p(), g};
}

double lower_bound_full(const GeoParam& p1, const GeoParam& p2) {
    return bound_pair(p1, p2).lower - 0.25 * p1.p() * p2.p() / std::sqrt(p1.q() * p2.q());
}

BoundPair log_envelope(double p) {
    if (!(p > 0.0 && p <= 0.5)) {
        throw DomainError("log_envelope: p must lie in (0, 1/2], got " + std::to_string(p));
    }
    const double chord_slope = 2.0 - 1.0 / std::numbers::ln2;
    return {1.0 - chord_slope * p, 1.0 - p / 2.0 - p * p / 12.0};
}

namespace {

// x^i + x^{i+c} - 1 with x = 1 - p; decreasing in p.
double kink_equation(double p, std::int64_t i, std::int64_t c) {
    const double lq = std::log1p(-p);
    return std::exp(static_cast<double>(i) * lq) + std::exp(static_cast<double>(i + c) * lq) - 1.0;
}

// 1 - (1/2)^{1/n}
double one_minus_root_of_half(std::int64_t n) {
    return -std::expm1(-std::numbers::ln2 / static_cast<double>(n));
}

}  // namespace

KinkPoint kink_root(std::int64_t i, std::int64_t c) {
    if (i < 1 || c < 0) throw DomainError("kink_root: need i >= 1 and c >= 0");
    KinkPoint k;
    k.i = i;
    k.c = c;
    if (c == 0) {
        k.p = one_minus_root_of_half(i);
        k.x = std::exp(-std::numbers::ln2 / static_cast<double>(i));
        return k;
    }

    // The root lies strictly inside ((1/2)^{1/i}, (1/2)^{1/(i+c)}) in x,
    // i.e. between these two values of p = 1 - x.
    double lo = one_minus_root_of_half(i + c);  // equation > 0 here
    double hi = one_minus_root_of_half(i);      // equation < 0 here
    for (int iter = 0; iter < 200; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (kink_equation(mid, i, c) > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    k.p = std::abs(kink_equation(lo, i, c)) <= std::abs(kink_equation(hi, i, c)) ? lo : hi;
    k.x = 1.0 - k.p;
    return k;
}

double kink_residual(const KinkPoint& k) { return kink_equation(k.p, k.i, k.c); }

namespace {

std::int64_t max_family_index(double p_min) {
    // Largest i with 1 - (1/2)^{1/i} >= p_min; every c >= 1 root of that i lies below it.
    std::int64_t i = std::max<std::int64_t>(
        1, static_cast<std::int64_t>(std::floor(std::log(0.5) / std::log1p(-p_min))));
    while (i > 1 && one_minus_root_of_half(i) < p_min) --i;
    while (one_minus_root_of_half(i + 1) >= p_min) ++i;
    return i;
}

std::vector<KinkPoint> family(std::int64_t i, double p_min) {
    std::vector<KinkPoint> out;
    for (std::int64_t c = 0;; ++c) {
        const KinkPoint k = kink_root(i, c);
        if (k.p < p_min) break;
        out.push_back(k);
    }
    return out;
}

std::vector<KinkPoint> finish(std::vector<std::vector<KinkPoint>> families) {
    std::vector<KinkPoint> all;
    for (auto& f : families) all.insert(all.end(), f.begin(), f.end());
    std::stable_sort(all.begin(), all.end(), [](const KinkPoint& a, const KinkPoint& b) {
        if (a.p != b.p) return a.p > b.p;
        return a.i != b.i ? a.i < b.i : a.c < b.c;
    });
    std::vector<KinkPoint> out;
    for (const KinkPoint& k : all) {
        if (!out.empty() && std::abs(out.back().x - k.x) <= 1e-12) continue;
        out.push_back(k);
    }
    return out;
}

void check_p_min(double p_min) {
    if (!(p_min > 0.0 && p_min <= 0.5)) {
        throw DomainError("enumerate_kinks: p_min must lie in (0, 1/2], got " + std::to_string(p_min));
    }
}

}  // namespace

std::vector<KinkPoint> enumerate_kinks_serial(double p_min) {
    check_p_min(p_min);
    const std::int64_t n = max_family_index(p_min);
    std::vector<std::vector<KinkPoint>> families(static_cast<std::size_t>(n));
    for (std::int64_t i = 1; i <= n; ++i) families[static_cast<std::size_t>(i - 1)] = family(i, p_min);
    return finish(std::move(families));
}

std::vector<KinkPoint> enumerate_kinks(double p_min) {
    check_p_min(p_min);
    const std::int64_t n = max_family_index(p_min);
    std::vector<std::vector<KinkPoint>> families(static_cast<std::size_t>(n));
#pragma omp parallel for schedule(dynamic) num_threads(configured_threads())
    for (std::int64_t i = 1; i <= n; ++i) {
        families[static_cast<std::size_t>(i - 1)] = family(i, p_min);
    }
    return finish(std::move(families));
}

}  // namespace geoextremal
