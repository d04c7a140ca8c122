#pragma once

// Extremal correlation between Geo(p1) and Geo(p2) marginals.
//
// The minimum is attained by the countermonotone coupling
//   X1 = F1^{-1}(U),  X2 = F2^{-1}(1 - U),
// under which X1 steps up at alpha_i = 1 - (1-p1)^i and X2 steps down at
// beta_j = (1-p2)^j. Merging the two families partitions [0, 1] into
// intervals on which (X1, X2) is constant, so E[X1 X2] is a finite sum.

#include <cstdint>
#include <string_view>
#include <vector>

#include "geoextremal/geom.hpp"

namespace geoextremal {

enum class CorrPath { GeneralEnumeration, ClosedFormHalf, ClosedFormEqualP, ExactRational };

std::string_view to_string(CorrPath path) noexcept;

struct CorrResult {
    double e_xy = 0.0;
    double covariance = 0.0;
    double rho = 0.0;
    std::int64_t n_breakpoints = 0;
    CorrPath path = CorrPath::GeneralEnumeration;
};

// Values of (X1, X2) on the open interval (s_m, s_{m+1}).
struct IntervalLabel {
    std::int64_t f1 = 0;
    std::int64_t f2 = 0;

    friend bool operator==(const IntervalLabel&, const IntervalLabel&) = default;
};

struct BreakpointGrid {
    std::vector<double> points;          // s_1 <= ... <= s_n
    std::vector<IntervalLabel> labels;   // one per consecutive pair of points
    std::int64_t d1 = 0;                 // number of beta points
    std::int64_t d2 = 0;                 // number of alpha points

    bool empty() const noexcept { return points.empty(); }
};

struct BreakpointCounts {
    std::int64_t d1 = 0;  // #{j >= 1 : (1-p2)^j >= p1}
    std::int64_t d2 = 0;  // #{i >= 1 : (1-p1)^i >= p2}
};

// Zero counts when p1 + p2 >= 1. Floors of log ratios, corrected against the powers.
BreakpointCounts breakpoint_counts(const GeoParam& p1, const GeoParam& p2);

BreakpointGrid breakpoints(const GeoParam& p1, const GeoParam& p2);

// E[X1 X2] under the countermonotone coupling.
double mean_product_min(const GeoParam& p1, const GeoParam& p2);

CorrResult min_corr(const GeoParam& p1, const GeoParam& p2);

struct MaxCorrOptions {
    double relative_tail_tolerance = 1e-15;
    std::int64_t max_points = 10'000'000;
};

// Comonotone coupling X1 = F1^{-1}(U), X2 = F2^{-1}(U).
CorrResult max_corr(const GeoParam& p1, const GeoParam& p2, const MaxCorrOptions& options = {});

// Equal-parameter minimum via the telescoped closed form; no grid is built.
CorrResult min_corr_equal_closed(const GeoParam& p);

// Correlation from E[X1 X2] and the marginal moments.
CorrResult assemble(const GeoParam& p1, const GeoParam& p2, double e_xy, std::int64_t n_breakpoints,
                    CorrPath path);

namespace detail {

// Quantities of the equal-p closed form, exposed for tests.
struct EqualPStructure {
    std::int64_t k = 0;  // alpha_k <= 1/2 < alpha_{k+1}
    int remainder_case = 0;  // 1, 2 or 3
    std::int64_t betas_in_alpha_k_half = 0;  // #{j : alpha_k <= beta_j <= 1/2}
};

EqualPStructure equal_p_structure(const GeoParam& p);

// c with beta_{c+1} < alpha_i <= beta_c for equal parameters.
std::int64_t beta_index_below(const GeoParam& p, std::int64_t i);

}  // namespace detail

}  // namespace geoextremal
