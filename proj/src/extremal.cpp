#include "geoextremal/extremal.hpp"

#include <algorithm>
#include <cmath>

#include "geoextremal/errors.hpp"
#include "sum.hpp"

namespace geoextremal {

std::string_view to_string(CorrPath path) noexcept {
    switch (path) {
        case CorrPath::GeneralEnumeration: return "general_enumeration";
        case CorrPath::ClosedFormHalf: return "closed_form_half";
        case CorrPath::ClosedFormEqualP: return "closed_form_equal_p";
        case CorrPath::ExactRational: return "exact_rational";
    }
    return "unknown";
}

namespace {

// Largest n >= 0 with base.q_pow(n) >= threshold, for threshold in (0, 1].
std::int64_t count_powers_at_least(const GeoParam& base, double threshold) {
    std::int64_t n = static_cast<std::int64_t>(std::floor(std::log(threshold) / base.log_q()));
    n = std::max<std::int64_t>(n, 0);
    while (n > 0 && base.q_pow(static_cast<double>(n)) < threshold) --n;
    while (base.q_pow(static_cast<double>(n + 1)) >= threshold) ++n;
    return n;
}

// Streams the merged countermonotone grid in ascending order and calls
// visit(s_m, s_{m+1}, f1, f2) for each consecutive pair of points. On a tie
// the alpha point goes first; coincident points give a zero-width call.
template <typename Visitor>
void for_each_interval(const GeoParam& p1, const GeoParam& p2, const BreakpointCounts& counts,
                       Visitor&& visit) {
    const std::int64_t d1 = counts.d1;
    const std::int64_t d2 = counts.d2;
    auto alpha = [&](std::int64_t i) { return p1.one_minus_q_pow(static_cast<double>(i)); };
    auto beta = [&](std::int64_t j) { return p2.q_pow(static_cast<double>(j)); };

    std::int64_t next_alpha = 1;  // ascending index, ascending value
    std::int64_t next_beta = d1;  // descending index, ascending value
    double a = next_alpha <= d2 ? alpha(next_alpha) : 0.0;
    double b = next_beta >= 1 ? beta(next_beta) : 0.0;

    bool first = true;
    double prev = 0.0;
    IntervalLabel label;

    while (next_alpha <= d2 || next_beta >= 1) {
        double s;
        const bool take_alpha = next_beta < 1 || (next_alpha <= d2 && a <= b);
        if (take_alpha) {
            s = a;
            ++next_alpha;
            if (next_alpha <= d2) a = alpha(next_alpha);
        } else {
            s = b;
            --next_beta;
            if (next_beta >= 1) b = beta(next_beta);
        }
        if (!first) visit(prev, s, label);
        first = false;
        prev = s;
        // X1 counts alphas at or below s; X2 counts betas strictly above s.
        label.f1 = next_alpha - 1;
        label.f2 = next_beta;
    }
}

void require_pair(const GeoParam& p1, const GeoParam& p2) {
    require_nondegenerate(p1, "p1");
    require_nondegenerate(p2, "p2");
}

}  // namespace

BreakpointCounts breakpoint_counts(const GeoParam& p1, const GeoParam& p2) {
    require_pair(p1, p2);
    if (p1.p() + p2.p() >= 1.0) return {};
    return {count_powers_at_least(p2, p1.p()), count_powers_at_least(p1, p2.p())};
}

BreakpointGrid breakpoints(const GeoParam& p1, const GeoParam& p2) {
    const BreakpointCounts counts = breakpoint_counts(p1, p2);
    BreakpointGrid grid;
    grid.d1 = counts.d1;
    grid.d2 = counts.d2;
    if (counts.d1 + counts.d2 == 0) return grid;

    grid.points.reserve(static_cast<std::size_t>(counts.d1 + counts.d2));
    grid.labels.reserve(static_cast<std::size_t>(counts.d1 + counts.d2 - 1));
    for_each_interval(p1, p2, counts, [&](double lo, double, const IntervalLabel& label) {
        grid.points.push_back(lo);
        grid.labels.push_back(label);
    });
    grid.points.push_back(p2.q_pow(1.0));
    return grid;
}

double mean_product_min(const GeoParam& p1, const GeoParam& p2) {
    const BreakpointCounts counts = breakpoint_counts(p1, p2);
    detail::CompensatedSum sum;
    for_each_interval(p1, p2, counts, [&](double lo, double hi, const IntervalLabel& label) {
        sum.add((hi - lo) * static_cast<double>(label.f1 * label.f2));
    });
    return sum.value();
}

CorrResult assemble(const GeoParam& p1, const GeoParam& p2, double e_xy, std::int64_t n_breakpoints,
                    CorrPath path) {
    require_pair(p1, p2);
    const Moments m1 = moments(p1);
    const Moments m2 = moments(p2);
    CorrResult r;
    r.e_xy = e_xy;
    r.covariance = e_xy - m1.mean * m2.mean;
    // (e p1 p2 - q1 q2) / sqrt(q1 q2) is the same ratio with fewer roundings.
    const double q1q2 = p1.q() * p2.q();
    r.rho = (e_xy * p1.p() * p2.p() - q1q2) / std::sqrt(q1q2);
    r.n_breakpoints = n_breakpoints;
    r.path = path;
    return r;
}

CorrResult min_corr(const GeoParam& p1, const GeoParam& p2) {
    const BreakpointCounts counts = breakpoint_counts(p1, p2);
    if (counts.d1 + counts.d2 == 0) {
        return assemble(p1, p2, 0.0, 0, CorrPath::ClosedFormHalf);
    }
    return assemble(p1, p2, mean_product_min(p1, p2), counts.d1 + counts.d2,
                    CorrPath::GeneralEnumeration);
}

namespace {

// E[X^2; X >= a] for X ~ Geo(p): (1-p)^a E[(a + Y)^2] with Y an independent copy.
double second_moment_tail(const GeoParam& p, std::int64_t a) {
    const Moments m = moments(p);
    const double da = static_cast<double>(a);
    return p.q_pow(da) * (da * da + 2.0 * da * m.mean + m.variance + m.mean * m.mean);
}

}  // namespace

CorrResult max_corr(const GeoParam& p1, const GeoParam& p2, const MaxCorrOptions& options) {
    require_pair(p1, p2);

    // Work with upper tails t = 1 - s = (1-p)^i so widths near u = 1 keep their precision.
    std::int64_t i = 1;  // next step of X1
    std::int64_t j = 1;  // next step of X2
    double t1 = p1.q_pow(1.0);
    double t2 = p2.q_pow(1.0);
    double t_prev = 1.0;
    std::int64_t f1 = 0;
    std::int64_t f2 = 0;
    std::int64_t n_points = 0;
    detail::CompensatedSum sum;

    while (n_points < options.max_points) {
        const double t = std::max(t1, t2);
        sum.add((t_prev - t) * static_cast<double>(f1 * f2));
        t_prev = t;
        if (t1 >= t2) {
            f1 = i++;
            t1 = p1.q_pow(static_cast<double>(i));
        } else {
            f2 = j++;
            t2 = p2.q_pow(static_cast<double>(j));
        }
        ++n_points;
        // On U > 1 - t_prev both X1 >= f1 and X2 >= f2; Cauchy-Schwarz bounds the rest.
        const double tail =
            std::sqrt(second_moment_tail(p1, f1) * second_moment_tail(p2, f2));
        if (f1 > 0 && f2 > 0 && tail <= options.relative_tail_tolerance * sum.value()) break;
        if (t_prev == 0.0) break;
    }
    return assemble(p1, p2, sum.value(), n_points, CorrPath::GeneralEnumeration);
}

namespace detail {

std::int64_t beta_index_below(const GeoParam& p, std::int64_t i) {
    // beta_{c+1} < alpha_i <= beta_c, i.e. c = #{j >= 1 : q^j >= alpha_i}.
    return count_powers_at_least(p, p.one_minus_q_pow(static_cast<double>(i)));
}

EqualPStructure equal_p_structure(const GeoParam& p) {
    if (!(p.p() < 0.5)) throw DomainError("equal-p structure requires p < 1/2");
    EqualPStructure st;
    st.k = count_powers_at_least(p, 0.5);
    const double alpha_k = p.one_minus_q_pow(static_cast<double>(st.k));
    const double beta_k1 = p.q_pow(static_cast<double>(st.k + 1));
    const double beta_k2 = p.q_pow(static_cast<double>(st.k + 2));
    // Ties go to the lower-numbered case.
    if (beta_k1 <= alpha_k) {
        st.remainder_case = 1;
    } else if (beta_k2 <= alpha_k) {
        st.remainder_case = 2;
    } else {
        st.remainder_case = 3;
    }
    for (std::int64_t j = 1;; ++j) {
        const double beta = p.q_pow(static_cast<double>(j));
        if (beta < alpha_k) break;
        if (beta <= 0.5) ++st.betas_in_alpha_k_half;
    }
    return st;
}

}  // namespace detail

CorrResult min_corr_equal_closed(const GeoParam& p) {
    require_nondegenerate(p, "p");
    if (p.p() >= 0.5) {
        return assemble(p, p, 0.0, 0, CorrPath::ClosedFormHalf);
    }

    // E/2 = sum_{i<k} [c_i (q^i - 1) - q^{c_i+1}/(1-q)] + R(q, k), where the
    // region (p, 1/2] is split by alpha_1 < ... < alpha_k <= 1/2 and the
    // mirror half (1/2, 1-p) contributes the same amount.
    const detail::EqualPStructure st = detail::equal_p_structure(p);
    const std::int64_t k = st.k;
    const double inv_p = 1.0 / p.p();
    auto qp = [&](std::int64_t n) { return p.q_pow(static_cast<double>(n)); };

    detail::CompensatedSum half;
    for (std::int64_t i = 1; i < k; ++i) {
        const std::int64_t c = detail::beta_index_below(p, i);
        half.add(static_cast<double>(c) * -p.one_minus_q_pow(static_cast<double>(i)));
        half.add(-qp(c + 1) * inv_p);
    }

    const double kd = static_cast<double>(k);
    const double qk_minus_1 = -p.one_minus_q_pow(kd);
    switch (st.remainder_case) {
        case 1:
            half.add(kd * kd / 2.0);
            half.add(kd * (qk_minus_1 + qp(k + 1) * inv_p));
            half.add(-qp(k + 1) * inv_p);
            break;
        case 2:
            half.add(kd * kd / 2.0);
            half.add(kd * (qp(k + 1) + qk_minus_1 + qp(k + 2) * inv_p));
            half.add(qk_minus_1);
            half.add(-qp(k + 2) * inv_p);
            break;
        default:
            half.add(kd * kd / 2.0);
            half.add(kd * (qp(k + 2) + qp(k + 1) + qk_minus_1 + qp(k + 3) * inv_p));
            half.add(2.0 * qk_minus_1);
            half.add(-qp(k + 3) * inv_p);
            break;
    }

    const BreakpointCounts counts = breakpoint_counts(p, p);
    return assemble(p, p, 2.0 * half.value(), counts.d1 + counts.d2, CorrPath::ClosedFormEqualP);
}

}  // namespace geoextremal
