#include "doctest.h"

#include <cmath>
#include <random>
#include <vector>

#include "geoextremal/errors.hpp"
#include "geoextremal/extremal.hpp"

using namespace geoextremal;

namespace {

// E[X1 X2] = sum_{i,j >= 1} P(X1 >= i, X2 >= j). Under the countermonotone
// coupling the event is {alpha_i < U < beta_j}; under the comonotone one it
// is {U > max(alpha_i, 1 - q2^j)}.
long double oracle_min_product(double p1, double p2) {
    const long double q1 = 1.0L - p1;
    const long double q2 = 1.0L - p2;
    long double total = 0.0L;
    long double qi = q1;
    for (int i = 1; 1.0L - qi < q2; ++i, qi *= q1) {
        long double qj = q2;
        for (int j = 1; qj > 1.0L - qi; ++j, qj *= q2) total += qj - (1.0L - qi);
    }
    return total;
}

long double oracle_max_product(double p1, double p2) {
    const long double q1 = 1.0L - p1;
    const long double q2 = 1.0L - p2;
    long double total = 0.0L;
    long double qi = q1;
    for (int i = 1; qi > 1e-22L; ++i, qi *= q1) {
        long double qj = q2;
        for (int j = 1; qj > 1e-22L; ++j, qj *= q2) total += std::min(qi, qj);
    }
    return total;
}

double rho_from_product(double p1, double p2, long double e) {
    const long double q1q2 = (1.0L - p1) * (1.0L - p2);
    return static_cast<double>((e * p1 * p2 - q1q2) / std::sqrt(q1q2));
}

std::vector<double> grid(double lo, double hi, int n) {
    std::vector<double> out;
    for (int k = 0; k < n; ++k) out.push_back(lo + (hi - lo) * (k + 0.5) / n);
    return out;
}

}  // namespace

TEST_CASE("breakpoints of the p = 1/4 example") {
    const BreakpointGrid g = breakpoints(GeoParam(0.25), GeoParam(0.25));
    const std::vector<double> expected = {64, 81, 108, 112, 144, 148, 175, 192};
    REQUIRE(g.points.size() == expected.size());
    for (std::size_t m = 0; m < expected.size(); ++m) {
        CHECK(g.points[m] == doctest::Approx(expected[m] / 256.0).epsilon(1e-15));
    }
    const std::vector<IntervalLabel> labels = {{1, 4}, {1, 3}, {1, 2}, {2, 2}, {2, 1}, {3, 1}, {4, 1}};
    CHECK(g.labels == labels);
    CHECK(g.d1 == 4);
    CHECK(g.d2 == 4);
}

TEST_CASE("breakpoints: empty and minimal grids") {
    CHECK(breakpoints(GeoParam(0.6), GeoParam(0.7)).empty());
    const BreakpointGrid g = breakpoints(GeoParam(0.5), GeoParam(0.49));
    REQUIRE(g.points.size() == 2);
    CHECK(g.points[0] == doctest::Approx(0.5));
    CHECK(g.points[1] == doctest::Approx(0.51));
    REQUIRE(g.labels.size() == 1);
    CHECK(g.labels[0] == IntervalLabel{1, 1});
    CHECK_THROWS_AS(breakpoints(GeoParam(1.0), GeoParam(0.3)), DegenerateMarginal);
}

TEST_CASE("grid invariants on random pairs") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> unif(0.02, 0.9);
    for (int t = 0; t < 300; ++t) {
        const double a = unif(rng);
        const double b = unif(rng);
        if (a + b >= 1.0) continue;
        const GeoParam p1(a), p2(b);
        const BreakpointGrid g = breakpoints(p1, p2);
        REQUIRE(g.points.size() == static_cast<std::size_t>(g.d1 + g.d2));
        CHECK(g.points.front() == doctest::Approx(a).epsilon(1e-14));
        CHECK(g.points.back() == doctest::Approx(1.0 - b).epsilon(1e-14));
        for (std::size_t m = 0; m + 1 < g.points.size(); ++m) {
            CHECK(g.points[m] <= g.points[m + 1]);
            // f1 = #{i : alpha_i <= s_m}, f2 = #{j : beta_j >= s_{m+1}}
            std::int64_t f1 = 0;
            while (f1 < g.d2 && p1.one_minus_q_pow(static_cast<double>(f1 + 1)) <= g.points[m]) ++f1;
            std::int64_t f2 = 0;
            while (f2 < g.d1 && p2.q_pow(static_cast<double>(f2 + 1)) >= g.points[m + 1]) ++f2;
            CHECK(g.labels[m] == IntervalLabel{f1, f2});
        }
    }
}

TEST_CASE("mean_product_min examples") {
    CHECK(mean_product_min(GeoParam(0.25), GeoParam(0.25)) == doctest::Approx(442.0 / 256.0).epsilon(1e-15));
    CHECK(mean_product_min(GeoParam(0.6), GeoParam(0.7)) == 0.0);
    // Frozen from the exact rational evaluation at (1/10, 1/5).
    CHECK(mean_product_min(GeoParam(0.1), GeoParam(0.2)) ==
          doctest::Approx(9.337938880548159).epsilon(1e-14));
}

TEST_CASE("mean_product_min matches the double-sum oracle") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> unif(0.01, 0.99);
    for (int t = 0; t < 300; ++t) {
        const double a = unif(rng);
        const double b = unif(rng);
        const double e = mean_product_min(GeoParam(a), GeoParam(b));
        const double ref = static_cast<double>(oracle_min_product(a, b));
        CHECK(std::abs(e - ref) <= 1e-12 * std::max(1.0, ref));
    }
}

TEST_CASE("min_corr examples") {
    CorrResult r = min_corr(GeoParam(0.25), GeoParam(0.25));
    CHECK(r.rho == doctest::Approx(-1862.0 / 3072.0).epsilon(1e-14));
    CHECK(r.n_breakpoints == 8);
    CHECK(r.path == CorrPath::GeneralEnumeration);
    CHECK(r.covariance == doctest::Approx(442.0 / 256.0 - 9.0));

    r = min_corr(GeoParam(0.5), GeoParam(0.5));
    CHECK(std::abs(r.rho + 0.5) <= 1e-15);
    CHECK(r.path == CorrPath::ClosedFormHalf);

    r = min_corr(GeoParam(0.6), GeoParam(0.7));
    CHECK(r.rho == doctest::Approx(-std::sqrt(0.12)).epsilon(1e-14));
    CHECK(r.e_xy == 0.0);

    CHECK_THROWS_AS(min_corr(GeoParam(1.0), GeoParam(0.5)), DegenerateMarginal);
    CHECK_THROWS_AS(min_corr(GeoParam(0.5), GeoParam(1.0)), DegenerateMarginal);
}

TEST_CASE("half-line law") {
    for (double p : grid(0.5, 1.0, 500)) {
        CHECK(std::abs(min_corr(GeoParam(p), GeoParam(p)).rho - (p - 1.0)) <= 1e-12);
    }
    CHECK(std::abs(min_corr(GeoParam(0.5), GeoParam(0.5)).rho + 0.5) <= 1e-12);
}

TEST_CASE("symmetry in the two parameters") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> unif(0.005, 0.995);
    for (int t = 0; t < 500; ++t) {
        const double a = unif(rng);
        const double b = unif(rng);
        CHECK(std::abs(min_corr(GeoParam(a), GeoParam(b)).rho - min_corr(GeoParam(b), GeoParam(a)).rho) <=
              1e-13);
    }
}

TEST_CASE("closed form equal-p path") {
    CorrResult r = min_corr_equal_closed(GeoParam(0.25));
    CHECK(r.e_xy == doctest::Approx(442.0 / 256.0).epsilon(1e-14));
    CHECK(r.rho == doctest::Approx(-0.606119791666667).epsilon(1e-13));
    CHECK(r.path == CorrPath::ClosedFormEqualP);

    r = min_corr_equal_closed(GeoParam(0.75));
    CHECK(r.e_xy == 0.0);
    CHECK(r.rho == doctest::Approx(-0.25).epsilon(1e-15));
    CHECK(r.path == CorrPath::ClosedFormHalf);

    CHECK(std::abs(min_corr_equal_closed(GeoParam(0.1)).rho - min_corr(GeoParam(0.1), GeoParam(0.1)).rho) <=
          1e-10);
    CHECK_THROWS_AS(min_corr_equal_closed(GeoParam(1.0)), DegenerateMarginal);
}

TEST_CASE("closed form agrees with the engine on a 500-point grid") {
    int cases[4] = {0, 0, 0, 0};
    for (double p : grid(0.01, 0.5, 500)) {
        const GeoParam gp(p);
        CHECK(std::abs(min_corr_equal_closed(gp).rho - min_corr(gp, gp).rho) <= 1e-10);
        ++cases[detail::equal_p_structure(gp).remainder_case];
    }
    // The grid visits all three remainder cases.
    CHECK(cases[1] > 0);
    CHECK(cases[2] > 0);
    CHECK(cases[3] > 0);
}

TEST_CASE("range of the extremal correlations") {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> unif(0.01, 0.99);
    for (int t = 0; t < 200; ++t) {
        const GeoParam a(unif(rng)), b(unif(rng));
        const double lo = min_corr(a, b).rho;
        const double hi = max_corr(a, b).rho;
        CHECK(lo > -1.0);
        CHECK(lo <= 0.0);
        CHECK(hi > 0.0);
        CHECK(hi <= 1.0 + 1e-12);
    }
}

TEST_CASE("max_corr") {
    for (double p : {0.01, 0.1, 0.25, 0.5, 0.9}) {
        CHECK(std::abs(max_corr(GeoParam(p), GeoParam(p)).rho - 1.0) <= 1e-12);
    }
    for (auto [a, b] : {std::pair{0.3, 0.6}, {0.1, 0.2}, {0.05, 0.5}, {0.7, 0.15}}) {
        const double ref = rho_from_product(a, b, oracle_max_product(a, b));
        const double got = max_corr(GeoParam(a), GeoParam(b)).rho;
        CHECK(std::abs(got - ref) <= 1e-12);
        CHECK(got < 1.0);
    }
}

TEST_CASE("continuity of the minimum correlation") {
    const double h = 1e-6;
    for (double p : grid(0.02, 0.98, 400)) {
        const double d = std::abs(min_corr(GeoParam(p + h), GeoParam(p + h)).rho -
                                  min_corr(GeoParam(p), GeoParam(p)).rho);
        CHECK(d <= 5.0 * h);
    }
}

TEST_CASE("breakpoint count equals the floor formulas") {
    std::mt19937_64 rng(29);
    std::uniform_real_distribution<double> unif(0.001, 0.999);
    int tested = 0;
    while (tested < 1000) {
        const double a = unif(rng);
        const double b = unif(rng);
        if (a + b >= 1.0) continue;
        ++tested;
        const auto d2 = static_cast<std::int64_t>(std::floor(std::log(static_cast<long double>(b)) /
                                                             std::log1p(-static_cast<long double>(a))));
        const auto d1 = static_cast<std::int64_t>(std::floor(std::log(static_cast<long double>(a)) /
                                                             std::log1p(-static_cast<long double>(b))));
        const CorrResult r = min_corr(GeoParam(a), GeoParam(b));
        CHECK(r.n_breakpoints == d1 + d2);
        const BreakpointCounts c = breakpoint_counts(GeoParam(a), GeoParam(b));
        CHECK(c.d1 == d1);
        CHECK(c.d2 == d2);
    }
}

TEST_CASE("at most two betas between alpha_k and 1/2") {
    for (double p : grid(0.0005, 0.5, 1000)) {
        const auto st = detail::equal_p_structure(GeoParam(p));
        CHECK(st.betas_in_alpha_k_half >= 0);
        CHECK(st.betas_in_alpha_k_half <= 2);
    }
    CHECK_THROWS_AS(detail::equal_p_structure(GeoParam(0.5)), DomainError);
}

TEST_CASE("beta_index_below brackets alpha_i") {
    for (double p : {0.01, 0.07, 0.2, 0.33}) {
        const GeoParam gp(p);
        const std::int64_t k = detail::equal_p_structure(gp).k;
        for (std::int64_t i = 1; i <= k; ++i) {
            const std::int64_t c = detail::beta_index_below(gp, i);
            const double alpha = gp.one_minus_q_pow(static_cast<double>(i));
            CHECK(gp.q_pow(static_cast<double>(c + 1)) < alpha);
            CHECK(alpha <= gp.q_pow(static_cast<double>(c)));
        }
    }
}
