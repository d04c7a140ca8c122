#include "doctest.h"

#include <cmath>
#include <string>

#include "geoextremal/errors.hpp"
#include "geoextremal/exact.hpp"
#include "geoextremal/extremal.hpp"

using namespace geoextremal;

namespace {

RationalProb R(const char* s) { return RationalProb::parse(s); }

}  // namespace

TEST_CASE("RationalProb parsing") {
    CHECK(R("1/4").value() == mpq_class(1, 4));
    CHECK(R("2/8").value() == mpq_class(1, 4));
    CHECK(R("0.25").value() == mpq_class(1, 4));
    CHECK(R("2.5e-1").value() == mpq_class(1, 4));
    CHECK(R("1").value() == mpq_class(1));
    CHECK(R("010/100").value() == mpq_class(1, 10));
    CHECK(R("0.0625").value() == mpq_class(1, 16));
    CHECK_THROWS_AS(R("0"), DomainError);
    CHECK_THROWS_AS(R("5/4"), DomainError);
    CHECK_THROWS_AS(R("1/0"), DomainError);
    CHECK_THROWS_AS(R("abc"), DomainError);
    CHECK_THROWS_AS(R("-1/4"), DomainError);
}

TEST_CASE("exact mean product of the p = 1/4 example") {
    const ExactMeanProduct e = mean_product_min_exact(R("1/4"), R("1/4"));
    CHECK(e.value == mpq_class(221, 128));
    CHECK(e.value * 256 == 442);
    CHECK(e.grid_denominator == 256);
    CHECK(e.n_breakpoints == 8);
    CHECK(format_over(e.value, e.grid_denominator) == "442/256");

    const ExactCorr c = min_corr_exact(R("1/4"), R("1/4"));
    REQUIRE(c.rho.has_value());
    CHECK(*c.rho * 3072 == -1862);
    CHECK(format_ratio(mpq_class(-1862), mpq_class(3072)) == "-1862/3072");
    CHECK(format_ratio(mpq_class(5), mpq_class(-10)) == "-5/10");
}

TEST_CASE("frozen exact values") {
    // Regression constants from an independent fraction-arithmetic evaluation
    // of sum_{i,j} max(0, beta_j - alpha_i).
    CHECK(mean_product_min_exact(R("1/2"), R("1/3")).value == mpq_class(1, 6));
    CHECK(mean_product_min_exact(R("3/10"), R("2/5")).value == mpq_class(9, 20));
    CHECK(mean_product_min_exact(R("1/3"), R("1/4")).value == mpq_class(1697, 1728));
    CHECK(mean_product_min_exact(R("3/5"), R("7/10")).value == 0);
    const mpq_class e = mean_product_min_exact(R("1/10"), R("1/5")).value;
    CHECK(std::abs(e.get_d() - 9.337938880548159) <= 1e-15 * 9.34);
}

TEST_CASE("float engine agrees with the exact path") {
    for (int a = 1; a <= 12; ++a) {
        for (int b = 1; b <= 12; ++b) {
            const std::string s1 = "1/" + std::to_string(a + 1);
            const std::string s2 = std::to_string(b) + "/" + std::to_string(b + 7);
            const RationalProb r1 = R(s1.c_str());
            const RationalProb r2 = R(s2.c_str());
            const double exact = mean_product_min_exact(r1, r2).value.get_d();
            const double flt = mean_product_min(r1.to_param(), r2.to_param());
            CHECK(std::abs(flt - exact) <= 1e-12 * std::max(1.0, exact));
            const ExactCorr c = min_corr_exact(r1, r2);
            CHECK(std::abs(c.rho_double - min_corr(r1.to_param(), r2.to_param()).rho) <= 1e-12);
        }
    }
}

TEST_CASE("rho is rational only for square products") {
    CHECK(min_corr_exact(R("1/4"), R("1/4")).rho.has_value());
    CHECK_FALSE(min_corr_exact(R("1/3"), R("1/4")).rho.has_value());
    CHECK(exact_sqrt(mpq_class(9, 16)) == mpq_class(3, 4));
    CHECK_FALSE(exact_sqrt(mpq_class(2)).has_value());
    CHECK_FALSE(exact_sqrt(mpq_class(-1)).has_value());
}

TEST_CASE("bit budget") {
    CHECK_THROWS_AS(mean_product_min_exact(R("1/997"), R("1/991")), BudgetExceeded);
    ExactOptions tight;
    tight.bit_budget = 16;
    CHECK_THROWS_AS(mean_product_min_exact(R("1/4"), R("1/5"), tight), BudgetExceeded);
    CHECK_THROWS_AS(mean_product_min_exact(R("1"), R("1/5")), DegenerateMarginal);
}
