#pragma once

// Exact evaluation of the countermonotone breakpoint sum for rational
// parameters. Every breakpoint is a rational power of a rational, so the
// whole sum lives over one common denominator.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include <gmpxx.h>

#include "geoextremal/geom.hpp"

namespace geoextremal {

// Reduced fraction in (0, 1].
class RationalProb {
public:
    RationalProb(const mpz_class& numerator, const mpz_class& denominator);

    // Accepts "a/b" and finite decimals such as "0.25".
    static RationalProb parse(std::string_view text);

    const mpq_class& value() const noexcept { return value_; }
    mpz_class numerator() const { return value_.get_num(); }
    mpz_class denominator() const { return value_.get_den(); }
    double to_double() const { return value_.get_d(); }
    GeoParam to_param() const { return GeoParam(to_double()); }
    std::string str() const { return value_.get_str(); }

private:
    mpq_class value_;
};

struct ExactOptions {
    std::size_t bit_budget = 4096;  // max bits of the common grid denominator
};

struct ExactMeanProduct {
    mpq_class value;              // reduced
    mpz_class grid_denominator;   // every breakpoint is an integer multiple of 1/grid_denominator
    std::int64_t n_breakpoints = 0;
};

ExactMeanProduct mean_product_min_exact(const RationalProb& p1, const RationalProb& p2,
                                        const ExactOptions& options = {});

struct ExactCorr {
    ExactMeanProduct e_xy;
    mpq_class covariance;
    // sqrt(V1 V2) is rational only when (1-p1)(1-p2) is a rational square.
    std::optional<mpq_class> rho;
    double rho_double = 0.0;
};

ExactCorr min_corr_exact(const RationalProb& p1, const RationalProb& p2,
                         const ExactOptions& options = {});

// Square root of a nonnegative rational when it is itself rational.
std::optional<mpq_class> exact_sqrt(const mpq_class& x);

// value written over `denominator` ("442/256") when that is an integral
// numerator, otherwise the reduced fraction.
std::string format_over(const mpq_class& value, const mpz_class& denominator);

// ratio num/den printed unreduced when both are integers ("-1862/3072").
std::string format_ratio(const mpq_class& num, const mpq_class& den);

}  // namespace geoextremal
