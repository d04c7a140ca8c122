#include "geoextremal/exact.hpp"

#include <cmath>
#include <regex>
#include <vector>

#include "geoextremal/errors.hpp"

namespace geoextremal {

RationalProb::RationalProb(const mpz_class& numerator, const mpz_class& denominator) {
    if (denominator <= 0 || numerator <= 0 || numerator > denominator) {
        throw DomainError("rational probability must lie in (0, 1]");
    }
    value_ = mpq_class(numerator, denominator);
    value_.canonicalize();
}

RationalProb RationalProb::parse(std::string_view text) {
    static const std::regex fraction(R"(\s*(\d+)\s*/\s*(\d+)\s*)");
    static const std::regex decimal(R"(\s*(\d*)(?:\.(\d*))?(?:[eE]([+-]?\d+))?\s*)");
    const std::string s(text);
    std::smatch m;
    if (std::regex_match(s, m, fraction)) {
        const mpz_class den(m[2].str(), 10);
        if (den == 0) throw DomainError("zero denominator in '" + s + "'");
        return RationalProb(mpz_class(m[1].str(), 10), den);
    }
    if (std::regex_match(s, m, decimal) && (m[1].length() > 0 || m[2].length() > 0)) {
        const std::string whole = m[1].str();
        const std::string frac = m[2].str();
        long exponent = m[3].matched ? std::stol(m[3].str()) : 0;
        if (exponent > 4096 || exponent < -4096) throw DomainError("exponent out of range in '" + s + "'");
        exponent -= static_cast<long>(frac.size());
        mpz_class num((whole + frac).empty() ? std::string("0") : whole + frac, 10);
        mpz_class den = 1;
        mpz_class ten = 10;
        mpz_class scale;
        mpz_pow_ui(scale.get_mpz_t(), ten.get_mpz_t(), static_cast<unsigned long>(exponent < 0 ? -exponent : exponent));
        if (exponent < 0) {
            den = scale;
        } else {
            num *= scale;
        }
        return RationalProb(num, den);
    }
    throw DomainError("cannot parse '" + s + "' as a probability");
}

namespace {

void check_budget(const mpz_class& x, const ExactOptions& options) {
    if (mpz_sizeinbase(x.get_mpz_t(), 2) > options.bit_budget) {
        throw BudgetExceeded("exact breakpoint grid needs more than " +
                             std::to_string(options.bit_budget) + " denominator bits");
    }
}

// #{i >= 1 : (qn/qd)^i >= t}, with qn/qd the reduced complement of the base parameter.
std::int64_t count_powers_at_least(const mpz_class& qn, const mpz_class& qd, const mpq_class& t,
                                   const ExactOptions& options) {
    // (qn/qd)^i >= tn/td  <=>  qn^i * td >= tn * qd^i
    const mpz_class tn = t.get_num();
    const mpz_class td = t.get_den();
    mpz_class num = qn;
    mpz_class den = qd;
    std::int64_t count = 0;
    while (num * td >= tn * den) {
        ++count;
        num *= qn;
        den *= qd;
        check_budget(den, options);
    }
    return count;
}

mpz_class pow_z(const mpz_class& base, std::int64_t e) {
    mpz_class r;
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), static_cast<unsigned long>(e));
    return r;
}

}  // namespace

ExactMeanProduct mean_product_min_exact(const RationalProb& p1, const RationalProb& p2,
                                        const ExactOptions& options) {
    ExactMeanProduct out;
    out.value = 0;
    out.grid_denominator = 1;
    if (p1.value() == 1 || p2.value() == 1) {
        throw DegenerateMarginal("exact mode: p = 1 gives a constant marginal");
    }
    if (p1.value() + p2.value() >= 1) return out;

    const mpz_class den1 = p1.denominator();
    const mpz_class den2 = p2.denominator();
    const mpz_class qn1 = den1 - p1.numerator();
    const mpz_class qn2 = den2 - p2.numerator();

    const std::int64_t d2 = count_powers_at_least(qn1, den1, p2.value(), options);  // alphas
    const std::int64_t d1 = count_powers_at_least(qn2, den2, p1.value(), options);  // betas

    mpz_class grid_den;
    mpz_class a_den = pow_z(den1, d2);
    mpz_class b_den = pow_z(den2, d1);
    mpz_lcm(grid_den.get_mpz_t(), a_den.get_mpz_t(), b_den.get_mpz_t());
    check_budget(grid_den, options);

    // Breakpoints as integers over grid_den: alpha_i * D and beta_j * D.
    std::vector<mpz_class> alpha(static_cast<std::size_t>(d2));
    {
        mpz_class num = 1;
        mpz_class scale = grid_den;
        for (std::int64_t i = 1; i <= d2; ++i) {
            num *= qn1;
            mpz_divexact(scale.get_mpz_t(), scale.get_mpz_t(), den1.get_mpz_t());
            alpha[static_cast<std::size_t>(i - 1)] = grid_den - num * scale;
        }
    }
    std::vector<mpz_class> beta(static_cast<std::size_t>(d1));
    {
        mpz_class num = 1;
        mpz_class scale = grid_den;
        for (std::int64_t j = 1; j <= d1; ++j) {
            num *= qn2;
            mpz_divexact(scale.get_mpz_t(), scale.get_mpz_t(), den2.get_mpz_t());
            beta[static_cast<std::size_t>(j - 1)] = num * scale;
        }
    }

    // Same merge as the floating-point engine, on exact integers.
    mpz_class total = 0;
    std::int64_t next_alpha = 1;
    std::int64_t next_beta = d1;
    std::int64_t f1 = 0;
    std::int64_t f2 = 0;
    bool first = true;
    mpz_class prev;
    while (next_alpha <= d2 || next_beta >= 1) {
        const bool take_alpha =
            next_beta < 1 ||
            (next_alpha <= d2 &&
             alpha[static_cast<std::size_t>(next_alpha - 1)] <= beta[static_cast<std::size_t>(next_beta - 1)]);
        const mpz_class& s = take_alpha ? alpha[static_cast<std::size_t>(next_alpha - 1)]
                                        : beta[static_cast<std::size_t>(next_beta - 1)];
        if (!first && f1 != 0 && f2 != 0) {
            total += (s - prev) * f1 * f2;
        }
        first = false;
        prev = s;
        if (take_alpha) {
            ++next_alpha;
        } else {
            --next_beta;
        }
        f1 = next_alpha - 1;
        f2 = next_beta;
    }

    out.value = mpq_class(total, grid_den);
    out.value.canonicalize();
    out.grid_denominator = grid_den;
    out.n_breakpoints = d1 + d2;
    return out;
}

std::optional<mpq_class> exact_sqrt(const mpq_class& x) {
    if (x < 0) return std::nullopt;
    mpq_class r(x);
    r.canonicalize();
    const mpz_class num = r.get_num();
    const mpz_class den = r.get_den();
    if (!mpz_perfect_square_p(num.get_mpz_t()) || !mpz_perfect_square_p(den.get_mpz_t())) {
        return std::nullopt;
    }
    mpz_class sn;
    mpz_class sd;
    mpz_sqrt(sn.get_mpz_t(), num.get_mpz_t());
    mpz_sqrt(sd.get_mpz_t(), den.get_mpz_t());
    mpq_class out(sn, sd);
    out.canonicalize();
    return out;
}

ExactCorr min_corr_exact(const RationalProb& p1, const RationalProb& p2, const ExactOptions& options) {
    ExactCorr out;
    out.e_xy = mean_product_min_exact(p1, p2, options);
    const mpq_class one(1);
    const mpq_class q1 = one - p1.value();
    const mpq_class q2 = one - p2.value();
    const mpq_class mu1 = q1 / p1.value();
    const mpq_class mu2 = q2 / p2.value();
    out.covariance = out.e_xy.value - mu1 * mu2;
    // sigma1 sigma2 = sqrt(q1 q2) / (p1 p2)
    if (auto root = exact_sqrt(q1 * q2)) {
        out.rho = out.covariance * p1.value() * p2.value() / *root;
    }
    const mpq_class numer = out.e_xy.value * p1.value() * p2.value() - q1 * q2;
    const mpq_class q12 = q1 * q2;
    out.rho_double = numer.get_d() / std::sqrt(q12.get_d());
    return out;
}

std::string format_over(const mpq_class& value, const mpz_class& denominator) {
    const mpq_class scaled = value * denominator;
    if (scaled.get_den() == 1) {
        return scaled.get_num().get_str() + "/" + denominator.get_str();
    }
    return value.get_str();
}

std::string format_ratio(const mpq_class& num, const mpq_class& den) {
    if (num.get_den() == 1 && den.get_den() == 1 && den != 0) {
        mpz_class n = num.get_num();
        mpz_class d = den.get_num();
        if (d < 0) {
            n = -n;
            d = -d;
        }
        return n.get_str() + "/" + d.get_str();
    }
    mpq_class r = num / den;
    r.canonicalize();
    return r.get_str();
}

}  // namespace geoextremal
