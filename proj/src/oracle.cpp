#include "geoextremal/oracle.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "geoextremal/errors.hpp"
#include "geoextremal/parallel.hpp"
#include "sum.hpp"

namespace geoextremal {

std::string_view to_string(Coupling c) noexcept {
    switch (c) {
        case Coupling::Countermonotone: return "countermonotone";
        case Coupling::Comonotone: return "comonotone";
        case Coupling::Independent: return "independent";
    }
    return "unknown";
}

std::optional<Coupling> parse_coupling(std::string_view name) noexcept {
    if (name == "countermonotone") return Coupling::Countermonotone;
    if (name == "comonotone") return Coupling::Comonotone;
    if (name == "independent") return Coupling::Independent;
    return std::nullopt;
}

std::pair<std::int64_t, std::int64_t> sample_pair(const GeoParam& p1, const GeoParam& p2, double u,
                                                  Coupling coupling, std::optional<double> v) {
    if (!(u > 0.0 && u < 1.0)) throw DomainError("sample_pair: u must lie in (0, 1)");
    const std::int64_t x1 = quantile(p1, u);
    switch (coupling) {
        case Coupling::Countermonotone: return {x1, quantile(p2, 1.0 - u)};
        case Coupling::Comonotone: return {x1, quantile(p2, u)};
        case Coupling::Independent:
            if (!v || !(*v > 0.0 && *v < 1.0)) {
                throw DomainError("sample_pair: independent coupling needs a second uniform in (0, 1)");
            }
            return {x1, quantile(p2, *v)};
    }
    return {x1, 0};
}

namespace detail {

namespace {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
    std::uint64_t z = x + 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace

std::uint64_t shard_seed(std::uint64_t seed, std::uint64_t shard) noexcept {
    return splitmix64(seed ^ splitmix64(shard));
}

double open_uniform(std::uint64_t bits) noexcept {
    return (static_cast<double>(bits >> 12) + 0.5) * 0x1.0p-52;
}

}  // namespace detail

namespace {

__extension__ typedef __int128 Int128;

// Exact integer power sums; merging shards is associative.
struct PowerSums {
    Int128 n = 0;
    Int128 x = 0, y = 0;
    Int128 xx = 0, yy = 0, xy = 0;
    Int128 x3 = 0, y3 = 0, x2y = 0, xy2 = 0;
    Int128 x4 = 0, y4 = 0, x3y = 0, xy3 = 0, x2y2 = 0;

    void add(std::int64_t a, std::int64_t b) noexcept {
        const Int128 X = a;
        const Int128 Y = b;
        const Int128 XX = X * X;
        const Int128 YY = Y * Y;
        n += 1;
        x += X;
        y += Y;
        xx += XX;
        yy += YY;
        xy += X * Y;
        x3 += XX * X;
        y3 += YY * Y;
        x2y += XX * Y;
        xy2 += X * YY;
        x4 += XX * XX;
        y4 += YY * YY;
        x3y += XX * X * Y;
        xy3 += X * YY * Y;
        x2y2 += XX * YY;
    }

    void merge(const PowerSums& o) noexcept {
        n += o.n;
        x += o.x;
        y += o.y;
        xx += o.xx;
        yy += o.yy;
        xy += o.xy;
        x3 += o.x3;
        y3 += o.y3;
        x2y += o.x2y;
        xy2 += o.xy2;
        x4 += o.x4;
        y4 += o.y4;
        x3y += o.x3y;
        xy3 += o.xy3;
        x2y2 += o.x2y2;
    }
};

McEstimate finalize(const PowerSums& s, std::uint64_t seed) {
    using L = long double;
    McEstimate est;
    est.n = static_cast<std::int64_t>(s.n);
    est.seed = seed;

    const Int128 cxx = s.n * s.xx - s.x * s.x;
    const Int128 cyy = s.n * s.yy - s.y * s.y;
    const Int128 cxy = s.n * s.xy - s.x * s.y;
    if (cxx == 0 || cyy == 0) {
        est.degenerate = true;
        return est;
    }
    const L r = static_cast<L>(cxy) / std::sqrt(static_cast<L>(cxx) * static_cast<L>(cyy));
    est.mean = static_cast<double>(r);

    // Central moments from raw moments, for the delta-method variance.
    const L n = static_cast<L>(s.n);
    const L a = static_cast<L>(s.x) / n;
    const L b = static_cast<L>(s.y) / n;
    auto E = [&](Int128 v) { return static_cast<L>(v) / n; };
    const L m20 = static_cast<L>(cxx) / (n * n);
    const L m02 = static_cast<L>(cyy) / (n * n);
    const L m40 = E(s.x4) - 4 * a * E(s.x3) + 6 * a * a * E(s.xx) - 3 * a * a * a * a;
    const L m04 = E(s.y4) - 4 * b * E(s.y3) + 6 * b * b * E(s.yy) - 3 * b * b * b * b;
    const L m22 = E(s.x2y2) - 2 * b * E(s.x2y) - 2 * a * E(s.xy2) + b * b * E(s.xx) + a * a * E(s.yy) +
                  4 * a * b * E(s.xy) - 3 * a * a * b * b;
    const L m31 = E(s.x3y) - b * E(s.x3) - 3 * a * E(s.x2y) + 3 * a * b * E(s.xx) + 3 * a * a * E(s.xy) -
                  3 * a * a * a * b;
    const L m13 = E(s.xy3) - a * E(s.y3) - 3 * b * E(s.xy2) + 3 * a * b * E(s.yy) + 3 * b * b * E(s.xy) -
                  3 * b * b * b * a;

    const L var = (r * r / 4 * (m40 / (m20 * m20) + m04 / (m02 * m02) + 2 * m22 / (m20 * m02)) +
                   m22 / (m20 * m02) -
                   r * (m31 / (m20 * std::sqrt(m20 * m02)) + m13 / (m02 * std::sqrt(m20 * m02)))) /
                  n;
    est.std_error = static_cast<double>(std::sqrt(std::max<L>(var, 0)));
    return est;
}

void check_mc_args(const GeoParam& p1, const GeoParam& p2, std::int64_t n) {
    require_nondegenerate(p1, "p1");
    require_nondegenerate(p2, "p2");
    if (n < 1000) throw DomainError("mc_corr: n must be at least 1000, got " + std::to_string(n));
}

PowerSums shard_sums(const GeoParam& p1, const GeoParam& p2, std::int64_t n, std::uint64_t seed,
                     std::int64_t shard, Coupling coupling) {
    PowerSums sums;
    detail::for_each_in_shard(p1, p2, seed, shard, detail::shard_length(n, shard), coupling,
                              [&](std::int64_t a, std::int64_t b) { sums.add(a, b); });
    return sums;
}

}  // namespace

McEstimate mc_corr_serial(const GeoParam& p1, const GeoParam& p2, std::int64_t n, std::uint64_t seed,
                          Coupling coupling) {
    check_mc_args(p1, p2, n);
    PowerSums total;
    for (std::int64_t s = 0; s < detail::shard_count(n); ++s) {
        total.merge(shard_sums(p1, p2, n, seed, s, coupling));
    }
    return finalize(total, seed);
}

McEstimate mc_corr(const GeoParam& p1, const GeoParam& p2, std::int64_t n, std::uint64_t seed,
                   Coupling coupling) {
    check_mc_args(p1, p2, n);
    const std::int64_t shards = detail::shard_count(n);
    std::vector<PowerSums> partial(static_cast<std::size_t>(shards));
#pragma omp parallel for schedule(dynamic) num_threads(configured_threads())
    for (std::int64_t s = 0; s < shards; ++s) {
        partial[static_cast<std::size_t>(s)] = shard_sums(p1, p2, n, seed, s, coupling);
    }
    PowerSums total;
    for (const PowerSums& ps : partial) total.merge(ps);
    return finalize(total, seed);
}

namespace {

constexpr double kUnbounded = 1e300;

// Step functions of the countermonotone coupling, by the floor-of-log formula.
// chi1 is nondecreasing and chi2 nonincreasing in u.
struct StepPair {
    double log_q1;
    double log_q2;

    double chi1(double u) const {
        if (u <= 0.0) return 0.0;
        if (u >= 1.0) return kUnbounded;
        return std::floor(std::log1p(-u) / log_q1);
    }
    double chi2(double u) const {
        if (u <= 0.0) return kUnbounded;
        if (u >= 1.0) return 0.0;
        return std::floor(std::log(u) / log_q2);
    }
};

// Integral of chi1 chi2 over [a, b] given the step values at the endpoints.
// Monotonicity makes equal endpoint values mean constant on the whole cell.
double integrate_cell(const StepPair& f, double a, double b, double a1, double b1, double a2, double b2,
                      double min_width) {
    if (b1 == 0.0 || a2 == 0.0) return 0.0;
    if (a1 == b1 && a2 == b2) return (b - a) * a1 * a2;
    const double m = 0.5 * (a + b);
    if (b - a <= min_width || m <= a || m >= b) {
        return (b - a) * f.chi1(m) * f.chi2(m);
    }
    const double m1 = f.chi1(m);
    const double m2 = f.chi2(m);
    return integrate_cell(f, a, m, a1, m1, a2, m2, min_width) +
           integrate_cell(f, m, b, m1, b1, m2, b2, min_width);
}

constexpr int kTopCells = 1024;

template <bool Parallel>
double quad_pass(const StepPair& f, double min_width) {
    std::vector<double> cell(kTopCells);
    auto run = [&](int k) {
        const double a = static_cast<double>(k) / kTopCells;
        const double b = static_cast<double>(k + 1) / kTopCells;
        cell[static_cast<std::size_t>(k)] =
            integrate_cell(f, a, b, f.chi1(a), f.chi1(b), f.chi2(a), f.chi2(b), min_width);
    };
    if constexpr (Parallel) {
#pragma omp parallel for schedule(dynamic) num_threads(configured_threads())
        for (int k = 0; k < kTopCells; ++k) run(k);
    } else {
        for (int k = 0; k < kTopCells; ++k) run(k);
    }
    detail::CompensatedSum sum;
    for (double c : cell) sum.add(c);
    return sum.value();
}

template <bool Parallel>
double quad_impl(const GeoParam& p1, const GeoParam& p2, const QuadOptions& options) {
    require_nondegenerate(p1, "p1");
    require_nondegenerate(p2, "p2");
    const StepPair f{p1.log_q(), p2.log_q()};
    int level = options.start_level;
    double previous = quad_pass<Parallel>(f, std::ldexp(1.0, -level));
    while (level < options.max_level) {
        ++level;
        const double current = quad_pass<Parallel>(f, std::ldexp(1.0, -level));
        if (std::abs(current - previous) <= options.tolerance * std::max(1.0, std::abs(current))) {
            return current;
        }
        previous = current;
    }
    return previous;
}

}  // namespace

double quad_mean_product(const GeoParam& p1, const GeoParam& p2, const QuadOptions& options) {
    return quad_impl<true>(p1, p2, options);
}

double quad_mean_product_serial(const GeoParam& p1, const GeoParam& p2, const QuadOptions& options) {
    return quad_impl<false>(p1, p2, options);
}

}  // namespace geoextremal
