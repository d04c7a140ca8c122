#pragma once

// Independent checks of the breakpoint engine: Monte Carlo at the extremal
// couplings and a step-function quadrature of the product integral that
// never builds the breakpoint grid.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <random>
#include <string_view>
#include <utility>

#include "geoextremal/geom.hpp"

namespace geoextremal {

enum class Coupling { Countermonotone, Comonotone, Independent };

std::string_view to_string(Coupling c) noexcept;
std::optional<Coupling> parse_coupling(std::string_view name) noexcept;

struct McEstimate {
    double mean = 0.0;       // sample Pearson correlation
    double std_error = 0.0;  // delta-method standard error from the same sample
    std::int64_t n = 0;
    std::uint64_t seed = 0;
    bool degenerate = false;  // a marginal sample had zero variance

    friend bool operator==(const McEstimate&, const McEstimate&) = default;
};

// Inverse-transform pair from one uniform. `v` is the second uniform used
// only by the Independent coupling.
std::pair<std::int64_t, std::int64_t> sample_pair(const GeoParam& p1, const GeoParam& p2, double u,
                                                  Coupling coupling,
                                                  std::optional<double> v = std::nullopt);

// Pairs are drawn in fixed shards of kShardSize, each with its own generator
// derived from (seed, shard index), so the estimate does not depend on the
// thread count.
inline constexpr std::int64_t kShardSize = 65536;

McEstimate mc_corr(const GeoParam& p1, const GeoParam& p2, std::int64_t n, std::uint64_t seed,
                   Coupling coupling);
McEstimate mc_corr_serial(const GeoParam& p1, const GeoParam& p2, std::int64_t n, std::uint64_t seed,
                          Coupling coupling);

// Calls emit(x1, x2) for the same pairs mc_corr would draw, in order.
template <typename Emit>
void for_each_sample(const GeoParam& p1, const GeoParam& p2, std::int64_t n, std::uint64_t seed,
                     Coupling coupling, Emit&& emit);

struct QuadOptions {
    double tolerance = 1e-10;  // relative difference between successive refinements
    int start_level = 36;      // first resolution 2^-start_level
    int max_level = 52;
};

// Integral of chi1(u) chi2(u) over [0, 1] with chi1(u) = floor(log_{1-p1}(1-u)),
// chi2(u) = floor(log_{1-p2}(u)).
double quad_mean_product(const GeoParam& p1, const GeoParam& p2, const QuadOptions& options = {});
double quad_mean_product_serial(const GeoParam& p1, const GeoParam& p2, const QuadOptions& options = {});

namespace detail {

std::uint64_t shard_seed(std::uint64_t seed, std::uint64_t shard) noexcept;
// Uniform on the open interval (0, 1) from the top 52 bits; the largest
// value is 1 - 2^-53, so 1 - u never rounds to 0.
double open_uniform(std::uint64_t bits) noexcept;

}  // namespace detail

namespace detail {

template <typename Emit>
void for_each_in_shard(const GeoParam& p1, const GeoParam& p2, std::uint64_t seed, std::int64_t shard,
                       std::int64_t count, Coupling coupling, Emit&& emit) {
    std::mt19937_64 rng(shard_seed(seed, static_cast<std::uint64_t>(shard)));
    for (std::int64_t k = 0; k < count; ++k) {
        const double u = open_uniform(rng());
        std::optional<double> v;
        if (coupling == Coupling::Independent) v = open_uniform(rng());
        const auto [x1, x2] = sample_pair(p1, p2, u, coupling, v);
        emit(x1, x2);
    }
}

inline std::int64_t shard_count(std::int64_t n) noexcept { return (n + kShardSize - 1) / kShardSize; }

inline std::int64_t shard_length(std::int64_t n, std::int64_t shard) noexcept {
    return std::min(kShardSize, n - shard * kShardSize);
}

}  // namespace detail

template <typename Emit>
void for_each_sample(const GeoParam& p1, const GeoParam& p2, std::int64_t n, std::uint64_t seed,
                     Coupling coupling, Emit&& emit) {
    for (std::int64_t s = 0; s < detail::shard_count(n); ++s) {
        detail::for_each_in_shard(p1, p2, seed, s, detail::shard_length(n, s), coupling, emit);
    }
}

}  // namespace geoextremal
