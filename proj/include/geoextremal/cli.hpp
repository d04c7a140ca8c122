#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "geoextremal/exact.hpp"

namespace geoextremal::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kDisagreement = 1;
inline constexpr int kUsage = 2;
inline constexpr int kOutputError = 3;

// A probability read from the command line: "0.25" or "1/4".
struct ProbArg {
    std::string text;
    double value = 0.0;
    std::optional<RationalProb> fraction;  // set only for "a/b" literals
};

// Throws DomainError naming `name` when the text is not a probability in (0, 1].
ProbArg parse_probability(std::string_view name, std::string_view text);

// Positive integer: "1000000", "10^6" or "1e6".
std::int64_t parse_count(std::string_view name, std::string_view text);

// Runs one subcommand. Data goes to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace geoextremal::cli
