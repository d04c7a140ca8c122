#pragma once

#include <stdexcept>
#include <string>

namespace geoextremal {

// Argument outside the documented domain of an operation.
class DomainError : public std::invalid_argument {
public:
    explicit DomainError(const std::string& what) : std::invalid_argument(what) {}
};

// A marginal with p = 1 is the constant 0; its correlation with anything is undefined.
class DegenerateMarginal : public DomainError {
public:
    explicit DegenerateMarginal(const std::string& what) : DomainError(what) {}
};

// Exact-rational evaluation would need denominators larger than the configured bit budget.
class BudgetExceeded : public std::runtime_error {
public:
    explicit BudgetExceeded(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace geoextremal
