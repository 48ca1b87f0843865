#pragma once

#include <stdexcept>
#include <string>

namespace hrl {

/// Input outside the mathematical domain of an operation (bad parameters,
/// malformed potentials, violated theorem hypotheses).
class DomainError : public std::invalid_argument {
public:
    explicit DomainError(const std::string& what) : std::invalid_argument(what) {}
};

/// A numerical procedure could not deliver a trustworthy answer
/// (persistent singular pivots, iteration caps, non-finite intermediates).
class NumericalFailure : public std::runtime_error {
public:
    explicit NumericalFailure(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace hrl
