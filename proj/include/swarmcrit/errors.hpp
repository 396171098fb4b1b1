#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace swarmcrit {

/// Raised when an iteration produces a non-finite or zero norm that the
/// caller asked to be treated as fatal (NUMERIC_OVERFLOW).
class NumericError : public std::runtime_error {
public:
    NumericError(const std::string& what, std::size_t step)
        : std::runtime_error(what + " at step " + std::to_string(step)), step_(step) {}

    [[nodiscard]] std::size_t step() const noexcept { return step_; }

private:
    std::size_t step_;
};

}  // namespace swarmcrit
