#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hyshift {

// Malformed spec text. `position` is the 0-based offset of the offending token.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& message, std::size_t position)
        : std::runtime_error(message + " at position " + std::to_string(position)),
          position_(position) {}

    std::size_t position() const { return position_; }

private:
    std::size_t position_;
};

// Index ranges, zero weights, invalid certificates and similar violations of
// an operation's preconditions are reported with std::domain_error.

}  // namespace hyshift
