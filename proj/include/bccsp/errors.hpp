#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace bccsp {

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t position)
        : std::runtime_error(what + " at position " + std::to_string(position)),
          position_(position) {}
    std::size_t position() const { return position_; }

private:
    std::size_t position_;
};

class OpenTermError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class AlphabetError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Raised when a computed result contradicts a property that must hold by
// construction; it always indicates a bug, never bad input.
class InternalError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

}  // namespace bccsp
