#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace jetsym {

/// Domain error raised by every library operation that rejects its input.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Parse failure in the expression language; `offset` is a byte offset into the input.
class ParseError : public Error {
public:
    ParseError(std::size_t offset, const std::string& what)
        : Error("parse error at offset " + std::to_string(offset) + ": " + what), offset_(offset) {}

    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

} // namespace jetsym
