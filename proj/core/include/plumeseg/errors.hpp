#ifndef PLUMESEG_ERRORS_HPP
#define PLUMESEG_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace plumeseg {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Malformed on-disk data. Carries the byte offset of the first bad byte.
class ParseError : public Error {
public:
    ParseError(const std::string& msg, std::size_t byte_offset)
        : Error(msg + " (at byte offset " + std::to_string(byte_offset) + ")"),
          offset_(byte_offset) {}

    std::size_t byte_offset() const { return offset_; }

private:
    std::size_t offset_;
};

/// Input outside an operation's mathematical domain (zero vectors,
/// non-positive temperatures, rank-deficient bases, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Filesystem failures while reading or writing artifacts.
class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace plumeseg

#endif
