#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace rdc {

// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Shape/size preconditions (channel counts, spatial dims, vector widths).
class DimensionError : public Error {
public:
    explicit DimensionError(const std::string& msg) : Error(msg) {}
};

// Invalid argument values (non-finite inputs, bad parameters).
class ValueError : public Error {
public:
    explicit ValueError(const std::string& msg) : Error(msg) {}
};

// File I/O failure; message carries the path and the OS error.
class IoError : public Error {
public:
    explicit IoError(const std::string& msg) : Error(msg) {}
};

// Binary format errors. The three variants are distinct so callers can
// tell a malformed header from a short file from a version we don't speak.
class FormatError : public Error {
public:
    FormatError(const std::string& msg, std::uint64_t offset = 0)
        : Error(msg), byte_offset(offset) {}
    std::uint64_t byte_offset;
};

class CorruptHeaderError : public FormatError {
public:
    using FormatError::FormatError;
};

class SizeMismatchError : public FormatError {
public:
    using FormatError::FormatError;
};

class UnsupportedVersionError : public FormatError {
public:
    using FormatError::FormatError;
};

}  // namespace rdc
