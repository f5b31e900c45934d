/**
 * @file error.hpp
 * @brief Exception types raised by the cfsep library.
 */
#pragma once

#include <stdexcept>
#include <string>

namespace cfsep {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Zero-sized or malformed raster.
class InvalidImage : public Error {
public:
    using Error::Error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
public:
    using Error::Error;
};

class InputTooSmall : public Error {
public:
    using Error::Error;
};

/// Vector or matrix dimensions do not agree.
class ShapeError : public Error {
public:
    using Error::Error;
};

/// Training data contains a single class only.
class DegenerateTrainingSet : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    ParseError(const std::string& what, int line)
        : Error(line > 0 ? what + " (line " + std::to_string(line) + ")" : what), line_(line) {}

    int line() const { return line_; }

private:
    int line_;
};

class MissingAsset : public Error {
public:
    using Error::Error;
};

/// Ground truth and predictions cannot be matched by image id.
/// Neither direction produced a separator line.
class NoSeparators : public Error {
public:
    using Error::Error;
};

class AlignmentError : public Error {
public:
    using Error::Error;
};

}  // namespace cfsep
