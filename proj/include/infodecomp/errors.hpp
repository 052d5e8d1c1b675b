#ifndef INFODECOMP_ERRORS_HPP
#define INFODECOMP_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace infodecomp {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Dataset shape or content violates a structural invariant (sizes, label range).
class InvalidDatasetError : public Error {
public:
    using Error::Error;
};

class NonFiniteValueError : public Error {
public:
    NonFiniteValueError(std::size_t row, std::size_t col)
        : Error("non-finite feature value at row " + std::to_string(row) + ", column " + std::to_string(col)),
          row(row),
          col(col) {}
    std::size_t row;
    std::size_t col;
};

class ClassTooSmallError : public Error {
public:
    ClassTooSmallError(std::string label, std::size_t count, int k)
        : Error("class '" + label + "' has " + std::to_string(count) + " samples, need at least k+1 = " +
                std::to_string(k + 1)),
          class_label(std::move(label)),
          class_count(count),
          k(k) {}
    std::string class_label;
    std::size_t class_count;
    int k;
};

class EmptyAlphabetError : public Error {
public:
    EmptyAlphabetError() : Error("dataset has an empty class alphabet") {}
};

class DomainError : public Error {
public:
    using Error::Error;
};

class EmptySearchSpaceError : public Error {
public:
    EmptySearchSpaceError() : Error("neighbor search space is empty") {}
};

class SubspaceNotCountedError : public Error {
public:
    using Error::Error;
};

class NotPositiveDefiniteError : public Error {
public:
    using Error::Error;
};

// A k-th neighbor distance of zero (exact duplicate rows) makes strict-radius
// counting meaningless; callers are expected to jitter bootstrap resamples.
class DegenerateRadiusError : public Error {
public:
    DegenerateRadiusError(std::size_t sample)
        : Error("zero k-th neighbor distance at sample " + std::to_string(sample) +
                " (duplicate rows? consider a nonzero jitter_scale)"),
          sample(sample) {}
    std::size_t sample;
};

class ParseError : public Error {
public:
    ParseError(std::size_t row, std::size_t col, const std::string& what_)
        : Error("parse error at row " + std::to_string(row) + ", column " + std::to_string(col) + ": " + what_),
          row(row),
          col(col) {}
    std::size_t row;
    std::size_t col;
};

class MissingColumnError : public Error {
public:
    explicit MissingColumnError(const std::string& name) : Error("missing column: " + name), column(name) {}
    std::string column;
};

}  // namespace infodecomp

#endif  // INFODECOMP_ERRORS_HPP
