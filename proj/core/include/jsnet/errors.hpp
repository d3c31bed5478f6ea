#pragma once

#include <stdexcept>
#include <string>

namespace jsnet {

// Base class for everything this library throws on purpose.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Input data is malformed or incompatible with the model.
class DataError : public Error {
public:
    using Error::Error;
};

// A numerical procedure could not complete.
class NumericError : public Error {
public:
    using Error::Error;
};

// A value lies outside the domain of the selected translation family.
class DomainError : public DataError {
public:
    DomainError(std::string family, double value, int dimension = -1);
    const std::string& family() const noexcept { return family_; }
    double value() const noexcept { return value_; }
    int dimension() const noexcept { return dimension_; }  // 0-based, -1 when scalar

private:
    std::string family_;
    double value_;
    int dimension_;
};

// Percentile spacing collapsed (p <= 0), e.g. constant samples.
class DegenerateSpacing : public NumericError {
public:
    using NumericError::NumericError;
};

// Percentile geometry incompatible with the S_U family (m*n/p^2 <= 1).
class FamilyMismatch : public NumericError {
public:
    using NumericError::NumericError;
};

// Damped Newton exhausted its damping budget without an acceptable step.
class SolveFailure : public NumericError {
public:
    using NumericError::NumericError;
};

// Matrix factorization failed (covariance not symmetric positive definite).
class FactorizationError : public NumericError {
public:
    using NumericError::NumericError;
};

// Invalid (k, k') pair passed to the quadratic-expansion index map.
class IndexError : public Error {
public:
    using Error::Error;
};

// Scalar argument outside its allowed range (e.g. cut-off frequency).
class RangeError : public Error {
public:
    using Error::Error;
};

// Malformed input file; carries a 1-based line number when known.
class ParseError : public DataError {
public:
    explicit ParseError(const std::string& what, long line = -1);
    long line() const noexcept { return line_; }

private:
    long line_;
};

// Class labels are not contiguous 1..C.
class LabelError : public DataError {
public:
    using DataError::DataError;
};

// Normalization denominator too close to the rest baseline.
class NearRestError : public DataError {
public:
    using DataError::DataError;
};

}  // namespace jsnet
