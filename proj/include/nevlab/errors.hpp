#ifndef NEVLAB_ERRORS_HPP
#define NEVLAB_ERRORS_HPP

#include <stdexcept>
#include <string>

#include "nevlab/logcomplex.hpp"

namespace nevlab {

// All numerical failures carry the stage that failed; the CLI maps these to
// exit code 3.
class NumericError : public std::runtime_error {
public:
    NumericError(std::string stage, const std::string& what)
        : std::runtime_error(stage + ": " + what), stage_(std::move(stage)) {}
    const std::string& stage() const { return stage_; }

private:
    std::string stage_;
};

// Tail bound unreachable within max_terms; carries the partial value and the
// bound actually achieved.
class TruncationError : public NumericError {
public:
    TruncationError(std::string stage, LogComplex partial, double achieved)
        : NumericError(std::move(stage), "truncation tail bound not reached"),
          partial_(partial),
          achieved_(achieved) {}
    LogComplex partial() const { return partial_; }
    double achieved_bound() const { return achieved_; }

private:
    LogComplex partial_;
    double achieved_;
};

class SingularityError : public NumericError {
public:
    using NumericError::NumericError;
};

class QuadratureError : public NumericError {
public:
    using NumericError::NumericError;
};

class EstimationError : public NumericError {
public:
    using NumericError::NumericError;
};

}  // namespace nevlab

#endif
