#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace fttsim {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Category used by the CLI to pick an exit code.
enum class ErrorKind { config, numeric, io };

class NumericError : public Error {
public:
    using Error::Error;
};

class PoleError : public NumericError {
public:
    using NumericError::NumericError;
};

class OverflowError : public NumericError {
public:
    using NumericError::NumericError;
};

class ConvergenceError : public NumericError {
public:
    using NumericError::NumericError;
};

class DomainError : public NumericError {
public:
    using NumericError::NumericError;
};

class NoConvergence : public NumericError {
public:
    NoConvergence(int iterations, double residual)
        : NumericError("fixed-point iteration did not converge after " + std::to_string(iterations) +
                       " iterations (last residual " + std::to_string(residual) + ")"),
          iterations_(iterations),
          residual_(residual) {}

    int iterations() const noexcept { return iterations_; }
    double residual() const noexcept { return residual_; }

private:
    int iterations_;
    double residual_;
};

class NonFiniteField : public NumericError {
public:
    NonFiniteField(std::size_t time_index, std::size_t x_index)
        : NumericError("non-finite field value at grid index (n=" + std::to_string(time_index) +
                       ", i=" + std::to_string(x_index) + ")"),
          time_index_(time_index),
          x_index_(x_index) {}

    std::size_t time_index() const noexcept { return time_index_; }
    std::size_t x_index() const noexcept { return x_index_; }

private:
    std::size_t time_index_;
    std::size_t x_index_;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

class CFLViolation : public ConfigError {
public:
    using ConfigError::ConfigError;
};

class ParseError : public ConfigError {
public:
    ParseError(std::size_t position, std::vector<std::string> expected, const std::string& detail)
        : ConfigError(format(position, expected, detail)),
          position_(position),
          expected_(std::move(expected)) {}

    std::size_t position() const noexcept { return position_; }
    const std::vector<std::string>& expected() const noexcept { return expected_; }

private:
    static std::string format(std::size_t position, const std::vector<std::string>& expected,
                              const std::string& detail) {
        std::string msg = "parse error at position " + std::to_string(position) + ": " + detail;
        if (!expected.empty()) {
            msg += " (expected one of:";
            for (const auto& e : expected) msg += " " + e;
            msg += ")";
        }
        return msg;
    }

    std::size_t position_;
    std::vector<std::string> expected_;
};

class IOError : public Error {
public:
    using Error::Error;
};

}  // namespace fttsim
