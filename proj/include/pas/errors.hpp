#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace pas {

enum class ErrorKind {
    Size,
    Domain,
    Shape,
    Range,
    Bracket,
    Convergence,
    Budget,
    Config,
};

const char* to_string(ErrorKind kind) noexcept;

/// Base of every error raised by the library. The kind is what the C API and
/// the CLI translate into status and exit codes.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

class SizeError : public Error {
public:
    explicit SizeError(const std::string& what) : Error(ErrorKind::Size, what) {}
};

class DomainError : public Error {
public:
    explicit DomainError(const std::string& what) : Error(ErrorKind::Domain, what) {}
};

class ShapeError : public Error {
public:
    explicit ShapeError(const std::string& what) : Error(ErrorKind::Shape, what) {}
};

class RangeError : public Error {
public:
    explicit RangeError(const std::string& what) : Error(ErrorKind::Range, what) {}
};

class BracketError : public Error {
public:
    explicit BracketError(const std::string& what) : Error(ErrorKind::Bracket, what) {}
};

class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& what) : Error(ErrorKind::Config, what) {}
};

/// Raised when an iterative solver hits its iteration cap. Carries the last
/// iterate so callers can inspect how far it got.
class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& what, std::vector<double> last_iterate)
        : Error(ErrorKind::Convergence, what), last_iterate_(std::move(last_iterate)) {}
    const std::vector<double>& last_iterate() const noexcept { return last_iterate_; }

private:
    std::vector<double> last_iterate_;
};

/// Raised when an enumeration would exceed its configured budget.
class BudgetError : public Error {
public:
    BudgetError(const std::string& what, double required, double budget)
        : Error(ErrorKind::Budget, what), required_(required), budget_(budget) {}
    double required() const noexcept { return required_; }
    double budget() const noexcept { return budget_; }

private:
    double required_;
    double budget_;
};

}  // namespace pas
