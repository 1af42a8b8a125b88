#pragma once

#include <stdexcept>
#include <string>

namespace berrylab {

/// Failure categories shared by the C++ core, the C API status codes and the
/// CLI exit statuses.
enum class ErrorKind {
  Domain,        ///< argument outside the mathematical domain of an operation
  Precondition,  ///< operation-level precondition violated (sizes, ranges)
  Config,        ///< experiment configuration rejected
  Numerical,     ///< iteration failed to converge, rank loss that cannot be reported
  Io,            ///< file system or parse failure
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what) : Error(ErrorKind::Domain, what) {}
};

class PreconditionError : public Error {
 public:
  explicit PreconditionError(const std::string& what) : Error(ErrorKind::Precondition, what) {}
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error(ErrorKind::Config, what) {}
};

class NumericalError : public Error {
 public:
  explicit NumericalError(const std::string& what) : Error(ErrorKind::Numerical, what) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(ErrorKind::Io, what) {}
};

const char* error_kind_name(ErrorKind kind) noexcept;

}  // namespace berrylab
