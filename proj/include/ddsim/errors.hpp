#pragma once

#include <stdexcept>
#include <string>

namespace ddsim {

// Caller passed arguments that violate a documented precondition.
class UsageError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

// Numeric input outside the function's domain (NaN, inf).
class DomainError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

// An invariant the library itself is responsible for was breached.
class InternalError : public std::logic_error {
public:
  using std::logic_error::logic_error;
};

class IoError : public std::runtime_error {
public:
  IoError(const std::string& path, const std::string& what)
      : std::runtime_error(path + ": " + what), path_(path) {}

  const std::string& path() const noexcept { return path_; }

private:
  std::string path_;
};

}  // namespace ddsim
