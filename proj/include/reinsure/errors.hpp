#pragma once

#include <stdexcept>
#include <string>

namespace reinsure {

// Configuration or input validation failure (CLI exit code 2).
class ConfigError : public std::invalid_argument {
  public:
    explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

// Numerical domain failure: non-finite transforms, failed bracketing (CLI exit code 3).
class DomainError : public std::domain_error {
  public:
    explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

}  // namespace reinsure
