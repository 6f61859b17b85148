#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace bbs {

// Base class for every error raised by the library. Carries the name of the
// module that raised it and, when meaningful, the lattice index involved.
class Error : public std::runtime_error {
 public:
  Error(std::string module, const std::string& what,
        std::optional<std::int64_t> index = std::nullopt)
      : std::runtime_error(compose(module, what, index)),
        module_(std::move(module)),
        index_(index) {}

  const std::string& module() const noexcept { return module_; }
  std::optional<std::int64_t> index() const noexcept { return index_; }

 private:
  static std::string compose(const std::string& module, const std::string& what,
                             std::optional<std::int64_t> index) {
    std::string s = module + ": " + what;
    if (index) s += " (index " + std::to_string(*index) + ")";
    return s;
  }

  std::string module_;
  std::optional<std::int64_t> index_;
};

// Bad argument values (kappa = 0, malformed laws, unknown names, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// A transform was applied outside the set where it is defined.
class DomainError : public Error {
 public:
  using Error::Error;
};

// The answer depends on data outside a finite window.
class UndecidableError : public DomainError {
 public:
  using DomainError::DomainError;
};

// Path encoding that does not come from a configuration.
class MalformedPathError : public Error {
 public:
  using Error::Error;
};

// Query outside the stored window of a Windowed object.
class OutOfWindowError : public Error {
 public:
  using Error::Error;
};

// Text, CSV or JSON input that cannot be parsed.
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace bbs
