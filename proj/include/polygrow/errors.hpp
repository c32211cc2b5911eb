#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace polygrow {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed query text; `position` is a byte offset into the source.
class SyntaxError : public Error {
 public:
  SyntaxError(const std::string& message, std::size_t position)
      : Error(message + " at offset " + std::to_string(position)), position_(position) {}
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

class BudgetExceeded : public Error {
 public:
  BudgetExceeded(const std::string& what, std::uint64_t attempted, std::uint64_t budget)
      : Error(what + ": attempted enumeration of " + std::to_string(attempted) +
              " exceeds budget " + std::to_string(budget)),
        attempted_(attempted),
        budget_(budget) {}
  std::uint64_t attempted() const noexcept { return attempted_; }
  std::uint64_t budget() const noexcept { return budget_; }

 private:
  std::uint64_t attempted_;
  std::uint64_t budget_;
};

/// Two distinct completions of one seed tuple share a skeleton.
class SeedUniquenessViolation : public Error {
 public:
  using Error::Error;
};

/// An accepted tuple shows a skeleton missing from a decomposition.
class HorizonError : public Error {
 public:
  using Error::Error;
};

/// Default enumeration budget; the POLYGROW_BUDGET environment variable overrides it.
std::uint64_t default_budget();

}  // namespace polygrow
