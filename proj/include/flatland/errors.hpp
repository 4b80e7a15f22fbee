#pragma once

#include <stdexcept>
#include <string>

namespace flatland {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The predecessor x⁻ of the null path does not exist.
class UndefinedOnNull : public Error {
 public:
  explicit UndefinedOnNull(const std::string& what) : Error(what) {}
};

class EnumerationCapExceeded : public Error {
 public:
  EnumerationCapExceeded(std::size_t requested, std::size_t cap)
      : Error("length " + std::to_string(requested) + " exceeds enumeration cap " +
              std::to_string(cap)),
        requested_(requested),
        cap_(cap) {}

  std::size_t requested() const noexcept { return requested_; }
  std::size_t cap() const noexcept { return cap_; }

 private:
  std::size_t requested_;
  std::size_t cap_;
};

class RankOutOfRange : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

class ZeroDenominator : public Error {
 public:
  using Error::Error;
};

/// The observation has no prior mass in its neighborhood.
class ZeroPosteriorMass : public Error {
 public:
  using Error::Error;
};

class ImproperMeasure : public Error {
 public:
  using Error::Error;
};

/// An exact identity that must hold did not. Always a bug.
class InvariantViolation : public Error {
 public:
  using Error::Error;
};

}  // namespace flatland
