#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ptss {

/// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  enum class Kind { Syntax, Arity, ReservedToken };

  ParseError(Kind kind, std::size_t position, std::string message)
      : Error(std::move(message)), kind_(kind), position_(position) {}

  Kind kind() const noexcept { return kind_; }
  /// Byte offset into the parsed text.
  std::size_t position() const noexcept { return position_; }

 private:
  Kind kind_;
  std::size_t position_;
};

/// A tree that violates the process-tree invariants.
class InvalidTree : public Error {
 public:
  using Error::Error;
};

class IllegalTransition : public Error {
 public:
  using Error::Error;
};

/// A search or graph exploration hit its configured state cap.
class CapExceeded : public Error {
 public:
  explicit CapExceeded(std::size_t cap)
      : Error("state cap of " + std::to_string(cap) + " exceeded"), cap_(cap) {}
  std::size_t cap() const noexcept { return cap_; }

 private:
  std::size_t cap_;
};

class Timeout : public Error {
 public:
  Timeout() : Error("search deadline exceeded") {}
};

/// Trace enumeration grew beyond its configured limit.
class LanguageOverflow : public Error {
 public:
  explicit LanguageOverflow(std::size_t limit)
      : Error("language enumeration exceeded " + std::to_string(limit) +
              " traces"),
        limit_(limit) {}
  std::size_t limit() const noexcept { return limit_; }

 private:
  std::size_t limit_;
};

}  // namespace ptss
