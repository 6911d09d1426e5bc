#pragma once

#include <stdexcept>
#include <string>

namespace teamscope {

// Exit codes returned by the CLI for each error class.
enum class ErrorClass : int {
  Usage = 2,
  Io = 3,
  Format = 4,
  Data = 5,
  Numeric = 6,
  Config = 7,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorClass cls, const std::string& what) : std::runtime_error(what), cls_(cls) {}
  ErrorClass error_class() const noexcept { return cls_; }

 private:
  ErrorClass cls_;
};

// Unreadable/unwritable files.
struct IoError : Error {
  explicit IoError(const std::string& what) : Error(ErrorClass::Io, what) {}
};

// Malformed or version-mismatched artifacts.
struct FormatError : Error {
  explicit FormatError(const std::string& what) : Error(ErrorClass::Format, what) {}
};

// Inputs that violate an operation's preconditions (single-class training data, ...).
struct DataError : Error {
  explicit DataError(const std::string& what) : Error(ErrorClass::Data, what) {}
};

// Rank deficiency, zero within-variation and similar estimation failures.
struct NumericError : Error {
  explicit NumericError(const std::string& what) : Error(ErrorClass::Numeric, what) {}
};

struct ConfigError : Error {
  explicit ConfigError(const std::string& what) : Error(ErrorClass::Config, what) {}
};

}  // namespace teamscope
