#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace oet {

// Base of every error raised by the library. Callers that only need a
// diagnostic can catch this; the subclasses let tests and the CLI tell the
// failure modes apart.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidParameter : public Error {
 public:
  using Error::Error;
};

class InvalidInput : public Error {
 public:
  using Error::Error;
};

class NotPsd : public Error {
 public:
  using Error::Error;
};

class DegenerateSubspace : public Error {
 public:
  using Error::Error;
};

class InvalidTrainingSet : public Error {
 public:
  using Error::Error;
};

class OutOfFrame : public Error {
 public:
  using Error::Error;
};

class LocalizationFailure : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// Malformed text input; carries the 1-based line number.
class ParseError : public Error {
 public:
  ParseError(int line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

/// Configuration problem tied to one key.
class ConfigError : public Error {
 public:
  ConfigError(std::string key, const std::string& what)
      : Error("config key '" + key + "': " + what), key_(std::move(key)) {}
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

class EmptySequence : public Error {
 public:
  using Error::Error;
};

class UndecodableImage : public Error {
 public:
  using Error::Error;
};

class CountMismatch : public Error {
 public:
  using Error::Error;
};

class InvalidSpec : public Error {
 public:
  using Error::Error;
};

}  // namespace oet
