#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace amc {

/// Base of every error raised by the library. `kind()` is a stable,
/// machine-parsable tag used by the CLI's one-line error output.
class Error : public std::runtime_error {
public:
  Error(std::string_view kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  [[nodiscard]] std::string_view kind() const noexcept { return kind_; }

private:
  std::string_view kind_;
};

#define AMC_DEFINE_ERROR(Name)                                                 \
  class Name : public Error {                                                  \
  public:                                                                      \
    explicit Name(const std::string& what) : Error(#Name, what) {}             \
  }

AMC_DEFINE_ERROR(DomainError);
AMC_DEFINE_ERROR(NonConvergence);
AMC_DEFINE_ERROR(InvalidBracket);
AMC_DEFINE_ERROR(LengthMismatch);
AMC_DEFINE_ERROR(DegenerateStats);
AMC_DEFINE_ERROR(ConfigError);
AMC_DEFINE_ERROR(ValidationError);

#undef AMC_DEFINE_ERROR

/// Parse failure in a config file; carries the offending line and key.
class ParseError : public Error {
public:
  ParseError(int line, std::string key, const std::string& what)
      : Error("ParseError", what), line_(line), key_(std::move(key)) {}

  [[nodiscard]] int line() const noexcept { return line_; }
  [[nodiscard]] const std::string& key() const noexcept { return key_; }

private:
  int line_;
  std::string key_;
};

}  // namespace amc
