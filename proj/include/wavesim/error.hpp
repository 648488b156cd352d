#pragma once

#include <stdexcept>
#include <string>

namespace wavesim {

enum class ErrorKind {
  InvalidArgument,  // violated precondition on a programmatic input
  Schema,           // malformed file: missing column, bad number, unknown key
  Data,             // well-formed input whose content cannot be processed
  Undefined,        // quantity is mathematically undefined for the input
  Io,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

const char* to_string(ErrorKind kind) noexcept;

}  // namespace wavesim
