#include "wavesim/error.hpp"

namespace wavesim {

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(message), kind_(kind) {}

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "invalid argument";
    case ErrorKind::Schema: return "schema error";
    case ErrorKind::Data: return "data error";
    case ErrorKind::Undefined: return "undefined";
    case ErrorKind::Io: return "i/o error";
  }
  return "error";
}

}  // namespace wavesim
