#include "csiaug/error.hpp"

namespace csiaug {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::parse: return "parse error";
    case ErrorKind::structural: return "structural error";
    case ErrorKind::bounds: return "bounds error";
    case ErrorKind::parameter: return "parameter error";
    case ErrorKind::format: return "format error";
    case ErrorKind::schema: return "schema error";
    case ErrorKind::io: return "I/O error";
    case ErrorKind::sampler: return "sampler error";
    case ErrorKind::split: return "split error";
    case ErrorKind::runtime: return "runtime error";
  }
  return "error";
}

void fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

}  // namespace csiaug
