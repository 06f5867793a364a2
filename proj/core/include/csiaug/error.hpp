#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace csiaug {

/// Failure classes. The CLI maps each class to a distinct exit code.
enum class ErrorKind {
  parse,       // malformed numeric field in a text record
  structural,  // record shape is wrong (missing column, odd I/Q count)
  bounds,      // index outside the addressed container
  parameter,   // operator argument violates its precondition
  format,      // binary file has the wrong magic/version/size
  schema,      // configuration or manifest does not validate
  io,          // filesystem failure
  sampler,     // balanced sampler cannot be constructed
  split,       // train/validation split cannot be constructed
  runtime,     // anything else detected while running
};

std::string_view to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& message);

}  // namespace csiaug
