#pragma once

#include <stdexcept>
#include <string>

namespace distort {

enum class ErrorKind {
  kInvalidArgument,
  kNotFound,
  kSchema,
  kIo,
  kUnimplemented,
};

// Single exception type for the library; `kind()` lets callers (CLI, HTTP
// service) map failures to exit codes or status classes.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline Error invalid_argument(const std::string& what) {
  return Error(ErrorKind::kInvalidArgument, what);
}
inline Error not_found(const std::string& what) {
  return Error(ErrorKind::kNotFound, what);
}
inline Error schema_error(const std::string& what) {
  return Error(ErrorKind::kSchema, what);
}
inline Error io_error(const std::string& what) {
  return Error(ErrorKind::kIo, what);
}

}  // namespace distort
