#pragma once

#include <stdexcept>
#include <string>

namespace cranest {

enum class ErrorKind {
  dimension,
  index,
  domain,
  degenerate_signal,
  divergence,
  io,
  parse,
};

// Single exception type for the library; the kind maps 1:1 onto C API status codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

inline void require(bool ok, ErrorKind kind, const std::string& what) {
  if (!ok) fail(kind, what);
}

}  // namespace cranest
