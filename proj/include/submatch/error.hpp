#pragma once

#include <stdexcept>
#include <string>

namespace submatch {

enum class ErrorCode {
  InvalidArgument = 1,
  OutOfRange = 2,
  Io = 3,
  Format = 4,
  Capacity = 5,
  MalformedCost = 6,
  Internal = 7,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

inline void require(bool ok, const std::string& what) {
  if (!ok) fail(ErrorCode::InvalidArgument, what);
}

}  // namespace submatch
