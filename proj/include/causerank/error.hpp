#pragma once
// Error type shared by all core modules. The numeric codes line up with the
// crk_status values exposed by the C API (see include/causerank.h).

#include <stdexcept>
#include <string>

namespace crk {

enum class ErrorCode : int {
  ok = 0,
  io = 1,         // missing or unreadable file
  parse = 2,      // malformed file or record content
  invalid = 3,    // invalid argument, config, or domain value
  dimension = 4,  // vector dimension mismatch
  oov = 5,        // out-of-vocabulary token under policy=error
  state = 6,      // checksum mismatch, stale cache, wrong handle state
  item = 7,       // one or more per-item failures in a batch run
  internal = 8,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace crk
