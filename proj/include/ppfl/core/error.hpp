#pragma once
#include <stdexcept>
#include <string>

namespace ppfl {

// Error categories; the CLI and C API map these 1:1 onto exit/return codes.
enum class ErrCode { runtime = 1, config = 2, step_bound = 3 };

class Error : public std::runtime_error {
 public:
  Error(ErrCode code, const std::string& msg) : std::runtime_error(msg), code_(code) {}
  ErrCode code() const noexcept { return code_; }

 private:
  ErrCode code_;
};

[[noreturn]] inline void fail(ErrCode code, const std::string& msg) { throw Error(code, msg); }
[[noreturn]] inline void fail(const std::string& msg) { throw Error(ErrCode::runtime, msg); }

inline void require(bool cond, const std::string& msg, ErrCode code = ErrCode::runtime) {
  if (!cond) throw Error(code, msg);
}

}  // namespace ppfl
