#pragma once

#include <stdexcept>
#include <string>

namespace nts {

enum class Errc {
  kInvalidArgument = 1,
  kParse = 2,
  kIo = 3,
  kBudget = 4,
  kCap = 5,
  kUnsupported = 6,
  kInternal = 7,
};

class Error : public std::runtime_error {
 public:
  Error(Errc code, std::string message)
      : std::runtime_error(std::move(message)), code_(code) {}
  Errc code() const { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& message) {
  throw Error(code, message);
}

inline void require(bool ok, Errc code, const std::string& message) {
  if (!ok) fail(code, message);
}

}  // namespace nts
