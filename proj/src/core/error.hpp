#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace atant {

enum class errc {
    invalid_argument,
    io,
    parse,
    validation,
    corrupt_log,
    supersession,
    sut,
    unsupported,
};

/// Library-wide error type. The C boundary maps errc to status codes;
/// inside the core we throw.
class error : public std::runtime_error {
  public:
    error(errc code, std::string message) : std::runtime_error(std::move(message)), code_(code) {}
    [[nodiscard]] errc code() const noexcept { return code_; }

  private:
    errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& message) {
    throw error(code, message);
}

}  // namespace atant
