#pragma once

#include <stdexcept>
#include <string>

namespace mincurv {

// Error with a stable machine-readable code, e.g. "C_TOO_SMALL".
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& what)
        : std::runtime_error(code + ": " + what), code_(std::move(code)) {}

    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

[[noreturn]] inline void fail(const std::string& code, const std::string& what) {
    throw Error(code, what);
}

} // namespace mincurv
