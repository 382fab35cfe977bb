#pragma once

#include <stdexcept>
#include <string>

namespace pk {

// code is a short machine-readable tag ("boundary_mass", "precondition", ...)
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& what)
        : std::runtime_error(what), code_(std::move(code)) {}
    const std::string& code() const { return code_; }

private:
    std::string code_;
};

inline void require(bool cond, const char* code, const std::string& msg) {
    if (!cond) throw Error(code, msg);
}

} // namespace pk
