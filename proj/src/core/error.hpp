#pragma once

#include <stdexcept>
#include <string>

namespace cellplan {

enum class errc {
    invalid_argument, // bad parameter or config value
    domain,           // input outside a model's mathematical domain
    parse,            // malformed config or data file
    io,               // file system failure
    data,             // structurally valid input with unusable content
};

class error : public std::runtime_error {
  public:
    error(errc code, const std::string& msg) : std::runtime_error(msg), code_(code) {}
    errc code() const { return code_; }

  private:
    errc code_;
};

[[noreturn]] inline void raise(errc code, const std::string& msg) { throw error(code, msg); }

} // namespace cellplan
