#pragma once

#include <stdexcept>
#include <string>

namespace alignkit {

// Domain error: bad data, bad file, failed contract. The CLI maps these to
// exit code 1; usage errors are handled by the argument parser (exit 2).
class Error : public std::runtime_error {
  public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace alignkit
