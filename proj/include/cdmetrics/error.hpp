#pragma once

#include <stdexcept>
#include <string>

namespace cdm {

// Base for every error raised by the library. The CLI maps the concrete
// subclasses onto its exit-code ladder.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace cdm
