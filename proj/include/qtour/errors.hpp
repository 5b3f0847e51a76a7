#pragma once

#include <stdexcept>

namespace qtour {

// Raised when a request exceeds a hard resource limit (qubit cap on the
// statevector, size cap on the exact solver). Mapped to its own process
// exit code by the CLI so scripted callers can tell "too big" apart from
// "invalid input".
class capacity_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace qtour
