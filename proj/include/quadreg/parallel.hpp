#pragma once

#include <optional>

namespace quadreg {

// Sets the OpenMP worker count: `requested` if given, else the
// QUADREG_THREADS environment variable, else the OpenMP default.
// Returns the count in effect. Throws std::invalid_argument for values < 1.
int configure_threads(std::optional<int> requested = std::nullopt);

int max_threads();

}  // namespace quadreg
