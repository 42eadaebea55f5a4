#pragma once

#include <string>

#include "fastbfgs/subspace.hpp"

namespace fastbfgs {

// JSON snapshot of a SubspaceState, used for test fixtures:
//
//   {
//     "n": <int>, "m": <int>, "count": <int>,
//     "columns": [[<n doubles>], ...],   // stored steps, oldest first
//     "L": [<k*k doubles>]               // row-major, k = number of columns
//   }
//
// Doubles use the shortest round-trip representation, so a round trip is exact.

std::string to_json(const SubspaceState& state);
SubspaceState state_from_json(const std::string& text);

}  // namespace fastbfgs
