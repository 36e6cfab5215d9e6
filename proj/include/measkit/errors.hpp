// Copyright 2026 The measkit authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>

namespace measkit {

/// Invalid argument: mismatched dimensions, out-of-range indices,
/// infeasible generator parameters.
struct ArgumentError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Text or JSON input that cannot be parsed.
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Problem exceeds exact-simulation capacity.
struct CapacityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A numerical contract was violated (non-Hermitian state, complex
/// residue beyond tolerance, non-commuting synthesis input, ...).
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A kernel was invoked without its required context variables.
struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// A two-qubit gate touches qubits in different graph components.
struct RoutingError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Randomized construction exhausted its retry budget.
struct GenerationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace measkit
