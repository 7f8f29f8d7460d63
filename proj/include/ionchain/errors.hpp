// Copyright 2026 The ionchain Authors
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
#include <string>

namespace ionchain {

/// Bad input: violated precondition, malformed parameter, index out of range.
class InvalidArgument : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// A numerical procedure failed: non-convergence, ion crossing, unconfined
/// potential, inadequate Fock-space cutoff.
class NumericalError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Ions moved past each other during an equilibrium search.
class IonCrossingError : public NumericalError {
  public:
    using NumericalError::NumericalError;
};

/// A perturbation-theory denominator is too close to zero.
class ResonanceError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Root-finding bracket does not contain a sign change.
class BracketError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

}  // namespace ionchain
