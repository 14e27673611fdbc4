// Copyright 2026 The purelab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace purelab {

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

/// A precondition of an operation was violated (dimension mismatch, bad argument).
class ContractViolation : public Error {
   public:
    using Error::Error;
};

/// The requested operation is not available in the given theory model.
class Unsupported : public Error {
   public:
    using Error::Error;
};

/// Raised when a mixed state has no purification in the model (classical theory).
class PurificationUnsupported : public Unsupported {
   public:
    using Unsupported::Unsupported;
};

/// Sequential composition of circuits with incompatible wire types.
class WiringError : public Error {
   public:
    WiringError(const std::string &message, std::vector<int> wires)
        : Error(message), wire_ids(std::move(wires)) {}
    std::vector<int> wire_ids;
};

/// Two dilations whose reduced channels differ; `distance` is the trace norm of the
/// Choi difference divided by the input dimension.
class NotSameChannel : public Error {
   public:
    NotSameChannel(const std::string &message, double d) : Error(message), distance(d) {}
    double distance;
};

/// A bipartite state that does not correspond to any transformation.
class NotAChoiState : public Error {
   public:
    using Error::Error;
};

/// A multipartite channel that signals backwards across cut `cut` (0-based).
class CausalOrderViolation : public Error {
   public:
    CausalOrderViolation(const std::string &message, int c, double r) : Error(message), cut(c), residual(r) {}
    int cut;
    double residual;
};

/// An instrument that does not coarse-grain to the identity; `residual` is the gap.
class DisturbingInstrument : public ContractViolation {
   public:
    DisturbingInstrument(const std::string &message, double r) : ContractViolation(message), residual(r) {}
    double residual;
};

}  // namespace purelab
