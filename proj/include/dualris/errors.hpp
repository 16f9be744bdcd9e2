// SPDX-License-Identifier: Apache-2.0
//
// dualris: joint beamforming and dual-RIS phase optimization
// Copyright (C) 2026 The dualris authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef DUALRIS_ERRORS_HPP
#define DUALRIS_ERRORS_HPP

#include <optional>
#include <stdexcept>
#include <string>

namespace dualris
{

enum class ErrorKind
{
    dimension,   // operand sizes do not match
    shape,       // structural property violated (e.g. not Hermitian)
    numerical,   // singular / indefinite / non-positive quantity
    convergence, // iterative solver exhausted its budget
    infeasible,  // a constraint cannot be met
    config,      // invalid configuration value
    io           // file or stream failure
};

const char *to_string(ErrorKind kind);

/// Library exception. `value()` carries the offending quantity when one exists
/// (e.g. the minimum eigenvalue of a matrix rejected by solve_hpd).
class Error : public std::runtime_error
{
  public:
    Error(ErrorKind kind, const std::string &message, std::optional<double> value = std::nullopt)
        : std::runtime_error(message), kind_(kind), value_(value)
    {
    }

    ErrorKind kind() const noexcept { return kind_; }
    std::optional<double> value() const noexcept { return value_; }

    /// Same error with `context` prepended to the message.
    Error with_context(const std::string &context) const
    {
        return Error(kind_, context + ": " + what(), value_);
    }

  private:
    ErrorKind kind_;
    std::optional<double> value_;
};

} // namespace dualris

#endif
