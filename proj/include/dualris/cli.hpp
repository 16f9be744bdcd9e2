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

#ifndef DUALRIS_CLI_HPP
#define DUALRIS_CLI_HPP

#include <ostream>
#include <string>
#include <vector>

namespace dualris
{

/// Exit codes of cli_main.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitInfeasible = 3;

/// Subcommands:
///   run --figure {2..6} [--scale desk|paper] [--seed S] [--out PATH] [--config FILE]
///   single [--scale desk|paper] [--seed S] [--draw D] [--scheme NAME] [--config FILE]
///   selftest
///
/// Seed and output directory may also come from DUALRIS_SEED and
/// DUALRIS_OUT_DIR. Flags win over the environment, the environment over
/// the config file.
int cli_main(int argc, const char *const *argv, std::ostream &out, std::ostream &err);

struct CheckResult
{
    std::string name;
    bool passed = false;
    std::string detail;
};

/// Quick invariant checks on small seeded instances.
std::vector<CheckResult> self_test();

} // namespace dualris

#endif
