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

#ifndef DUALRIS_CONFIG_FILE_HPP
#define DUALRIS_CONFIG_FILE_HPP

#include <filesystem>
#include <string>
#include <string_view>

#include "dualris/model.hpp"

// Plain-text `key = value` configuration. One assignment per line, `#` starts
// a comment, blank lines are ignored. Recognized keys:
//
//   M K N P_max sigma2 R beta P_U P_B P_n_b rng_seed
//   combining          coherent | incoherent
//   powered_surfaces   0 | 1 | 2
//
// Keys absent from the text keep the value from `base`. The result is not
// validated; call SystemConfig::validate().

namespace dualris
{

SystemConfig parse_config(std::string_view text, SystemConfig base = {});

SystemConfig load_config(const std::filesystem::path &path, SystemConfig base = {});

/// Renders every key, in the order listed above, so that parse_config reproduces cfg.
std::string format_config(const SystemConfig &cfg);

} // namespace dualris

#endif
