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

#ifndef DUALRIS_RANDOM_HPP
#define DUALRIS_RANDOM_HPP

#include <cstdint>
#include <initializer_list>
#include <random>

namespace dualris
{

using Rng = std::mt19937_64;

/// splitmix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

/// Counter-based stream key: folds each counter into `base` with mix64, so
/// distinct counter tuples give unrelated seeds and appending a counter never
/// changes the seeds of shorter tuples.
std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> counters);

/// Generator for the stream identified by (base, counters...).
Rng make_rng(std::uint64_t base, std::initializer_list<std::uint64_t> counters);

} // namespace dualris

#endif
