// Copyright 2026 The budgetmech Authors
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

#include <cstdint>
#include <random>

namespace budgetmech {

// Caller-owned random state. All randomness in the library flows through one
// of these, so a run is reproducible from its seed.
using Rng = std::mt19937_64;

// Uniform draw in [0, 1) with 53 random bits. Used instead of
// std::uniform_real_distribution so streams are identical across standard
// library implementations.
double uniform01(Rng& rng);

// Independent stream seed for worker `stream` of a run seeded with `seed`.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace budgetmech
