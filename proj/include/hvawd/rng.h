// Copyright 2026 The HVAW-D Authors. All Rights Reserved.
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

#ifndef HVAWD_RNG_H_
#define HVAWD_RNG_H_

#include <cstdint>
#include <random>
#include <string_view>

namespace hvawd {

// All stochastic components draw from this engine. The engine sequence is
// fixed by the standard; the distribution adaptors on top of it belong to the
// standard library in use, so seeds reproduce per toolchain.
using Rng = std::mt19937_64;

// One SplitMix64 output step; advances `state`.
std::uint64_t SplitMix64(std::uint64_t& state);

// Derives an independent child seed from a master seed, a purpose tag and an
// index. Used so that e.g. the feature map of block m gets
// StableHash(master, "featmap", m) regardless of construction order.
std::uint64_t StableHash(std::uint64_t master, std::string_view tag,
                         std::uint64_t index);

}  // namespace hvawd

#endif  // HVAWD_RNG_H_
