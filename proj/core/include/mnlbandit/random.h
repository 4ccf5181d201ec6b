// Copyright 2026 The mnlbandit Authors.
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

#ifndef MNLBANDIT_RANDOM_H_
#define MNLBANDIT_RANDOM_H_

#include <cstdint>
#include <initializer_list>
#include <random>
#include <string_view>

namespace mnlbandit {

// Random stream owned by a single trial. Every draw maps one 64-bit engine
// output to a double, so the number of engine calls per operation is fixed
// and replays are bit-reproducible across standard libraries.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  // Uniform on [0, 1) with 53 bits of resolution.
  double Uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Uniform on [lo, hi]. Returns lo exactly when lo == hi.
  double UniformIn(double lo, double hi) {
    const double u = Uniform();
    return lo == hi ? lo : lo + (hi - lo) * u;
  }

  uint64_t NextU64() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

uint64_t SplitMix64(uint64_t x);

// FNV-1a, used to fold policy labels into seeds.
uint64_t HashLabel(std::string_view label);

// Combines a master seed with an ordered list of stream coordinates.
uint64_t DeriveSeed(uint64_t master_seed, std::initializer_list<uint64_t> parts);

}  // namespace mnlbandit

#endif  // MNLBANDIT_RANDOM_H_
