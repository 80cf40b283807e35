// Copyright 2026 The DMMD Authors. All Rights Reserved.
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

#ifndef DMMD_RANDOM_HPP_
#define DMMD_RANDOM_HPP_

#include <cstdint>
#include <random>

#include "dmmd/linalg.hpp"

namespace dmmd {

// Seedable generator with bit-identical output on every platform:
// std::mt19937_64 as the engine, seeded through splitmix64, with uniform and
// Gaussian transforms implemented here (the <random> distributions are
// implementation-defined and differ between standard libraries).
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  // Independent stream for replication `index` of a run seeded with `seed`,
  // so parallel and serial runs draw the same numbers.
  static Rng substream(std::uint64_t seed, std::uint64_t index);

  std::uint64_t next_u64() { return engine_(); }
  // Uniform on [0, 1) with 53 random bits.
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  // Uniform integer on [lo, hi], inclusive.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);
  // Standard normal (Marsaglia polar method).
  double normal();

  Matrix gaussian_matrix(Index rows, Index cols);

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace dmmd

#endif  // DMMD_RANDOM_HPP_
