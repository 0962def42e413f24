// Copyright 2026 The ctxwatch Authors
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

#ifndef CTXWATCH_SIM_RANDOM_HPP_
#define CTXWATCH_SIM_RANDOM_HPP_

#include <cstdint>
#include <random>
#include <vector>

namespace ctxwatch::sim {

/// One step of splitmix64; advances `state`.
std::uint64_t SplitMix64(std::uint64_t& state);

/**
 * Portable random stream: mt19937_64 seeded with one splitmix64 output, and
 * uniforms built from the top 53 bits so the same seed yields the same draws
 * on every platform (std distributions are implementation-defined).
 */
class Rng {
 public:
  explicit Rng(std::uint64_t seed);
  /// Independent stream `index` derived from a master seed.
  static Rng Stream(std::uint64_t master, std::uint64_t index);

  std::uint64_t Next() { return engine_(); }
  /// Uniform in [0, 1).
  double Uniform();
  /// Uniform in [lo, hi).
  double Uniform(double lo, double hi) { return lo + (hi - lo) * Uniform(); }
  /// Uniform integer in [lo, hi].
  std::int64_t UniformInt(std::int64_t lo, std::int64_t hi);

 private:
  std::mt19937_64 engine_;
};

/// Inverse-transform exponential draw. Throws kInvalidConfig for mean <= 0.
double DrawExponential(Rng& rng, double mean);

/// Alternating truth schedule: the activity starts off, and holding times
/// are exponential with the given means.
class ActivitySchedule {
 public:
  /// Throws kInvalidConfig for non-positive means.
  ActivitySchedule(double mean_on, double mean_off);
  /// Truth at time t. Times must be queried in non-decreasing order.
  bool At(Rng& rng, double t);
  /// Toggle times drawn so far.
  const std::vector<double>& toggles() const { return toggles_; }

 private:
  double mean_on_;
  double mean_off_;
  bool on_ = false;
  double next_ = -1.0;
  std::vector<double> toggles_;
};

/// The first `count` holding times of a fresh schedule, alternating off, on,
/// off, ... Used to check the empirical means.
std::vector<double> DrawActivity(Rng& rng, double mean_on, double mean_off,
                                 std::size_t count);

}  // namespace ctxwatch::sim

#endif  // CTXWATCH_SIM_RANDOM_HPP_
