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

#include "ctxwatch/sim/random.hpp"

#include <cmath>
#include <string>

#include "ctxwatch/error.hpp"

namespace ctxwatch::sim {

std::uint64_t SplitMix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

Rng::Rng(std::uint64_t seed) {
  std::uint64_t s = seed;
  engine_.seed(SplitMix64(s));
}

Rng Rng::Stream(std::uint64_t master, std::uint64_t index) {
  std::uint64_t s = master ^ (0x632be59bd9b4e019ull * (index + 1));
  return Rng(SplitMix64(s));
}

double Rng::Uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

std::int64_t Rng::UniformInt(std::int64_t lo, std::int64_t hi) {
  if (hi < lo) std::swap(lo, hi);
  const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
  if (span == 0) return static_cast<std::int64_t>(engine_());
  // Rejection keeps the draw unbiased.
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % span);
  std::uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return lo + static_cast<std::int64_t>(x % span);
}

double DrawExponential(Rng& rng, double mean) {
  if (!(mean > 0.0)) {
    throw Error(ErrorCode::kInvalidConfig,
                "exponential mean must be positive, got " + std::to_string(mean));
  }
  return -mean * std::log1p(-rng.Uniform());
}

ActivitySchedule::ActivitySchedule(double mean_on, double mean_off)
    : mean_on_(mean_on), mean_off_(mean_off) {
  if (!(mean_on > 0.0) || !(mean_off > 0.0)) {
    throw Error(ErrorCode::kInvalidConfig, "activity means must be positive");
  }
}

bool ActivitySchedule::At(Rng& rng, double t) {
  if (next_ < 0.0) next_ = DrawExponential(rng, mean_off_);
  while (next_ <= t) {
    toggles_.push_back(next_);
    on_ = !on_;
    next_ += DrawExponential(rng, on_ ? mean_on_ : mean_off_);
  }
  return on_;
}

std::vector<double> DrawActivity(Rng& rng, double mean_on, double mean_off,
                                 std::size_t count) {
  if (!(mean_on > 0.0) || !(mean_off > 0.0)) {
    throw Error(ErrorCode::kInvalidConfig, "activity means must be positive");
  }
  std::vector<double> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    out.push_back(DrawExponential(rng, i % 2 == 0 ? mean_off : mean_on));
  }
  return out;
}

}  // namespace ctxwatch::sim
