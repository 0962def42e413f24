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

#ifndef CTXWATCH_CORE_VECTOR_CLOCK_HPP_
#define CTXWATCH_CORE_VECTOR_CLOCK_HPP_

#include <compare>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace ctxwatch {

/// Dense index of a context collecting process within one detection group.
struct ProcessId {
  std::size_t index = 0;

  friend auto operator<=>(const ProcessId&, const ProcessId&) = default;
};

/**
 * Mattern/Fidge vector clock over a fixed group of n processes.
 *
 * Component i counts the events of process i known to the holder. The length
 * is fixed at construction; all binary operations require equal lengths and
 * throw kIncompatibleClocks otherwise.
 */
class VectorClock {
 public:
  using Counter = std::uint64_t;

  VectorClock() = default;

  /// All-zero clock for a group of n processes. Throws kInvalidGroupSize on 0.
  static VectorClock Zero(std::size_t n);

  /// Builds a clock from explicit components (used by trace replay and
  /// tests). Throws kInvalidGroupSize on an empty vector.
  static VectorClock FromComponents(std::vector<Counter> components);

  std::size_t size() const { return components_.size(); }
  Counter operator[](std::size_t i) const { return components_[i]; }
  Counter at(ProcessId p) const;
  const std::vector<Counter>& components() const { return components_; }

  /// Copy with component p incremented by one.
  VectorClock Tick(ProcessId p) const;

  /// Componentwise maximum.
  VectorClock Merge(const VectorClock& other) const;

  /// Componentwise <=. Irreflexive happen-before is Leq && !=.
  bool Leq(const VectorClock& other) const;

  /// Neither Leq in either direction.
  bool ConcurrentWith(const VectorClock& other) const;

  /// "c0,c1,...": the trace-format rendering.
  std::string ToString() const;

  friend bool operator==(const VectorClock&, const VectorClock&) = default;

 private:
  explicit VectorClock(std::vector<Counter> components)
      : components_(std::move(components)) {}

  void CheckSameSize(const VectorClock& other) const;

  std::vector<Counter> components_;
};

}  // namespace ctxwatch

#endif  // CTXWATCH_CORE_VECTOR_CLOCK_HPP_
