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

#ifndef CTXWATCH_DETECT_CHECKER_HPP_
#define CTXWATCH_DETECT_CHECKER_HPP_

#include <cstdint>
#include <functional>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ctxwatch/detect/fifo_buffers.hpp"
#include "ctxwatch/eca/collecting_process.hpp"

namespace ctxwatch::detect {

/// A global state as one seq index per process.
using Cut = std::vector<std::uint64_t>;

std::string CutToString(const Cut& cut);
/// Parses "i0,i1,..."; throws kParseError.
Cut ParseCut(std::string_view text);
/// Componentwise >= and not equal.
bool StrictlyAbove(const Cut& a, const Cut& b);

enum class DetectionMode { kOnce, kContinuous };

std::string_view DetectionModeName(DetectionMode m);
std::optional<DetectionMode> ParseDetectionMode(std::string_view name);

struct Detection {
  Cut witness;
  /// Issued at finalization rather than online.
  bool at_finalization = false;
};

using DetectionListener = std::function<void(const Detection&)>;

/**
 * Base of both checkers: accepts the state stream of a detection group,
 * restores per-process order, forwards states to the concrete algorithm and
 * finalizes once every process has terminated.
 *
 * Entry points are serialized by an internal mutex, so collectors on
 * different threads may share one checker. The listener runs under that
 * lock and must not call back into the checker.
 */
class Checker : public eca::StateSink {
 public:
  Checker(std::size_t n, DetectionMode mode);
  ~Checker() override = default;

  std::size_t group_size() const { return buffers_.size(); }
  DetectionMode mode() const { return mode_; }

  void SetListener(DetectionListener listener);

  void Deliver(const LocalState& opened) override;
  void Terminated(ProcessId owner, const VectorClock& final_clock) override;

  /// Terminate marker for process p after `state_count` states. Trace
  /// replay uses this form since it has no final clock.
  void TerminateAfter(ProcessId p, std::uint64_t state_count);

  /// Throws kStalledStream when states are stuck behind a gap or a
  /// terminated process still misses states.
  void CheckDrained() const;

  bool finalized() const;
  std::vector<Detection> detections() const;
  bool detected() const;

  /// Stops online detection (used after a group is torn down).
  void Halt();

 protected:
  /// Called once per state, in per-process seq order.
  virtual void OnState(const LocalState& s) = 0;
  virtual void OnTerminate(ProcessId p) { (void)p; }
  /// Called once after every process has terminated.
  virtual void OnFinalize() {}

  /// Records a detection and notifies the listener. In once mode only the
  /// first report is kept. Returns false when the report was dropped.
  bool Report(Detection d);

  /// True when no further online work is needed (once mode after a hit).
  bool done() const {
    return halted_ || (mode_ == DetectionMode::kOnce && !detections_.empty());
  }
  bool IsTerminated(std::size_t p) const { return terminated_[p]; }

 private:
  void ApplyPendingTerminations();

  DetectionMode mode_;
  FifoBuffers buffers_;
  std::vector<std::optional<std::uint64_t>> expected_count_;
  std::vector<bool> terminated_;
  std::size_t terminated_total_ = 0;
  std::size_t pending_terminations_ = 0;
  bool finalized_ = false;
  bool halted_ = false;
  std::vector<Detection> detections_;
  DetectionListener listener_;
  mutable std::recursive_mutex mu_;
};

}  // namespace ctxwatch::detect

#endif  // CTXWATCH_DETECT_CHECKER_HPP_
