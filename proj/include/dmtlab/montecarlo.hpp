// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The dmtlab Authors

#pragma once

#include <cstdint>
#include <functional>

#include "dmtlab/rng.hpp"

namespace dmtlab {

/// Running sums for a batch of trials. Only integer counters and sums that are
/// reduced in a fixed order, so totals do not depend on the thread count.
struct TrialTally {
  std::uint64_t trials = 0;
  std::uint64_t outages = 0;
  std::uint64_t index_up = 0;    // transmitter decoded a higher level
  std::uint64_t index_down = 0;  // transmitter decoded a lower level
  double fwd_power = 0.0;
  double fb_power = 0.0;

  void merge(const TrialTally& other);
};

/// Trials are cut into fixed blocks of this size; block b always draws from
/// RandomStream(seed, tag, b).
inline constexpr std::uint64_t kBlockTrials = 4096;

using BlockBody =
    std::function<void(RandomStream& rng, std::uint64_t count, TrialTally& tally)>;

/// Runs `trials` trials through `body` on up to `parallelism` threads.
/// Exceptions thrown by a worker are rethrown on the calling thread.
TrialTally run_blocks(std::uint64_t trials, std::uint64_t seed, StreamTag tag,
                      int parallelism, const BlockBody& body);

}  // namespace dmtlab
