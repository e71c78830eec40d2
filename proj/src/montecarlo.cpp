// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The dmtlab Authors

#include "dmtlab/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>
#include <vector>

namespace dmtlab {

void TrialTally::merge(const TrialTally& other) {
  trials += other.trials;
  outages += other.outages;
  index_up += other.index_up;
  index_down += other.index_down;
  fwd_power += other.fwd_power;
  fb_power += other.fb_power;
}

TrialTally run_blocks(std::uint64_t trials, std::uint64_t seed, StreamTag tag,
                      int parallelism, const BlockBody& body) {
  if (parallelism < 1) throw std::invalid_argument("parallelism must be >= 1");
  const std::uint64_t blocks = (trials + kBlockTrials - 1) / kBlockTrials;
  std::vector<TrialTally> per_block(blocks);
  std::atomic<std::uint64_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto worker = [&] {
    for (;;) {
      const std::uint64_t b = next.fetch_add(1);
      if (b >= blocks) return;
      try {
        RandomStream rng(seed, tag, b);
        const std::uint64_t count = std::min(kBlockTrials, trials - b * kBlockTrials);
        body(rng, count, per_block[b]);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(blocks);
        return;
      }
    }
  };

  const auto threads = static_cast<std::uint64_t>(parallelism);
  if (threads == 1 || blocks <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    const std::uint64_t spawn = std::min(threads, blocks);
    pool.reserve(spawn);
    for (std::uint64_t t = 0; t < spawn; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);

  TrialTally total;
  for (const auto& t : per_block) total.merge(t);
  return total;
}

}  // namespace dmtlab
