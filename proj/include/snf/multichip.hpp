#pragma once

#include <cstdint>
#include <vector>

#include "snf/graph.hpp"

namespace snf {

// Ring all-gather of the horizontally split X: each chip sends its
// current piece to the neighbor every step, N-1 steps total.
struct CommPlan {
    uint32_t num_chips = 1;
    uint32_t steps = 0;
    uint64_t bytes_per_step = 0;
    double link_bytes_per_cycle = 256.0;
    uint64_t hop_latency_cycles = 20;
};

CommPlan plan_ring_allgather(uint32_t num_chips, uint64_t num_vertices,
                             uint64_t num_features, uint64_t elem_bytes);

struct MultichipResult {
    uint64_t cycles = 0;
    uint64_t compute_cycles = 0;
    uint64_t exposed_comm_cycles = 0;
};

// per_step_compute has one entry per piece (N entries). Each of the first
// N-1 steps overlaps compute with the send/receive of the next piece; the
// last piece's compute has nothing left to overlap.
MultichipResult simulate_multichip(const std::vector<uint64_t>& per_step_compute,
                                   const CommPlan& plan);

// Aggregation under the split-X schedule: chip c owns a contiguous
// destination range and accumulates one source piece per step. The
// concatenated output is bit-equal to single-chip aggregation.
struct MultichipAggregate {
    FeatureMatrix output;
    // [chip][step] SIMD compute cycles
    std::vector<std::vector<uint64_t>> per_chip_step_compute;
};

MultichipAggregate multichip_aggregate(const CsrGraph& graph,
                                       const FeatureMatrix& features,
                                       uint32_t num_chips);

// System cycles: steps are synchronized across the ring, so each step
// takes the max over chips of max(compute, comm).
uint64_t multichip_system_cycles(
    const std::vector<std::vector<uint64_t>>& per_chip_step_compute,
    const CommPlan& plan);

}  // namespace snf
