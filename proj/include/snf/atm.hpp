#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "snf/dataflow.hpp"

namespace snf {

enum class AtmPhase { coarse, fine_split, fine_merge, settled };
enum class AtmDirection { undecided, halving, merging };

const char* to_string(AtmPhase p);
const char* to_string(AtmDirection d);

using UnitStats = std::array<std::pair<uint64_t, uint64_t>, kUnitColumns>;

// Strip miss ratios from the 64 unit-column (access, miss) counters.
// Strips with zero accesses get ratio 0.
std::vector<double> fold_unit_stats(const UnitStats& unit_stats,
                                    const std::vector<uint32_t>& widths);

struct AtmRound {
    uint64_t cycles = 0;
    std::vector<uint32_t> widths;
    std::vector<double> miss_ratio;
};

// Status table of the configuration controller: current/optimal round,
// morphing phase and direction, plus coarse-probe bookkeeping.
struct AtmState {
    AtmPhase phase = AtmPhase::coarse;
    AtmDirection direction = AtmDirection::undecided;
    AtmRound round_cur;
    AtmRound round_opt;
    int tile_updated_idx = -1;

    // coarse probe schedule: 0 = start pending, 1 = halving probe
    // pending, 2 = merging probe pending, 3 = committed walk
    int probe_stage = 0;
    std::vector<uint32_t> start_widths;
    uint64_t start_cycles = 0;
    uint64_t halve_probe_cycles = 0;
    bool halve_probed = false;

    // config the next round should run with
    std::vector<uint32_t> pending_widths;
};

// Status-table footprint in bytes (4-byte entries), for the <=1.5KB check.
size_t atm_table_bytes();

AtmState atm_init(uint32_t start_width = 32);

// Consumes the stats of the round that just ran with state.pending_widths
// and returns the tile_width_arr for the next round.
std::vector<uint32_t> atm_step(AtmState& state, uint64_t cycles,
                               const UnitStats& unit_stats);

struct AtmTraceRow {
    uint32_t round = 0;
    std::vector<uint32_t> widths;
    RoundResult result;
    AtmPhase phase = AtmPhase::coarse;
    AtmDirection direction = AtmDirection::undecided;
};

struct SnfConfig {
    uint32_t start_width = 32;
    // 0: derive B_F from the 64-byte slice-width rule (B_F = |F|*4/64,
    // floored to >= 1); nonzero overrides it for desk-scale runs.
    uint32_t b_f_override = 0;
    bool flush_cache_between_rounds = false;
};

struct SnfResult {
    FeatureMatrix output;
    std::vector<AtmTraceRow> trace;
    std::vector<uint32_t> final_widths;
    AtmState state;

    RoundResult total() const;
};

uint32_t slice_count_for(uint32_t num_features, uint32_t b_f_override);

// Feature-sliced aggregation with ATM tuning the vertex tiling between
// rounds.
SnfResult run_snf(const CsrGraph& graph, const FeatureMatrix& features,
                  Cache& cache, const MemSpec& mem, const SnfConfig& cfg);

}  // namespace snf
