#pragma once

#include <array>
#include <cstdint>
#include <utility>
#include <vector>

#include "snf/cache.hpp"
#include "snf/graph.hpp"
#include "snf/memory.hpp"

namespace snf {

// Vertex tiling over the 64x64 unit-tile grid: tile_width_arr holds the
// width of each vertical strip in unit columns (powers of two summing
// to 64). Uniform tilings have all widths equal; B_V = 64/width.
struct TileConfig {
    uint32_t num_slices = 1;                 // B_F
    std::vector<uint32_t> tile_width_arr{64};

    static TileConfig uniform(uint32_t b_f, uint32_t b_v);
    void validate() const;
    size_t num_strips() const { return tile_width_arr.size(); }
};

struct ColProductConfig {
    uint32_t adjacency_strips = 1;   // B_A
    uint32_t output_strips = 1;      // B_O
    uint32_t feature_column_group = 0;  // 0 means all of |F| at once
};

struct SystolicSpec {
    uint32_t rows = 32;
    uint32_t cols = 32;
};

enum class Traversal { repeat_output, repeat_input };

struct RoundResult {
    uint64_t cycles = 0;
    uint64_t topology_reads = 0;          // words
    uint64_t feature_read_requests = 0;   // words, pre-cache
    uint64_t feature_misses = 0;          // words reaching memory
    uint64_t output_writes = 0;           // words
    uint64_t dram_bytes = 0;
    uint64_t macs = 0;
    std::array<std::pair<uint64_t, uint64_t>, kUnitColumns> per_unit{};

    uint64_t total_words() const {
        return topology_reads + feature_read_requests + output_writes;
    }
    double hit_rate() const {
        return feature_read_requests == 0
                   ? 0.0
                   : 1.0 - static_cast<double>(feature_misses) /
                               static_cast<double>(feature_read_requests);
    }
};

RoundResult aggregate_round_results(const std::vector<RoundResult>& rounds);

struct RunOutput {
    FeatureMatrix output;
    std::vector<RoundResult> rounds;

    RoundResult total() const { return aggregate_round_results(rounds); }
};

// Unit-column width for a graph: ceil(|V| / 64).
uint32_t unit_column_width(uint32_t num_vertices);

// Vertex boundaries of the strips described by tile_width_arr.
std::vector<uint32_t> strip_vertex_bounds(uint32_t num_vertices,
                                          const std::vector<uint32_t>& widths);

RunOutput run_row_product(const CsrGraph& graph, const FeatureMatrix& features,
                          Cache& cache, const MemSpec& mem);

RunOutput run_feature_sliced(const CsrGraph& graph,
                             const FeatureMatrix& features,
                             const TileConfig& tiles, Cache& cache,
                             const MemSpec& mem,
                             Traversal traversal = Traversal::repeat_output);

RunOutput run_column_product(const CsrGraph& graph,
                             const FeatureMatrix& features,
                             const ColProductConfig& cfg, Cache& cache,
                             const MemSpec& mem);

struct CombinationResult {
    FeatureMatrix output;
    uint64_t cycles = 0;
};

// Weight-stationary fold model: ceil(M/R)*ceil(N/C)*(K+R+C-2) cycles.
CombinationResult run_combination(const FeatureMatrix& features,
                                  const WeightMatrix& weights,
                                  const SystolicSpec& spec);

// Contiguous destination-vertex ranges with near-equal edge counts.
// Returns n+1 boundaries.
std::vector<uint32_t> partition_equal_edges(const CsrGraph& graph,
                                            uint32_t n_engines);

RunOutput run_multi_engine(const CsrGraph& graph, const FeatureMatrix& features,
                           const TileConfig& tiles, uint32_t n_engines,
                           Cache& shared_cache, const MemSpec& mem);

// One feature slice under an explicit strip tiling; the building block
// shared by run_feature_sliced, run_multi_engine and the ATM loop.
RoundResult run_slice(const CsrGraph& graph, const TiledCsrIndex& index,
                      const FeatureMatrix& features, uint32_t col_begin,
                      uint32_t col_end, Cache& cache, const MemSpec& mem,
                      Traversal traversal, uint32_t n_engines,
                      const std::vector<uint32_t>& engine_bounds,
                      FeatureMatrix& output);

}  // namespace snf
