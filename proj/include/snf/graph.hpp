#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "snf/fixed.hpp"

namespace snf {

// Graph topology in compressed sparse row form. Rows are sorted and
// deduplicated; edge weights are Q16.16.
struct CsrGraph {
    uint32_t num_vertices = 0;
    uint64_t num_edges = 0;
    std::vector<uint64_t> row_ptr;   // |V|+1 offsets
    std::vector<uint32_t> col_idx;   // |E| source-vertex ids
    std::vector<fx_t> edge_weight;   // |E| Q16.16

    uint64_t row_begin(uint32_t v) const { return row_ptr[v]; }
    uint64_t row_end(uint32_t v) const { return row_ptr[v + 1]; }
    uint32_t degree(uint32_t v) const {
        return static_cast<uint32_t>(row_ptr[v + 1] - row_ptr[v]);
    }
};

struct FeatureMatrix {
    uint32_t rows = 0;
    uint32_t cols = 0;
    std::vector<fx_t> data;  // row-major Q16.16

    fx_t at(uint32_t r, uint32_t c) const { return data[static_cast<size_t>(r) * cols + c]; }
    fx_t& at(uint32_t r, uint32_t c) { return data[static_cast<size_t>(r) * cols + c]; }
};

using WeightMatrix = FeatureMatrix;

// Per-(row, strip) sub-ranges into col_idx. strip_bounds has S+1 entries
// partitioning [0, |V|); offsets has |V|*(S+1) entries, where the edges of
// row r inside strip s are [offsets[r*(S+1)+s], offsets[r*(S+1)+s+1]).
struct TiledCsrIndex {
    std::vector<uint32_t> strip_bounds;
    std::vector<uint64_t> offsets;

    size_t num_strips() const { return strip_bounds.size() - 1; }
    uint64_t sub_begin(uint32_t row, size_t strip) const {
        return offsets[static_cast<size_t>(row) * strip_bounds.size() + strip];
    }
    uint64_t sub_end(uint32_t row, size_t strip) const {
        return offsets[static_cast<size_t>(row) * strip_bounds.size() + strip + 1];
    }
};

enum class GraphModel { uniform, rmat };

// Builds a CSR graph from (src, dst) pairs; sorts and deduplicates rows.
CsrGraph build_csr(uint32_t num_vertices,
                   std::vector<std::pair<uint32_t, uint32_t>> edges);

// Parses "src dst" lines; '#' starts a comment line. |V| defaults to
// 1 + max id. Throws std::runtime_error with a line number on bad input.
CsrGraph load_edge_list(std::string_view text,
                        std::optional<uint32_t> num_vertices = std::nullopt);

std::string to_edge_list(const CsrGraph& g);

CsrGraph gen_synthetic(GraphModel model, uint32_t num_vertices,
                       uint64_t num_edges, uint64_t seed);

// d-regular ring lattice: vertex i connects to (i+1 .. i+d) mod |V|.
CsrGraph gen_regular_ring(uint32_t num_vertices, uint32_t degree);

FeatureMatrix gen_features(uint32_t num_vertices, uint32_t num_features,
                           uint64_t seed);

// I - D^{-1/2} A D^{-1/2}; input weights ignored, degree-0 vertices keep
// an identity diagonal. Every vertex gets an explicit diagonal entry.
CsrGraph normalize_laplacian(const CsrGraph& g);

TiledCsrIndex tile_offsets(const CsrGraph& g,
                           const std::vector<uint32_t>& strip_bounds);

CsrGraph csr_transpose(const CsrGraph& g);

// Binary formats: SNFG (graph) and SNFX (feature matrix), little-endian.
void save_graph(const CsrGraph& g, const std::string& path);
CsrGraph load_graph(const std::string& path);
void save_features(const FeatureMatrix& m, const std::string& path);
FeatureMatrix load_features(const std::string& path);

}  // namespace snf
