#include "snf/dataflow.hpp"

#include <algorithm>
#include <stdexcept>

#include "snf/oracle.hpp"

namespace snf {

namespace {

constexpr uint32_t kWordBytes = 4;
constexpr uint32_t kSimdLanes = 16;

bool is_pow2(uint32_t v) { return v != 0 && (v & (v - 1)) == 0; }

uint64_t ceil_div(uint64_t a, uint64_t b) { return (a + b - 1) / b; }

// SIMD cycles to aggregate one edge across `width` feature words.
uint64_t edge_cycles(uint32_t width) { return ceil_div(width, kSimdLanes); }

uint64_t feature_address(uint32_t vertex, uint32_t col, uint32_t num_cols) {
    return (static_cast<uint64_t>(vertex) * num_cols + col) * kWordBytes;
}

void finish_dram_and_cycles(RoundResult& r, const Cache& cache,
                            const MemSpec& mem) {
    uint64_t gran = mem.access_granularity_bytes;
    uint64_t miss_bytes = r.feature_misses * cache.config().block_bytes;
    if (cache.config().capacity_bytes == 0)
        miss_bytes = r.feature_misses * gran;
    r.dram_bytes = miss_bytes +
                   round_up(r.topology_reads * kWordBytes, gran) +
                   round_up(r.output_writes * kWordBytes, gran);
    r.cycles = round_cycles(r.cycles, r.dram_bytes, mem);
}

}  // namespace

TileConfig TileConfig::uniform(uint32_t b_f, uint32_t b_v) {
    if (b_v == 0 || b_v > kUnitColumns || !is_pow2(b_v))
        throw std::runtime_error("B_V must be a power of two in [1, 64]");
    TileConfig t;
    t.num_slices = b_f;
    t.tile_width_arr.assign(b_v, kUnitColumns / b_v);
    return t;
}

void TileConfig::validate() const {
    if (num_slices == 0) throw std::runtime_error("B_F must be >= 1");
    uint32_t sum = 0;
    for (uint32_t w : tile_width_arr) {
        if (!is_pow2(w)) throw std::runtime_error("strip widths must be powers of two");
        sum += w;
    }
    if (sum != kUnitColumns)
        throw std::runtime_error("strip widths must sum to 64");
}

uint32_t unit_column_width(uint32_t num_vertices) {
    return static_cast<uint32_t>(ceil_div(std::max(num_vertices, 1u), kUnitColumns));
}

std::vector<uint32_t> strip_vertex_bounds(uint32_t num_vertices,
                                          const std::vector<uint32_t>& widths) {
    uint32_t u = unit_column_width(num_vertices);
    std::vector<uint32_t> bounds{0};
    uint32_t units = 0;
    for (uint32_t w : widths) {
        units += w;
        bounds.push_back(std::min<uint32_t>(units * u, num_vertices));
    }
    bounds.back() = num_vertices;
    return bounds;
}

RoundResult aggregate_round_results(const std::vector<RoundResult>& rounds) {
    RoundResult t;
    for (const auto& r : rounds) {
        t.cycles += r.cycles;
        t.topology_reads += r.topology_reads;
        t.feature_read_requests += r.feature_read_requests;
        t.feature_misses += r.feature_misses;
        t.output_writes += r.output_writes;
        t.dram_bytes += r.dram_bytes;
        t.macs += r.macs;
        for (int s = 0; s < kUnitColumns; s++) {
            t.per_unit[s].first += r.per_unit[s].first;
            t.per_unit[s].second += r.per_unit[s].second;
        }
    }
    return t;
}

RoundResult run_slice(const CsrGraph& graph, const TiledCsrIndex& index,
                      const FeatureMatrix& features, uint32_t col_begin,
                      uint32_t col_end, Cache& cache, const MemSpec& mem,
                      Traversal traversal, uint32_t n_engines,
                      const std::vector<uint32_t>& engine_bounds,
                      FeatureMatrix& output) {
    const uint32_t V = graph.num_vertices;
    const uint32_t F = features.cols;
    const uint32_t width = col_end - col_begin;
    const size_t S = index.num_strips();
    const uint32_t unit = unit_column_width(V);

    RoundResult res;
    std::vector<uint64_t> engine_compute(n_engines, 0);
    std::vector<fxacc_t> acc(static_cast<size_t>(V) * width, 0);

    const auto& base_stats = cache.stats();
    uint64_t misses_before = base_stats.total_misses;
    auto per_unit_before = base_stats.per_strip;

    // one destination row's edges within one source strip
    auto process_row = [&](uint32_t v, size_t strip, uint32_t engine) {
        res.topology_reads += 1;  // row pointer for this (row, strip)
        for (uint64_t e = index.sub_begin(v, strip); e < index.sub_end(v, strip);
             e++) {
            uint32_t src = graph.col_idx[e];
            fx_t w = graph.edge_weight[e];
            res.topology_reads += 1;
            int unit_col = static_cast<int>(src / unit);
            for (uint32_t c = 0; c < width; c++) {
                cache.access(feature_address(src, col_begin + c, F), unit_col);
                acc[static_cast<size_t>(v) * width + c] +=
                    fx_mul_acc(w, features.at(src, col_begin + c));
            }
            res.feature_read_requests += width;
            res.macs += width;
            engine_compute[engine] += edge_cycles(width);
        }
    };

    auto engine_of = [&](uint32_t v) -> uint32_t {
        if (n_engines == 1) return 0;
        auto it = std::upper_bound(engine_bounds.begin(), engine_bounds.end(), v);
        return static_cast<uint32_t>(it - engine_bounds.begin()) - 1;
    };

    if (traversal == Traversal::repeat_output) {
        // tile-column outer: output partials written once per strip pass
        for (size_t s = 0; s < S; s++) {
            if (n_engines == 1) {
                for (uint32_t v = 0; v < V; v++) process_row(v, s, 0);
            } else {
                // interleave engines round-robin, one row per turn
                std::vector<uint32_t> cursor(engine_bounds.begin(),
                                             engine_bounds.end() - 1);
                bool progress = true;
                while (progress) {
                    progress = false;
                    for (uint32_t g = 0; g < n_engines; g++) {
                        if (cursor[g] < engine_bounds[g + 1]) {
                            process_row(cursor[g]++, s, g);
                            progress = true;
                        }
                    }
                }
            }
            res.output_writes += static_cast<uint64_t>(V) * width;
        }
    } else {
        // destination-strip outer; outputs accumulate and are written once
        for (size_t r = 0; r < S; r++) {
            uint32_t r_begin = index.strip_bounds[r];
            uint32_t r_end = index.strip_bounds[r + 1];
            for (size_t s = 0; s < S; s++)
                for (uint32_t v = r_begin; v < r_end; v++)
                    process_row(v, s, engine_of(v));
        }
        res.output_writes += static_cast<uint64_t>(V) * width;
    }

    for (uint32_t v = 0; v < V; v++)
        for (uint32_t c = 0; c < width; c++)
            output.at(v, col_begin + c) =
                fx_acc_finish(acc[static_cast<size_t>(v) * width + c]);

    res.feature_misses = cache.stats().total_misses - misses_before;
    for (int s = 0; s < kUnitColumns; s++) {
        res.per_unit[s].first =
            cache.stats().per_strip[s].first - per_unit_before[s].first;
        res.per_unit[s].second =
            cache.stats().per_strip[s].second - per_unit_before[s].second;
    }
    res.cycles = *std::max_element(engine_compute.begin(), engine_compute.end());
    finish_dram_and_cycles(res, cache, mem);
    return res;
}

RunOutput run_row_product(const CsrGraph& graph, const FeatureMatrix& features,
                          Cache& cache, const MemSpec& mem) {
    TileConfig t = TileConfig::uniform(1, 1);
    return run_feature_sliced(graph, features, t, cache, mem);
}

namespace {

std::vector<uint32_t> slice_col_bounds(uint32_t num_cols, uint32_t b_f) {
    std::vector<uint32_t> bounds(b_f + 1);
    for (uint32_t s = 0; s <= b_f; s++)
        bounds[s] = static_cast<uint32_t>(
            static_cast<uint64_t>(num_cols) * s / b_f);
    return bounds;
}

}  // namespace

RunOutput run_feature_sliced(const CsrGraph& graph,
                             const FeatureMatrix& features,
                             const TileConfig& tiles, Cache& cache,
                             const MemSpec& mem, Traversal traversal) {
    tiles.validate();
    if (graph.num_vertices != features.rows)
        throw std::runtime_error("feature rows must equal |V|");

    auto bounds = strip_vertex_bounds(graph.num_vertices, tiles.tile_width_arr);
    TiledCsrIndex index = tile_offsets(graph, bounds);
    auto cols = slice_col_bounds(features.cols, tiles.num_slices);

    RunOutput run;
    run.output.rows = features.rows;
    run.output.cols = features.cols;
    run.output.data.assign(
        static_cast<size_t>(features.rows) * features.cols, 0);

    std::vector<uint32_t> one_engine{0, graph.num_vertices};
    for (uint32_t s = 0; s < tiles.num_slices; s++) {
        cache.reset(/*keep_contents=*/true);
        run.rounds.push_back(run_slice(graph, index, features, cols[s],
                                       cols[s + 1], cache, mem, traversal, 1,
                                       one_engine, run.output));
    }
    return run;
}

RunOutput run_column_product(const CsrGraph& graph,
                             const FeatureMatrix& features,
                             const ColProductConfig& cfg, Cache& cache,
                             const MemSpec& mem) {
    if (graph.num_vertices != features.rows)
        throw std::runtime_error("feature rows must equal |V|");
    const uint32_t V = graph.num_vertices;
    const uint32_t F = features.cols;
    uint32_t group = cfg.feature_column_group == 0 ? F : cfg.feature_column_group;
    if (group == 0 || group > F)
        throw std::runtime_error("invalid feature column group");
    if (cfg.adjacency_strips == 0 || cfg.output_strips == 0)
        throw std::runtime_error("invalid strip counts");

    // transposed (CSC-equivalent) index, built as preprocessing
    CsrGraph tg = csr_transpose(graph);
    uint32_t b_a = std::min(cfg.adjacency_strips, std::max(V, 1u));
    std::vector<uint32_t> strip_bounds(b_a + 1);
    for (uint32_t s = 0; s <= b_a; s++)
        strip_bounds[s] =
            static_cast<uint32_t>(static_cast<uint64_t>(V) * s / b_a);

    const uint32_t unit = unit_column_width(V);
    RoundResult res;
    std::vector<fxacc_t> acc(static_cast<size_t>(V) * F, 0);

    uint32_t num_groups = static_cast<uint32_t>(ceil_div(F, group));
    for (uint32_t g = 0; g < num_groups; g++) {
        uint32_t c0 = g * group;
        uint32_t c1 = std::min(c0 + group, F);
        uint32_t gw = c1 - c0;
        for (uint32_t a = 0; a < b_a; a++) {
            for (uint32_t j = strip_bounds[a]; j < strip_bounds[a + 1]; j++) {
                res.topology_reads += 1;  // column pointer
                uint64_t e0 = tg.row_begin(j), e1 = tg.row_end(j);
                if (e0 == e1) continue;
                int unit_col = static_cast<int>(j / unit);
                for (uint32_t c = c0; c < c1; c++)
                    cache.access(feature_address(j, c, F), unit_col);
                res.feature_read_requests += gw;
                for (uint64_t e = e0; e < e1; e++) {
                    uint32_t dst = tg.col_idx[e];
                    fx_t w = tg.edge_weight[e];
                    res.topology_reads += 1;
                    for (uint32_t c = c0; c < c1; c++)
                        acc[static_cast<size_t>(dst) * F + c] +=
                            fx_mul_acc(w, features.at(j, c));
                    res.macs += gw;
                    res.cycles += edge_cycles(gw);
                }
            }
            // output partials touched once per adjacency strip pass
            res.output_writes += static_cast<uint64_t>(V) * gw;
        }
    }

    RunOutput run;
    run.output.rows = V;
    run.output.cols = F;
    run.output.data.resize(static_cast<size_t>(V) * F);
    for (size_t i = 0; i < acc.size(); i++)
        run.output.data[i] = fx_acc_finish(acc[i]);

    res.feature_misses = cache.stats().total_misses;
    res.per_unit = cache.stats().per_strip;
    finish_dram_and_cycles(res, cache, mem);
    run.rounds.push_back(res);
    return run;
}

CombinationResult run_combination(const FeatureMatrix& features,
                                  const WeightMatrix& weights,
                                  const SystolicSpec& spec) {
    if (spec.rows == 0 || spec.cols == 0)
        throw std::runtime_error("systolic array dims must be positive");
    CombinationResult r;
    if (features.rows == 0 || weights.cols == 0) {
        r.output.rows = features.rows;
        r.output.cols = weights.cols;
        return r;
    }
    r.output = dense_combine(features, weights);
    uint64_t m = features.rows, k = features.cols, n = weights.cols;
    r.cycles = ceil_div(m, spec.rows) * ceil_div(n, spec.cols) *
               (k + spec.rows + spec.cols - 2);
    return r;
}

std::vector<uint32_t> partition_equal_edges(const CsrGraph& graph,
                                            uint32_t n_engines) {
    if (n_engines == 0) throw std::runtime_error("need at least one engine");
    if (n_engines > graph.num_vertices)
        throw std::runtime_error("more engines than vertices");
    std::vector<uint32_t> bounds(n_engines + 1);
    bounds[0] = 0;
    bounds[n_engines] = graph.num_vertices;
    for (uint32_t k = 1; k < n_engines; k++) {
        double target = static_cast<double>(graph.num_edges) * k / n_engines;
        uint32_t v = bounds[k - 1] + 1;
        while (v < graph.num_vertices &&
               static_cast<double>(graph.row_ptr[v]) < target)
            v++;
        // leave room for the remaining engines
        bounds[k] = std::min(v, graph.num_vertices - (n_engines - k));
        bounds[k] = std::max(bounds[k], bounds[k - 1] + 1);
    }
    return bounds;
}

RunOutput run_multi_engine(const CsrGraph& graph, const FeatureMatrix& features,
                           const TileConfig& tiles, uint32_t n_engines,
                           Cache& shared_cache, const MemSpec& mem) {
    tiles.validate();
    auto engine_bounds = partition_equal_edges(graph, n_engines);
    auto bounds = strip_vertex_bounds(graph.num_vertices, tiles.tile_width_arr);
    TiledCsrIndex index = tile_offsets(graph, bounds);
    auto cols = slice_col_bounds(features.cols, tiles.num_slices);

    RunOutput run;
    run.output.rows = features.rows;
    run.output.cols = features.cols;
    run.output.data.assign(
        static_cast<size_t>(features.rows) * features.cols, 0);
    for (uint32_t s = 0; s < tiles.num_slices; s++) {
        shared_cache.reset(/*keep_contents=*/true);
        run.rounds.push_back(run_slice(graph, index, features, cols[s],
                                       cols[s + 1], shared_cache, mem,
                                       Traversal::repeat_output, n_engines,
                                       engine_bounds, run.output));
    }
    return run;
}

}  // namespace snf
