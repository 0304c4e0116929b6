#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "snf/atm.hpp"
#include "snf/cache.hpp"
#include "snf/cost.hpp"
#include "snf/dataflow.hpp"
#include "snf/experiment.hpp"
#include "snf/graph.hpp"
#include "snf/memory.hpp"
#include "snf/multichip.hpp"
#include "snf/oracle.hpp"

namespace py = pybind11;
using namespace snf;

namespace {

py::dict result_dict(const RoundResult& r) {
    py::dict d;
    d["cycles"] = r.cycles;
    d["topology_reads"] = r.topology_reads;
    d["feature_read_requests"] = r.feature_read_requests;
    d["feature_misses"] = r.feature_misses;
    d["output_writes"] = r.output_writes;
    d["dram_bytes"] = r.dram_bytes;
    d["macs"] = r.macs;
    d["total_words"] = r.total_words();
    d["hit_rate"] = r.hit_rate();
    return d;
}

}  // namespace

PYBIND11_MODULE(snfsim, m) {
    m.doc() = "GCN accelerator dataflow simulator";

    py::class_<CsrGraph>(m, "CsrGraph")
        .def_readonly("num_vertices", &CsrGraph::num_vertices)
        .def_readonly("num_edges", &CsrGraph::num_edges)
        .def_readonly("row_ptr", &CsrGraph::row_ptr)
        .def_readonly("col_idx", &CsrGraph::col_idx)
        .def_readonly("edge_weight", &CsrGraph::edge_weight);

    py::class_<FeatureMatrix>(m, "FeatureMatrix")
        .def_readonly("rows", &FeatureMatrix::rows)
        .def_readonly("cols", &FeatureMatrix::cols)
        .def_readonly("data", &FeatureMatrix::data);

    m.def("load_edge_list",
          [](const std::string& text) { return load_edge_list(text); });
    m.def("gen_synthetic",
          [](const std::string& model, uint32_t v, uint64_t e, uint64_t seed) {
              return gen_synthetic(model == "rmat" ? GraphModel::rmat
                                                   : GraphModel::uniform,
                                   v, e, seed);
          },
          py::arg("model"), py::arg("vertices"), py::arg("edges"),
          py::arg("seed"));
    m.def("gen_regular_ring", &gen_regular_ring);
    m.def("gen_features", &gen_features, py::arg("vertices"),
          py::arg("features"), py::arg("seed"));
    m.def("normalize_laplacian", &normalize_laplacian);
    m.def("save_graph", &save_graph);
    m.def("load_graph", &load_graph);

    m.def("dense_aggregate", &dense_aggregate);
    m.def("dense_combine", &dense_combine);
    m.def("gcn_layer",
          [](const CsrGraph& a, const FeatureMatrix& x, const WeightMatrix& w,
             const std::string& act, const std::string& order) {
              return gcn_layer(a, x, w,
                               act == "relu" ? Activation::relu : Activation::none,
                               order == "combine_first"
                                   ? LayerOrder::combine_first
                                   : LayerOrder::aggregate_first);
          },
          py::arg("laplacian"), py::arg("features"), py::arg("weights"),
          py::arg("activation") = "relu", py::arg("order") = "aggregate_first");

    auto make_cache_config = [](uint64_t capacity, uint32_t ways,
                                uint32_t block, const std::string& repl,
                                uint64_t seed) {
        CacheConfig c;
        c.capacity_bytes = capacity;
        c.ways = ways;
        c.block_bytes = block;
        c.replacement = repl == "random" ? Replacement::random
                        : repl == "rrip" ? Replacement::rrip
                                         : Replacement::lru;
        c.random_seed = seed;
        return c;
    };

    m.def("run_row_product",
          [make_cache_config](const CsrGraph& g, const FeatureMatrix& x,
                              uint64_t cache_bytes, uint32_t ways,
                              uint32_t block, double bytes_per_cycle,
                              uint64_t latency) {
              Cache cache(make_cache_config(cache_bytes, ways, block, "lru", 0));
              MemSpec mem{bytes_per_cycle, latency, block};
              auto run = run_row_product(g, x, cache, mem);
              return py::make_tuple(run.output, result_dict(run.total()));
          },
          py::arg("graph"), py::arg("features"), py::arg("cache_bytes"),
          py::arg("ways") = 16, py::arg("block") = 64,
          py::arg("bytes_per_cycle") = 21.3, py::arg("latency") = 0);

    m.def("run_feature_sliced",
          [make_cache_config](const CsrGraph& g, const FeatureMatrix& x,
                              uint32_t b_f, const std::vector<uint32_t>& widths,
                              uint64_t cache_bytes, uint32_t ways,
                              uint32_t block, double bytes_per_cycle,
                              uint64_t latency) {
              TileConfig t;
              t.num_slices = b_f;
              t.tile_width_arr = widths;
              Cache cache(make_cache_config(cache_bytes, ways, block, "lru", 0));
              MemSpec mem{bytes_per_cycle, latency, block};
              auto run = run_feature_sliced(g, x, t, cache, mem);
              std::vector<py::dict> rounds;
              for (const auto& r : run.rounds) rounds.push_back(result_dict(r));
              return py::make_tuple(run.output, rounds,
                                    result_dict(run.total()));
          },
          py::arg("graph"), py::arg("features"), py::arg("b_f"),
          py::arg("widths"), py::arg("cache_bytes"), py::arg("ways") = 16,
          py::arg("block") = 64, py::arg("bytes_per_cycle") = 21.3,
          py::arg("latency") = 0);

    m.def("run_snf",
          [make_cache_config](const CsrGraph& g, const FeatureMatrix& x,
                              uint64_t cache_bytes, uint32_t start_width,
                              uint32_t b_f, uint32_t ways, uint32_t block,
                              double bytes_per_cycle, uint64_t latency) {
              Cache cache(make_cache_config(cache_bytes, ways, block, "lru", 0));
              MemSpec mem{bytes_per_cycle, latency, block};
              SnfConfig cfg;
              cfg.start_width = start_width;
              cfg.b_f_override = b_f;
              auto res = run_snf(g, x, cache, mem, cfg);
              std::vector<py::dict> rounds;
              for (const auto& row : res.trace) {
                  py::dict d = result_dict(row.result);
                  d["round"] = row.round;
                  d["tile_width_arr"] = row.widths;
                  d["phase"] = to_string(row.phase);
                  d["direction"] = to_string(row.direction);
                  rounds.push_back(d);
              }
              return py::make_tuple(res.output, rounds, res.final_widths);
          },
          py::arg("graph"), py::arg("features"), py::arg("cache_bytes"),
          py::arg("start_width") = 32, py::arg("b_f") = 0, py::arg("ways") = 16,
          py::arg("block") = 64, py::arg("bytes_per_cycle") = 21.3,
          py::arg("latency") = 0);

    m.def("m_row",
          [](uint64_t v, uint64_t e, uint64_t f, double miss) {
              auto r = m_row(v, e, f, MissRateFn::constant(miss));
              return py::make_tuple(r.topology_words, r.cached_feature_words,
                                    r.output_words, r.total_words);
          });
    m.def("m_fs",
          [](uint64_t v, uint64_t e, uint64_t f, uint64_t b_f, uint64_t b_v,
             double miss) {
              auto r = m_fs(v, e, f, b_f, b_v, MissRateFn::constant(miss));
              return py::make_tuple(r.topology_words, r.cached_feature_words,
                                    r.output_words, r.total_words);
          });
    m.def("crossover_favors_feature_slicing", &crossover_favors_feature_slicing);
    m.def("perfect_tiling",
          [](uint64_t v, uint64_t f, uint64_t elem, uint64_t cache, bool strict) {
              auto pt = perfect_tiling(v, f, elem, cache, strict);
              return py::make_tuple(pt.b_f, pt.b_v);
          },
          py::arg("v"), py::arg("f"), py::arg("elem_bytes"),
          py::arg("cache_bytes"), py::arg("strict_slice_width") = false);

    m.def("plan_ring_allgather",
          [](uint32_t n, uint64_t v, uint64_t f, uint64_t elem) {
              auto p = plan_ring_allgather(n, v, f, elem);
              py::dict d;
              d["num_chips"] = p.num_chips;
              d["steps"] = p.steps;
              d["bytes_per_step"] = p.bytes_per_step;
              return d;
          });
    m.def("multichip_aggregate",
          [](const CsrGraph& g, const FeatureMatrix& x, uint32_t n) {
              auto r = multichip_aggregate(g, x, n);
              return py::make_tuple(r.output, r.per_chip_step_compute);
          });
}
