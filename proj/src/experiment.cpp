#include "snf/experiment.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "snf/cost.hpp"
#include "snf/oracle.hpp"

namespace snf {

namespace {

using nlohmann::json;

template <typename T>
T field_or(const json& j, const char* key, T def) {
    if (!j.contains(key)) return def;
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError(std::string("invalid value for field '") + key + "'");
    }
}

Dataflow parse_dataflow(const std::string& s) {
    if (s == "row") return Dataflow::row;
    if (s == "vt") return Dataflow::vt;
    if (s == "fs") return Dataflow::fs;
    if (s == "snf_atm") return Dataflow::snf_atm;
    if (s == "colprod") return Dataflow::colprod;
    if (s == "gcnax_perfect") return Dataflow::gcnax_perfect;
    throw ConfigError("invalid value for field 'dataflow': " + s);
}

std::string widths_string(const std::vector<uint32_t>& widths) {
    std::ostringstream s;
    for (size_t i = 0; i < widths.size(); i++) {
        if (i) s << ';';
        s << widths[i];
    }
    return s.str();
}

}  // namespace

ExperimentConfig parse_config(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }

    ExperimentConfig c;
    if (!j.contains("graph")) throw ConfigError("missing field 'graph'");
    const json& g = j.at("graph");
    if (g.contains("file")) {
        c.graph.file = g.at("file").get<std::string>();
    } else if (g.contains("generate")) {
        const json& gen = g.at("generate");
        std::string model = field_or<std::string>(gen, "model", "uniform");
        if (model == "uniform")
            c.graph.model = GraphModel::uniform;
        else if (model == "rmat")
            c.graph.model = GraphModel::rmat;
        else
            throw ConfigError("invalid value for field 'graph.generate.model'");
        c.graph.vertices = field_or<uint32_t>(gen, "vertices", 0);
        c.graph.edges = field_or<uint64_t>(gen, "edges", 0);
        if (!gen.contains("seed"))
            throw ConfigError("missing field 'graph.generate.seed'");
        c.graph.seed = gen.at("seed").get<uint64_t>();
        if (c.graph.vertices == 0)
            throw ConfigError("invalid value for field 'graph.generate.vertices'");
    } else {
        throw ConfigError("field 'graph' needs 'file' or 'generate'");
    }
    c.normalize = field_or<bool>(j, "normalize", true);

    if (j.contains("features")) {
        const json& f = j.at("features");
        c.feature_width = field_or<uint32_t>(f, "width", 64);
        if (!f.contains("seed"))
            throw ConfigError("missing field 'features.seed'");
        c.feature_seed = f.at("seed").get<uint64_t>();
    } else {
        throw ConfigError("missing field 'features'");
    }

    if (!j.contains("dataflow")) throw ConfigError("missing field 'dataflow'");
    c.dataflow = parse_dataflow(j.at("dataflow").get<std::string>());

    if (j.contains("tile")) {
        const json& t = j.at("tile");
        c.tile.num_slices = field_or<uint32_t>(t, "b_f", 1);
        if (t.contains("widths")) {
            c.tile.tile_width_arr = t.at("widths").get<std::vector<uint32_t>>();
        } else {
            uint32_t b_v = field_or<uint32_t>(t, "b_v", 1);
            c.tile = TileConfig::uniform(c.tile.num_slices, b_v);
        }
        try {
            c.tile.validate();
        } catch (const std::exception& e) {
            throw ConfigError(std::string("invalid value for field 'tile': ") +
                              e.what());
        }
    }
    if (j.contains("colprod")) {
        const json& cp = j.at("colprod");
        c.colprod.adjacency_strips = field_or<uint32_t>(cp, "b_a", 1);
        c.colprod.output_strips = field_or<uint32_t>(cp, "b_o", 1);
        c.colprod.feature_column_group = field_or<uint32_t>(cp, "group", 0);
    }
    if (j.contains("atm")) {
        const json& a = j.at("atm");
        c.atm.start_width = field_or<uint32_t>(a, "start_width", 32);
        c.atm.b_f_override = field_or<uint32_t>(a, "b_f", 0);
        c.atm.flush_cache_between_rounds =
            field_or<bool>(a, "flush_between_rounds", false);
    }
    if (j.contains("cache")) {
        const json& ch = j.at("cache");
        c.cache.capacity_bytes =
            field_or<uint64_t>(ch, "capacity", c.cache.capacity_bytes);
        c.cache.ways = field_or<uint32_t>(ch, "ways", c.cache.ways);
        c.cache.block_bytes = field_or<uint32_t>(ch, "block", c.cache.block_bytes);
        std::string repl = field_or<std::string>(ch, "replacement", "lru");
        if (repl == "lru")
            c.cache.replacement = Replacement::lru;
        else if (repl == "random")
            c.cache.replacement = Replacement::random;
        else if (repl == "rrip")
            c.cache.replacement = Replacement::rrip;
        else
            throw ConfigError("invalid value for field 'cache.replacement'");
        c.cache.random_seed = field_or<uint64_t>(ch, "seed", 0);
        c.cache.rrip_bits = field_or<uint32_t>(ch, "rrip_bits", 2);
    }
    if (j.contains("mem")) {
        const json& m = j.at("mem");
        c.mem.bytes_per_cycle =
            field_or<double>(m, "bytes_per_cycle", c.mem.bytes_per_cycle);
        c.mem.fixed_latency_cycles =
            field_or<uint64_t>(m, "latency", c.mem.fixed_latency_cycles);
        c.mem.access_granularity_bytes = field_or<uint32_t>(
            m, "granularity", c.mem.access_granularity_bytes);
        if (c.mem.bytes_per_cycle <= 0)
            throw ConfigError("invalid value for field 'mem.bytes_per_cycle'");
    }
    if (j.contains("energy")) {
        const json& en = j.at("energy");
        c.energy.pj_per_mac = field_or<double>(en, "pj_per_mac", 0.0);
        c.energy.pj_per_cache_access =
            field_or<double>(en, "pj_per_cache_access", 0.0);
        c.energy.pj_per_dram_byte = field_or<double>(en, "pj_per_dram_byte", 0.0);
    }
    c.engines = field_or<uint32_t>(j, "engines", 1);
    if (j.contains("multichip")) {
        const json& mc = j.at("multichip");
        CommPlan plan;
        plan.num_chips = field_or<uint32_t>(mc, "chips", 1);
        plan.link_bytes_per_cycle =
            field_or<double>(mc, "link_bytes_per_cycle", 256.0);
        plan.hop_latency_cycles = field_or<uint64_t>(mc, "hop_latency", 20);
        if (plan.num_chips == 0)
            throw ConfigError("invalid value for field 'multichip.chips'");
        c.multichip = plan;
    }
    std::string trav = field_or<std::string>(j, "traversal", "repeat_output");
    if (trav == "repeat_output")
        c.traversal = Traversal::repeat_output;
    else if (trav == "repeat_input")
        c.traversal = Traversal::repeat_input;
    else
        throw ConfigError("invalid value for field 'traversal'");
    c.out_dir = field_or<std::string>(j, "out_dir", "out");
    c.baseline_cycles = field_or<double>(j, "baseline_cycles", 0.0);
    return c;
}

namespace {

CsrGraph realize_graph(const ExperimentConfig& c) {
    CsrGraph g = c.graph.file.empty()
                     ? gen_synthetic(c.graph.model, c.graph.vertices,
                                     c.graph.edges, c.graph.seed)
                     : load_graph(c.graph.file);
    return c.normalize ? normalize_laplacian(g) : g;
}

void write_rounds_csv(const std::string& path,
                      const std::vector<AtmTraceRow>& rounds) {
    std::ofstream out(path);
    out << "round,tile_width_arr,cycles,topology_reads,feature_reads,"
           "feature_misses,output_writes,hit_rate,phase,direction\n";
    for (const auto& r : rounds) {
        out << r.round << ',' << widths_string(r.widths) << ','
            << r.result.cycles << ',' << r.result.topology_reads << ','
            << r.result.feature_read_requests << ',' << r.result.feature_misses
            << ',' << r.result.output_writes << ',' << r.result.hit_rate()
            << ',' << to_string(r.phase) << ',' << to_string(r.direction)
            << '\n';
    }
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& config) {
    CsrGraph graph = realize_graph(config);
    FeatureMatrix features =
        gen_features(graph.num_vertices, config.feature_width,
                     config.feature_seed);

    ExperimentResult res;
    Cache cache(config.cache);
    auto record_rounds = [&](const std::vector<RoundResult>& rounds,
                             const std::vector<uint32_t>& widths) {
        for (size_t i = 0; i < rounds.size(); i++) {
            AtmTraceRow row;
            row.round = static_cast<uint32_t>(i);
            row.widths = widths;
            row.result = rounds[i];
            res.rounds.push_back(row);
        }
        res.final_widths = widths;
    };

    switch (config.dataflow) {
        case Dataflow::row: {
            auto run = run_row_product(graph, features, cache, config.mem);
            record_rounds(run.rounds, {64});
            break;
        }
        case Dataflow::vt: {
            TileConfig t = config.tile;
            t.num_slices = 1;
            auto run = run_feature_sliced(graph, features, t, cache, config.mem,
                                          config.traversal);
            record_rounds(run.rounds, t.tile_width_arr);
            break;
        }
        case Dataflow::fs: {
            auto run = config.engines > 1
                           ? run_multi_engine(graph, features, config.tile,
                                              config.engines, cache, config.mem)
                           : run_feature_sliced(graph, features, config.tile,
                                                cache, config.mem,
                                                config.traversal);
            record_rounds(run.rounds, config.tile.tile_width_arr);
            break;
        }
        case Dataflow::snf_atm: {
            auto run = run_snf(graph, features, cache, config.mem, config.atm);
            res.rounds = run.trace;
            res.final_widths = run.final_widths;
            break;
        }
        case Dataflow::colprod: {
            auto run = run_column_product(graph, features, config.colprod,
                                          cache, config.mem);
            record_rounds(run.rounds, {64});
            break;
        }
        case Dataflow::gcnax_perfect: {
            PerfectTiling pt = perfect_tiling(
                graph.num_vertices, features.cols, 4,
                std::max<uint64_t>(config.cache.capacity_bytes, 1), false);
            uint64_t b_v = std::min<uint64_t>(pt.b_v, 64);
            TileConfig t = TileConfig::uniform(
                static_cast<uint32_t>(std::min<uint64_t>(pt.b_f, features.cols)),
                static_cast<uint32_t>(b_v));
            auto run = run_feature_sliced(graph, features, t, cache, config.mem,
                                          config.traversal);
            record_rounds(run.rounds, t.tile_width_arr);
            break;
        }
    }

    std::vector<RoundResult> bare;
    bare.reserve(res.rounds.size());
    for (const auto& r : res.rounds) bare.push_back(r.result);
    res.total = aggregate_round_results(bare);

    double baseline = config.baseline_cycles;
    if (baseline <= 0) {
        Cache base_cache(config.cache);
        auto base = run_row_product(graph, features, base_cache, config.mem);
        baseline = static_cast<double>(base.total().cycles);
    }
    res.speedup = res.total.cycles == 0
                      ? 0.0
                      : baseline / static_cast<double>(res.total.cycles);

    namespace fs = std::filesystem;
    fs::create_directories(config.out_dir);
    write_rounds_csv(config.out_dir + "/rounds.csv", res.rounds);

    json summary;
    summary["total_cycles"] = res.total.cycles;
    summary["topology_reads"] = res.total.topology_reads;
    summary["feature_reads"] = res.total.feature_read_requests;
    summary["feature_misses"] = res.total.feature_misses;
    summary["output_writes"] = res.total.output_writes;
    summary["total_words"] = res.total.total_words();
    summary["dram_bytes"] = res.total.dram_bytes;
    summary["macs"] = res.total.macs;
    summary["hit_rate"] = res.total.hit_rate();
    summary["rounds"] = res.rounds.size();
    summary["final_tile_width_arr"] = res.final_widths;
    summary["speedup"] = res.speedup;
    std::ofstream(config.out_dir + "/summary.json") << summary.dump(2) << '\n';

    EnergyReport er =
        energy_report(res.total.macs, res.total.feature_read_requests,
                      res.total.dram_bytes, config.energy);
    json energy;
    energy["compute_pj"] = er.compute_pj;
    energy["cache_pj"] = er.cache_pj;
    energy["dram_pj"] = er.dram_pj;
    energy["total_pj"] = er.total_pj;
    std::ofstream(config.out_dir + "/energy.json") << energy.dump(2) << '\n';

    return res;
}

namespace {

// dotted path ("cache.capacity") into a JSON pointer
json::json_pointer to_pointer(const std::string& dotted) {
    std::string p = "/";
    for (char c : dotted) p += c == '.' ? '/' : c;
    return json::json_pointer(p);
}

}  // namespace

void run_sweep(const std::string& config_text, const std::string& grid_text,
               const std::string& out_dir) {
    json base;
    try {
        base = json::parse(config_text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    json grid;
    try {
        grid = json::parse(grid_text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("grid is not valid JSON: ") + e.what());
    }
    if (!grid.is_object() || grid.empty())
        throw ConfigError("grid must be a non-empty object of value lists");

    std::vector<std::string> axes;
    std::vector<std::vector<json>> values;
    for (auto& [key, vals] : grid.items()) {
        if (!vals.is_array() || vals.empty())
            throw ConfigError("grid axis '" + key + "' must be a non-empty list");
        axes.push_back(key);
        values.emplace_back(vals.begin(), vals.end());
    }

    std::filesystem::create_directories(out_dir);
    std::ofstream csv(out_dir + "/sweep.csv");
    for (const auto& a : axes) csv << a << ',';
    csv << "cycles,topology_reads,feature_reads,feature_misses,output_writes,"
           "total_words,dram_bytes,hit_rate,speedup,crossover_favors_fs\n";

    std::vector<size_t> idx(axes.size(), 0);
    size_t point = 0;
    for (;;) {
        json cfg_json = base;
        for (size_t a = 0; a < axes.size(); a++)
            cfg_json[to_pointer(axes[a])] = values[a][idx[a]];
        cfg_json["out_dir"] = out_dir + "/point_" + std::to_string(point);

        ExperimentConfig cfg = parse_config(cfg_json.dump());
        ExperimentResult r = run_experiment(cfg);

        CsrGraph raw = cfg.graph.file.empty()
                           ? gen_synthetic(cfg.graph.model, cfg.graph.vertices,
                                           cfg.graph.edges, cfg.graph.seed)
                           : load_graph(cfg.graph.file);
        bool crossover = crossover_favors_feature_slicing(
            raw.num_vertices, raw.num_edges, cfg.feature_width);

        for (size_t a = 0; a < axes.size(); a++)
            csv << values[a][idx[a]].dump() << ',';
        csv << r.total.cycles << ',' << r.total.topology_reads << ','
            << r.total.feature_read_requests << ',' << r.total.feature_misses
            << ',' << r.total.output_writes << ',' << r.total.total_words()
            << ',' << r.total.dram_bytes << ',' << r.total.hit_rate() << ','
            << r.speedup << ',' << (crossover ? 1 : 0) << '\n';

        point++;
        size_t a = axes.size();
        while (a > 0) {
            a--;
            if (++idx[a] < values[a].size()) break;
            idx[a] = 0;
            if (a == 0) return;
        }
    }
}

}  // namespace snf
