#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "snf/atm.hpp"
#include "snf/cache.hpp"
#include "snf/dataflow.hpp"
#include "snf/memory.hpp"
#include "snf/multichip.hpp"

namespace snf {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Dataflow { row, vt, fs, snf_atm, colprod, gcnax_perfect };

struct GraphSource {
    std::string file;  // SNFG path; empty means generate
    GraphModel model = GraphModel::uniform;
    uint32_t vertices = 0;
    uint64_t edges = 0;
    uint64_t seed = 0;
};

struct ExperimentConfig {
    GraphSource graph;
    bool normalize = true;
    uint32_t feature_width = 64;
    uint64_t feature_seed = 0;
    Dataflow dataflow = Dataflow::row;
    TileConfig tile;
    ColProductConfig colprod;
    SnfConfig atm;
    CacheConfig cache;
    MemSpec mem;
    EnergyModel energy;
    uint32_t engines = 1;
    std::optional<CommPlan> multichip;  // num_chips/link/latency used
    Traversal traversal = Traversal::repeat_output;
    std::string out_dir = "out";
    double baseline_cycles = 0;  // 0: run row product as the baseline
};

// Parses the JSON config text; throws ConfigError naming the bad field.
ExperimentConfig parse_config(const std::string& json_text);

struct ExperimentResult {
    std::vector<AtmTraceRow> rounds;
    RoundResult total;
    std::vector<uint32_t> final_widths;
    double speedup = 0;
    uint64_t combination_cycles = 0;
};

// Runs one configuration and writes rounds.csv, summary.json, energy.json
// into config.out_dir. Output is deterministic per config.
ExperimentResult run_experiment(const ExperimentConfig& config);

// Grid file: JSON object mapping dotted config paths (e.g.
// "features.width") to value lists. Emits one summary row per point in
// Cartesian order to <out_dir>/sweep.csv.
void run_sweep(const std::string& config_text, const std::string& grid_text,
               const std::string& out_dir);

}  // namespace snf
