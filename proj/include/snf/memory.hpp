#pragma once

#include <cmath>
#include <cstdint>

namespace snf {

// Bandwidth/latency model at a 1 GHz engine clock, so GB/s maps to
// bytes/cycle. Compute and memory fully overlap within a round.
struct MemSpec {
    double bytes_per_cycle = 21.3;  // DDR4-2666; HBM2 is 256
    uint64_t fixed_latency_cycles = 0;
    uint32_t access_granularity_bytes = 64;
};

struct EnergyModel {
    double pj_per_mac = 0.0;
    double pj_per_cache_access = 0.0;
    double pj_per_dram_byte = 0.0;
};

struct EnergyReport {
    double compute_pj = 0.0;
    double cache_pj = 0.0;
    double dram_pj = 0.0;
    double total_pj = 0.0;
};

inline uint64_t round_cycles(uint64_t compute_cycles, uint64_t dram_bytes,
                             const MemSpec& spec) {
    uint64_t mem_cycles = static_cast<uint64_t>(
        std::ceil(static_cast<double>(dram_bytes) / spec.bytes_per_cycle));
    uint64_t busy = compute_cycles > mem_cycles ? compute_cycles : mem_cycles;
    return busy + spec.fixed_latency_cycles;
}

inline EnergyReport energy_report(uint64_t macs, uint64_t cache_accesses,
                                  uint64_t dram_bytes, const EnergyModel& m) {
    EnergyReport r;
    r.compute_pj = static_cast<double>(macs) * m.pj_per_mac;
    r.cache_pj = static_cast<double>(cache_accesses) * m.pj_per_cache_access;
    r.dram_pj = static_cast<double>(dram_bytes) * m.pj_per_dram_byte;
    r.total_pj = r.compute_pj + r.cache_pj + r.dram_pj;
    return r;
}

inline uint64_t round_up(uint64_t bytes, uint64_t granularity) {
    return (bytes + granularity - 1) / granularity * granularity;
}

}  // namespace snf
