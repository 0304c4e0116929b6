#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "snf/prng.hpp"

namespace snf {

enum class Replacement { lru, random, rrip };

struct CacheConfig {
    uint64_t capacity_bytes = 16ull << 20;
    uint32_t ways = 16;
    uint32_t block_bytes = 64;
    Replacement replacement = Replacement::lru;
    uint64_t random_seed = 0;
    uint32_t rrip_bits = 2;
};

constexpr int kUnitColumns = 64;

struct CacheStats {
    uint64_t total_accesses = 0;
    uint64_t total_misses = 0;
    // indexed by unit vertical column of the source vertex; feature
    // accesses only
    std::array<std::pair<uint64_t, uint64_t>, kUnitColumns> per_strip{};

    double hit_rate() const {
        return total_accesses == 0
                   ? 0.0
                   : 1.0 - static_cast<double>(total_misses) / total_accesses;
    }
};

constexpr int kNoStrip = -1;

// Single-level set-associative cache. capacity_bytes == 0 disables
// caching (every access misses, no state kept).
class Cache {
  public:
    explicit Cache(const CacheConfig& cfg);

    // Returns true on hit. strip_id in [0, 64) classifies feature
    // accesses; pass kNoStrip for anything else.
    bool access(uint64_t byte_address, int strip_id = kNoStrip);

    const CacheStats& stats() const { return stats_; }
    const CacheConfig& config() const { return cfg_; }

    void reset(bool keep_contents);

  private:
    struct Line {
        uint64_t tag = 0;
        bool valid = false;
        uint8_t rrpv = 0;
    };

    size_t find_victim(size_t set);

    CacheConfig cfg_;
    uint64_t num_sets_ = 0;
    std::vector<Line> lines_;              // num_sets * ways
    std::vector<std::vector<uint32_t>> lru_;  // per-set MRU->LRU way order
    CacheStats stats_;
    SplitMix64 rng_;
    uint8_t rrpv_max_ = 3;
};

}  // namespace snf
