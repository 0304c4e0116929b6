#include "snf/cache.hpp"

#include <algorithm>
#include <stdexcept>

namespace snf {

namespace {
bool is_pow2(uint64_t v) { return v != 0 && (v & (v - 1)) == 0; }
}  // namespace

Cache::Cache(const CacheConfig& cfg) : cfg_(cfg), rng_(cfg.random_seed) {
    if (cfg.capacity_bytes == 0) return;  // disabled: everything misses
    if (!is_pow2(cfg.block_bytes))
        throw std::runtime_error("block_bytes must be a power of two");
    uint64_t way_bytes = static_cast<uint64_t>(cfg.ways) * cfg.block_bytes;
    if (cfg.ways == 0 || cfg.capacity_bytes % way_bytes != 0)
        throw std::runtime_error("capacity must be divisible by ways*block");
    num_sets_ = cfg.capacity_bytes / way_bytes;
    lines_.assign(num_sets_ * cfg.ways, Line{});
    lru_.resize(num_sets_);
    for (auto& order : lru_) {
        order.resize(cfg.ways);
        for (uint32_t w = 0; w < cfg.ways; w++) order[w] = w;
    }
    rrpv_max_ = static_cast<uint8_t>((1u << cfg.rrip_bits) - 1);
}

size_t Cache::find_victim(size_t set) {
    Line* base = &lines_[set * cfg_.ways];
    for (uint32_t w = 0; w < cfg_.ways; w++)
        if (!base[w].valid) return w;

    switch (cfg_.replacement) {
        case Replacement::lru:
            return lru_[set].back();
        case Replacement::random:
            return static_cast<size_t>(rng_.next_below(cfg_.ways));
        case Replacement::rrip:
            for (;;) {
                for (uint32_t w = 0; w < cfg_.ways; w++)
                    if (base[w].rrpv >= rrpv_max_) return w;
                for (uint32_t w = 0; w < cfg_.ways; w++) base[w].rrpv++;
            }
    }
    return 0;
}

bool Cache::access(uint64_t byte_address, int strip_id) {
    stats_.total_accesses++;
    if (strip_id >= 0) stats_.per_strip[strip_id].first++;

    bool hit = false;
    if (num_sets_ > 0) {
        uint64_t block = byte_address / cfg_.block_bytes;
        size_t set = static_cast<size_t>(block % num_sets_);
        uint64_t tag = block / num_sets_;
        Line* base = &lines_[set * cfg_.ways];

        size_t way = cfg_.ways;
        for (uint32_t w = 0; w < cfg_.ways; w++) {
            if (base[w].valid && base[w].tag == tag) {
                way = w;
                break;
            }
        }
        hit = way != cfg_.ways;
        if (!hit) {
            way = find_victim(set);
            base[way].valid = true;
            base[way].tag = tag;
            base[way].rrpv = static_cast<uint8_t>(
                rrpv_max_ > 0 ? rrpv_max_ - 1 : 0);  // insert at max-1
        } else if (cfg_.replacement == Replacement::rrip) {
            base[way].rrpv = 0;  // hit promotion
        }
        // move to MRU
        auto& order = lru_[set];
        auto it = std::find(order.begin(), order.end(), static_cast<uint32_t>(way));
        order.erase(it);
        order.insert(order.begin(), static_cast<uint32_t>(way));
    }

    if (!hit) {
        stats_.total_misses++;
        if (strip_id >= 0) stats_.per_strip[strip_id].second++;
    }
    return hit;
}

void Cache::reset(bool keep_contents) {
    stats_ = CacheStats{};
    if (!keep_contents) {
        for (auto& l : lines_) l = Line{};
        for (auto& order : lru_)
            for (uint32_t w = 0; w < cfg_.ways; w++) order[w] = w;
    }
}

}  // namespace snf
