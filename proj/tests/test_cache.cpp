#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "snf/cache.hpp"
#include "snf/prng.hpp"

#include <deque>
#include <set>
#include <vector>

using namespace snf;

namespace {

// brute-force list-based LRU reference: one MRU->LRU list per set
class LruOracle {
  public:
    LruOracle(uint64_t capacity, uint32_t ways, uint32_t block)
        : ways_(ways), block_(block), sets_(capacity / (ways * block)) {
        lists_.resize(sets_);
    }

    bool access(uint64_t addr) {
        uint64_t blk = addr / block_;
        auto& list = lists_[blk % sets_];
        for (auto it = list.begin(); it != list.end(); ++it) {
            if (*it == blk) {
                list.erase(it);
                list.push_front(blk);
                return true;
            }
        }
        if (list.size() == ways_) list.pop_back();
        list.push_front(blk);
        return false;
    }

  private:
    uint32_t ways_, block_;
    uint64_t sets_;
    std::vector<std::deque<uint64_t>> lists_;
};

}  // namespace

TEST_CASE("cold miss, repeat hit") {
    Cache c(CacheConfig{1024, 2, 64, Replacement::lru});
    CHECK_FALSE(c.access(0x100));
    CHECK(c.access(0x100));
    CHECK(c.stats().total_accesses == 2);
    CHECK(c.stats().total_misses == 1);
}

TEST_CASE("2-way LRU eviction, hand simulated") {
    // 2 ways, 1 set: A, B, C maps all to the set; A is LRU when C arrives
    Cache c(CacheConfig{128, 2, 64, Replacement::lru});
    CHECK_FALSE(c.access(0 * 128));    // A miss
    CHECK_FALSE(c.access(1 * 128));    // B miss
    CHECK_FALSE(c.access(2 * 128));    // C miss, evicts A
    CHECK_FALSE(c.access(0 * 128));    // A miss again
    CHECK(c.access(2 * 128));          // C still resident
}

TEST_CASE("distinct cold accesses all miss; reset clears counters") {
    Cache c(CacheConfig{1 << 16, 4, 64, Replacement::lru});
    for (uint64_t i = 0; i < 100; i++) c.access(i * 64, static_cast<int>(i % 64));
    CHECK(c.stats().total_misses == 100);

    c.reset(true);
    CHECK(c.stats().total_accesses == 0);
    CHECK(c.stats().total_misses == 0);
    for (int s = 0; s < kUnitColumns; s++) {
        CHECK(c.stats().per_strip[s].first == 0);
        CHECK(c.stats().per_strip[s].second == 0);
    }
    // contents kept: previously resident lines still hit
    CHECK(c.access(0));
    // full reset drops them
    c.reset(false);
    CHECK_FALSE(c.access(0));
}

TEST_CASE("per-strip counters only track classified accesses") {
    Cache c(CacheConfig{1024, 2, 64, Replacement::lru});
    c.access(0, 5);
    c.access(64, kNoStrip);
    CHECK(c.stats().total_accesses == 2);
    CHECK(c.stats().per_strip[5].first == 1);
    CHECK(c.stats().per_strip[5].second == 1);
    uint64_t strip_total = 0;
    for (auto& [a, m] : c.stats().per_strip) strip_total += a;
    CHECK(strip_total == 1);
}

TEST_CASE("capacity 0 disables caching") {
    Cache c(CacheConfig{0, 16, 64, Replacement::lru});
    for (int i = 0; i < 10; i++) CHECK_FALSE(c.access(0));
    CHECK(c.stats().total_misses == 10);
}

TEST_CASE("config validation") {
    CHECK_THROWS(Cache(CacheConfig{1000, 3, 64, Replacement::lru}));
    CHECK_THROWS(Cache(CacheConfig{1024, 2, 48, Replacement::lru}));
}

TEST_CASE("LRU matches list-based oracle on random traces") {
    for (auto [cap, ways, block] :
         {std::tuple<uint64_t, uint32_t, uint32_t>{4096, 4, 64},
          {16384, 16, 64},
          {2048, 2, 128}}) {
        Cache c(CacheConfig{cap, ways, block, Replacement::lru});
        LruOracle oracle(cap, ways, block);
        SplitMix64 rng(99);
        for (int i = 0; i < 100000; i++) {
            uint64_t addr = rng.next_below(1 << 16);
            CHECK(c.access(addr) == oracle.access(addr));
        }
    }
}

TEST_CASE("footprint within capacity leaves only cold misses") {
    // 64 distinct blocks in a 4KB/64B fully covered cache
    Cache c(CacheConfig{4096, 4, 64, Replacement::lru});
    SplitMix64 rng(7);
    std::set<uint64_t> blocks;
    for (int i = 0; i < 5000; i++) {
        uint64_t addr = rng.next_below(4096);
        blocks.insert(addr / 64);
        c.access(addr);
    }
    CHECK(c.stats().total_misses == blocks.size());
}

TEST_CASE("LRU stack property at full associativity") {
    SplitMix64 rng(1234);
    std::vector<uint64_t> trace(20000);
    for (auto& a : trace) a = rng.next_below(1 << 14);

    uint64_t prev_misses = UINT64_MAX;
    for (uint64_t blocks : {8, 16, 32, 64, 128}) {
        Cache c(CacheConfig{blocks * 64, static_cast<uint32_t>(blocks), 64,
                            Replacement::lru});
        for (uint64_t a : trace) c.access(a);
        CHECK(c.stats().total_misses <= prev_misses);
        prev_misses = c.stats().total_misses;
    }
}

TEST_CASE("random and RRIP policies behave sanely") {
    for (auto repl : {Replacement::random, Replacement::rrip}) {
        CacheConfig cfg{4096, 4, 64, repl};
        cfg.random_seed = 5;
        Cache c(cfg);
        SplitMix64 rng(11);
        for (int i = 0; i < 20000; i++) c.access(rng.next_below(1 << 13));
        CHECK(c.stats().total_misses > 0);
        CHECK(c.stats().total_misses <= c.stats().total_accesses);

        // determinism
        Cache c2(cfg);
        SplitMix64 rng2(11);
        uint64_t hits = 0;
        for (int i = 0; i < 20000; i++) hits += c2.access(rng2.next_below(1 << 13));
        CHECK(hits == c.stats().total_accesses - c.stats().total_misses);
    }
}

TEST_CASE("RRIP reuses hot lines") {
    // a hot block re-touched between scans should survive under RRIP
    CacheConfig cfg{256, 4, 64, Replacement::rrip};
    Cache c(cfg);
    c.access(0);  // hot
    for (int round = 0; round < 8; round++) {
        c.access(0);
        c.access((1 + round) * 256);  // conflicting streaming blocks
    }
    CHECK(c.access(0));
}
