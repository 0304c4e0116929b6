#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace snf {

// Miss rate as a function of working-set size in bytes: a constant, or a
// monotone piecewise-linear fit over measured samples, clamped to [0,1].
class MissRateFn {
  public:
    static MissRateFn constant(double rate);
    static MissRateFn from_samples(
        std::vector<std::pair<double, double>> samples);

    double operator()(double working_set_bytes) const;

  private:
    std::vector<std::pair<double, double>> points_;
};

MissRateFn fit_miss_fn(std::vector<std::pair<double, double>> samples);

struct CostReport {
    double topology_words = 0;
    double cached_feature_words = 0;
    double output_words = 0;
    double total_words = 0;
};

// Row product memory cost: (V+E) + m(V*F*4)*E*F + V*F.
CostReport m_row(uint64_t v, uint64_t e, uint64_t f, const MissRateFn& m);

// Feature slicing + vertex tiling cost:
// B_F(B_V*V + E) + m(V*F*4/(B_F*B_V))*E*F + B_V*V*F.
CostReport m_fs(uint64_t v, uint64_t e, uint64_t f, uint64_t b_f, uint64_t b_v,
                const MissRateFn& m);

// Feature-only tiling beats vertex-only tiling in non-cached traffic
// iff F > E/V (strict).
bool crossover_favors_feature_slicing(uint64_t v, uint64_t e, uint64_t f);

struct PerfectTiling {
    uint64_t b_f = 1;
    uint64_t b_v = 1;
};

// Smallest B_F*B_V whose tile working set fits the cache, preferring a
// larger B_F (smaller B_V) on ties. B_V restricted to powers of two.
// strict_slice_width caps B_F so a slice spans >= 64 bytes.
PerfectTiling perfect_tiling(uint64_t v, uint64_t f, uint64_t elem_bytes,
                             uint64_t cache_bytes, bool strict_slice_width);

}  // namespace snf
