#include "snf/cost.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace snf {

MissRateFn MissRateFn::constant(double rate) {
    MissRateFn fn;
    fn.points_.emplace_back(0.0, std::clamp(rate, 0.0, 1.0));
    return fn;
}

MissRateFn MissRateFn::from_samples(
    std::vector<std::pair<double, double>> samples) {
    if (samples.empty()) throw std::runtime_error("no miss-rate samples");
    std::sort(samples.begin(), samples.end());
    // monotone non-decreasing in working-set size, clamped to [0,1]
    double running = 0.0;
    for (auto& [x, r] : samples) {
        r = std::clamp(r, 0.0, 1.0);
        running = std::max(running, r);
        r = running;
    }
    MissRateFn fn;
    fn.points_ = std::move(samples);
    return fn;
}

double MissRateFn::operator()(double working_set_bytes) const {
    if (working_set_bytes <= points_.front().first)
        return points_.front().second;
    if (working_set_bytes >= points_.back().first)
        return points_.back().second;
    auto hi = std::upper_bound(
        points_.begin(), points_.end(), working_set_bytes,
        [](double x, const auto& p) { return x < p.first; });
    auto lo = hi - 1;
    double t = (working_set_bytes - lo->first) / (hi->first - lo->first);
    return lo->second + t * (hi->second - lo->second);
}

MissRateFn fit_miss_fn(std::vector<std::pair<double, double>> samples) {
    return MissRateFn::from_samples(std::move(samples));
}

namespace {
CostReport make_report(double topo, double cached, double out) {
    CostReport r;
    r.topology_words = topo;
    r.cached_feature_words = cached;
    r.output_words = out;
    r.total_words = topo + cached + out;
    return r;
}
}  // namespace

CostReport m_row(uint64_t v, uint64_t e, uint64_t f, const MissRateFn& m) {
    double vd = static_cast<double>(v), ed = static_cast<double>(e),
           fd = static_cast<double>(f);
    return make_report(vd + ed, m(vd * fd * 4.0) * ed * fd, vd * fd);
}

CostReport m_fs(uint64_t v, uint64_t e, uint64_t f, uint64_t b_f, uint64_t b_v,
                const MissRateFn& m) {
    if (b_f == 0 || b_v == 0) throw std::runtime_error("B_F, B_V must be >= 1");
    double vd = static_cast<double>(v), ed = static_cast<double>(e),
           fd = static_cast<double>(f);
    double bf = static_cast<double>(b_f), bv = static_cast<double>(b_v);
    return make_report(bf * (bv * vd + ed),
                       m(vd * fd * 4.0 / (bf * bv)) * ed * fd,
                       bv * vd * fd);
}

bool crossover_favors_feature_slicing(uint64_t v, uint64_t e, uint64_t f) {
    if (v == 0) throw std::runtime_error("V must be positive");
    // F > E/V, strict, without integer division
    return f * v > e;
}

PerfectTiling perfect_tiling(uint64_t v, uint64_t f, uint64_t elem_bytes,
                             uint64_t cache_bytes, bool strict_slice_width) {
    if (cache_bytes == 0) throw std::runtime_error("cache must be non-empty");
    if (elem_bytes > cache_bytes)
        throw std::runtime_error("a single element exceeds the cache");

    uint64_t b_f_max = f == 0 ? 1 : f;
    if (strict_slice_width) {
        uint64_t cap = f * elem_bytes / 64;  // slice width >= 64 bytes
        b_f_max = std::max<uint64_t>(1, std::min(b_f_max, cap));
    }

    auto ceil_div = [](uint64_t a, uint64_t b) { return (a + b - 1) / b; };

    PerfectTiling best;
    uint64_t best_product = UINT64_MAX;
    for (uint64_t b_v = 1;; b_v *= 2) {
        uint64_t tile_v = ceil_div(std::max<uint64_t>(v, 1), b_v);
        // smallest feasible B_F for this B_V
        uint64_t b_f = 0;
        for (uint64_t cand = 1; cand <= b_f_max; cand++) {
            uint64_t tile_f = ceil_div(std::max<uint64_t>(f, 1), cand);
            if (tile_v * tile_f * elem_bytes <= cache_bytes) {
                b_f = cand;
                break;
            }
        }
        if (b_f != 0) {
            uint64_t product = b_f * b_v;
            // tie-break: smaller B_V (earlier iteration wins)
            if (product < best_product) {
                best_product = product;
                best.b_f = b_f;
                best.b_v = b_v;
            }
        }
        if (b_v >= std::max<uint64_t>(v, 1)) break;
    }
    if (best_product == UINT64_MAX)
        throw std::runtime_error("no feasible perfect tiling");
    return best;
}

}  // namespace snf
