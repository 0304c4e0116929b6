#include "snf/multichip.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "snf/fixed.hpp"

namespace snf {

namespace {
constexpr uint32_t kSimdLanes = 16;
uint64_t ceil_div(uint64_t a, uint64_t b) { return (a + b - 1) / b; }

uint64_t comm_step_cycles(const CommPlan& plan) {
    if (plan.steps == 0) return 0;
    return static_cast<uint64_t>(std::ceil(
               static_cast<double>(plan.bytes_per_step) /
               plan.link_bytes_per_cycle)) +
           plan.hop_latency_cycles;
}
}  // namespace

CommPlan plan_ring_allgather(uint32_t num_chips, uint64_t num_vertices,
                             uint64_t num_features, uint64_t elem_bytes) {
    if (num_chips == 0) throw std::runtime_error("need at least one chip");
    CommPlan plan;
    plan.num_chips = num_chips;
    plan.steps = num_chips - 1;
    plan.bytes_per_step =
        plan.steps == 0
            ? 0
            : ceil_div(num_vertices, num_chips) * num_features * elem_bytes;
    return plan;
}

MultichipResult simulate_multichip(const std::vector<uint64_t>& per_step_compute,
                                   const CommPlan& plan) {
    if (per_step_compute.size() != plan.num_chips)
        throw std::runtime_error("compute array length must equal N");
    uint64_t comm = comm_step_cycles(plan);
    MultichipResult r;
    for (uint32_t step = 0; step < plan.steps; step++) {
        uint64_t c = per_step_compute[step];
        r.cycles += std::max(c, comm);
        r.compute_cycles += c;
        r.exposed_comm_cycles += comm > c ? comm - c : 0;
    }
    // the last received piece has no onward send to overlap with
    r.cycles += per_step_compute.back();
    r.compute_cycles += per_step_compute.back();
    return r;
}

MultichipAggregate multichip_aggregate(const CsrGraph& graph,
                                       const FeatureMatrix& features,
                                       uint32_t num_chips) {
    if (num_chips == 0) throw std::runtime_error("need at least one chip");
    if (graph.num_vertices != features.rows)
        throw std::runtime_error("feature rows must equal |V|");
    const uint32_t V = graph.num_vertices;
    const uint32_t F = features.cols;
    const uint32_t piece = static_cast<uint32_t>(ceil_div(V, num_chips));

    auto piece_bounds = [&](uint32_t p) {
        uint32_t lo = std::min(p * piece, V);
        uint32_t hi = std::min(lo + piece, V);
        return std::make_pair(lo, hi);
    };

    MultichipAggregate out;
    out.output.rows = V;
    out.output.cols = F;
    out.output.data.assign(static_cast<size_t>(V) * F, 0);
    out.per_chip_step_compute.assign(num_chips,
                                     std::vector<uint64_t>(num_chips, 0));

    for (uint32_t chip = 0; chip < num_chips; chip++) {
        auto [d_lo, d_hi] = piece_bounds(chip);
        std::vector<fxacc_t> acc(static_cast<size_t>(d_hi - d_lo) * F, 0);
        for (uint32_t step = 0; step < num_chips; step++) {
            // ring: at step k, chip c holds the piece of chip (c - k) mod N
            uint32_t p = (chip + num_chips - step) % num_chips;
            auto [s_lo, s_hi] = piece_bounds(p);
            uint64_t cycles = 0;
            for (uint32_t v = d_lo; v < d_hi; v++) {
                for (uint64_t e = graph.row_begin(v); e < graph.row_end(v); e++) {
                    uint32_t src = graph.col_idx[e];
                    if (src < s_lo || src >= s_hi) continue;
                    fx_t w = graph.edge_weight[e];
                    for (uint32_t c = 0; c < F; c++)
                        acc[static_cast<size_t>(v - d_lo) * F + c] +=
                            fx_mul_acc(w, features.at(src, c));
                    cycles += ceil_div(F, kSimdLanes);
                }
            }
            out.per_chip_step_compute[chip][step] = cycles;
        }
        for (uint32_t v = d_lo; v < d_hi; v++)
            for (uint32_t c = 0; c < F; c++)
                out.output.at(v, c) =
                    fx_acc_finish(acc[static_cast<size_t>(v - d_lo) * F + c]);
    }
    return out;
}

uint64_t multichip_system_cycles(
    const std::vector<std::vector<uint64_t>>& per_chip_step_compute,
    const CommPlan& plan) {
    uint64_t comm = comm_step_cycles(plan);
    uint64_t total = 0;
    for (uint32_t step = 0; step < plan.num_chips; step++) {
        uint64_t worst = 0;
        for (const auto& chip : per_chip_step_compute)
            worst = std::max(worst, chip[step]);
        bool last = step + 1 == plan.num_chips;
        total += last ? worst : std::max(worst, comm);
    }
    return total;
}

}  // namespace snf
