#include "snf/atm.hpp"

#include <algorithm>
#include <stdexcept>

namespace snf {

namespace {

bool is_pow2(uint32_t v) { return v != 0 && (v & (v - 1)) == 0; }

bool can_halve(const std::vector<uint32_t>& widths) {
    return std::any_of(widths.begin(), widths.end(),
                       [](uint32_t w) { return w > 1; });
}

bool can_merge(const std::vector<uint32_t>& widths) {
    for (size_t i = 0; i + 1 < widths.size(); i++)
        if (widths[i] == widths[i + 1]) return true;
    return false;
}

// coarse halving: every strip splits in two, [4,4] -> [2,2,2,2]
std::vector<uint32_t> halve_all(const std::vector<uint32_t>& widths) {
    std::vector<uint32_t> out;
    out.reserve(widths.size() * 2);
    for (uint32_t w : widths) {
        if (w > 1) {
            out.push_back(w / 2);
            out.push_back(w / 2);
        } else {
            out.push_back(w);
        }
    }
    return out;
}

// coarse merging: adjacent equal pairs combine, [2,2,2,2] -> [4,4]
std::vector<uint32_t> merge_all(const std::vector<uint32_t>& widths) {
    std::vector<uint32_t> out;
    for (size_t i = 0; i < widths.size();) {
        if (i + 1 < widths.size() && widths[i] == widths[i + 1]) {
            out.push_back(widths[i] * 2);
            i += 2;
        } else {
            out.push_back(widths[i]);
            i += 1;
        }
    }
    return out;
}

}  // namespace

const char* to_string(AtmPhase p) {
    switch (p) {
        case AtmPhase::coarse: return "coarse";
        case AtmPhase::fine_split: return "fine_split";
        case AtmPhase::fine_merge: return "fine_merge";
        case AtmPhase::settled: return "settled";
    }
    return "?";
}

const char* to_string(AtmDirection d) {
    switch (d) {
        case AtmDirection::undecided: return "undecided";
        case AtmDirection::halving: return "halving";
        case AtmDirection::merging: return "merging";
    }
    return "?";
}

std::vector<double> fold_unit_stats(const UnitStats& unit_stats,
                                    const std::vector<uint32_t>& widths) {
    uint32_t sum = 0;
    for (uint32_t w : widths) sum += w;
    if (sum != kUnitColumns)
        throw std::runtime_error("strip widths must sum to 64");
    std::vector<double> ratios;
    ratios.reserve(widths.size());
    size_t col = 0;
    for (uint32_t w : widths) {
        uint64_t acc = 0, miss = 0;
        for (uint32_t i = 0; i < w; i++, col++) {
            acc += unit_stats[col].first;
            miss += unit_stats[col].second;
        }
        ratios.push_back(acc == 0 ? 0.0 : static_cast<double>(miss) / acc);
    }
    return ratios;
}

size_t atm_table_bytes() {
    // tile_width_arr for round_opt, round_cur, and the output to the
    // vertex prefetch: 3 arrays of 64 four-byte entries, plus scalars
    // (cycles, phase, direction, updated idx).
    size_t table = 3 * kUnitColumns * 4;
    size_t scalars = 8 * 4;
    return table + scalars;
}

std::vector<uint32_t> propose_fine_split(AtmState& state);
std::vector<uint32_t> propose_fine_merge(AtmState& state);

AtmState atm_init(uint32_t start_width) {
    if (start_width == 0 || start_width > kUnitColumns || !is_pow2(start_width))
        throw std::runtime_error("start width must be a power of two <= 64");
    AtmState st;
    st.start_widths.assign(kUnitColumns / start_width, start_width);
    st.pending_widths = st.start_widths;
    st.round_opt.cycles = UINT64_MAX;
    st.probe_stage = 0;
    return st;
}

std::vector<uint32_t> atm_step(AtmState& state, uint64_t cycles,
                               const UnitStats& unit_stats) {
    const std::vector<uint32_t> ran = state.pending_widths;
    state.round_cur.cycles = cycles;
    state.round_cur.widths = ran;
    state.round_cur.miss_ratio = fold_unit_stats(unit_stats, ran);

    bool improved = cycles < state.round_opt.cycles;
    if (improved) state.round_opt = state.round_cur;

    auto finish_coarse = [&]() {
        // roll back to the optimum and start splitting
        state.phase = AtmPhase::fine_split;
        state.direction = AtmDirection::halving;
        state.pending_widths = propose_fine_split(state);
    };

    switch (state.phase) {
        case AtmPhase::settled:
            state.pending_widths = state.round_opt.widths;
            return state.pending_widths;

        case AtmPhase::coarse:
            if (state.probe_stage == 0) {
                state.start_cycles = cycles;
                if (can_halve(ran)) {
                    state.probe_stage = 1;
                    state.pending_widths = halve_all(ran);
                } else if (can_merge(ran)) {
                    // 64 unit strips: only merging is probeable
                    state.probe_stage = 3;
                    state.direction = AtmDirection::merging;
                    state.pending_widths = merge_all(ran);
                } else {
                    finish_coarse();
                }
            } else if (state.probe_stage == 1) {
                state.halve_probe_cycles = cycles;
                state.halve_probed = true;
                if (can_merge(state.start_widths)) {
                    state.probe_stage = 2;
                    state.pending_widths = merge_all(state.start_widths);
                } else if (cycles < state.start_cycles) {
                    state.probe_stage = 3;
                    state.direction = AtmDirection::halving;
                    if (can_halve(ran))
                        state.pending_widths = halve_all(ran);
                    else
                        finish_coarse();
                } else {
                    finish_coarse();
                }
            } else if (state.probe_stage == 2) {
                // decide direction from the two probes; ties favor halving
                uint64_t merge_cycles = cycles;
                if (state.halve_probed &&
                    state.halve_probe_cycles < state.start_cycles &&
                    state.halve_probe_cycles <= merge_cycles) {
                    state.direction = AtmDirection::halving;
                    state.probe_stage = 3;
                    auto next = halve_all(state.round_opt.widths);
                    if (can_halve(state.round_opt.widths))
                        state.pending_widths = next;
                    else
                        finish_coarse();
                } else if (merge_cycles < state.start_cycles) {
                    state.direction = AtmDirection::merging;
                    state.probe_stage = 3;
                    if (can_merge(ran))
                        state.pending_widths = merge_all(ran);
                    else
                        finish_coarse();
                } else {
                    finish_coarse();
                }
            } else {
                // committed walk: continue while improving
                if (improved) {
                    bool feasible = state.direction == AtmDirection::halving
                                        ? can_halve(ran)
                                        : can_merge(ran);
                    if (feasible)
                        state.pending_widths =
                            state.direction == AtmDirection::halving
                                ? halve_all(ran)
                                : merge_all(ran);
                    else
                        finish_coarse();
                } else {
                    finish_coarse();
                }
            }
            break;

        case AtmPhase::fine_split:
            if (improved) {
                state.pending_widths = propose_fine_split(state);
            } else {
                state.phase = AtmPhase::fine_merge;
                state.direction = AtmDirection::merging;
                state.pending_widths = propose_fine_merge(state);
            }
            break;

        case AtmPhase::fine_merge:
            if (improved) {
                state.pending_widths = propose_fine_merge(state);
            } else {
                state.phase = AtmPhase::settled;
                state.pending_widths = state.round_opt.widths;
            }
            break;
    }
    return state.pending_widths;
}

// Split the worst-miss-ratio strip of round_opt in half. Width-1 strips
// cannot split; falls through to fine_merge when nothing is splittable.
std::vector<uint32_t> propose_fine_split(AtmState& state) {
    const auto& widths = state.round_opt.widths;
    const auto& ratios = state.round_opt.miss_ratio;
    int target = -1;
    double worst = -1.0;
    for (size_t i = 0; i < widths.size(); i++) {
        if (widths[i] <= 1) continue;
        if (ratios[i] > worst) {
            worst = ratios[i];
            target = static_cast<int>(i);
        }
    }
    if (target < 0) {
        state.phase = AtmPhase::fine_merge;
        state.direction = AtmDirection::merging;
        return propose_fine_merge(state);
    }
    std::vector<uint32_t> next;
    next.reserve(widths.size() + 1);
    for (size_t i = 0; i < widths.size(); i++) {
        if (static_cast<int>(i) == target) {
            next.push_back(widths[i] / 2);
            next.push_back(widths[i] / 2);
        } else {
            next.push_back(widths[i]);
        }
    }
    state.tile_updated_idx = target;
    return next;
}

// Merge the best-hit-rate strip with its better adjacent neighbor; the
// pair must have equal widths to keep square tile strips. Falls back to
// the next-best eligible pair; settles when none exists.
std::vector<uint32_t> propose_fine_merge(AtmState& state) {
    const auto& widths = state.round_opt.widths;
    const auto& ratios = state.round_opt.miss_ratio;
    const size_t n = widths.size();

    std::vector<size_t> order(n);
    for (size_t i = 0; i < n; i++) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](size_t a, size_t b) { return ratios[a] < ratios[b]; });

    int left = -1;
    for (size_t s : order) {
        bool right_ok = s + 1 < n && widths[s + 1] == widths[s];
        bool left_ok = s > 0 && widths[s - 1] == widths[s];
        if (right_ok && left_ok) {
            // prefer the neighbor with the higher hit ratio; ties -> right
            left = ratios[s + 1] <= ratios[s - 1] ? static_cast<int>(s)
                                                  : static_cast<int>(s - 1);
            break;
        }
        if (right_ok) {
            left = static_cast<int>(s);
            break;
        }
        if (left_ok) {
            left = static_cast<int>(s - 1);
            break;
        }
    }
    if (left < 0) {
        state.phase = AtmPhase::settled;
        return state.round_opt.widths;
    }
    std::vector<uint32_t> next;
    next.reserve(n - 1);
    for (size_t i = 0; i < n; i++) {
        if (static_cast<int>(i) == left) {
            next.push_back(widths[i] * 2);
            i++;  // skip the merged partner
        } else {
            next.push_back(widths[i]);
        }
    }
    state.tile_updated_idx = left;
    return next;
}

uint32_t slice_count_for(uint32_t num_features, uint32_t b_f_override) {
    if (b_f_override > 0) return b_f_override;
    uint32_t b_f = num_features * 4 / 64;  // 64-byte slice width rule
    return b_f == 0 ? 1 : b_f;
}

RoundResult SnfResult::total() const {
    std::vector<RoundResult> rs;
    rs.reserve(trace.size());
    for (const auto& row : trace) rs.push_back(row.result);
    return aggregate_round_results(rs);
}

SnfResult run_snf(const CsrGraph& graph, const FeatureMatrix& features,
                  Cache& cache, const MemSpec& mem, const SnfConfig& cfg) {
    if (graph.num_vertices != features.rows)
        throw std::runtime_error("feature rows must equal |V|");
    uint32_t b_f = slice_count_for(features.cols, cfg.b_f_override);

    SnfResult res;
    res.output.rows = features.rows;
    res.output.cols = features.cols;
    res.output.data.assign(
        static_cast<size_t>(features.rows) * features.cols, 0);
    res.state = atm_init(cfg.start_width);

    std::vector<uint32_t> one_engine{0, graph.num_vertices};
    for (uint32_t round = 0; round < b_f; round++) {
        uint32_t c0 = static_cast<uint32_t>(
            static_cast<uint64_t>(features.cols) * round / b_f);
        uint32_t c1 = static_cast<uint32_t>(
            static_cast<uint64_t>(features.cols) * (round + 1) / b_f);

        const auto widths = res.state.pending_widths;
        auto bounds = strip_vertex_bounds(graph.num_vertices, widths);
        TiledCsrIndex index = tile_offsets(graph, bounds);

        cache.reset(!cfg.flush_cache_between_rounds);
        AtmTraceRow row;
        row.round = round;
        row.widths = widths;
        row.phase = res.state.phase;
        row.direction = res.state.direction;
        row.result = run_slice(graph, index, features, c0, c1, cache, mem,
                               Traversal::repeat_output, 1, one_engine,
                               res.output);
        res.trace.push_back(row);
        atm_step(res.state, row.result.cycles, row.result.per_unit);
    }
    res.final_widths = res.state.round_opt.widths;
    return res;
}

}  // namespace snf
