#pragma once

#include <cstdint>
#include <cmath>

namespace snf {

// Q16.16 fixed point. Products use a 64-bit intermediate and truncate
// toward -inf (arithmetic shift), so dot products accumulated in 64-bit
// and truncated once are order-independent.
using fx_t = int32_t;
using fxacc_t = int64_t;

constexpr int kFxShift = 16;
constexpr fx_t kFxOne = 1 << kFxShift;

inline fx_t fx_from_double(double v) {
    return static_cast<fx_t>(std::floor(v * kFxOne));
}

inline double fx_to_double(fx_t v) {
    return static_cast<double>(v) / kFxOne;
}

inline fx_t fx_mul(fx_t a, fx_t b) {
    return static_cast<fx_t>((static_cast<int64_t>(a) * b) >> kFxShift);
}

// Raw 64-bit product for accumulation; truncate with fx_acc_finish.
inline fxacc_t fx_mul_acc(fx_t a, fx_t b) {
    return static_cast<int64_t>(a) * b;
}

inline fx_t fx_acc_finish(fxacc_t acc) {
    return static_cast<fx_t>(acc >> kFxShift);
}

inline fx_t fx_relu(fx_t v) {
    return v > 0 ? v : 0;
}

}  // namespace snf
