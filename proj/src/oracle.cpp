#include "snf/oracle.hpp"

#include <stdexcept>

namespace snf {

FeatureMatrix dense_aggregate(const CsrGraph& laplacian,
                              const FeatureMatrix& features) {
    if (laplacian.num_vertices != features.rows)
        throw std::runtime_error("aggregate: dimension mismatch");
    FeatureMatrix out;
    out.rows = features.rows;
    out.cols = features.cols;
    out.data.assign(static_cast<size_t>(out.rows) * out.cols, 0);
    for (uint32_t i = 0; i < laplacian.num_vertices; i++) {
        for (uint32_t f = 0; f < features.cols; f++) {
            fxacc_t acc = 0;
            for (uint64_t e = laplacian.row_begin(i); e < laplacian.row_end(i); e++)
                acc += fx_mul_acc(laplacian.edge_weight[e],
                                  features.at(laplacian.col_idx[e], f));
            out.at(i, f) = fx_acc_finish(acc);
        }
    }
    return out;
}

FeatureMatrix dense_combine(const FeatureMatrix& features,
                            const WeightMatrix& weights) {
    if (features.cols != weights.rows)
        throw std::runtime_error("combine: dimension mismatch");
    FeatureMatrix out;
    out.rows = features.rows;
    out.cols = weights.cols;
    out.data.assign(static_cast<size_t>(out.rows) * out.cols, 0);
    for (uint32_t i = 0; i < features.rows; i++) {
        for (uint32_t j = 0; j < weights.cols; j++) {
            fxacc_t acc = 0;
            for (uint32_t k = 0; k < features.cols; k++)
                acc += fx_mul_acc(features.at(i, k), weights.at(k, j));
            out.at(i, j) = fx_acc_finish(acc);
        }
    }
    return out;
}

FeatureMatrix apply_activation(FeatureMatrix m, Activation act) {
    if (act == Activation::relu)
        for (auto& v : m.data) v = fx_relu(v);
    return m;
}

FeatureMatrix gcn_layer(const CsrGraph& laplacian, const FeatureMatrix& features,
                        const WeightMatrix& weights, Activation act,
                        LayerOrder order) {
    FeatureMatrix out =
        order == LayerOrder::combine_first
            ? dense_aggregate(laplacian, dense_combine(features, weights))
            : dense_combine(dense_aggregate(laplacian, features), weights);
    return apply_activation(std::move(out), act);
}

}  // namespace snf
