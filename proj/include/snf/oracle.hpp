#pragma once

#include "snf/graph.hpp"

namespace snf {

enum class Activation { none, relu };
enum class LayerOrder { combine_first, aggregate_first };

// out[i,f] = sum_j A[i,j] * X[j,f], accumulated in 64 bits and truncated
// once per output element.
FeatureMatrix dense_aggregate(const CsrGraph& laplacian,
                              const FeatureMatrix& features);

FeatureMatrix dense_combine(const FeatureMatrix& features,
                            const WeightMatrix& weights);

FeatureMatrix apply_activation(FeatureMatrix m, Activation act);

FeatureMatrix gcn_layer(const CsrGraph& laplacian, const FeatureMatrix& features,
                        const WeightMatrix& weights, Activation act,
                        LayerOrder order);

}  // namespace snf
