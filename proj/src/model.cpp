#include "spanattn/model.hpp"

#include <cmath>
#include <stdexcept>

namespace spanattn {

namespace {

Mat gaussian_matrix(Rng& rng, Index rows, Index cols, double stddev) {
    Mat out(rows, cols);
    for (Index i = 0; i < rows; ++i)
        for (Index j = 0; j < cols; ++j) out(i, j) = static_cast<Scalar>(rng.normal(0.0, stddev));
    return out;
}

}  // namespace

DecoderWeights DecoderWeights::seeded(const ModelConfig& config, std::uint64_t seed) {
    if (config.dim % config.heads != 0)
        throw DimensionError("model dim must be divisible by the head count");
    if (config.vocab_size <= 0) throw DimensionError("vocab_size must be set");

    DecoderWeights weights;
    weights.config = config;
    weights.seed = seed;

    Rng rng(seed);
    const double proj_std = 1.0 / std::sqrt(static_cast<double>(config.dim));
    weights.embedding = gaussian_matrix(rng, config.vocab_size, config.dim, 1.0);
    weights.head = gaussian_matrix(rng, config.dim, config.vocab_size, proj_std);
    weights.layers.resize(config.layers);
    for (LayerWeights& layer : weights.layers) {
        layer.w_query = gaussian_matrix(rng, config.dim, config.dim, proj_std);
        layer.w_key = gaussian_matrix(rng, config.dim, config.dim, proj_std);
        layer.w_value = gaussian_matrix(rng, config.dim, config.dim, proj_std);
        layer.w_out = gaussian_matrix(rng, config.dim, config.dim, proj_std);
        layer.w_ffn_in = gaussian_matrix(rng, config.dim, config.ffn_dim(), proj_std);
        layer.w_ffn_out =
            gaussian_matrix(rng, config.ffn_dim(), config.dim, 1.0 / std::sqrt(config.ffn_dim()));
        layer.norm_attn = Vec::Ones(config.dim);
        layer.norm_ffn = Vec::Ones(config.dim);
    }
    return weights;
}

}  // namespace spanattn
