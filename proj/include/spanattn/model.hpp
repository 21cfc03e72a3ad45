#pragma once

#include "spanattn/rng.hpp"
#include "spanattn/types.hpp"

#include <vector>

namespace spanattn {

struct ModelConfig {
    int dim = 64;
    int layers = 2;
    int heads = 4;
    int ffn_mult = 4;
    int vocab_size = 0;   // set from the Vocab
    int capacity = 2048;  // KV-cache tokens, preallocated

    int head_dim() const { return dim / heads; }
    int ffn_dim() const { return dim * ffn_mult; }
};

struct LayerWeights {
    Mat w_query, w_key, w_value, w_out;  // dim x dim
    Mat w_ffn_in;                        // dim x ffn_dim
    Mat w_ffn_out;                       // ffn_dim x dim
    Vec norm_attn, norm_ffn;             // pre-norm scale vectors
};

// Tiny deterministic decoder: all tensors filled from the seed in a fixed
// order. Task competence comes from the oracle schedules, not the network,
// so random weights are enough to exercise the kernels.
struct DecoderWeights {
    ModelConfig config;
    std::uint64_t seed = 0;
    Mat embedding;  // vocab x dim
    Mat head;       // dim x vocab
    std::vector<LayerWeights> layers;

    static DecoderWeights seeded(const ModelConfig& config, std::uint64_t seed);
};

}  // namespace spanattn
