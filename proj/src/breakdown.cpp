#include "spanattn/breakdown.hpp"

#include <algorithm>

namespace spanattn {

namespace {

double median(std::vector<double> samples) {
    std::sort(samples.begin(), samples.end());
    const std::size_t n = samples.size();
    return n % 2 ? samples[n / 2] : 0.5 * (samples[n / 2 - 1] + samples[n / 2]);
}

}  // namespace

BreakdownResult runtime_breakdown(const DecoderWeights& weights, Index seq_len, int batch,
                                  int reps, std::uint64_t seed) {
    const ModelConfig& config = weights.config;
    if (seq_len < 1 || seq_len > config.capacity)
        throw CapacityError("sequence length exceeds cache capacity");
    if (batch < 1 || reps < 1) throw DimensionError("batch and reps must be positive");

    // Preload each cache with seq_len - 1 random rows; every timed step then
    // decodes one token at context seq_len and rewinds.
    std::vector<KVCache> caches;
    caches.reserve(batch);
    Rng rng(seed);
    for (int b = 0; b < batch; ++b) {
        KVCache& cache = caches.emplace_back(config.layers, config.capacity, config.dim);
        RowVec key(config.dim), value(config.dim);
        for (Index pos = 0; pos + 1 < seq_len; ++pos) {
            for (int l = 0; l < config.layers; ++l) {
                for (Index j = 0; j < config.dim; ++j) {
                    key[j] = static_cast<Scalar>(rng.normal());
                    value[j] = static_cast<Scalar>(rng.normal());
                }
                cache.write_row(l, key, value);
            }
            cache.advance();
        }
    }
    const Index base_len = seq_len - 1;

    const int warmup = 3;
    std::vector<double> attention, ffn, other;
    for (int rep = 0; rep < reps + warmup; ++rep) {
        ComponentTimers timers;
        for (KVCache& cache : caches) {
            decode_step(weights, cache, 0, std::nullopt, AttentionKernel::kSparse, &timers);
            cache.truncate(base_len);
        }
        if (rep < warmup) continue;
        attention.push_back(timers.attention_s);
        ffn.push_back(timers.ffn_s);
        other.push_back(timers.other_s);
    }

    BreakdownResult result;
    result.seq_len = seq_len;
    result.attention_ms = median(attention) * 1e3;
    result.ffn_ms = median(ffn) * 1e3;
    result.other_ms = median(other) * 1e3;
    const double total = result.attention_ms + result.ffn_ms + result.other_ms;
    result.attention_share = result.attention_ms / total;
    result.ffn_share = result.ffn_ms / total;
    result.other_share = result.other_ms / total;
    return result;
}

std::vector<BreakdownResult> runtime_breakdown_sweep(const DecoderWeights& weights,
                                                     const std::vector<Index>& seq_lens, int batch,
                                                     int reps, std::uint64_t seed) {
    std::vector<BreakdownResult> rows;
    rows.reserve(seq_lens.size());
    for (Index seq_len : seq_lens)
        rows.push_back(runtime_breakdown(weights, seq_len, batch, reps, seed));
    return rows;
}

}  // namespace spanattn
