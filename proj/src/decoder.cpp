#include "spanattn/decoder.hpp"

#include <chrono>
#include <cmath>

namespace spanattn {

namespace {

using Clock = std::chrono::steady_clock;

// Accumulates elapsed seconds into a bucket, when timing is requested.
class ScopedTimer {
public:
    explicit ScopedTimer(double* bucket) : bucket_(bucket) {
        if (bucket_) start_ = Clock::now();
    }
    ~ScopedTimer() {
        if (bucket_) *bucket_ += std::chrono::duration<double>(Clock::now() - start_).count();
    }

private:
    double* bucket_;
    Clock::time_point start_;
};

constexpr Scalar kNormEps = 1e-5f;

RowVec rms_norm(const RowVec& x, const Vec& scale) {
    const Scalar rms = std::sqrt(x.squaredNorm() / static_cast<Scalar>(x.size()) + kNormEps);
    return (x / rms).cwiseProduct(scale.transpose());
}

Mat rms_norm_rows(const Mat& x, const Vec& scale) {
    Mat out(x.rows(), x.cols());
    for (Index i = 0; i < x.rows(); ++i) out.row(i) = rms_norm(x.row(i), scale);
    return out;
}

Scalar gelu(Scalar x) { return 0.5f * x * (1.0f + std::erf(x * 0.70710678118654752440f)); }

void check_token(const DecoderWeights& weights, int token) {
    if (token < 0 || token >= weights.config.vocab_size)
        throw DimensionError("token id outside the vocabulary");
}

}  // namespace

PrefillResult prefill(const DecoderWeights& weights, const std::vector<int>& prompt,
                      KVCache& cache) {
    const ModelConfig& config = weights.config;
    if (cache.length() != 0) throw DimensionError("prefill requires an empty cache");
    const Index len = static_cast<Index>(prompt.size());
    if (len == 0) return {RowVec::Zero(config.dim), Vec::Zero(config.vocab_size)};
    if (len > cache.capacity()) throw CapacityError("prompt exceeds KV-cache capacity");

    Mat x(len, config.dim);
    for (Index i = 0; i < len; ++i) {
        check_token(weights, prompt[i]);
        x.row(i) = weights.embedding.row(prompt[i]);
    }

    const AttentionMask causal = AttentionMask::causal(len);
    const int hd = config.head_dim();
    for (int l = 0; l < config.layers; ++l) {
        const LayerWeights& layer = weights.layers[l];
        const Mat normed = rms_norm_rows(x, layer.norm_attn);
        Mat queries = normed * layer.w_query;
        Mat keys = normed * layer.w_key;
        Mat values = normed * layer.w_value;
        cache.write_rows(l, keys, values);

        Mat attn(len, config.dim);
        for (int h = 0; h < config.heads; ++h) {
            const Index c = Index(h) * hd;
            attn.middleCols(c, hd) = dense_attention(queries.middleCols(c, hd),
                                                     keys.middleCols(c, hd),
                                                     values.middleCols(c, hd), causal)
                                         .output;
        }
        x += attn * layer.w_out;

        const Mat ffn_in = rms_norm_rows(x, layer.norm_ffn);
        Mat hidden = ffn_in * layer.w_ffn_in;
        hidden = hidden.unaryExpr([](Scalar v) { return gelu(v); });
        x += hidden * layer.w_ffn_out;
    }
    cache.advance_by(len);

    PrefillResult result;
    result.hidden = x.row(len - 1);
    result.logits = (result.hidden * weights.head).transpose();
    return result;
}

DecodeStepResult decode_step(const DecoderWeights& weights, KVCache& cache, int token,
                             const std::optional<SpanMetadata>& span, AttentionKernel kernel,
                             ComponentTimers* timers) {
    const ModelConfig& config = weights.config;
    check_token(weights, token);
    if (cache.full()) throw CapacityError("KV-cache is full");

    const Index n = cache.length() + 1;  // context after this token's row lands
    if (span) span->validate(n);

    // The dense twin expands the metadata once per step and shares it across
    // layers and heads.
    Vec mask_row;
    if (span && kernel == AttentionKernel::kDenseMasked)
        mask_row = metadata_to_dense_mask(*span, n).values.row(0).transpose();

    RowVec x;
    {
        ScopedTimer t(timers ? &timers->other_s : nullptr);
        x = weights.embedding.row(token);
    }

    DecodeStepResult result;
    const int hd = config.head_dim();
    for (int l = 0; l < config.layers; ++l) {
        const LayerWeights& layer = weights.layers[l];
        RowVec normed;
        {
            ScopedTimer t(timers ? &timers->other_s : nullptr);
            normed = rms_norm(x, layer.norm_attn);
        }
        {
            ScopedTimer t(timers ? &timers->attention_s : nullptr);
            RowVec query = normed * layer.w_query;
            cache.write_row(l, normed * layer.w_key, normed * layer.w_value);

            RowVec attn(config.dim);
            for (int h = 0; h < config.heads; ++h) {
                const Index c = Index(h) * hd;
                const Vec q = query.segment(c, hd).transpose();
                // Views take an explicit row count: the new row is written
                // but the cursor advances only after the step commits.
                const MatView keys = cache.keys(l, c, hd, n);
                const MatView values = cache.values(l, c, hd, n);
                if (!span) {
                    attn.segment(c, hd) = dense_decode_row(q, keys, values).transpose();
                } else if (kernel == AttentionKernel::kSparse) {
                    auto sparse = sparse_decode_attention(q, keys, values, *span);
                    attn.segment(c, hd) = sparse.output.transpose();
                    result.stats += sparse.stats;
                } else {
                    attn.segment(c, hd) =
                        masked_decode_row(q, keys, values, mask_row).output.transpose();
                }
            }
            x += attn * layer.w_out;
        }
        {
            ScopedTimer t(timers ? &timers->ffn_s : nullptr);
            const RowVec ffn_in = rms_norm(x, layer.norm_ffn);
            RowVec hidden = ffn_in * layer.w_ffn_in;
            hidden = hidden.unaryExpr([](Scalar v) { return gelu(v); });
            x += hidden * layer.w_ffn_out;
        }
    }
    {
        ScopedTimer t(timers ? &timers->other_s : nullptr);
        result.logits = (x * weights.head).transpose();
    }
    cache.advance();

    if (!span) {
        // FULL attention reads every cached row in every layer and head; the
        // dense path has no block structure to count.
        result.stats.key_rows_read = std::int64_t(n) * config.layers * config.heads;
        result.stats.value_rows_read = result.stats.key_rows_read;
    }
    return result;
}

}  // namespace spanattn
