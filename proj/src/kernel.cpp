#include "spanattn/kernel.hpp"

#include <cmath>

namespace spanattn {

SparseDecodeResult sparse_decode_attention(const VecView& query, const MatView& keys,
                                           const MatView& values, const SpanMetadata& meta) {
    const Index n = keys.rows();
    const Index d = keys.cols();
    if (query.size() != d || values.cols() != d || values.rows() != n)
        throw DimensionError("q/K/V shape mismatch");
    meta.validate(n);

    const int bs = meta.block_size;
    const Scalar inv_sqrt_d = Scalar(1) / std::sqrt(static_cast<Scalar>(d));

    SparseDecodeResult result;
    result.output = Vec::Zero(d);
    Scalar running_max = -std::numeric_limits<Scalar>::infinity();
    Scalar running_sum = 0;

    const auto& entries = meta.entries;
    std::size_t i = 0;
    while (i < entries.size()) {
        // Coalesce a run of consecutive listed blocks into one slab.
        std::size_t j = i;
        while (j + 1 < entries.size() &&
               entries[j + 1].block_index == entries[j].block_index + 1)
            ++j;
        const Index begin = Index(entries[i].block_index) * bs;
        const Index end = std::min<Index>(Index(entries[j].block_index) * bs + bs, n);
        const Index len = end - begin;

        Vec scores = keys.middleRows(begin, len) * query * inv_sqrt_d;
        for (std::size_t b = i; b <= j; ++b) {
            if (entries[b].full) continue;
            const Index offset = Index(entries[b].block_index) * bs - begin;
            const Index block_len = std::min<Index>(bs, n - (begin + offset));
            for (Index t = 0; t < block_len; ++t)
                if (!entries[b].mask[t]) scores[offset + t] = kProhibit;
        }

        const Scalar slab_max = scores.maxCoeff();
        const Scalar new_max = std::max(running_max, slab_max);
        const Scalar rescale = std::exp(running_max - new_max);  // 0 on the first slab
        running_sum *= rescale;
        result.output *= rescale;

        Vec weights = (scores.array() - new_max).exp().matrix();
        for (std::size_t b = i; b <= j; ++b) {
            if (entries[b].full) continue;
            const Index offset = Index(entries[b].block_index) * bs - begin;
            const Index block_len = std::min<Index>(bs, n - (begin + offset));
            for (Index t = 0; t < block_len; ++t)
                if (!entries[b].mask[t]) weights[offset + t] = 0;
        }
        running_sum += weights.sum();
        result.output.noalias() += values.middleRows(begin, len).transpose() * weights;
        running_max = new_max;

        result.stats.key_rows_read += len;
        result.stats.blocks_visited += static_cast<std::int64_t>(j - i + 1);
        i = j + 1;
    }

    result.output /= running_sum;
    result.stats.value_rows_read = result.stats.key_rows_read;
    const std::int64_t total_blocks = (n + bs - 1) / bs;
    result.stats.blocks_skipped = total_blocks - result.stats.blocks_visited;
    return result;
}

std::vector<SparseDecodeResult> batched_sparse_decode(const std::vector<Vec>& queries,
                                                      const std::vector<Mat>& keys,
                                                      const std::vector<Mat>& values,
                                                      const std::vector<SpanMetadata>& metas) {
    const std::size_t batch = queries.size();
    if (keys.size() != batch || values.size() != batch || metas.size() != batch)
        throw DimensionError("batch size mismatch across inputs");
    std::vector<SparseDecodeResult> results;
    results.reserve(batch);
    for (std::size_t b = 0; b < batch; ++b)
        results.push_back(sparse_decode_attention(queries[b], keys[b], values[b], metas[b]));
    return results;
}

}  // namespace spanattn
