#include "spanattn/bench.hpp"

#include "spanattn/attention.hpp"
#include "spanattn/rng.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

namespace spanattn {

std::vector<std::uint8_t> random_block_mask(const MaskSpec& spec) {
    if (spec.n < 1 || spec.sparsity_block_size < 1) throw DimensionError("bad mask spec");
    if (spec.sparsity < 0.0 || spec.sparsity >= 1.0)
        throw InfeasibleMaskError("sparsity must be in [0, 1)");

    const Index slots = (spec.n + spec.sparsity_block_size - 1) / spec.sparsity_block_size;
    const double target_ones = (1.0 - spec.sparsity) * static_cast<double>(spec.n);
    Index set_slots = static_cast<Index>(
        std::llround(target_ones / static_cast<double>(spec.sparsity_block_size)));
    set_slots = std::min(set_slots, slots);
    if (set_slots == 0) throw InfeasibleMaskError("target sparsity leaves no slot set");

    std::vector<Index> order(slots);
    std::iota(order.begin(), order.end(), 0);
    Rng rng(spec.seed);
    for (Index i = slots - 1; i > 0; --i)
        std::swap(order[i], order[rng.uniform_int(0, i)]);

    std::vector<std::uint8_t> mask(spec.n, 0);
    for (Index s = 0; s < set_slots; ++s) {
        const Index begin = order[s] * spec.sparsity_block_size;
        const Index end = std::min(begin + spec.sparsity_block_size, spec.n);
        std::fill(mask.begin() + begin, mask.begin() + end, std::uint8_t(1));
    }
    return mask;
}

namespace {

using Clock = std::chrono::steady_clock;

double median(std::vector<double> samples) {
    std::sort(samples.begin(), samples.end());
    const std::size_t n = samples.size();
    return n % 2 ? samples[n / 2] : 0.5 * (samples[n / 2 - 1] + samples[n / 2]);
}

// Shared K/V/query data for one context length; the sparsity pattern is the
// only thing that varies between rows, so every row compares against the
// same dense baseline.
struct Workload {
    std::vector<Vec> queries;
    std::vector<Mat> keys;
    std::vector<Mat> values;
};

Workload make_workload(Index n, Index dim, int batch, std::uint64_t seed) {
    Workload w;
    for (int b = 0; b < batch; ++b) {
        Rng rng(mix_seed(seed, (std::uint64_t(n) << 20) ^ std::uint64_t(b)));
        Mat keys(n, dim), values(n, dim);
        for (Index i = 0; i < n; ++i)
            for (Index j = 0; j < dim; ++j) {
                keys(i, j) = static_cast<Scalar>(rng.normal());
                values(i, j) = static_cast<Scalar>(rng.normal());
            }
        Vec query(dim);
        for (Index j = 0; j < dim; ++j) query[j] = static_cast<Scalar>(rng.normal());
        w.queries.push_back(std::move(query));
        w.keys.push_back(std::move(keys));
        w.values.push_back(std::move(values));
    }
    return w;
}

std::vector<SpanMetadata> make_metas(Index n, double sparsity, Index sbs, int kernel_block,
                                     int batch, std::uint64_t seed) {
    std::vector<SpanMetadata> metas;
    for (int b = 0; b < batch; ++b) {
        std::vector<Index> selected;
        if (sparsity == 0.0) {
            selected.resize(n);
            std::iota(selected.begin(), selected.end(), 0);
        } else {
            const auto mask = random_block_mask(
                {n, sparsity, sbs, mix_seed(seed, (std::uint64_t(n) << 20) ^ (sbs << 8) ^ b)});
            for (Index i = 0; i < n; ++i)
                if (mask[i]) selected.push_back(i);
        }
        metas.push_back(encode_span(std::move(selected), n, kernel_block));
    }
    return metas;
}

volatile Scalar g_sink = 0;  // keeps the timed loops from being elided

template <typename F>
double time_one_pass(F&& run) {
    const auto start = Clock::now();
    run();
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

}  // namespace

std::vector<BenchRow> bench_kernel(const BenchConfig& config) {
    constexpr int kWarmup = 3;
    std::vector<BenchRow> rows;
    for (Index n : config.n_list) {
        const Workload w = make_workload(n, config.dim, config.batch, config.seed);

        // Variants share the data; the control variant lists every block.
        struct Variant {
            double sparsity;
            Index sbs;
            std::vector<SpanMetadata> metas;
            std::vector<double> samples;
            std::int64_t rows_read = 0;
        };
        std::vector<Variant> variants;
        for (Index sbs : config.sbs_list)
            variants.push_back({config.sparsity, sbs,
                                make_metas(n, config.sparsity, sbs, config.kernel_block,
                                           config.batch, config.seed),
                                {}});
        if (config.include_full_control)
            variants.push_back({0.0, config.sbs_list.front(),
                                make_metas(n, 0.0, config.sbs_list.front(), config.kernel_block,
                                           config.batch, config.seed),
                                {}});

        // Round-robin through dense and every variant within each rep, so
        // clock-speed drift hits all of them alike.
        std::vector<double> dense_samples;
        for (int rep = 0; rep < config.reps + kWarmup; ++rep) {
            const double dense_ms = time_one_pass([&] {
                Scalar acc = 0;
                for (std::size_t b = 0; b < w.queries.size(); ++b)
                    acc += dense_decode_row(w.queries[b], w.keys[b], w.values[b])[0];
                g_sink = acc;
            });
            if (rep >= kWarmup) dense_samples.push_back(dense_ms);
            for (Variant& variant : variants) {
                std::int64_t rows_read = 0;
                const double sparse_ms = time_one_pass([&] {
                    Scalar acc = 0;
                    for (std::size_t b = 0; b < w.queries.size(); ++b) {
                        const auto result = sparse_decode_attention(w.queries[b], w.keys[b],
                                                                    w.values[b], variant.metas[b]);
                        acc += result.output[0];
                        rows_read += result.stats.key_rows_read;
                    }
                    g_sink = acc;
                });
                if (rep >= kWarmup) variant.samples.push_back(sparse_ms);
                variant.rows_read = rows_read;
            }
        }

        const double dense_ms = median(std::move(dense_samples));
        for (Variant& variant : variants) {
            BenchRow row;
            row.n = n;
            row.sparsity = variant.sparsity;
            row.sparsity_block_size = variant.sbs;
            row.kernel_block = config.kernel_block;
            row.dense_ms = dense_ms;
            row.sparse_ms = median(std::move(variant.samples));
            row.speedup = row.dense_ms / row.sparse_ms;
            row.rows_read_ratio = static_cast<double>(variant.rows_read) /
                                  (static_cast<double>(n) * static_cast<double>(config.batch));
            rows.push_back(row);
        }
    }
    return rows;
}

SweepResult block_size_sweep(const std::vector<Index>& n_list, double sparsity,
                             Index sparsity_block_size, const std::vector<int>& candidates,
                             Index dim, int batch, int reps, std::uint64_t seed) {
    if (candidates.empty()) throw DimensionError("sweep needs at least one candidate");
    SweepResult result;
    std::vector<double> geo_log(candidates.size(), 0.0);
    for (Index n : n_list) {
        for (std::size_t c = 0; c < candidates.size(); ++c) {
            BenchConfig config;
            config.n_list = {n};
            config.sparsity = sparsity;
            config.sbs_list = {sparsity_block_size};
            config.kernel_block = candidates[c];
            config.dim = dim;
            config.batch = batch;
            config.reps = reps;
            config.seed = seed;
            config.include_full_control = false;
            const BenchRow row = bench_kernel(config).front();
            result.rows.push_back({n, candidates[c], row.sparse_ms});
            geo_log[c] += std::log(row.sparse_ms);
        }
    }
    std::size_t best = 0;
    for (std::size_t c = 1; c < candidates.size(); ++c) {
        // Strict improvement or an equal time with a larger block wins.
        if (geo_log[c] < geo_log[best] ||
            (geo_log[c] == geo_log[best] && candidates[c] > candidates[best]))
            best = c;
    }
    result.best_kernel_block = candidates[best];
    return result;
}

}  // namespace spanattn
