#pragma once

#include "spanattn/kernel.hpp"
#include "spanattn/span.hpp"

#include <cstdint>
#include <vector>

namespace spanattn {

// Controlled-benchmark mask: 1-runs of `sparsity_block_size` tokens placed
// at aligned slots until roughly (1 - sparsity) * n positions are set.
struct MaskSpec {
    Index n = 0;
    double sparsity = 0.5;       // target fraction of zeros
    Index sparsity_block_size = 64;
    std::uint64_t seed = 0;
};

// Deterministic under the seed; achieved sparsity within one slot of target.
// Throws InfeasibleMaskError when the target leaves no slot set.
std::vector<std::uint8_t> random_block_mask(const MaskSpec& spec);

struct BenchConfig {
    std::vector<Index> n_list = {1024, 2048, 4096, 8192};
    double sparsity = 0.5;
    std::vector<Index> sbs_list = {32, 64, 128, 256};
    int kernel_block = 64;
    Index dim = 64;
    int batch = 8;
    int reps = 31;
    std::uint64_t seed = 0;
    bool include_full_control = true;  // extra sparsity-0 row per n
};

struct BenchRow {
    Index n = 0;
    double sparsity = 0;
    Index sparsity_block_size = 0;
    int kernel_block = 0;
    double dense_ms = 0;
    double sparse_ms = 0;
    double speedup = 0;          // dense / sparse
    double rows_read_ratio = 0;  // sparse rows read / dense rows read
};

// Single-query decode under random block masks: the dense unmasked row path
// against the sparse kernel on identical data. Median wall time over `reps`
// after 3 warmup runs; one timing run active at a time.
std::vector<BenchRow> bench_kernel(const BenchConfig& config);

struct SweepRow {
    Index n = 0;
    int kernel_block = 0;
    double sparse_ms = 0;
};

struct SweepResult {
    int best_kernel_block = 0;  // argmin median time; ties toward the larger
    std::vector<SweepRow> rows;
};

// Empirical stand-in for autotuning: times the sparse kernel across
// candidate processing block sizes.
SweepResult block_size_sweep(const std::vector<Index>& n_list, double sparsity,
                             Index sparsity_block_size, const std::vector<int>& candidates,
                             Index dim, int batch, int reps, std::uint64_t seed);

}  // namespace spanattn
