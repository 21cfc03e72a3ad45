// spanattn command-line front end: dataset generation, engine runs, and the
// kernel/runtime benchmarks, with JSONL/CSV outputs and sidecar manifests.

#include "spanattn/bench.hpp"
#include "spanattn/breakdown.hpp"
#include "spanattn/dataset.hpp"
#include "spanattn/generate.hpp"
#include "spanattn/oracle_schedule.hpp"
#include "spanattn/trace_stats.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

namespace {

using namespace spanattn;
using ordered_json = nlohmann::ordered_json;

constexpr const char* kVersion = "0.1.0";

std::string timestamp_utc() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buffer[32];
    std::strftime(buffer, sizeof buffer, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    return buffer;
}

// Every file output gets a sidecar manifest echoing the full configuration.
class ManifestWriter {
public:
    ManifestWriter(std::string command, std::uint64_t seed) {
        manifest_["command"] = std::move(command);
        manifest_["version"] = kVersion;
        manifest_["seed"] = seed;
        manifest_["config"] = ordered_json::object();
        manifest_["started_at"] = timestamp_utc();
    }

    template <typename T>
    void config(const std::string& key, const T& value) {
        manifest_["config"][key] = value;
    }

    void write_for(const std::string& data_path) {
        if (data_path.empty()) return;
        manifest_["finished_at"] = timestamp_utc();
        std::ofstream out(data_path + ".manifest.json");
        out << manifest_.dump(2) << '\n';
    }

private:
    ordered_json manifest_;
};

// Data goes to the file when given, to stdout otherwise; diagnostics always
// go to stderr.
class DataSink {
public:
    explicit DataSink(const std::string& path) : path_(path) {
        if (!path.empty()) {
            file_.open(path);
            if (!file_) throw std::runtime_error("cannot open output file: " + path);
        }
    }
    std::ostream& stream() { return path_.empty() ? std::cout : file_; }
    const std::string& path() const { return path_; }

private:
    std::string path_;
    std::ofstream file_;
};

std::string format_fixed(double value, int digits = 6) {
    char buffer[64];
    std::snprintf(buffer, sizeof buffer, "%.*f", digits, value);
    return buffer;
}

std::vector<Index> parse_index_list(const std::string& text) {
    std::vector<Index> out;
    std::stringstream stream(text);
    std::string item;
    while (std::getline(stream, item, ',')) out.push_back(std::stoll(item));
    if (out.empty()) throw CLI::ValidationError("empty list");
    return out;
}

ModelConfig engine_config() {
    ModelConfig config;
    config.vocab_size = default_vocab().size();
    config.capacity = 2048;
    return config;
}

int cmd_gen_arith(int count, std::uint64_t seed, const std::string& out_path, int max_digits,
                  Index bin_width, Index max_output_tokens) {
    ManifestWriter manifest("gen-arith", seed);
    manifest.config("count", count);
    manifest.config("max_digits", max_digits);
    manifest.config("bin_width", bin_width);
    manifest.config("max_output_tokens", max_output_tokens);

    DatasetConfig config;
    config.count = count;
    config.bin_width = bin_width;
    config.max_output_tokens = max_output_tokens;
    config.gen.max_digits = max_digits;
    config.gen.seed = seed;
    const Dataset dataset = generate_dataset(config);

    for (const BinReport& bin : dataset.bins) {
        if (bin.filled < bin.target)
            std::cerr << "bin " << bin.bin << " partially filled: " << bin.filled << "/"
                      << bin.target << "\n";
    }
    std::cerr << "generated " << dataset.examples.size() << " examples in " << dataset.attempts
              << " attempts\n";

    DataSink sink(out_path);
    write_dataset_jsonl(sink.stream(), dataset);
    manifest.write_for(sink.path());
    return 0;
}

int cmd_run(const std::string& dataset_path, const std::string& mode, int block_size, int count,
            std::uint64_t seed, const std::string& csv_path) {
    if (mode != "dense" && mode != "sparse" && mode != "both")
        throw CLI::ValidationError("--mode must be dense, sparse, or both");

    ManifestWriter manifest("run", seed);
    manifest.config("dataset", dataset_path);
    manifest.config("mode", mode);
    manifest.config("block_size", block_size);
    manifest.config("count", count);

    std::ifstream in(dataset_path);
    if (!in) throw std::runtime_error("cannot open dataset: " + dataset_path);
    const auto examples = read_dataset_jsonl(in);

    const auto weights = DecoderWeights::seeded(engine_config(), seed);
    const Vocab& vocab = default_vocab();

    DataSink sink(csv_path);
    sink.stream() << "example,bin,correct,tokens,mean_sparsity,dense_ms,sparse_ms,"
                     "dense_tps_incl,dense_tps_excl,sparse_tps_incl,sparse_tps_excl,"
                     "token_identity,min_top2_margin\n";

    const int limit = count > 0 ? std::min<int>(count, examples.size())
                                : static_cast<int>(examples.size());
    for (int e = 0; e < limit; ++e) {
        const DatasetExample& example = examples[e];
        OracleSchedule oracle;
        try {
            oracle = oracle_schedule(example.trace, block_size, vocab);
        } catch (const std::exception& err) {
            std::cerr << "example " << e << ": skipped (" << err.what() << ")\n";
            continue;
        }
        const std::size_t total = oracle.prompt.size() + oracle.schedule.steps.size();
        if (total > static_cast<std::size_t>(weights.config.capacity)) {
            std::cerr << "example " << e << ": skipped (needs " << total
                      << " tokens, capacity is " << weights.config.capacity << ")\n";
            continue;
        }

        std::unique_ptr<GenerationResult> dense, sparse;
        if (mode != "sparse") {
            GenerateOptions options;
            options.kernel = AttentionKernel::kDenseMasked;
            dense = std::make_unique<GenerationResult>(
                greedy_generate(weights, oracle.prompt, oracle.schedule, options));
        }
        if (mode != "dense") {
            GenerateOptions options;
            options.kernel = AttentionKernel::kSparse;
            sparse = std::make_unique<GenerationResult>(
                greedy_generate(weights, oracle.prompt, oracle.schedule, options));
        }

        const GenerationResult& reference = dense ? *dense : *sparse;
        const bool correct = check_answer(vocab.detokenize(reference.tokens),
                                          example.trace.answer);
        double mean_sparsity = 0;
        for (const StepRecord& record : reference.records) mean_sparsity += record.sparsity;
        if (!reference.records.empty()) mean_sparsity /= reference.records.size();

        auto tps_columns = [](const GenerationResult& run) {
            const double tokens = static_cast<double>(run.tokens.size());
            const double incl = tokens / run.total_seconds;
            const double excl_tokens = tokens - static_cast<double>(run.span_select_steps);
            const double excl_seconds = run.total_seconds - run.span_select_seconds;
            const double excl = excl_seconds > 0 ? excl_tokens / excl_seconds : 0;
            return std::pair<double, double>{incl, excl};
        };

        std::string identity = "";
        std::string min_margin = "";
        if (dense && sparse) {
            identity = dense->argmax_tokens == sparse->argmax_tokens ? "true" : "false";
            Scalar margin = std::numeric_limits<Scalar>::infinity();
            for (Scalar m : dense->top2_margins) margin = std::min(margin, m);
            min_margin = format_fixed(margin, 6);
        }

        auto& out = sink.stream();
        out << e << ',' << example.bin << ',' << (correct ? "true" : "false") << ','
            << reference.tokens.size() << ',' << format_fixed(mean_sparsity);
        out << ',' << (dense ? format_fixed(dense->total_seconds * 1e3) : "");
        out << ',' << (sparse ? format_fixed(sparse->total_seconds * 1e3) : "");
        if (dense) {
            const auto [incl, excl] = tps_columns(*dense);
            out << ',' << format_fixed(incl, 1) << ',' << format_fixed(excl, 1);
        } else {
            out << ",,";
        }
        if (sparse) {
            const auto [incl, excl] = tps_columns(*sparse);
            out << ',' << format_fixed(incl, 1) << ',' << format_fixed(excl, 1);
        } else {
            out << ",,";
        }
        out << ',' << identity << ',' << min_margin << '\n';
    }
    manifest.write_for(sink.path());
    return 0;
}

int cmd_bench(const std::string& n_list, double sparsity, const std::string& sbs_list,
              int block_size, int batch, int reps, std::uint64_t seed,
              const std::string& csv_path) {
    ManifestWriter manifest("bench", seed);
    manifest.config("n_list", n_list);
    manifest.config("sparsity", sparsity);
    manifest.config("sparsity_block_size", sbs_list);
    manifest.config("block_size", block_size);
    manifest.config("batch", batch);
    manifest.config("reps", reps);

    BenchConfig config;
    config.n_list = parse_index_list(n_list);
    config.sparsity = sparsity;
    config.sbs_list = parse_index_list(sbs_list);
    config.kernel_block = block_size;
    config.batch = batch;
    config.reps = reps;
    config.seed = seed;

    std::vector<BenchRow> rows;
    for (Index n : config.n_list) {
        BenchConfig one = config;
        one.n_list = {n};
        try {
            const auto batch_rows = bench_kernel(one);
            rows.insert(rows.end(), batch_rows.begin(), batch_rows.end());
        } catch (const std::exception& err) {
            std::cerr << "n=" << n << ": skipped (" << err.what() << ")\n";
        }
    }

    DataSink sink(csv_path);
    sink.stream() << "n,sparsity,sbs,kernel_block,dense_ms,sparse_ms,speedup,rows_read_ratio\n";
    for (const BenchRow& row : rows) {
        sink.stream() << row.n << ',' << format_fixed(row.sparsity, 3) << ','
                      << row.sparsity_block_size << ',' << row.kernel_block << ','
                      << format_fixed(row.dense_ms) << ',' << format_fixed(row.sparse_ms) << ','
                      << format_fixed(row.speedup, 3) << ','
                      << format_fixed(row.rows_read_ratio) << '\n';
    }
    manifest.write_for(sink.path());
    return 0;
}

int cmd_sparsity_trace(const std::string& dataset_path, int runs, int block_size,
                       std::uint64_t seed, Index min_tokens, Index max_tokens,
                       const std::string& csv_path) {
    ManifestWriter manifest("sparsity-trace", seed);
    manifest.config("dataset", dataset_path);
    manifest.config("runs", runs);
    manifest.config("block_size", block_size);
    manifest.config("min_output_tokens", min_tokens);
    manifest.config("max_output_tokens", max_tokens);

    std::ifstream in(dataset_path);
    if (!in) throw std::runtime_error("cannot open dataset: " + dataset_path);
    const auto examples = read_dataset_jsonl(in);
    std::vector<EvaluationTrace> traces;
    traces.reserve(examples.size());
    for (const DatasetExample& example : examples) traces.push_back(example.trace);

    const auto weights = DecoderWeights::seeded(engine_config(), seed);
    const SparsityTraceResult result =
        sparsity_trace(traces, weights, block_size, min_tokens, max_tokens, runs);

    DataSink sink(csv_path);
    sink.stream() << "run,position,phase,attended,ignored,sparsity\n";
    for (const SparsityRun& run : result.runs)
        for (const StepRecord& record : run.records)
            sink.stream() << run.run << ',' << record.position << ',' << phase_name(record.phase)
                          << ',' << record.attended << ',' << record.ignored << ','
                          << format_fixed(record.sparsity) << '\n';

    std::cerr << "mean sparsity " << format_fixed(result.summary.mean, 4) << " over "
              << result.summary.steps << " steps; quartile means";
    for (double q : result.summary.quartile_mean) std::cerr << ' ' << format_fixed(q, 4);
    std::cerr << "\n";
    manifest.write_for(sink.path());
    return 0;
}

int cmd_breakdown(const std::string& seq_lens, int batch, int reps, std::uint64_t seed,
                  const std::string& csv_path) {
    ManifestWriter manifest("breakdown", seed);
    manifest.config("seq_lens", seq_lens);
    manifest.config("batch", batch);
    manifest.config("reps", reps);

    const auto weights = DecoderWeights::seeded(engine_config(), seed);
    const auto rows =
        runtime_breakdown_sweep(weights, parse_index_list(seq_lens), batch, reps, seed);

    DataSink sink(csv_path);
    sink.stream() << "seq_len,attention_ms,ffn_ms,other_ms,attention_share,ffn_share,other_share\n";
    for (const BreakdownResult& row : rows) {
        sink.stream() << row.seq_len << ',' << format_fixed(row.attention_ms) << ','
                      << format_fixed(row.ffn_ms) << ',' << format_fixed(row.other_ms) << ','
                      << format_fixed(row.attention_share, 4) << ','
                      << format_fixed(row.ffn_share, 4) << ','
                      << format_fixed(row.other_share, 4) << '\n';
    }
    manifest.write_for(sink.path());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"blocked sparse-attention decode engine"};
    app.require_subcommand(1);

    // gen-arith
    auto* gen = app.add_subcommand("gen-arith", "generate the arithmetic trace dataset (JSONL)");
    int gen_count = 1000;
    std::uint64_t gen_seed = 0;
    std::string gen_out;
    int gen_max_digits = 10;
    Index gen_bin_width = 256, gen_max_tokens = 1536;
    gen->add_option("--count", gen_count, "examples to generate");
    gen->add_option("--seed", gen_seed, "master seed");
    gen->add_option("--out", gen_out, "output JSONL path (stdout if omitted)");
    gen->add_option("--max-digits", gen_max_digits, "literal digit cap");
    gen->add_option("--bin-width", gen_bin_width, "output-length bin width");
    gen->add_option("--max-output-tokens", gen_max_tokens, "output-length ceiling");

    // run
    auto* run = app.add_subcommand("run", "replay a dataset through the decode engine");
    std::string run_dataset, run_mode = "both", run_csv;
    int run_block = 64, run_count = 0;
    std::uint64_t run_seed = 0;
    run->add_option("--dataset", run_dataset, "dataset JSONL")->required();
    run->add_option("--mode", run_mode, "dense | sparse | both");
    run->add_option("--block-size", run_block, "kernel block size");
    run->add_option("--count", run_count, "examples to run (0 = all)");
    run->add_option("--seed", run_seed, "model weight seed");
    run->add_option("--csv", run_csv, "output CSV path (stdout if omitted)");

    // bench
    auto* bench = app.add_subcommand("bench", "controlled kernel benchmark");
    std::string bench_n = "1024,2048,4096,8192", bench_sbs = "32,64,128,256", bench_csv;
    double bench_sparsity = 0.5;
    int bench_block = 64, bench_batch = 8, bench_reps = 31;
    std::uint64_t bench_seed = 0;
    bench->add_option("--n-list", bench_n, "context lengths, comma-separated");
    bench->add_option("--sparsity", bench_sparsity, "target sparsity");
    bench->add_option("--sparsity-block-size", bench_sbs, "sparsity block sizes, comma-separated");
    bench->add_option("--block-size", bench_block, "kernel block size");
    bench->add_option("--batch", bench_batch, "requests per timed pass");
    bench->add_option("--reps", bench_reps, "timed repetitions (median reported)");
    bench->add_option("--seed", bench_seed, "mask/data seed");
    bench->add_option("--csv", bench_csv, "output CSV path (stdout if omitted)");

    // sparsity-trace
    auto* strace = app.add_subcommand("sparsity-trace", "per-token achieved sparsity");
    std::string strace_dataset, strace_csv;
    int strace_runs = 3, strace_block = 64;
    std::uint64_t strace_seed = 0;
    Index strace_min = 768, strace_max = 1024;
    strace->add_option("--dataset", strace_dataset, "dataset JSONL")->required();
    strace->add_option("--count", strace_runs, "runs to record");
    strace->add_option("--block-size", strace_block, "kernel block size");
    strace->add_option("--seed", strace_seed, "model weight seed");
    strace->add_option("--min-output-tokens", strace_min, "bin lower bound");
    strace->add_option("--max-output-tokens", strace_max, "bin upper bound (exclusive)");
    strace->add_option("--csv", strace_csv, "output CSV path (stdout if omitted)");

    // breakdown
    auto* breakdown = app.add_subcommand("breakdown", "decoder runtime breakdown");
    std::string bd_seq = "512,1024,2048", bd_csv;
    int bd_batch = 1, bd_reps = 31;
    std::uint64_t bd_seed = 0;
    breakdown->add_option("--seq-lens", bd_seq, "context lengths, comma-separated");
    breakdown->add_option("--batch", bd_batch, "decode streams per rep");
    breakdown->add_option("--reps", bd_reps, "timed repetitions (median reported)");
    breakdown->add_option("--seed", bd_seed, "model weight seed");
    breakdown->add_option("--csv", bd_csv, "output CSV path (stdout if omitted)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed())
            return cmd_gen_arith(gen_count, gen_seed, gen_out, gen_max_digits, gen_bin_width,
                                 gen_max_tokens);
        if (run->parsed())
            return cmd_run(run_dataset, run_mode, run_block, run_count, run_seed, run_csv);
        if (bench->parsed())
            return cmd_bench(bench_n, bench_sparsity, bench_sbs, bench_block, bench_batch,
                             bench_reps, bench_seed, bench_csv);
        if (strace->parsed())
            return cmd_sparsity_trace(strace_dataset, strace_runs, strace_block, strace_seed,
                                      strace_min, strace_max, strace_csv);
        if (breakdown->parsed())
            return cmd_breakdown(bd_seq, bd_batch, bd_reps, bd_seed, bd_csv);
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 1;
    }
    return 1;
}
