// Exercises the installed command-line surface: schemas, exit codes, and
// the sidecar manifests. Runs the real binary as a subprocess.

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

#ifndef SPANATTN_CLI_PATH
#define SPANATTN_CLI_PATH "spanattn"
#endif

struct TempDir {
    fs::path path;
    TempDir() : path(fs::temp_directory_path() / "spanattn_cli_tests") {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

int run_cli(const std::string& args) {
    const std::string command = std::string(SPANATTN_CLI_PATH) + " " + args + " 2>/dev/null";
    const int status = std::system(command.c_str());
    return WEXITSTATUS(status);
}

std::vector<std::string> read_lines(const std::string& path) {
    std::ifstream in(path);
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
    return lines;
}

}  // namespace

TEST_CASE("gen-arith writes JSONL plus a manifest and honors --max-digits") {
    TempDir dir;
    // Small digits make long bins infeasible, so keep the length ceiling low.
    REQUIRE(run_cli("gen-arith --count 12 --seed 21 --max-digits 3 --max-output-tokens 512 "
                    "--out " +
                    dir.file("d.jsonl")) == 0);
    const auto lines = read_lines(dir.file("d.jsonl"));
    CHECK(lines.size() == 12);
    for (const std::string& line : lines) {
        CHECK(line.front() == '{');
        // A 4-digit run in the expression would violate the cap.
        const std::string key = "\"expression\":\"";
        const auto expr_pos = line.find(key);
        REQUIRE(expr_pos != std::string::npos);
        const auto expr_end = line.find('"', expr_pos + key.size());
        int digit_run = 0;
        for (std::size_t i = expr_pos + key.size(); i < expr_end; ++i) {
            digit_run = isdigit(line[i]) ? digit_run + 1 : 0;
            CHECK(digit_run <= 3);
        }
    }
    CHECK(fs::exists(dir.file("d.jsonl") + ".manifest.json"));
    const auto manifest = read_lines(dir.file("d.jsonl") + ".manifest.json");
    bool has_command = false;
    for (const std::string& line : manifest)
        has_command |= line.find("\"command\": \"gen-arith\"") != std::string::npos ||
                       line.find("\"command\":\"gen-arith\"") != std::string::npos;
    CHECK(has_command);
}

TEST_CASE("run emits the documented per-example columns") {
    TempDir dir;
    REQUIRE(run_cli("gen-arith --count 12 --seed 4 --out " + dir.file("d.jsonl")) == 0);
    REQUIRE(run_cli("run --dataset " + dir.file("d.jsonl") + " --mode both --count 3 --csv " +
                    dir.file("run.csv")) == 0);
    const auto lines = read_lines(dir.file("run.csv"));
    REQUIRE(!lines.empty());
    CHECK(lines[0] ==
          "example,bin,correct,tokens,mean_sparsity,dense_ms,sparse_ms,dense_tps_incl,"
          "dense_tps_excl,sparse_tps_incl,sparse_tps_excl,token_identity,min_top2_margin");
    CHECK(lines.size() == 4);
    for (std::size_t i = 1; i < lines.size(); ++i) {
        CHECK(lines[i].find(",true,") != std::string::npos);  // oracle accuracy
    }
}

TEST_CASE("bench emits the pinned schema") {
    TempDir dir;
    REQUIRE(run_cli("bench --n-list 256 --sparsity-block-size 32,64 --batch 1 --reps 3 --csv " +
                    dir.file("bench.csv")) == 0);
    const auto lines = read_lines(dir.file("bench.csv"));
    REQUIRE(!lines.empty());
    CHECK(lines[0] == "n,sparsity,sbs,kernel_block,dense_ms,sparse_ms,speedup,rows_read_ratio");
    CHECK(lines.size() == 1 + 2 + 1);  // two sbs rows + the sparsity-0 control
}

TEST_CASE("sparsity-trace writes one row per generated token") {
    TempDir dir;
    REQUIRE(run_cli("gen-arith --count 12 --seed 4 --out " + dir.file("d.jsonl")) == 0);
    REQUIRE(run_cli("sparsity-trace --dataset " + dir.file("d.jsonl") +
                    " --count 1 --min-output-tokens 0 --max-output-tokens 100000 --csv " +
                    dir.file("st.csv")) == 0);
    const auto lines = read_lines(dir.file("st.csv"));
    REQUIRE(lines.size() > 2);
    CHECK(lines[0] == "run,position,phase,attended,ignored,sparsity");

    // Positions advance by one per generated token.
    long prev = -1;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        std::istringstream cells(lines[i]);
        std::string run, position;
        std::getline(cells, run, ',');
        std::getline(cells, position, ',');
        const long p = std::stol(position);
        if (prev >= 0) CHECK(p == prev + 1);
        prev = p;
    }
}

TEST_CASE("breakdown emits one row per sequence length with shares near one") {
    TempDir dir;
    REQUIRE(run_cli("breakdown --seq-lens 128,256,512 --reps 3 --csv " + dir.file("bd.csv")) == 0);
    const auto lines = read_lines(dir.file("bd.csv"));
    REQUIRE(lines.size() == 4);
    CHECK(lines[0] == "seq_len,attention_ms,ffn_ms,other_ms,attention_share,ffn_share,other_share");
    for (std::size_t i = 1; i < lines.size(); ++i) {
        std::istringstream cells(lines[i]);
        std::string cell;
        std::vector<std::string> row;
        while (std::getline(cells, cell, ',')) row.push_back(cell);
        REQUIRE(row.size() == 7);
        const double sum = std::stod(row[4]) + std::stod(row[5]) + std::stod(row[6]);
        CHECK(sum == doctest::Approx(1.0).epsilon(0.02));
    }
}

TEST_CASE("errors exit nonzero") {
    TempDir dir;
    CHECK(run_cli("run --dataset " + dir.file("missing.jsonl") + " --csv " + dir.file("x.csv")) !=
          0);
    REQUIRE(run_cli("gen-arith --count 4 --seed 4 --out " + dir.file("d.jsonl")) == 0);
    CHECK(run_cli("run --dataset " + dir.file("d.jsonl") + " --mode sideways") != 0);
    CHECK(run_cli("definitely-not-a-command") != 0);
}
