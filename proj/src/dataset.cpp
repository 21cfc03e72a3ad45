#include "spanattn/dataset.hpp"

#include <json.hpp>

#include <istream>
#include <ostream>

namespace spanattn {

using json = nlohmann::ordered_json;

Dataset generate_dataset(const DatasetConfig& config, const Vocab& vocab) {
    if (config.count < 1 || config.bin_width < 1 || config.max_output_tokens < config.bin_width)
        throw DimensionError("bad dataset config");
    const int bins = static_cast<int>(config.max_output_tokens / config.bin_width);
    const std::int64_t max_attempts =
        config.max_attempts > 0 ? config.max_attempts : std::int64_t(400) * config.count;

    Dataset dataset;
    std::vector<int> targets(bins, config.count / bins);
    for (int b = 0; b < config.count % bins; ++b) ++targets[b];
    std::vector<int> filled(bins, 0);
    int remaining = config.count;

    for (std::int64_t attempt = 0; attempt < max_attempts && remaining > 0; ++attempt) {
        ++dataset.attempts;
        GenConfig gen = config.gen;
        gen.seed = mix_seed(config.gen.seed, static_cast<std::uint64_t>(attempt)) >> 33;
        const auto expr = gen_expression(gen);
        EvaluationTrace trace;
        try {
            trace = solve_with_trace(*expr, vocab);
        } catch (const std::runtime_error&) {
            continue;  // anchor budget exceeded; resample
        }
        const Index out_tokens = output_token_count(tokenize_trace(trace, vocab));
        if (out_tokens >= config.max_output_tokens) continue;
        const int bin = static_cast<int>(out_tokens / config.bin_width);
        if (filled[bin] >= targets[bin]) continue;
        ++filled[bin];
        --remaining;
        dataset.examples.push_back({std::move(trace), bin, gen.seed});
    }

    for (int b = 0; b < bins; ++b) dataset.bins.push_back({b, targets[b], filled[b]});
    return dataset;
}

namespace {

json refs_to_json(const std::vector<Ref>& refs) {
    json out = json::array();
    for (const Ref& ref : refs) {
        switch (ref.kind) {
            case Ref::Kind::kAnchor: out.push_back(ref.a); break;
            case Ref::Kind::kPrev: out.push_back("prev"); break;
            case Ref::Kind::kRange: out.push_back(json::array({ref.a, ref.b})); break;
        }
    }
    return out;
}

std::vector<Ref> refs_from_json(const json& refs) {
    std::vector<Ref> out;
    for (const auto& item : refs) {
        if (item.is_number_integer()) {
            out.push_back(Ref::anchor(item.get<int>()));
        } else if (item.is_string() && item.get<std::string>() == "prev") {
            out.push_back(Ref::prev());
        } else if (item.is_array() && item.size() == 2) {
            out.push_back(Ref::range(item[0].get<int>(), item[1].get<int>()));
        } else {
            throw std::invalid_argument("malformed refs entry in dataset record");
        }
    }
    return out;
}

}  // namespace

void write_dataset_jsonl(std::ostream& out, const Dataset& dataset) {
    for (const DatasetExample& example : dataset.examples) {
        json record;
        record["expression"] = example.trace.expression;
        record["answer"] = example.trace.answer.to_string();
        json lines = json::array();
        for (const TraceLine& line : example.trace.lines) {
            json entry;
            entry["refs"] = refs_to_json(line.refs);
            entry["text"] = line.text;
            entry["anchor"] = line.anchor ? json(*line.anchor) : json(nullptr);
            lines.push_back(std::move(entry));
        }
        record["lines"] = std::move(lines);
        record["bin"] = example.bin;
        record["seed"] = example.seed;
        out << record.dump() << '\n';
    }
}

EvaluationTrace trace_from_record(const std::string& expression, const std::string& answer,
                                  const std::vector<TraceLine>& lines, const Vocab& vocab) {
    EvaluationTrace trace;
    trace.expression = expression;
    trace.answer = BigInt::from_string(answer);
    trace.lines = lines;

    const TokenizedTrace tokenized = tokenize_trace(trace, vocab);
    for (std::size_t i = 1; i < trace.lines.size(); ++i) {
        trace.lines[i].dependency_ranges.clear();
        for (const Ref& ref : trace.lines[i].refs) {
            switch (ref.kind) {
                case Ref::Kind::kAnchor:
                    trace.lines[i].dependency_ranges.push_back(tokenized.anchors.at(ref.a));
                    break;
                case Ref::Kind::kRange:
                    for (int k = ref.a; k <= ref.b; ++k)
                        trace.lines[i].dependency_ranges.push_back(tokenized.anchors.at(k));
                    break;
                case Ref::Kind::kPrev:
                    trace.lines[i].dependency_ranges.push_back(tokenized.lines[i - 1]);
                    break;
            }
        }
    }
    return trace;
}

std::vector<DatasetExample> read_dataset_jsonl(std::istream& in) {
    std::vector<DatasetExample> examples;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const json record = json::parse(line);
        std::vector<TraceLine> lines;
        for (const auto& entry : record.at("lines")) {
            TraceLine trace_line;
            trace_line.refs = refs_from_json(entry.at("refs"));
            trace_line.text = entry.at("text").get<std::string>();
            if (!entry.at("anchor").is_null()) trace_line.anchor = entry.at("anchor").get<int>();
            lines.push_back(std::move(trace_line));
        }
        DatasetExample example;
        example.trace = trace_from_record(record.at("expression").get<std::string>(),
                                          record.at("answer").get<std::string>(), lines);
        example.bin = record.at("bin").get<int>();
        example.seed = record.at("seed").get<std::uint64_t>();
        examples.push_back(std::move(example));
    }
    return examples;
}

}  // namespace spanattn
