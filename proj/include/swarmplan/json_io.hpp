#pragma once

// JSON / JSONL serialization for datasets, split manifests, models and reports.
// Floats are written with 17 significant digits so files round-trip exactly.

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "swarmplan/dataset.hpp"
#include "swarmplan/eval.hpp"
#include "swarmplan/mlp.hpp"
#include "swarmplan/train.hpp"

namespace swarmplan {

using Json = nlohmann::ordered_json;

/// Compact (indent < 0) or pretty dump; non-finite floats become null.
std::string dump_json(const Json& j, int indent = -1);

Json scenario_to_json(const Scenario& sc);
Scenario scenario_from_json(const Json& j);

Json record_to_json(const DatasetRecord& r);
DatasetRecord record_from_json(const Json& j);

/// One record per line, newline terminated.
void write_dataset(const std::filesystem::path& path, const std::vector<DatasetRecord>& records);
std::vector<DatasetRecord> read_dataset(const std::filesystem::path& path);

Json split_to_json(const SplitIndices& s, std::uint64_t seed);
SplitIndices split_from_json(const Json& j);

Json train_config_to_json(const TrainConfig& c);
TrainConfig train_config_from_json(const Json& j);

/// history may be null; per-epoch timings are never stored so model files are reproducible.
Json model_to_json(const Mlp& net, const TrainConfig* config = nullptr, const TrainHistory* history = nullptr);
Mlp model_from_json(const Json& j);

Json eval_report_to_json(const EvalReport& r);
Json bench_report_to_json(const BenchReport& r);

Json read_json_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace swarmplan
