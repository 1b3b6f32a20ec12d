// Copyright 2026 The learnfuzz Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Artifact serialization. Formats are described in docs/formats.md.
// Anything time-dependent lives under a "timing" key so the rest of a
// record is reproducible byte for byte.

#ifndef LEARNFUZZ_IO_H_
#define LEARNFUZZ_IO_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "learnfuzz/datagen.h"
#include "learnfuzz/encoder.h"
#include "learnfuzz/learners.h"
#include "learnfuzz/pipeline.h"

namespace learnfuzz {

inline constexpr int kArtifactFormatVersion = 1;

struct ArtifactMeta {
  std::string command;
  std::string config_hash;  // hex
  uint64_t seed = 0;
  int format_version = kArtifactFormatVersion;
  friend bool operator==(const ArtifactMeta&, const ArtifactMeta&) = default;
};

// JSON object text, e.g. {"command":"gen",...}.
std::string meta_json(const ArtifactMeta& m);
ArtifactMeta meta_from_json(std::string_view text);

// One value / tuple on the wire: {"kind":"tensor","shape":[2,3]} etc.
std::string value_json(const Value& v);
std::string tuple_json(const InputTuple& t);  // JSON array
// Checks kinds against the space; throws DatasetIOError.
InputTuple tuple_from_json(std::string_view text, const ParamSpace& space);

// Encoded dataset: a "# {meta}" line, a header of feature names plus
// "label", then one row per sample.
std::string dataset_csv(const Dataset& ds, const ParamSpace& space, const ArtifactMeta& meta);

struct EncodedDataset {
  ArtifactMeta meta;
  std::string op;
  std::vector<std::string> columns;  // without "label"
  FeatureMatrix X;
  std::vector<int> y;
};
EncodedDataset read_dataset_csv(std::string_view text);

// Raw tuples: first line {"meta":...,"op":...,"strategy":...}, then
// {"op","args","label","message"} per sample.
std::string dataset_jsonl(const Dataset& ds, const ArtifactMeta& meta);
Dataset read_dataset_jsonl(std::string_view text, const OperatorSpec& op,
                           ArtifactMeta* meta = nullptr);

// Model file with the artifact meta attached under "meta" and, when known,
// the number of valid samples it was fit on under "train_positives".
std::string model_artifact_json(const TrainedModel& m, const ArtifactMeta& meta,
                                std::optional<size_t> train_positives = {});
// nullopt when the file does not say.
std::optional<size_t> model_train_positives(std::string_view model_json);

// Single-line JSON records.
std::string eval_report_json(const EvalReport& r);
std::string leaderboard_json(const Leaderboard& lb, const ArtifactMeta& meta,
                             const std::string& op);
std::string fuzz_report_json(const FuzzReport& r, const ArtifactMeta& meta);
std::string generalization_json(const GeneralizationReport& r, const ArtifactMeta& meta);
std::string bug_report_json(const BugReport& r, const ArtifactMeta& meta);
std::string campaign_json(const CampaignResult& r, const ArtifactMeta& meta);

// Drops every "timing" member, recursively, and re-serializes. Used to
// compare reports across runs.
std::string strip_timing(std::string_view json_text);

void write_file(const std::string& path, std::string_view text);
std::string read_file(const std::string& path);

}  // namespace learnfuzz

#endif  // LEARNFUZZ_IO_H_
