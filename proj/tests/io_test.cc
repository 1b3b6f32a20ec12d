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

#include "learnfuzz/io.h"

#include <gtest/gtest.h>

#include <cstring>
#include <nlohmann/json.hpp>

#include "learnfuzz/errors.h"

namespace learnfuzz {
namespace {

OperatorRegistry Registry() {
  BuiltinOptions o;
  o.exec_cost_us = 0;
  o.reject_cost_us = 0;
  return OperatorRegistry::builtin(o);
}

Dataset Sample(const OperatorSpec& op, size_t n, uint64_t seed) {
  GenerationConfig c;
  c.n_samples = n;
  c.seed = seed;
  Dataset ds = label(op, gen_random(op.space, c));
  ds.seed = seed;
  return ds;
}

const ArtifactMeta kMeta{"gen", "00ff00ff00ff00ff", 42, kArtifactFormatVersion};

TEST(MetaTest, RoundTrip) {
  EXPECT_EQ(meta_from_json(meta_json(kMeta)), kMeta);
  EXPECT_THROW(meta_from_json("{\"command\":1}"), Error);
}

TEST(ValueJsonTest, Shapes) {
  EXPECT_EQ(value_json(TensorV{Shape{2, 3}}), R"({"kind":"tensor","shape":[2,3]})");
  const ParamSpace s({ParamSpec::tensor("x"), ParamSpec::integer("k")});
  const InputTuple t{TensorV{Shape{0, 4}}, IntV{-2}};
  EXPECT_EQ(tuple_from_json(tuple_json(t), s), t);
  EXPECT_THROW(tuple_from_json("[{\"kind\":\"int\",\"value\":1}]", s), DatasetIOError);
  EXPECT_THROW(tuple_from_json("not json", s), DatasetIOError);
}

TEST(DatasetJsonlTest, RoundTripEveryOperator) {
  const auto reg = Registry();
  for (const auto& op : reg.list()) {
    const Dataset ds = Sample(op, 200, 3);
    const std::string text = dataset_jsonl(ds, kMeta);
    ArtifactMeta meta;
    const Dataset back = read_dataset_jsonl(text, op, &meta);
    EXPECT_EQ(meta, kMeta);
    ASSERT_EQ(back.size(), ds.size()) << op.name;
    for (size_t i = 0; i < ds.size(); ++i) {
      ASSERT_EQ(back.samples[i].tuple, ds.samples[i].tuple) << op.name;
      ASSERT_EQ(back.samples[i].valid, ds.samples[i].valid);
      ASSERT_EQ(back.samples[i].message, ds.samples[i].message);
    }
    // Re-serializing is byte-identical.
    EXPECT_EQ(dataset_jsonl(back, kMeta), text);
  }
}

TEST(DatasetJsonlTest, RejectsOtherOperators) {
  const auto reg = Registry();
  const std::string text = dataset_jsonl(Sample(reg.get("bmm"), 5, 1), kMeta);
  EXPECT_THROW(read_dataset_jsonl(text, reg.get("dot")), DatasetIOError);
  EXPECT_THROW(read_dataset_jsonl("", reg.get("bmm")), DatasetIOError);
}

TEST(DatasetCsvTest, RoundTripMatchesEncoder) {
  const auto reg = Registry();
  for (const auto& op : reg.list()) {
    const Dataset ds = Sample(op, 150, 4);
    const auto schema = build_schema(op.space);
    const EncodedDataset e = read_dataset_csv(dataset_csv(ds, op.space, kMeta));
    EXPECT_EQ(e.meta, kMeta);
    ASSERT_EQ(e.columns.size(), schema.width());
    for (size_t c = 0; c < schema.width(); ++c) EXPECT_EQ(e.columns[c], schema.columns[c].name);
    const FeatureMatrix X = encode_batch(ds.tuples(), op.space, schema);
    ASSERT_EQ(e.X.rows(), X.rows());
    for (size_t i = 0; i < X.rows(); ++i) {
      ASSERT_EQ(0, std::memcmp(e.X.row(i).data(), X.row(i).data(), X.cols() * sizeof(double)))
          << op.name << " row " << i;
    }
    EXPECT_EQ(e.y, ds.labels());
  }
}

TEST(DatasetCsvTest, Malformed) {
  EXPECT_THROW(read_dataset_csv("x.rank,label\n1,2,3\n"), DatasetIOError);
  EXPECT_THROW(read_dataset_csv("x.rank,label\nfoo,1\n"), DatasetIOError);
  EXPECT_THROW(read_dataset_csv(""), DatasetIOError);
}

TEST(ModelArtifactTest, CarriesMetaAndLoads) {
  FeatureMatrix X(4, 1);
  for (size_t i = 0; i < 4; ++i) X.at(i, 0) = static_cast<double>(i);
  const std::vector<int> y = {1, 1, 0, 0};
  const TrainedModel m = train(X, y, TrainConfig::defaults(Family::kCart));
  const std::string text = model_artifact_json(m, kMeta);
  const auto j = nlohmann::json::parse(text);
  EXPECT_EQ(j.at("meta").at("seed"), 42);
  const TrainedModel back = model_from_json(text);
  EXPECT_EQ(back.predict_batch(X).labels, y);
}

TEST(ModelArtifactTest, TrainPositivesAreOptional) {
  FeatureMatrix X(4, 1);
  for (size_t i = 0; i < 4; ++i) X.at(i, 0) = static_cast<double>(i);
  const std::vector<int> y = {1, 1, 0, 0};
  const TrainedModel m = train(X, y, TrainConfig::defaults(Family::kCart));
  EXPECT_EQ(model_train_positives(model_artifact_json(m, kMeta, 37)), 37u);
  EXPECT_FALSE(model_train_positives(model_artifact_json(m, kMeta)));
  EXPECT_FALSE(model_train_positives(model_to_json(m)));
  EXPECT_THROW(model_train_positives("[1,2]"), ModelIOError);
}

TEST(StripTimingTest, DropsNestedTimingOnly) {
  const std::string a = R"({"a":1,"timing":{"s":0.3},"b":{"timing":5,"c":[{"timing":1,"d":2}]}})";
  const std::string b = R"({"a":1,"timing":{"s":9.1},"b":{"timing":7,"c":[{"timing":0,"d":2}]}})";
  EXPECT_EQ(strip_timing(a), strip_timing(b));
  const auto j = nlohmann::json::parse(strip_timing(a));
  EXPECT_FALSE(j.contains("timing"));
  EXPECT_EQ(j["b"]["c"][0]["d"], 2);
  EXPECT_NE(strip_timing(a), strip_timing(R"({"a":2})"));
}

TEST(ReportJsonTest, FuzzReportKeepsTimingsSeparate) {
  FuzzReport r;
  r.op = "bmm";
  r.candidates = 10;
  r.executed = 4;
  r.valid_executed = 3;
  r.invalid_executed = 1;
  r.filtered_out = 6;
  r.pass_rate = 0.75;
  r.timings.execution_s = 0.25;
  r.valid_per_second = 12.0;
  const auto j = nlohmann::json::parse(fuzz_report_json(r, kMeta));
  EXPECT_EQ(j.at("op"), "bmm");
  EXPECT_EQ(j.at("executed"), 4);
  EXPECT_DOUBLE_EQ(j.at("pass_rate").get<double>(), 0.75);
  ASSERT_TRUE(j.contains("timing"));
  FuzzReport slower = r;
  slower.timings.execution_s = 3.0;
  slower.valid_per_second = 1.0;
  EXPECT_EQ(strip_timing(fuzz_report_json(r, kMeta)),
            strip_timing(fuzz_report_json(slower, kMeta)));
  FuzzReport idle = r;
  idle.executed = 0;
  idle.pass_rate.reset();
  EXPECT_TRUE(nlohmann::json::parse(fuzz_report_json(idle, kMeta)).at("pass_rate").is_null());
}

TEST(FileTest, WriteAndRead) {
  const std::string path = testing::TempDir() + "learnfuzz_io_test.txt";
  write_file(path, "hello\n");
  EXPECT_EQ(read_file(path), "hello\n");
  EXPECT_THROW(read_file(path + ".missing"), Error);
}

}  // namespace
}  // namespace learnfuzz
