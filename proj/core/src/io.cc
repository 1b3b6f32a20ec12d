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

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "learnfuzz/errors.h"

namespace learnfuzz {

using nlohmann::json;
using ordered = nlohmann::ordered_json;

namespace {

ordered meta_obj(const ArtifactMeta& m) {
  ordered j;
  j["command"] = m.command;
  j["config_hash"] = m.config_hash;
  j["seed"] = m.seed;
  j["format_version"] = m.format_version;
  return j;
}

ArtifactMeta meta_from(const json& j) {
  ArtifactMeta m;
  m.command = j.at("command").get<std::string>();
  m.config_hash = j.at("config_hash").get<std::string>();
  m.seed = j.at("seed").get<uint64_t>();
  m.format_version = j.at("format_version").get<int>();
  return m;
}

ordered dims_json(const std::vector<int64_t>& d) {
  ordered a = ordered::array();
  for (int64_t x : d) a.push_back(x);
  return a;
}

ordered value_obj(const Value& v) {
  ordered j;
  j["kind"] = std::string(kind_name(kind_of(v)));
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, TensorV>) {
          j["shape"] = dims_json(x.shape.dims());
        } else if constexpr (std::is_same_v<T, TensorListV>) {
          ordered a = ordered::array();
          for (const Shape& s : x.items) a.push_back(dims_json(s.dims()));
          j["shapes"] = std::move(a);
        } else if constexpr (std::is_same_v<T, IntListV>) {
          j["values"] = dims_json(x.values);
        } else {
          j["value"] = x.value;
        }
      },
      v);
  return j;
}

ordered tuple_obj(const InputTuple& t) {
  ordered a = ordered::array();
  for (const Value& v : t) a.push_back(value_obj(v));
  return a;
}

std::vector<int64_t> int_array(const json& j) {
  if (!j.is_array()) throw DatasetIOError("expected an integer array");
  std::vector<int64_t> out;
  for (const auto& x : j) {
    if (!x.is_number_integer()) throw DatasetIOError("expected an integer array");
    out.push_back(x.get<int64_t>());
  }
  return out;
}

Value value_from(const json& j, Kind expected) {
  const auto kind = parse_kind(j.at("kind").get<std::string>());
  if (!kind) throw DatasetIOError("unknown value kind");
  if (*kind != expected) {
    throw DatasetIOError("expected " + std::string(kind_name(expected)) + ", got " +
                         std::string(kind_name(*kind)));
  }
  switch (*kind) {
    case Kind::kTensor: return TensorV{Shape(int_array(j.at("shape")))};
    case Kind::kTensorList: {
      TensorListV v;
      for (const auto& s : j.at("shapes")) v.items.emplace_back(int_array(s));
      return v;
    }
    case Kind::kIntList: return IntListV{int_array(j.at("values"))};
    case Kind::kInt: return IntV{j.at("value").get<int64_t>()};
    case Kind::kFloat: return FloatV{j.at("value").get<double>()};
    case Kind::kBool: return BoolV{j.at("value").get<bool>()};
    case Kind::kStr: return StrV{j.at("value").get<std::string>()};
  }
  throw DatasetIOError("unknown value kind");
}

InputTuple tuple_from(const json& j, const ParamSpace& space) {
  if (!j.is_array()) throw DatasetIOError("args must be an array");
  if (j.size() != space.size()) {
    throw DatasetIOError("expected " + std::to_string(space.size()) + " args, got " +
                         std::to_string(j.size()));
  }
  InputTuple t;
  for (size_t i = 0; i < j.size(); ++i) t.push_back(value_from(j[i], space.params()[i].kind));
  return t;
}

// Integral features print as integers; anything else round-trips via %.17g.
std::string num(double v) {
  if (std::isfinite(v) && std::nearbyint(v) == v && std::fabs(v) < 1e15) {
    return std::to_string(static_cast<int64_t>(v));
  }
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

ordered opt(const std::optional<double>& v) { return v ? ordered(*v) : ordered(nullptr); }

ordered eval_obj(const EvalReport& r) {
  ordered j;
  j["tp"] = r.confusion.tp;
  j["fp"] = r.confusion.fp;
  j["tn"] = r.confusion.tn;
  j["fn"] = r.confusion.fn;
  j["precision"] = opt(r.precision);
  j["recall"] = opt(r.recall);
  j["accuracy"] = opt(r.accuracy);
  j["f1"] = opt(r.f1);
  j["positives_in_eval"] = r.positives_in_eval;
  return j;
}

ordered fuzz_obj(const FuzzReport& r) {
  ordered j;
  j["op"] = r.op;
  j["mode"] = std::string(fuzz_mode_name(r.mode));
  j["filter"] = r.filter;
  j["seed"] = r.seed;
  j["batch_size"] = r.batch_size;
  j["candidates"] = r.candidates;
  j["executed"] = r.executed;
  j["valid_executed"] = r.valid_executed;
  j["invalid_executed"] = r.invalid_executed;
  j["filtered_out"] = r.filtered_out;
  j["bugs_triggered"] = r.bugs_triggered;
  j["confusion"] = {{"tp", r.confusion.tp},
                    {"fp", r.confusion.fp},
                    {"tn", r.confusion.tn},
                    {"fn", r.confusion.fn}};
  j["pass_rate"] = opt(r.pass_rate);
  if (!r.discarded_valid.empty()) j["discarded_valid"] = r.discarded_valid;
  ordered t;
  t["generation_s"] = r.timings.generation_s;
  t["processing_s"] = r.timings.processing_s;
  t["inference_s"] = r.timings.inference_s;
  t["execution_s"] = r.timings.execution_s;
  t["total_s"] = r.timings.total();
  t["valid_per_second"] = r.valid_per_second;
  j["timing"] = std::move(t);
  return j;
}

ordered stat_obj(const StatResult& s) {
  return ordered{{"method", s.method}, {"statistic", s.statistic}, {"p_value", s.p_value}};
}

void strip(ordered& j) {
  if (j.is_object()) {
    j.erase("timing");
    for (auto& [k, v] : j.items()) strip(v);
  } else if (j.is_array()) {
    for (auto& v : j) strip(v);
  }
}

}  // namespace

std::string meta_json(const ArtifactMeta& m) { return meta_obj(m).dump(); }

ArtifactMeta meta_from_json(std::string_view text) {
  try {
    return meta_from(json::parse(text));
  } catch (const json::exception& e) {
    throw DatasetIOError(std::string("bad artifact meta: ") + e.what());
  }
}

std::string value_json(const Value& v) { return value_obj(v).dump(); }
std::string tuple_json(const InputTuple& t) { return tuple_obj(t).dump(); }

InputTuple tuple_from_json(std::string_view text, const ParamSpace& space) {
  try {
    return tuple_from(json::parse(text), space);
  } catch (const json::exception& e) {
    throw DatasetIOError(std::string("bad tuple: ") + e.what());
  }
}

std::string dataset_csv(const Dataset& ds, const ParamSpace& space, const ArtifactMeta& meta) {
  const FeatureSchema schema = build_schema(space);
  ordered head;
  head["meta"] = meta_obj(meta);
  head["op"] = ds.op;
  head["strategy"] = std::string(strategy_name(ds.strategy));
  head["schema_hash"] = schema.hash();
  std::string out = "# " + head.dump() + "\n";
  for (const Column& c : schema.columns) out += c.name + ",";
  out += "label\n";
  std::vector<double> row(schema.width());
  for (const LabeledSample& s : ds.samples) {
    encode_into(s.tuple, space, schema, row);
    for (double v : row) out += num(v) + ",";
    out += s.valid ? "1\n" : "0\n";
  }
  return out;
}

EncodedDataset read_dataset_csv(std::string_view text) {
  EncodedDataset d;
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line) || line.rfind("# ", 0) != 0) {
    throw DatasetIOError("missing '# {meta}' first line");
  }
  try {
    const json head = json::parse(line.substr(2));
    d.meta = meta_from(head.at("meta"));
    d.op = head.at("op").get<std::string>();
  } catch (const json::exception& e) {
    throw DatasetIOError(std::string("bad dataset header: ") + e.what());
  }
  if (!std::getline(in, line)) throw DatasetIOError("missing column header");
  {
    std::istringstream h(line);
    std::string col;
    while (std::getline(h, col, ',')) d.columns.push_back(col);
  }
  if (d.columns.empty() || d.columns.back() != "label") {
    throw DatasetIOError("last column must be 'label'");
  }
  d.columns.pop_back();
  const size_t w = d.columns.size();
  std::vector<double> data;
  size_t lineno = 2;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const char* p = line.data();
    const char* end = p + line.size();
    for (size_t c = 0; c <= w; ++c) {
      const char* comma = std::find(p, end, ',');
      if ((c < w) != (comma != end)) {
        throw DatasetIOError("line " + std::to_string(lineno) + ": expected " +
                             std::to_string(w + 1) + " fields");
      }
      const std::string field(p, comma);
      char* stop = nullptr;
      const double v = std::strtod(field.c_str(), &stop);
      if (field.empty() || *stop != '\0') {
        throw DatasetIOError("line " + std::to_string(lineno) + ": bad number '" + field + "'");
      }
      if (c < w) {
        data.push_back(v);
      } else {
        if (v != 0.0 && v != 1.0) {
          throw DatasetIOError("line " + std::to_string(lineno) + ": label must be 0 or 1");
        }
        d.y.push_back(static_cast<int>(v));
      }
      p = comma == end ? end : comma + 1;
    }
  }
  d.X = FeatureMatrix(d.y.size(), w);
  for (size_t r = 0; r < d.y.size(); ++r) {
    std::copy_n(data.begin() + static_cast<std::ptrdiff_t>(r * w), w, d.X.row(r).begin());
  }
  return d;
}

std::string dataset_jsonl(const Dataset& ds, const ArtifactMeta& meta) {
  ordered head;
  head["meta"] = meta_obj(meta);
  head["op"] = ds.op;
  head["strategy"] = std::string(strategy_name(ds.strategy));
  head["n"] = ds.size();
  std::string out = head.dump() + "\n";
  for (const LabeledSample& s : ds.samples) {
    ordered j;
    j["op"] = ds.op;
    j["args"] = tuple_obj(s.tuple);
    j["label"] = s.valid ? 1 : 0;
    j["message"] = s.message;
    out += j.dump() + "\n";
  }
  return out;
}

Dataset read_dataset_jsonl(std::string_view text, const OperatorSpec& op, ArtifactMeta* meta) {
  std::istringstream in{std::string(text)};
  std::string line;
  Dataset ds;
  ds.op = op.name;
  try {
    if (!std::getline(in, line)) throw DatasetIOError("empty dataset file");
    const json head = json::parse(line);
    if (meta) *meta = meta_from(head.at("meta"));
    if (head.at("op").get<std::string>() != op.name) {
      throw DatasetIOError("dataset is for " + head.at("op").get<std::string>() + ", not " +
                           op.name);
    }
    const auto st = parse_strategy(head.at("strategy").get<std::string>());
    if (!st) throw DatasetIOError("unknown strategy in header");
    ds.strategy = *st;
    ds.seed = head.at("meta").at("seed").get<uint64_t>();
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      const json j = json::parse(line);
      LabeledSample s;
      s.tuple = tuple_from(j.at("args"), op.space);
      s.valid = j.at("label").get<int>() != 0;
      s.message = j.at("message").get<std::string>();
      ds.samples.push_back(std::move(s));
    }
  } catch (const json::exception& e) {
    throw DatasetIOError(std::string("bad dataset record: ") + e.what());
  }
  return ds;
}

std::string model_artifact_json(const TrainedModel& m, const ArtifactMeta& meta,
                                std::optional<size_t> train_positives) {
  ordered j = ordered::parse(model_to_json(m));
  j["meta"] = meta_obj(meta);
  if (train_positives) j["train_positives"] = *train_positives;
  return j.dump() + "\n";
}

std::optional<size_t> model_train_positives(std::string_view model_json) {
  const json j = json::parse(model_json, nullptr, false);
  if (!j.is_object()) throw ModelIOError("model file is not a JSON object");
  const auto it = j.find("train_positives");
  if (it == j.end() || !it->is_number_unsigned()) return std::nullopt;
  return it->get<size_t>();
}

std::string eval_report_json(const EvalReport& r) { return eval_obj(r).dump(); }

std::string leaderboard_json(const Leaderboard& lb, const ArtifactMeta& meta,
                             const std::string& op) {
  ordered j;
  j["meta"] = meta_obj(meta);
  j["op"] = op;
  ordered entries = ordered::array();
  for (const auto& e : lb.entries) {
    ordered x;
    x["family"] = std::string(family_name(e.family));
    x["f1"] = opt(e.f1);
    x["accuracy"] = opt(e.accuracy);
    x["precision"] = opt(e.precision);
    x["recall"] = opt(e.recall);
    if (!e.error.empty()) x["error"] = e.error;
    x["timing"] = {{"train_s", e.train_seconds}};
    entries.push_back(std::move(x));
  }
  j["entries"] = std::move(entries);
  j["best"] = std::string(family_name(lb.top().family));
  return j.dump();
}

std::string fuzz_report_json(const FuzzReport& r, const ArtifactMeta& meta) {
  ordered j;
  j["meta"] = meta_obj(meta);
  const ordered body = fuzz_obj(r);
  for (const auto& [k, v] : body.items()) j[k] = v;
  return j.dump();
}

std::string generalization_json(const GeneralizationReport& r, const ArtifactMeta& meta) {
  ordered j;
  j["meta"] = meta_obj(meta);
  j["op"] = r.op;
  j["strategy"] = std::string(strategy_name(r.strategy));
  j["n"] = r.n;
  j["seed"] = r.seed;
  j["eval"] = eval_obj(r.eval);
  j["positives_in_training"] =
      r.positives_in_training ? ordered(*r.positives_in_training) : ordered();
  j["flags"] = r.low_support ? ordered::array({"LOW_SUPPORT"}) : ordered::array();
  return j.dump();
}

std::string bug_report_json(const BugReport& r, const ArtifactMeta& meta) {
  ordered j;
  j["meta"] = meta_obj(meta);
  j["op"] = r.op;
  j["bug"] = r.description;
  j["seed"] = r.seed;
  j["samples"] = r.samples;
  j["triggers"] = r.triggers;
  j["predicted_valid"] = r.predicted_valid;
  j["success_ratio"] = opt(r.success_ratio);
  return j.dump();
}

std::string campaign_json(const CampaignResult& r, const ArtifactMeta& meta) {
  ordered j;
  j["meta"] = meta_obj(meta);
  ordered ops = ordered::array();
  for (const auto& c : r.ops) {
    ordered x;
    x["op"] = c.op;
    x["complete"] = c.complete;
    if (c.complete) {
      x["unfiltered"] = fuzz_obj(c.unfiltered);
      x["filtered"] = fuzz_obj(c.filtered);
    } else {
      x["error"] = c.error;
    }
    ops.push_back(std::move(x));
  }
  j["ops"] = std::move(ops);
  j["mean_pass_unfiltered"] = r.mean_pass_unfiltered;
  j["mean_pass_filtered"] = r.mean_pass_filtered;
  j["ks_unfiltered"] = stat_obj(r.ks_unfiltered);
  j["ks_filtered"] = stat_obj(r.ks_filtered);
  j["wilcoxon"] = stat_obj(r.wilcoxon);
  j["cohens_d"] = r.cohens_d;
  j["effect_size"] = r.effect_size;
  return j.dump();
}

std::string strip_timing(std::string_view json_text) {
  std::string out;
  std::istringstream in{std::string(json_text)};
  std::string line;
  // Works for both single documents and JSON lines.
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    ordered j = ordered::parse(line);
    strip(j);
    out += j.dump() + "\n";
  }
  return out;
}

void write_file(const std::string& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DatasetIOError("cannot open " + path + " for writing");
  out << text;
  if (!out) throw DatasetIOError("write failed: " + path);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DatasetIOError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace learnfuzz
