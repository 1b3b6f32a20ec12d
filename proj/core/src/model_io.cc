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

// Model files are JSON. nlohmann::json prints doubles in the shortest form
// that parses back to the same value, so scores survive a round trip
// bit-for-bit.

#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "learnfuzz/errors.h"
#include "learnfuzz/learners.h"

namespace learnfuzz {

using nlohmann::json;

namespace {

constexpr const char* kFormat = "learnfuzz-model";

json node_to_json(const Tree& t, int i) {
  const TreeNode& n = t.nodes[i];
  if (n.is_leaf()) return json{{"leaf", n.value}};
  return json{{"feature", n.feature},
              {"threshold", n.threshold},
              {"left", node_to_json(t, n.left)},
              {"right", node_to_json(t, n.right)}};
}

int node_from_json(const json& j, Tree& t, size_t n_features, int depth) {
  if (depth > 4096) throw ModelIOError("tree too deep");
  if (!j.is_object()) throw ModelIOError("tree node is not an object");
  const int id = static_cast<int>(t.nodes.size());
  t.nodes.emplace_back();
  if (j.contains("leaf")) {
    const double v = j.at("leaf").get<double>();
    if (!std::isfinite(v)) throw ModelIOError("non-finite leaf value");
    t.nodes[id].value = v;
    return id;
  }
  const int f = j.at("feature").get<int>();
  const double thr = j.at("threshold").get<double>();
  if (f < 0 || static_cast<size_t>(f) >= n_features) {
    throw ModelIOError("feature index out of range");
  }
  if (!std::isfinite(thr)) throw ModelIOError("non-finite threshold");
  t.nodes[id].feature = f;
  t.nodes[id].threshold = thr;
  const int l = node_from_json(j.at("left"), t, n_features, depth + 1);
  const int r = node_from_json(j.at("right"), t, n_features, depth + 1);
  t.nodes[id].left = l;
  t.nodes[id].right = r;
  return id;
}

}  // namespace

std::string model_to_json(const TrainedModel& m) {
  if (m.trees().empty()) throw ModelIOError("refusing to save a model without trees");
  json trees = json::array();
  for (const Tree& t : m.trees()) {
    if (t.nodes.empty()) throw ModelIOError("refusing to save an empty tree");
    trees.push_back(node_to_json(t, 0));
  }
  json j;
  j["format"] = kFormat;
  j["version"] = kModelFormatVersion;
  j["family"] = family_name(m.family());
  j["schema_hash"] = m.schema_hash();
  j["n_features"] = m.n_features();
  j["bias"] = m.bias();
  j["tree_weight"] = m.tree_weight();
  j["threshold"] = m.threshold();
  j["trees"] = std::move(trees);
  return j.dump() + "\n";
}

TrainedModel model_from_json(std::string_view text) {
  try {
    const json j = json::parse(text);
    if (j.value("format", "") != kFormat) throw ModelIOError("not a learnfuzz model file");
    const int version = j.at("version").get<int>();
    if (version != kModelFormatVersion) {
      throw ModelIOError("unsupported model version " + std::to_string(version));
    }
    const auto family = parse_family(j.at("family").get<std::string>());
    if (!family) throw ModelIOError("unknown model family");
    const size_t width = j.at("n_features").get<size_t>();
    const auto& jt = j.at("trees");
    if (!jt.is_array() || jt.empty()) throw ModelIOError("model has no trees");
    std::vector<Tree> trees;
    for (const auto& root : jt) {
      Tree t;
      node_from_json(root, t, width, 0);
      trees.push_back(std::move(t));
    }
    return TrainedModel(*family, std::move(trees), j.at("tree_weight").get<double>(),
                        j.at("bias").get<double>(), j.at("threshold").get<double>(), width,
                        j.at("schema_hash").get<uint64_t>());
  } catch (const json::exception& e) {
    throw ModelIOError(std::string("malformed model file: ") + e.what());
  }
}

void save_model(const TrainedModel& m, const std::string& path) {
  const std::string text = model_to_json(m);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ModelIOError("cannot open " + path + " for writing");
  out << text;
  if (!out) throw ModelIOError("write failed: " + path);
}

TrainedModel load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ModelIOError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return model_from_json(ss.str());
}

}  // namespace learnfuzz
