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

// Test double for the framework bridge. Speaks the line protocol and
// answers from the built-in oracles, except for a couple of operators it
// pretends not to map. Misbehaviour on request:
//
//   --flip N       invert every Nth verdict
//   --garbage      answer with something that is not JSON
//   --wrong-id     echo a different id
//   --exit-after N quit after N answers
//   --hang         read requests, never answer

#include <chrono>
#include <cstdlib>
#include <iostream>
#include <set>
#include <string>
#include <thread>

#include <nlohmann/json.hpp>

#include "learnfuzz/bridge.h"
#include "learnfuzz/io.h"
#include "learnfuzz/registry.h"

int main(int argc, char** argv) {
  using nlohmann::json;
  long flip = 0, exit_after = -1;
  bool garbage = false, wrong_id = false, hang = false;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--flip" && i + 1 < argc) flip = std::atol(argv[++i]);
    else if (a == "--exit-after" && i + 1 < argc) exit_after = std::atol(argv[++i]);
    else if (a == "--garbage") garbage = true;
    else if (a == "--wrong-id") wrong_id = true;
    else if (a == "--hang") hang = true;
  }

  learnfuzz::BuiltinOptions opts;
  opts.exec_cost_us = 0;
  opts.reject_cost_us = 0;
  const auto reg = learnfuzz::OperatorRegistry::builtin(opts);
  const std::set<std::string> unmapped = {"matrix_inverse", "sigmoid_grad"};

  long served = 0;
  std::string line;
  while (std::getline(std::cin, line)) {
    if (hang) {
      std::this_thread::sleep_for(std::chrono::seconds(60));
      continue;
    }
    if (exit_after >= 0 && served >= exit_after) return 0;
    ++served;
    if (garbage) {
      std::cout << "Traceback (most recent call last):" << std::endl;
      continue;
    }
    json req = json::parse(line, nullptr, false);
    json resp;
    resp["id"] = wrong_id ? json("nope") : req.value("id", json());
    const std::string op = req.value("op", "");
    const auto* spec = reg.find(op);
    if (!spec || unmapped.count(op)) {
      resp["valid"] = false;
      resp["error"] = learnfuzz::kUnsupported;
    } else {
      const auto args = learnfuzz::tuple_from_json(req.at("args").dump(), spec->space);
      const auto v = learnfuzz::validate(*spec, args);
      const bool valid = (flip > 0 && served % flip == 0) ? !v.valid : v.valid;
      resp["valid"] = valid;
      resp["error"] = valid ? json() : json(v.valid ? "flipped" : v.message);
    }
    std::cout << resp.dump() << std::endl;
  }
  return 0;
}
