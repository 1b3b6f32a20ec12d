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

#include "learnfuzz/registry.h"

#include <chrono>
#include <thread>

#include "learnfuzz/errors.h"

namespace learnfuzz {

const Shape& tensor_arg(const InputTuple& t, size_t i) {
  return std::get<TensorV>(t[i]).shape;
}
const std::vector<Shape>& tensor_list_arg(const InputTuple& t, size_t i) {
  return std::get<TensorListV>(t[i]).items;
}
const std::vector<int64_t>& int_list_arg(const InputTuple& t, size_t i) {
  return std::get<IntListV>(t[i]).values;
}
int64_t int_arg(const InputTuple& t, size_t i) {
  return std::get<IntV>(t[i]).value;
}

void check_kinds(const OperatorSpec& op, const InputTuple& tuple) {
  if (tuple.size() != op.space.size()) {
    throw SpecError(op.name + ": expected " + std::to_string(op.space.size()) +
                    " arguments, got " + std::to_string(tuple.size()));
  }
  for (size_t i = 0; i < tuple.size(); ++i) {
    const Kind got = kind_of(tuple[i]);
    if (got != op.space[i].kind) {
      throw SpecError(op.name + ": argument '" + op.space[i].name +
                      "' expects " + std::string(kind_name(op.space[i].kind)) +
                      ", got " + std::string(kind_name(got)));
    }
  }
}

ValidationOutcome validate(const OperatorSpec& op, const InputTuple& tuple) {
  check_kinds(op, tuple);
  return op.oracle(tuple);
}

namespace {

void simulate(int64_t us) {
  if (us <= 0) return;
  std::this_thread::sleep_for(std::chrono::microseconds(us));
}

}  // namespace

ExecutionResult execute(const OperatorSpec& op, const InputTuple& tuple) {
  const auto t0 = std::chrono::steady_clock::now();
  ExecutionResult r;
  r.outcome = validate(op, tuple);
  if (r.outcome.valid) {
    simulate(op.exec_cost_us);
    r.bug_triggered = op.bug && op.bug->trigger(tuple);
  } else {
    simulate(op.reject_cost_us);
  }
  r.elapsed_s = std::chrono::duration<double>(
                    std::chrono::steady_clock::now() - t0)
                    .count();
  return r;
}

void OperatorRegistry::add(OperatorSpec spec) {
  if (spec.name.empty()) throw RegistryError("operator name is empty");
  if (!spec.oracle) throw RegistryError(spec.name + ": missing oracle");
  if (find(spec.name)) {
    throw RegistryError("duplicate operator name: " + spec.name);
  }
  ops_.push_back(std::move(spec));
}

const OperatorSpec* OperatorRegistry::find(std::string_view name) const {
  for (const auto& op : ops_) {
    if (op.name == name) return &op;
  }
  return nullptr;
}

const OperatorSpec& OperatorRegistry::get(std::string_view name) const {
  const OperatorSpec* op = find(name);
  if (!op) throw RegistryError("unknown operator: " + std::string(name));
  return *op;
}

std::vector<std::string> OperatorRegistry::names() const {
  std::vector<std::string> out;
  out.reserve(ops_.size());
  for (const auto& op : ops_) out.push_back(op.name);
  return out;
}

void OperatorRegistry::set_costs(int64_t exec_cost_us, int64_t reject_cost_us) {
  for (auto& op : ops_) {
    op.exec_cost_us = exec_cost_us;
    op.reject_cost_us = reject_cost_us;
  }
}

}  // namespace learnfuzz
