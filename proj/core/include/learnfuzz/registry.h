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

// Operator specifications: a parameter space plus a deterministic validity
// oracle standing in for a DL library's input-validation code.

#ifndef LEARNFUZZ_REGISTRY_H_
#define LEARNFUZZ_REGISTRY_H_

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "learnfuzz/rng.h"
#include "learnfuzz/value_model.h"

namespace learnfuzz {

struct ValidationOutcome {
  bool valid = true;
  std::string message;  // non-empty iff !valid

  static ValidationOutcome Valid() { return {}; }
  static ValidationOutcome Rejected(std::string msg) {
    return {false, std::move(msg)};
  }
  friend bool operator==(const ValidationOutcome&,
                         const ValidationOutcome&) = default;
};

using Oracle = std::function<ValidationOutcome(const InputTuple&)>;

struct BugPredicate {
  std::string description;
  // Must only hold for tuples the oracle accepts.
  std::function<bool(const InputTuple&)> trigger;
};

// Draws a tuple that satisfies a fixed subset of the operator's
// constraints; used by the weak generator's "partial" relaxation.
using PartialSampler = std::function<InputTuple(Rng&, const Bounds&)>;

struct OperatorSpec {
  std::string name;
  ParamSpace space;
  Oracle oracle;
  std::optional<BugPredicate> bug;
  // Simulated latency of a call, in microseconds.
  int64_t exec_cost_us = 1000;
  int64_t reject_cost_us = 100;

  PartialSampler partial;
  std::string partial_note;  // which constraints the partial sampler enforces

  // Catalog documentation.
  std::string signature;
  std::vector<std::string> constraints;  // in check order
};

struct ExecutionResult {
  ValidationOutcome outcome;
  bool bug_triggered = false;
  double elapsed_s = 0.0;
};

// Throws SpecError when the tuple's value kinds or count do not match the
// operator's parameter space. Bounds are not enforced.
void check_kinds(const OperatorSpec& op, const InputTuple& tuple);

// Kind-checked oracle call.
ValidationOutcome validate(const OperatorSpec& op, const InputTuple& tuple);

// validate, then wait out the simulated cost, then evaluate the bug
// predicate (valid calls only).
ExecutionResult execute(const OperatorSpec& op, const InputTuple& tuple);

struct BuiltinOptions {
  // The real max_pool2d additionally rejects padding > kernel_size / 2.
  bool max_pool2d_half_kernel_padding = true;
  int64_t exec_cost_us = 1000;
  int64_t reject_cost_us = 100;
};

class OperatorRegistry {
 public:
  OperatorRegistry() = default;

  // The 12 built-in operators, in catalog order.
  static OperatorRegistry builtin(const BuiltinOptions& opts = {});

  // Throws RegistryError on a duplicate or empty name, or a missing oracle.
  void add(OperatorSpec spec);

  // Throws RegistryError for unknown names.
  const OperatorSpec& get(std::string_view name) const;
  const OperatorSpec* find(std::string_view name) const;

  const std::vector<OperatorSpec>& list() const { return ops_; }
  std::vector<std::string> names() const;
  size_t size() const { return ops_.size(); }

  // Sets exec/reject cost on every operator (tests use 0).
  void set_costs(int64_t exec_cost_us, int64_t reject_cost_us);

 private:
  std::vector<OperatorSpec> ops_;
};

// Accessors shared by oracles and tests.
const Shape& tensor_arg(const InputTuple& t, size_t i);
const std::vector<Shape>& tensor_list_arg(const InputTuple& t, size_t i);
const std::vector<int64_t>& int_list_arg(const InputTuple& t, size_t i);
int64_t int_arg(const InputTuple& t, size_t i);

}  // namespace learnfuzz

#endif  // LEARNFUZZ_REGISTRY_H_
