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

// Typed argument values for operator calls and the parameter-space
// descriptions generators sample from. Tensors are represented by their
// shape only; element data is never materialized.

#ifndef LEARNFUZZ_VALUE_MODEL_H_
#define LEARNFUZZ_VALUE_MODEL_H_

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace learnfuzz {

inline constexpr int kMaxRank = 6;
inline constexpr int kMaxArity = 4;

// Generator bounds. The encoder's column layout is sized by kMaxRank and
// kMaxArity, so max_rank and max_arity may be lowered but never raised.
struct Bounds {
  int max_rank = kMaxRank;
  int64_t max_dim = 10;
  int64_t int_min = -100;
  int64_t int_max = 100;
  double float_min = -1000.0;
  double float_max = 1000.0;
  double special_float_prob = 0.05;
  bool allow_nonfinite_floats = false;
  int max_arity = kMaxArity;

  // Throws std::invalid_argument on inconsistent settings.
  void check() const;
};

class Shape {
 public:
  Shape() = default;
  Shape(std::initializer_list<int64_t> dims) : dims_(dims) {}
  explicit Shape(std::vector<int64_t> dims) : dims_(std::move(dims)) {}

  int rank() const { return static_cast<int>(dims_.size()); }
  const std::vector<int64_t>& dims() const { return dims_; }
  int64_t operator[](size_t i) const { return dims_[i]; }
  // Dimension counted from the end: from_end(1) is the last dimension.
  int64_t from_end(int k) const { return dims_[dims_.size() - k]; }

  friend bool operator==(const Shape&, const Shape&) = default;
  friend auto operator<=>(const Shape&, const Shape&) = default;

 private:
  std::vector<int64_t> dims_;
};

struct TensorV {
  Shape shape;
  friend bool operator==(const TensorV&, const TensorV&) = default;
};
// Variadic tensor argument such as `*tensors`.
struct TensorListV {
  std::vector<Shape> items;
  friend bool operator==(const TensorListV&, const TensorListV&) = default;
};
// A list of small non-negative integers, e.g. the target size list of
// broadcast_to. Sampled and encoded exactly like a shape.
struct IntListV {
  std::vector<int64_t> values;
  friend bool operator==(const IntListV&, const IntListV&) = default;
};
struct IntV {
  int64_t value = 0;
  friend bool operator==(const IntV&, const IntV&) = default;
};
struct FloatV {
  double value = 0.0;
  friend bool operator==(const FloatV&, const FloatV&) = default;
};
struct BoolV {
  bool value = false;
  friend bool operator==(const BoolV&, const BoolV&) = default;
};
struct StrV {
  std::string value;
  friend bool operator==(const StrV&, const StrV&) = default;
};

using Value =
    std::variant<TensorV, TensorListV, IntListV, IntV, FloatV, BoolV, StrV>;

// A concrete positional argument list for one operator call.
using InputTuple = std::vector<Value>;

enum class Kind { kTensor, kTensorList, kIntList, kInt, kFloat, kBool, kStr };

Kind kind_of(const Value& v);
std::string_view kind_name(Kind k);
std::optional<Kind> parse_kind(std::string_view name);

std::string to_string(const Shape& s);
std::string to_string(const Value& v);
std::string to_string(const InputTuple& t);

struct IntRange {
  int64_t lo = 0;
  int64_t hi = 0;
  friend bool operator==(const IntRange&, const IntRange&) = default;
};

struct ParamSpec {
  std::string name;
  Kind kind = Kind::kTensor;
  // Required iff kind == kStr.
  std::vector<std::string> str_choices;
  // Overrides Bounds::int_min/int_max for this parameter (kInt only).
  std::optional<IntRange> int_bounds;

  static ParamSpec tensor(std::string name);
  static ParamSpec tensor_list(std::string name);
  static ParamSpec int_list(std::string name);
  static ParamSpec integer(std::string name,
                           std::optional<IntRange> bounds = std::nullopt);
  static ParamSpec floating(std::string name);
  static ParamSpec boolean(std::string name);
  static ParamSpec string(std::string name, std::vector<std::string> choices);

  // Effective inclusive integer range under the given bounds.
  IntRange int_range(const Bounds& b) const;
};

// Ordered parameter list. Names are unique; order is positional order.
class ParamSpace {
 public:
  ParamSpace() = default;
  // Throws std::invalid_argument if a ParamSpec invariant is violated.
  explicit ParamSpace(std::vector<ParamSpec> params);

  const std::vector<ParamSpec>& params() const { return params_; }
  size_t size() const { return params_.size(); }
  bool empty() const { return params_.empty(); }
  const ParamSpec& operator[](size_t i) const { return params_[i]; }
  std::optional<size_t> index_of(std::string_view name) const;

 private:
  std::vector<ParamSpec> params_;
};

struct FieldReport {
  std::string param;
  bool kind_ok = true;
  bool bounds_ok = true;
  std::string message;
};

struct ConformanceReport {
  bool conformant = true;
  bool kinds_ok = true;
  bool arity_ok = true;
  std::vector<FieldReport> fields;
  std::string summary() const;
};

// Per-parameter check of value kinds and generator bounds.
ConformanceReport conforms(const ParamSpace& space, const InputTuple& tuple,
                           const Bounds& bounds = {});

// Product of dims; 1 for rank 0.
int64_t numel(const Shape& s);

// Trailing-aligned broadcasting: each aligned pair is equal or contains 1.
bool broadcastable(const Shape& a, const Shape& b);

// One-directional broadcast (expand): `from` can be expanded to `to`.
bool expandable_to(const Shape& from, const Shape& to);

}  // namespace learnfuzz

#endif  // LEARNFUZZ_VALUE_MODEL_H_
