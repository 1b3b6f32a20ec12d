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

// Fixed-width numeric encoding of input tuples. Tensors contribute their
// rank and dims only (padded with -1); element data does not exist.

#ifndef LEARNFUZZ_ENCODER_H_
#define LEARNFUZZ_ENCODER_H_

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "learnfuzz/value_model.h"

namespace learnfuzz {

inline constexpr double kPad = -1.0;

struct Column {
  std::string name;
  Kind kind;  // kind of the source parameter
  friend bool operator==(const Column&, const Column&) = default;
};

struct FeatureSchema {
  std::vector<Column> columns;
  // Per str parameter name: enumeration value -> dense code from 0.
  std::map<std::string, std::map<std::string, int>> category_maps;

  size_t width() const { return columns.size(); }
  // Stable hash of the column layout and category maps.
  uint64_t hash() const;
};

FeatureSchema build_schema(const ParamSpace& space);

// Row-major n x width matrix.
class FeatureMatrix {
 public:
  FeatureMatrix() = default;
  FeatureMatrix(size_t rows, size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  size_t rows() const { return rows_; }
  size_t cols() const { return cols_; }
  double& at(size_t r, size_t c) { return data_[r * cols_ + c]; }
  double at(size_t r, size_t c) const { return data_[r * cols_ + c]; }
  std::span<const double> row(size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }
  std::span<double> row(size_t r) { return {data_.data() + r * cols_, cols_}; }
  const std::vector<double>& data() const { return data_; }

  // Rows picked by index, in the given order.
  FeatureMatrix take(std::span<const size_t> idx) const;

 private:
  size_t rows_ = 0;
  size_t cols_ = 0;
  std::vector<double> data_;
};

// Encodes into `out` (size schema.width()). Throws EncodingError for an
// unknown string value or a kind/arity mismatch.
void encode_into(const InputTuple& tuple, const ParamSpace& space,
                 const FeatureSchema& schema, std::span<double> out);
std::vector<double> encode(const InputTuple& tuple, const ParamSpace& space,
                           const FeatureSchema& schema);
// Throws EncodingError naming the first failing row.
FeatureMatrix encode_batch(std::span<const InputTuple> tuples, const ParamSpace& space,
                           const FeatureSchema& schema);

}  // namespace learnfuzz

#endif  // LEARNFUZZ_ENCODER_H_
