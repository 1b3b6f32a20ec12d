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

#include "learnfuzz/encoder.h"

#include <algorithm>

#include "learnfuzz/errors.h"
#include "learnfuzz/rng.h"

namespace learnfuzz {

namespace {

void add_shape_columns(FeatureSchema& s, const std::string& prefix, Kind kind) {
  s.columns.push_back({prefix + ".rank", kind});
  for (int d = 0; d < kMaxRank; ++d) {
    s.columns.push_back({prefix + ".d" + std::to_string(d), kind});
  }
}

// Writes rank + kMaxRank dims; returns the number of slots written.
size_t put_shape(const std::vector<int64_t>& dims, double* out) {
  if (dims.size() > static_cast<size_t>(kMaxRank)) {
    throw EncodingError("rank " + std::to_string(dims.size()) + " exceeds " +
                        std::to_string(kMaxRank));
  }
  out[0] = static_cast<double>(dims.size());
  for (int d = 0; d < kMaxRank; ++d) {
    out[1 + d] = static_cast<size_t>(d) < dims.size() ? static_cast<double>(dims[d]) : kPad;
  }
  return 1 + kMaxRank;
}

}  // namespace

FeatureSchema build_schema(const ParamSpace& space) {
  FeatureSchema s;
  for (const auto& p : space.params()) {
    switch (p.kind) {
      case Kind::kTensor:
      case Kind::kIntList:
        add_shape_columns(s, p.name, p.kind);
        break;
      case Kind::kTensorList:
        s.columns.push_back({p.name + ".arity", p.kind});
        for (int i = 0; i < kMaxArity; ++i) {
          add_shape_columns(s, p.name + "." + std::to_string(i), p.kind);
        }
        break;
      case Kind::kStr: {
        auto& m = s.category_maps[p.name];
        for (size_t i = 0; i < p.str_choices.size(); ++i) {
          m.emplace(p.str_choices[i], static_cast<int>(i));
        }
        s.columns.push_back({p.name, p.kind});
        break;
      }
      default:
        s.columns.push_back({p.name, p.kind});
    }
  }
  return s;
}

uint64_t FeatureSchema::hash() const {
  uint64_t h = fnv1a64("learnfuzz-schema");
  for (const auto& c : columns) {
    h = fnv1a64(c.name, h);
    h = fnv1a64(kind_name(c.kind), h);
    h = fnv1a64("|", h);
  }
  for (const auto& [param, m] : category_maps) {
    h = fnv1a64(param, h);
    for (const auto& [v, code] : m) {
      h = fnv1a64(v + "=" + std::to_string(code) + ";", h);
    }
  }
  return h;
}

FeatureMatrix FeatureMatrix::take(std::span<const size_t> idx) const {
  FeatureMatrix out(idx.size(), cols_);
  for (size_t i = 0; i < idx.size(); ++i) {
    std::copy_n(data_.data() + idx[i] * cols_, cols_, out.data_.data() + i * cols_);
  }
  return out;
}

void encode_into(const InputTuple& tuple, const ParamSpace& space,
                 const FeatureSchema& schema, std::span<double> out) {
  if (out.size() != schema.width()) throw EncodingError("output width mismatch");
  if (tuple.size() != space.size()) {
    throw EncodingError("expected " + std::to_string(space.size()) + " values, got " +
                        std::to_string(tuple.size()));
  }
  double* w = out.data();
  for (size_t i = 0; i < space.size(); ++i) {
    const ParamSpec& p = space[i];
    if (kind_of(tuple[i]) != p.kind) {
      throw EncodingError("kind mismatch at '" + p.name + "'");
    }
    switch (p.kind) {
      case Kind::kTensor:
        w += put_shape(std::get<TensorV>(tuple[i]).shape.dims(), w);
        break;
      case Kind::kIntList:
        w += put_shape(std::get<IntListV>(tuple[i]).values, w);
        break;
      case Kind::kTensorList: {
        const auto& items = std::get<TensorListV>(tuple[i]).items;
        if (items.size() > static_cast<size_t>(kMaxArity)) {
          throw EncodingError("arity " + std::to_string(items.size()) + " exceeds " +
                              std::to_string(kMaxArity));
        }
        *w++ = static_cast<double>(items.size());
        for (int k = 0; k < kMaxArity; ++k) {
          if (static_cast<size_t>(k) < items.size()) {
            w += put_shape(items[k].dims(), w);
          } else {
            std::fill_n(w, 1 + kMaxRank, kPad);
            w += 1 + kMaxRank;
          }
        }
        break;
      }
      case Kind::kInt:
        *w++ = static_cast<double>(std::get<IntV>(tuple[i]).value);
        break;
      case Kind::kFloat:
        *w++ = std::get<FloatV>(tuple[i]).value;
        break;
      case Kind::kBool:
        *w++ = std::get<BoolV>(tuple[i]).value ? 1.0 : 0.0;
        break;
      case Kind::kStr: {
        const auto& v = std::get<StrV>(tuple[i]).value;
        const auto& m = schema.category_maps.at(p.name);
        auto it = m.find(v);
        if (it == m.end()) {
          throw EncodingError("unknown value '" + v + "' for '" + p.name + "'");
        }
        *w++ = static_cast<double>(it->second);
        break;
      }
    }
  }
}

std::vector<double> encode(const InputTuple& tuple, const ParamSpace& space,
                           const FeatureSchema& schema) {
  std::vector<double> out(schema.width());
  encode_into(tuple, space, schema, out);
  return out;
}

FeatureMatrix encode_batch(std::span<const InputTuple> tuples, const ParamSpace& space,
                           const FeatureSchema& schema) {
  FeatureMatrix m(tuples.size(), schema.width());
  for (size_t r = 0; r < tuples.size(); ++r) {
    try {
      encode_into(tuples[r], space, schema, m.row(r));
    } catch (const EncodingError& e) {
      throw EncodingError("row " + std::to_string(r) + ": " + e.what());
    }
  }
  return m;
}

}  // namespace learnfuzz
