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

#include "learnfuzz/sampling.h"

#include <limits>

namespace learnfuzz {

Shape random_shape_of_rank(Rng& rng, const Bounds& b, int rank) {
  std::vector<int64_t> dims(static_cast<size_t>(rank));
  for (auto& d : dims) d = rng.uniform_int(0, b.max_dim);
  return Shape(std::move(dims));
}

Shape random_shape(Rng& rng, const Bounds& b) {
  const int rank = static_cast<int>(rng.uniform_int(0, b.max_rank));
  return random_shape_of_rank(rng, b, rank);
}

double random_float(Rng& rng, const Bounds& b) {
  if (b.allow_nonfinite_floats && rng.bernoulli(0.01)) {
    static constexpr double kNonFinite[] = {
        std::numeric_limits<double>::quiet_NaN(),
        std::numeric_limits<double>::infinity(),
        -std::numeric_limits<double>::infinity()};
    return kNonFinite[rng.index(3)];
  }
  if (rng.bernoulli(b.special_float_prob)) {
    static constexpr double kSpecial[] = {0.0, -1.0, 1.0};
    return kSpecial[rng.index(3)];
  }
  return rng.uniform_real(b.float_min, b.float_max);
}

Value random_value(Rng& rng, const ParamSpec& spec, const Bounds& b) {
  switch (spec.kind) {
    case Kind::kTensor:
      return TensorV{random_shape(rng, b)};
    case Kind::kTensorList: {
      TensorListV out;
      const int64_t arity = rng.uniform_int(1, b.max_arity);
      for (int64_t i = 0; i < arity; ++i) out.items.push_back(random_shape(rng, b));
      return out;
    }
    case Kind::kIntList:
      return IntListV{random_shape(rng, b).dims()};
    case Kind::kInt: {
      const IntRange r = spec.int_range(b);
      return IntV{rng.uniform_int(r.lo, r.hi)};
    }
    case Kind::kFloat:
      return FloatV{random_float(rng, b)};
    case Kind::kBool:
      return BoolV{rng.bernoulli(0.5)};
    case Kind::kStr:
      return StrV{spec.str_choices[rng.index(spec.str_choices.size())]};
  }
  return IntV{0};
}

InputTuple random_tuple(Rng& rng, const ParamSpace& space, const Bounds& b) {
  InputTuple t;
  t.reserve(space.size());
  for (const auto& p : space.params()) t.push_back(random_value(rng, p, b));
  return t;
}

}  // namespace learnfuzz
