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

#ifndef LEARNFUZZ_SAMPLING_H_
#define LEARNFUZZ_SAMPLING_H_

#include "learnfuzz/rng.h"
#include "learnfuzz/value_model.h"

namespace learnfuzz {

// Rank uniform in [0, max_rank], each dim uniform in [0, max_dim].
Shape random_shape(Rng& rng, const Bounds& b);
Shape random_shape_of_rank(Rng& rng, const Bounds& b, int rank);

// Uniform draw from the parameter's domain.
Value random_value(Rng& rng, const ParamSpec& spec, const Bounds& b);
InputTuple random_tuple(Rng& rng, const ParamSpace& space, const Bounds& b);

// Draws from the float domain: bounded uniform with a small chance of a
// special value (0, -1, 1), plus NaN/inf when the bounds allow them.
double random_float(Rng& rng, const Bounds& b);

}  // namespace learnfuzz

#endif  // LEARNFUZZ_SAMPLING_H_
