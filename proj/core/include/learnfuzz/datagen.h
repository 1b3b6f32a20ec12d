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

// Training-data generation: random and pairwise strategies, the weak
// (partially constraint-aware) generator, execution labeling and splits.

#ifndef LEARNFUZZ_DATAGEN_H_
#define LEARNFUZZ_DATAGEN_H_

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "learnfuzz/registry.h"
#include "learnfuzz/rng.h"
#include "learnfuzz/value_model.h"

namespace learnfuzz {

enum class Strategy { kRandom, kPairwise, kWeak };
enum class Relaxation { kNone, kPartial, kFull };

std::string_view strategy_name(Strategy s);
std::optional<Strategy> parse_strategy(std::string_view s);
std::string_view relaxation_name(Relaxation r);
std::optional<Relaxation> parse_relaxation(std::string_view s);

struct GenerationConfig {
  size_t n_samples = 10000;
  uint64_t seed = 0;
  Bounds bounds;
  int pairwise_levels_per_param = 8;
  // Consecutive rejections before full relaxation gives up.
  size_t max_rejections = 1000000;

  void check() const;
};

struct LabeledSample {
  InputTuple tuple;
  bool valid = false;
  std::string message;  // non-empty iff !valid
};

struct Dataset {
  std::string op;
  std::vector<LabeledSample> samples;
  uint64_t seed = 0;
  Strategy strategy = Strategy::kRandom;

  size_t size() const { return samples.size(); }
  std::vector<InputTuple> tuples() const;
  std::vector<int> labels() const;  // 1 = valid
};

// Endless candidate source. Implementations are deterministic given their
// construction arguments.
class TupleGenerator {
 public:
  virtual ~TupleGenerator() = default;
  virtual InputTuple next() = 0;
};

std::unique_ptr<TupleGenerator> make_random_generator(const ParamSpace& space,
                                                      uint64_t seed,
                                                      const Bounds& bounds);
std::unique_ptr<TupleGenerator> make_pairwise_generator(const ParamSpace& space,
                                                        const GenerationConfig& cfg);
// `op` must outlive the generator.
std::unique_ptr<TupleGenerator> make_weak_generator(const OperatorSpec& op,
                                                    Relaxation relax,
                                                    const GenerationConfig& cfg);

std::vector<InputTuple> gen_random(const ParamSpace& space,
                                   const GenerationConfig& cfg);
std::vector<InputTuple> gen_pairwise(const ParamSpace& space,
                                     const GenerationConfig& cfg);
std::vector<InputTuple> gen_weak(const OperatorSpec& op, const GenerationConfig& cfg,
                                 Relaxation relax);
// Random/pairwise by strategy; kWeak uses partial relaxation.
std::vector<InputTuple> generate(const OperatorSpec& op, Strategy strategy,
                                 const GenerationConfig& cfg);

// --- pairwise internals, exposed for testing ---

// Per-parameter level lists. Only structured parameters (tensor,
// tensor_list, int_list) are pooled; `pooled` holds their indices and
// `levels[j]` the values for parameter pooled[j].
struct LevelPool {
  std::vector<size_t> pooled;
  std::vector<std::vector<Value>> levels;
};

LevelPool build_level_pool(const ParamSpace& space, int levels_per_param,
                           const Bounds& bounds, Rng& rng);

// Greedy covering array over parameters with the given level counts: each
// row is picked as the best of `candidates` random rows, each seeded with a
// still-uncovered pair. Every cross-parameter level pair appears in at
// least one row.
std::vector<std::vector<int>> covering_array(const std::vector<int>& level_counts,
                                             Rng& rng, int candidates = 50);

// The pairwise suite (rows of level indices over the pooled parameters)
// for a configuration, as used by gen_pairwise.
struct PairwiseSuite {
  LevelPool pool;
  std::vector<std::vector<int>> rows;
};
PairwiseSuite build_pairwise_suite(const ParamSpace& space, const GenerationConfig& cfg);

// --- labeling and splitting ---

// One sample per tuple, in order. workers == 0 picks the hardware count.
// Throws SpecError on a kind mismatch.
Dataset label(const OperatorSpec& op, const std::vector<InputTuple>& tuples,
              unsigned workers = 1);

// Stratified shuffle split; each class contributes round(ratio * n_class)
// samples to train. Both sides keep the original relative order.
// Throws DegenerateSplitError if either side would be empty.
std::pair<Dataset, Dataset> split_dataset(const Dataset& ds, double ratio, uint64_t seed);

// Same split, as index lists into the sample vector.
std::pair<std::vector<size_t>, std::vector<size_t>> stratified_split_indices(
    const std::vector<int>& labels, double ratio, uint64_t seed);

struct ClassStats {
  size_t positives = 0;
  size_t negatives = 0;
  double ratio = 0.0;  // 0 for an empty dataset
};
ClassStats class_stats(const Dataset& ds);
ClassStats class_stats(const std::vector<int>& labels);

}  // namespace learnfuzz

#endif  // LEARNFUZZ_DATAGEN_H_
