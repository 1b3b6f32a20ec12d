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

#include "learnfuzz/datagen.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "learnfuzz/errors.h"
#include "learnfuzz/sampling.h"

namespace learnfuzz {

std::string_view strategy_name(Strategy s) {
  switch (s) {
    case Strategy::kRandom: return "random";
    case Strategy::kPairwise: return "pairwise";
    case Strategy::kWeak: return "weak";
  }
  return "?";
}

std::optional<Strategy> parse_strategy(std::string_view s) {
  for (Strategy x : {Strategy::kRandom, Strategy::kPairwise, Strategy::kWeak}) {
    if (strategy_name(x) == s) return x;
  }
  return std::nullopt;
}

std::string_view relaxation_name(Relaxation r) {
  switch (r) {
    case Relaxation::kNone: return "none";
    case Relaxation::kPartial: return "partial";
    case Relaxation::kFull: return "full";
  }
  return "?";
}

std::optional<Relaxation> parse_relaxation(std::string_view s) {
  for (Relaxation x : {Relaxation::kNone, Relaxation::kPartial, Relaxation::kFull}) {
    if (relaxation_name(x) == s) return x;
  }
  return std::nullopt;
}

void GenerationConfig::check() const {
  bounds.check();
  if (pairwise_levels_per_param < 2) {
    throw std::invalid_argument("pairwise_levels_per_param must be >= 2");
  }
}

std::vector<InputTuple> Dataset::tuples() const {
  std::vector<InputTuple> out;
  out.reserve(samples.size());
  for (const auto& s : samples) out.push_back(s.tuple);
  return out;
}

std::vector<int> Dataset::labels() const {
  std::vector<int> out;
  out.reserve(samples.size());
  for (const auto& s : samples) out.push_back(s.valid ? 1 : 0);
  return out;
}

namespace {

class RandomGenerator : public TupleGenerator {
 public:
  RandomGenerator(ParamSpace space, uint64_t seed, Bounds bounds)
      : space_(std::move(space)), rng_(seed), bounds_(bounds) {}
  InputTuple next() override { return random_tuple(rng_, space_, bounds_); }

 private:
  ParamSpace space_;
  Rng rng_;
  Bounds bounds_;
};

class PairwiseGenerator : public TupleGenerator {
 public:
  PairwiseGenerator(ParamSpace space, const GenerationConfig& cfg)
      : space_(std::move(space)),
        suite_(build_pairwise_suite(space_, cfg)),
        rng_(derive_seed(cfg.seed, "pairwise.free")),
        bounds_(cfg.bounds),
        slot_(space_.size(), -1) {
    for (size_t j = 0; j < suite_.pool.pooled.size(); ++j) {
      slot_[suite_.pool.pooled[j]] = static_cast<int>(j);
    }
  }

  InputTuple next() override {
    const auto& row = suite_.rows[pos_];
    pos_ = (pos_ + 1) % suite_.rows.size();
    InputTuple t;
    t.reserve(space_.size());
    for (size_t i = 0; i < space_.size(); ++i) {
      if (slot_[i] >= 0) {
        t.push_back(suite_.pool.levels[slot_[i]][row[slot_[i]]]);
      } else {
        t.push_back(random_value(rng_, space_[i], bounds_));
      }
    }
    return t;
  }

 private:
  ParamSpace space_;
  PairwiseSuite suite_;
  Rng rng_;
  Bounds bounds_;
  std::vector<int> slot_;
  size_t pos_ = 0;
};

class PartialGenerator : public TupleGenerator {
 public:
  PartialGenerator(const OperatorSpec& op, uint64_t seed, Bounds bounds)
      : op_(op), rng_(seed), bounds_(bounds) {}
  InputTuple next() override { return op_.partial(rng_, bounds_); }

 private:
  const OperatorSpec& op_;
  Rng rng_;
  Bounds bounds_;
};

class RejectionGenerator : public TupleGenerator {
 public:
  RejectionGenerator(const OperatorSpec& op, uint64_t seed, Bounds bounds,
                     size_t max_rejections)
      : op_(op), rng_(seed), bounds_(bounds), max_rejections_(max_rejections) {}

  InputTuple next() override {
    for (size_t rejected = 0;; ++rejected) {
      if (rejected >= max_rejections_) {
        throw UnsatisfiableError(op_.name + ": no valid tuple after " +
                                 std::to_string(max_rejections_) + " rejections");
      }
      InputTuple t = random_tuple(rng_, op_.space, bounds_);
      if (op_.oracle(t).valid) return t;
    }
  }

 private:
  const OperatorSpec& op_;
  Rng rng_;
  Bounds bounds_;
  size_t max_rejections_;
};

std::vector<InputTuple> drain(TupleGenerator& g, size_t n) {
  std::vector<InputTuple> out;
  out.reserve(n);
  for (size_t i = 0; i < n; ++i) out.push_back(g.next());
  return out;
}

}  // namespace

std::unique_ptr<TupleGenerator> make_random_generator(const ParamSpace& space,
                                                      uint64_t seed,
                                                      const Bounds& bounds) {
  return std::make_unique<RandomGenerator>(space, seed, bounds);
}

std::unique_ptr<TupleGenerator> make_pairwise_generator(const ParamSpace& space,
                                                        const GenerationConfig& cfg) {
  cfg.check();
  return std::make_unique<PairwiseGenerator>(space, cfg);
}

std::unique_ptr<TupleGenerator> make_weak_generator(const OperatorSpec& op,
                                                    Relaxation relax,
                                                    const GenerationConfig& cfg) {
  switch (relax) {
    case Relaxation::kNone:
      return make_random_generator(op.space, cfg.seed, cfg.bounds);
    case Relaxation::kPartial:
      if (!op.partial) {
        throw RegistryError(op.name + ": no partial relaxation sampler");
      }
      return std::make_unique<PartialGenerator>(op, cfg.seed, cfg.bounds);
    case Relaxation::kFull:
      return std::make_unique<RejectionGenerator>(op, cfg.seed, cfg.bounds,
                                                  cfg.max_rejections);
  }
  throw std::invalid_argument("unknown relaxation");
}

std::vector<InputTuple> gen_random(const ParamSpace& space, const GenerationConfig& cfg) {
  cfg.check();
  RandomGenerator g(space, cfg.seed, cfg.bounds);
  return drain(g, cfg.n_samples);
}

std::vector<InputTuple> gen_pairwise(const ParamSpace& space,
                                     const GenerationConfig& cfg) {
  if (space.empty()) throw std::invalid_argument("gen_pairwise: empty parameter space");
  if (cfg.n_samples == 0) return {};
  auto g = make_pairwise_generator(space, cfg);
  return drain(*g, cfg.n_samples);
}

std::vector<InputTuple> gen_weak(const OperatorSpec& op, const GenerationConfig& cfg,
                                 Relaxation relax) {
  cfg.check();
  auto g = make_weak_generator(op, relax, cfg);
  return drain(*g, cfg.n_samples);
}

std::vector<InputTuple> generate(const OperatorSpec& op, Strategy strategy,
                                 const GenerationConfig& cfg) {
  switch (strategy) {
    case Strategy::kRandom: return gen_random(op.space, cfg);
    case Strategy::kPairwise: return gen_pairwise(op.space, cfg);
    case Strategy::kWeak: return gen_weak(op, cfg, Relaxation::kPartial);
  }
  throw std::invalid_argument("unknown strategy");
}

// --- pairwise ---

namespace {

constexpr int64_t kLevelDims[] = {0, 1, 2, 3, 5, 10};
constexpr int kBuckets[4][2] = {{0, 1}, {2, 3}, {4, 5}, {6, 6}};

std::vector<int64_t> level_dims(const Bounds& b) {
  std::vector<int64_t> out;
  for (int64_t d : kLevelDims) {
    if (d <= b.max_dim) out.push_back(d);
  }
  return out;
}

Shape bucket_shape(Rng& rng, const Bounds& b, int bucket,
                   const std::vector<int64_t>& dims) {
  const int lo = std::min(kBuckets[bucket][0], b.max_rank);
  const int hi = std::min(kBuckets[bucket][1], b.max_rank);
  const int rank = static_cast<int>(rng.uniform_int(lo, hi));
  std::vector<int64_t> d(static_cast<size_t>(rank));
  for (auto& x : d) x = dims[rng.index(dims.size())];
  return Shape(std::move(d));
}

// Stratified shape pool: ceil(n / 4) distinct shapes per rank bucket, then
// n drawn without replacement.
std::vector<Shape> shape_levels(Rng& rng, const Bounds& b, int n) {
  const auto dims = level_dims(b);
  const int per_bucket = (n + 3) / 4;
  std::vector<Shape> pool;
  for (int bucket = 0; bucket < 4; ++bucket) {
    for (int k = 0; k < per_bucket; ++k) {
      Shape s = bucket_shape(rng, b, bucket, dims);
      // Tiny buckets (e.g. rank 0) cannot always supply distinct shapes.
      for (int tries = 0;
           tries < 64 && std::find(pool.begin(), pool.end(), s) != pool.end(); ++tries) {
        s = bucket_shape(rng, b, bucket, dims);
      }
      pool.push_back(std::move(s));
    }
  }
  rng.shuffle(std::span<Shape>(pool));
  pool.resize(static_cast<size_t>(n));
  return pool;
}

std::vector<Value> tensor_list_levels(Rng& rng, const Bounds& b, int n) {
  const auto dims = level_dims(b);
  std::vector<Value> out;
  for (int i = 0; i < n; ++i) {
    TensorListV v;
    const int arity = 1 + i % b.max_arity;
    for (int j = 0; j < arity; ++j) {
      v.items.push_back(bucket_shape(rng, b, (i + j) % 4, dims));
    }
    out.push_back(std::move(v));
  }
  return out;
}

bool is_pooled(Kind k) {
  return k == Kind::kTensor || k == Kind::kTensorList || k == Kind::kIntList;
}

}  // namespace

LevelPool build_level_pool(const ParamSpace& space, int levels_per_param,
                           const Bounds& bounds, Rng& rng) {
  if (levels_per_param < 2) throw std::invalid_argument("need >= 2 levels per parameter");
  LevelPool pool;
  for (size_t i = 0; i < space.size(); ++i) {
    const Kind k = space[i].kind;
    if (!is_pooled(k)) continue;
    std::vector<Value> levels;
    if (k == Kind::kTensorList) {
      levels = tensor_list_levels(rng, bounds, levels_per_param);
    } else {
      for (auto& s : shape_levels(rng, bounds, levels_per_param)) {
        if (k == Kind::kTensor) {
          levels.push_back(TensorV{std::move(s)});
        } else {
          levels.push_back(IntListV{s.dims()});
        }
      }
    }
    pool.pooled.push_back(i);
    pool.levels.push_back(std::move(levels));
  }
  return pool;
}

std::vector<std::vector<int>> covering_array(const std::vector<int>& level_counts,
                                             Rng& rng, int candidates) {
  const size_t p = level_counts.size();
  for (int c : level_counts) {
    if (c < 1) throw std::invalid_argument("covering_array: level count < 1");
  }
  if (p == 0) return {{}};
  if (p == 1) {
    std::vector<std::vector<int>> rows;
    for (int l = 0; l < level_counts[0]; ++l) rows.push_back({l});
    return rows;
  }

  // covered[pair][a * c_j + b] for parameter pair (i, j), i < j.
  std::vector<std::pair<size_t, size_t>> pairs;
  for (size_t i = 0; i < p; ++i) {
    for (size_t j = i + 1; j < p; ++j) pairs.emplace_back(i, j);
  }
  std::vector<std::vector<char>> covered(pairs.size());
  size_t uncovered = 0;
  for (size_t q = 0; q < pairs.size(); ++q) {
    const size_t n = static_cast<size_t>(level_counts[pairs[q].first]) *
                     static_cast<size_t>(level_counts[pairs[q].second]);
    covered[q].assign(n, 0);
    uncovered += n;
  }

  auto gain = [&](const std::vector<int>& row) {
    size_t g = 0;
    for (size_t q = 0; q < pairs.size(); ++q) {
      const auto [i, j] = pairs[q];
      g += !covered[q][static_cast<size_t>(row[i] * level_counts[j] + row[j])];
    }
    return g;
  };

  std::vector<std::vector<int>> rows;
  struct Open {
    size_t q;
    int a, b;
  };
  std::vector<Open> open;
  while (uncovered > 0) {
    open.clear();
    for (size_t q = 0; q < pairs.size(); ++q) {
      const int cj = level_counts[pairs[q].second];
      for (size_t cell = 0; cell < covered[q].size(); ++cell) {
        if (!covered[q][cell]) {
          open.push_back({q, static_cast<int>(cell) / cj, static_cast<int>(cell) % cj});
        }
      }
    }
    std::vector<int> best;
    size_t best_gain = 0;
    for (int c = 0; c < candidates; ++c) {
      const Open& seed = open[rng.index(open.size())];
      std::vector<int> row(p);
      for (size_t i = 0; i < p; ++i) {
        row[i] = static_cast<int>(rng.index(static_cast<size_t>(level_counts[i])));
      }
      row[pairs[seed.q].first] = seed.a;
      row[pairs[seed.q].second] = seed.b;
      const size_t g = gain(row);
      if (g > best_gain) {
        best_gain = g;
        best = std::move(row);
      }
    }
    for (size_t q = 0; q < pairs.size(); ++q) {
      const auto [i, j] = pairs[q];
      char& cell = covered[q][static_cast<size_t>(best[i] * level_counts[j] + best[j])];
      if (!cell) {
        cell = 1;
        --uncovered;
      }
    }
    rows.push_back(std::move(best));
  }
  return rows;
}

PairwiseSuite build_pairwise_suite(const ParamSpace& space, const GenerationConfig& cfg) {
  cfg.check();
  PairwiseSuite suite;
  Rng pool_rng(derive_seed(cfg.seed, "pairwise.levels"));
  suite.pool = build_level_pool(space, cfg.pairwise_levels_per_param, cfg.bounds, pool_rng);
  std::vector<int> counts;
  for (const auto& l : suite.pool.levels) counts.push_back(static_cast<int>(l.size()));
  Rng suite_rng(derive_seed(cfg.seed, "pairwise.suite"));
  suite.rows = covering_array(counts, suite_rng);
  return suite;
}

// --- labeling ---

Dataset label(const OperatorSpec& op, const std::vector<InputTuple>& tuples,
              unsigned workers) {
  for (const auto& t : tuples) check_kinds(op, t);
  Dataset ds;
  ds.op = op.name;
  ds.samples.resize(tuples.size());
  auto work = [&](size_t lo, size_t hi) {
    for (size_t i = lo; i < hi; ++i) {
      ValidationOutcome o = op.oracle(tuples[i]);
      ds.samples[i] = {tuples[i], o.valid, std::move(o.message)};
    }
  };
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  const size_t n = tuples.size();
  if (workers <= 1 || n < 2) {
    work(0, n);
    return ds;
  }
  std::vector<std::thread> threads;
  const size_t chunk = (n + workers - 1) / workers;
  for (size_t lo = 0; lo < n; lo += chunk) {
    threads.emplace_back(work, lo, std::min(n, lo + chunk));
  }
  for (auto& t : threads) t.join();
  return ds;
}

// --- splitting ---

std::pair<std::vector<size_t>, std::vector<size_t>> stratified_split_indices(
    const std::vector<int>& labels, double ratio, uint64_t seed) {
  if (!(ratio > 0.0 && ratio < 1.0)) {
    throw std::invalid_argument("split ratio must be in (0, 1)");
  }
  if (labels.size() < 2) {
    throw DegenerateSplitError("cannot split a dataset of " +
                               std::to_string(labels.size()) + " sample(s)");
  }
  Rng rng(seed);
  std::vector<size_t> train, test;
  for (int cls : {0, 1}) {
    std::vector<size_t> idx;
    for (size_t i = 0; i < labels.size(); ++i) {
      if (labels[i] == cls) idx.push_back(i);
    }
    rng.shuffle(std::span<size_t>(idx));
    const auto n_train = static_cast<size_t>(std::llround(ratio * static_cast<double>(idx.size())));
    train.insert(train.end(), idx.begin(), idx.begin() + n_train);
    test.insert(test.end(), idx.begin() + n_train, idx.end());
  }
  if (train.empty() || test.empty()) {
    throw DegenerateSplitError("split leaves an empty side");
  }
  std::sort(train.begin(), train.end());
  std::sort(test.begin(), test.end());
  return {std::move(train), std::move(test)};
}

std::pair<Dataset, Dataset> split_dataset(const Dataset& ds, double ratio, uint64_t seed) {
  auto [tr, te] = stratified_split_indices(ds.labels(), ratio, seed);
  Dataset a{ds.op, {}, ds.seed, ds.strategy};
  Dataset b{ds.op, {}, ds.seed, ds.strategy};
  for (size_t i : tr) a.samples.push_back(ds.samples[i]);
  for (size_t i : te) b.samples.push_back(ds.samples[i]);
  return {std::move(a), std::move(b)};
}

ClassStats class_stats(const std::vector<int>& labels) {
  ClassStats s;
  for (int y : labels) (y ? s.positives : s.negatives)++;
  const size_t n = s.positives + s.negatives;
  s.ratio = n ? static_cast<double>(s.positives) / static_cast<double>(n) : 0.0;
  return s;
}

ClassStats class_stats(const Dataset& ds) { return class_stats(ds.labels()); }

}  // namespace learnfuzz
