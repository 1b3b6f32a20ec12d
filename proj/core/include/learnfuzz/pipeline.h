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

// Fuzzing campaigns: unfiltered and model-filtered runs, generalization,
// cross-operator comparison and injected-bug retention.

#ifndef LEARNFUZZ_PIPELINE_H_
#define LEARNFUZZ_PIPELINE_H_

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "learnfuzz/datagen.h"
#include "learnfuzz/encoder.h"
#include "learnfuzz/learners.h"
#include "learnfuzz/metrics.h"
#include "learnfuzz/registry.h"

namespace learnfuzz {

// Decides which candidates get executed. Implementations must be pure:
// the same batch always yields the same labels.
class ValidityFilter {
 public:
  virtual ~ValidityFilter() = default;
  virtual std::string name() const = 0;
  // When true the pipeline encodes each batch and passes the matrix in.
  virtual bool uses_features() const { return false; }
  // 1 = predicted valid. X is null unless uses_features().
  virtual std::vector<int> predict(std::span<const InputTuple> batch,
                                   const FeatureMatrix* X) const = 0;
};

// Wraps a trained model. Throws PipelineError if the model was trained on
// a different feature layout than op's.
std::unique_ptr<ValidityFilter> make_model_filter(const OperatorSpec& op,
                                                  TrainedModel model);
// Perfect classifier: asks the oracle.
std::unique_ptr<ValidityFilter> make_oracle_filter(const OperatorSpec& op);
// Always the same answer.
std::unique_ptr<ValidityFilter> make_constant_filter(bool valid);

struct StageTimings {
  double generation_s = 0.0;
  double processing_s = 0.0;
  double inference_s = 0.0;
  double execution_s = 0.0;
  size_t executed_count = 0;
  double total() const { return generation_s + processing_s + inference_s + execution_s; }
};

enum class FuzzMode { kUnfiltered, kFiltered };
std::string_view fuzz_mode_name(FuzzMode m);

struct FuzzReport {
  std::string op;
  FuzzMode mode = FuzzMode::kUnfiltered;
  std::string filter;  // filter name; empty when unfiltered
  size_t candidates = 0;
  size_t executed = 0;
  size_t valid_executed = 0;
  size_t invalid_executed = 0;
  size_t filtered_out = 0;
  size_t bugs_triggered = 0;
  // Predictions vs oracle over every candidate. Unfiltered runs count as an
  // always-valid prediction.
  ConfusionMatrix confusion;
  std::optional<double> pass_rate;  // undefined when nothing ran
  double valid_per_second = 0.0;
  StageTimings timings;
  uint64_t seed = 0;
  size_t batch_size = 0;
  // Recycle-FN audit: indices (into the candidate stream) of valid
  // candidates the filter discarded. Filled only when requested.
  std::vector<size_t> discarded_valid;
};

struct RunOptions {
  size_t n = 5000;
  // 0 = one batch holding every candidate.
  size_t batch_size = 0;
  uint64_t seed = 0;
  bool audit_discarded = false;
};

// Candidate stream used by campaigns: the weak generator at `relax` for op,
// seeded from `seed`. Both arms of a comparison draw from identical streams.
std::unique_ptr<TupleGenerator> make_campaign_generator(const OperatorSpec& op,
                                                        Relaxation relax, uint64_t seed,
                                                        const Bounds& bounds = {});

FuzzReport run_unfiltered(const OperatorSpec& op, TupleGenerator& gen, const RunOptions& opt);
FuzzReport run_filtered(const OperatorSpec& op, TupleGenerator& gen,
                        const ValidityFilter& filter, const RunOptions& opt);

// One training round: generate n samples with `strategy`, label them,
// split (stratified, `ratio` for training), fit the leaderboard on the
// training part and score its winner on the held-out part.
struct TrainRun {
  std::string op;
  Strategy strategy = Strategy::kRandom;
  uint64_t seed = 0;
  ClassStats train_stats;
  ClassStats test_stats;
  Leaderboard leaderboard;  // leaderboard.best is the deployed model
  EvalReport held_out;
};
TrainRun train_and_evaluate(const OperatorSpec& op, Strategy strategy, size_t n, double ratio,
                            uint64_t seed, const GenerationConfig& base = {},
                            unsigned workers = 1);

// Leaderboard winner fit on all n samples; what campaigns deploy.
struct DeployedModel {
  TrainedModel model;
  ClassStats stats;
  LeaderboardEntry top{Family::kMajorityBaseline, {}, {}, {}, {}, 0.0, {}};
};
DeployedModel fit_deployed(const OperatorSpec& op, Strategy strategy, size_t n, uint64_t seed,
                           const GenerationConfig& base = {}, unsigned workers = 1);

// Fewer training positives than this and generalization results are
// reported as low-support rather than trusted.
inline constexpr size_t kLowSupportPositives = 50;

struct GeneralizationReport {
  std::string op;
  Strategy strategy = Strategy::kRandom;
  size_t n = 0;
  uint64_t seed = 0;
  EvalReport eval;
  std::optional<size_t> positives_in_training;  // unknown for foreign models
  bool low_support = false;
};

// Fresh labeled samples from `strategy` under `seed` (which must differ
// from the training seed), scored with `model`. An unknown training
// positive count is never flagged as low support.
GeneralizationReport generalize(const OperatorSpec& op, const TrainedModel& model,
                                Strategy strategy, size_t n, uint64_t seed,
                                std::optional<size_t> positives_in_training,
                                const GenerationConfig& base = {});

struct OperatorComparison {
  std::string op;
  FuzzReport unfiltered;
  FuzzReport filtered;
  bool complete = true;
  std::string error;
};

struct CampaignResult {
  std::vector<OperatorComparison> ops;
  // Over complete operators; an undefined pass rate counts as 0.
  double mean_pass_unfiltered = 0.0;
  double mean_pass_filtered = 0.0;
  StatResult ks_unfiltered;
  StatResult ks_filtered;
  StatResult wilcoxon;
  double cohens_d = 0.0;
  std::string effect_size;
};

struct CompareOptions {
  RunOptions run;
  Relaxation relaxation = Relaxation::kPartial;
  Bounds bounds;
};

// Runs both arms for every operator with a filter in `filters` (keyed by
// operator name). Needs >= 2 operators.
CampaignResult compare(std::span<const OperatorSpec* const> ops,
                       const std::map<std::string, const ValidityFilter*>& filters,
                       const CompareOptions& opt);

// Table-style summary: one row per operator and arm plus mean rows.
std::string campaign_summary_csv(const CampaignResult& r);

struct BugReport {
  std::string op;
  std::string description;
  size_t samples = 0;
  size_t triggers = 0;
  size_t predicted_valid = 0;
  std::optional<double> success_ratio;
  uint64_t seed = 0;
};

// Draws n valid tuples (full relaxation), keeps the bug triggers and counts
// how many the filter would let through. Throws InsufficientTriggersError
// when no trigger turns up.
BugReport bug_campaign(const OperatorSpec& op, const ValidityFilter& filter, size_t n,
                       uint64_t seed, const Bounds& bounds = {});

}  // namespace learnfuzz

#endif  // LEARNFUZZ_PIPELINE_H_
