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

#include "learnfuzz/pipeline.h"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "learnfuzz/errors.h"
#include "learnfuzz/rng.h"

namespace learnfuzz {

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

class ModelFilter : public ValidityFilter {
 public:
  ModelFilter(TrainedModel m) : model_(std::move(m)) {}
  std::string name() const override {
    return "model:" + std::string(family_name(model_.family()));
  }
  bool uses_features() const override { return true; }
  std::vector<int> predict(std::span<const InputTuple>, const FeatureMatrix* X) const override {
    return model_.predict_batch(*X).labels;
  }

 private:
  TrainedModel model_;
};

class OracleFilter : public ValidityFilter {
 public:
  explicit OracleFilter(const OperatorSpec& op) : op_(op) {}
  std::string name() const override { return "oracle"; }
  std::vector<int> predict(std::span<const InputTuple> batch,
                           const FeatureMatrix*) const override {
    std::vector<int> out;
    out.reserve(batch.size());
    for (const auto& t : batch) out.push_back(validate(op_, t).valid ? 1 : 0);
    return out;
  }

 private:
  const OperatorSpec& op_;
};

class ConstantFilter : public ValidityFilter {
 public:
  explicit ConstantFilter(bool v) : v_(v) {}
  std::string name() const override { return v_ ? "always-valid" : "always-invalid"; }
  std::vector<int> predict(std::span<const InputTuple> batch,
                           const FeatureMatrix*) const override {
    return std::vector<int>(batch.size(), v_ ? 1 : 0);
  }

 private:
  bool v_;
};

void finish(FuzzReport& r) {
  r.timings.executed_count = r.executed;
  r.pass_rate = pass_rate(r.valid_executed, r.executed);
  const double t = r.timings.total();
  r.valid_per_second = t > 0.0 ? static_cast<double>(r.valid_executed) / t : 0.0;
}

// Shared loop. A null filter executes everything.
FuzzReport run(const OperatorSpec& op, TupleGenerator& gen, const ValidityFilter* filter,
               const RunOptions& opt) {
  if (opt.n == 0) throw PipelineError("candidate count must be >= 1");
  FuzzReport r;
  r.op = op.name;
  r.mode = filter ? FuzzMode::kFiltered : FuzzMode::kUnfiltered;
  r.filter = filter ? filter->name() : "";
  r.seed = opt.seed;
  r.batch_size = opt.batch_size == 0 ? opt.n : opt.batch_size;
  const FeatureSchema schema =
      filter && filter->uses_features() ? build_schema(op.space) : FeatureSchema{};

  std::vector<InputTuple> batch;
  while (r.candidates < opt.n) {
    const size_t m = std::min(r.batch_size, opt.n - r.candidates);
    auto t0 = Clock::now();
    batch.clear();
    for (size_t i = 0; i < m; ++i) batch.push_back(gen.next());
    r.timings.generation_s += since(t0);

    std::vector<int> keep(m, 1);
    if (filter) {
      FeatureMatrix X;
      if (filter->uses_features()) {
        t0 = Clock::now();
        X = encode_batch(batch, op.space, schema);
        r.timings.processing_s += since(t0);
      }
      t0 = Clock::now();
      keep = filter->predict(batch, filter->uses_features() ? &X : nullptr);
      r.timings.inference_s += since(t0);
      if (keep.size() != m) throw PipelineError("filter returned the wrong number of labels");
    }

    for (size_t i = 0; i < m; ++i) {
      // Ground truth for the confusion matrix only; it never steers
      // filtering.
      const bool truth = validate(op, batch[i]).valid;
      const bool pred = keep[i] != 0;
      if (pred && truth) ++r.confusion.tp;
      if (pred && !truth) ++r.confusion.fp;
      if (!pred && truth) ++r.confusion.fn;
      if (!pred && !truth) ++r.confusion.tn;
      if (!pred) {
        ++r.filtered_out;
        if (truth && opt.audit_discarded) r.discarded_valid.push_back(r.candidates + i);
        continue;
      }
      t0 = Clock::now();
      const ExecutionResult res = execute(op, batch[i]);
      r.timings.execution_s += since(t0);
      ++r.executed;
      if (res.outcome.valid) {
        ++r.valid_executed;
      } else {
        ++r.invalid_executed;
      }
      if (res.bug_triggered) ++r.bugs_triggered;
    }
    r.candidates += m;
  }
  finish(r);
  return r;
}

double rate_or_zero(const FuzzReport& r) { return r.pass_rate.value_or(0.0); }

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

}  // namespace

std::string_view fuzz_mode_name(FuzzMode m) {
  return m == FuzzMode::kFiltered ? "filtered" : "unfiltered";
}

std::unique_ptr<ValidityFilter> make_model_filter(const OperatorSpec& op, TrainedModel model) {
  const FeatureSchema schema = build_schema(op.space);
  if (model.n_features() != schema.width()) {
    throw PipelineError(op.name + ": model expects " + std::to_string(model.n_features()) +
                        " features, operator encodes " + std::to_string(schema.width()));
  }
  if (model.schema_hash() != 0 && model.schema_hash() != schema.hash()) {
    throw PipelineError(op.name + ": model was trained on a different feature schema");
  }
  return std::make_unique<ModelFilter>(std::move(model));
}

std::unique_ptr<ValidityFilter> make_oracle_filter(const OperatorSpec& op) {
  return std::make_unique<OracleFilter>(op);
}

std::unique_ptr<ValidityFilter> make_constant_filter(bool valid) {
  return std::make_unique<ConstantFilter>(valid);
}

std::unique_ptr<TupleGenerator> make_campaign_generator(const OperatorSpec& op,
                                                        Relaxation relax, uint64_t seed,
                                                        const Bounds& bounds) {
  GenerationConfig cfg;
  cfg.seed = derive_seed(seed, "campaign:" + op.name);
  cfg.bounds = bounds;
  return make_weak_generator(op, relax, cfg);
}

FuzzReport run_unfiltered(const OperatorSpec& op, TupleGenerator& gen, const RunOptions& opt) {
  return run(op, gen, nullptr, opt);
}

FuzzReport run_filtered(const OperatorSpec& op, TupleGenerator& gen,
                        const ValidityFilter& filter, const RunOptions& opt) {
  return run(op, gen, &filter, opt);
}

TrainRun train_and_evaluate(const OperatorSpec& op, Strategy strategy, size_t n, double ratio,
                            uint64_t seed, const GenerationConfig& base, unsigned workers) {
  GenerationConfig cfg = base;
  cfg.n_samples = n;
  cfg.seed = seed;
  Dataset ds = label(op, generate(op, strategy, cfg), workers);
  ds.seed = seed;
  ds.strategy = strategy;
  auto [tr, te] = split_dataset(ds, ratio, derive_seed(seed, "split"));
  const FeatureSchema schema = build_schema(op.space);
  TrainRun r;
  r.op = op.name;
  r.strategy = strategy;
  r.seed = seed;
  r.train_stats = class_stats(tr);
  r.test_stats = class_stats(te);
  const FeatureMatrix Xtr = encode_batch(tr.tuples(), op.space, schema);
  r.leaderboard = fit_leaderboard(Xtr, tr.labels(), seed, schema.hash());
  const FeatureMatrix Xte = encode_batch(te.tuples(), op.space, schema);
  r.held_out = evaluate(*r.leaderboard.best, Xte, te.labels());
  return r;
}

DeployedModel fit_deployed(const OperatorSpec& op, Strategy strategy, size_t n, uint64_t seed,
                           const GenerationConfig& base, unsigned workers) {
  GenerationConfig cfg = base;
  cfg.n_samples = n;
  cfg.seed = seed;
  const Dataset ds = label(op, generate(op, strategy, cfg), workers);
  const FeatureSchema schema = build_schema(op.space);
  Leaderboard lb = fit_leaderboard(encode_batch(ds.tuples(), op.space, schema), ds.labels(),
                                   seed, schema.hash());
  return DeployedModel{std::move(*lb.best), class_stats(ds), lb.top()};
}

GeneralizationReport generalize(const OperatorSpec& op, const TrainedModel& model,
                                Strategy strategy, size_t n, uint64_t seed,
                                std::optional<size_t> positives_in_training,
                                const GenerationConfig& base) {
  if (n == 0) throw PipelineError("generalization needs n >= 1");
  GenerationConfig cfg = base;
  cfg.n_samples = n;
  cfg.seed = seed;
  const Dataset ds = label(op, generate(op, strategy, cfg));
  const FeatureSchema schema = build_schema(op.space);
  const FeatureMatrix X = encode_batch(ds.tuples(), op.space, schema);
  GeneralizationReport r;
  r.op = op.name;
  r.strategy = strategy;
  r.n = n;
  r.seed = seed;
  r.eval = evaluate(model, X, ds.labels());
  r.positives_in_training = positives_in_training;
  r.low_support = positives_in_training && *positives_in_training < kLowSupportPositives;
  return r;
}

CampaignResult compare(std::span<const OperatorSpec* const> ops,
                       const std::map<std::string, const ValidityFilter*>& filters,
                       const CompareOptions& opt) {
  if (ops.size() < 2) throw PipelineError("comparison needs at least 2 operators");
  CampaignResult res;
  std::vector<double> a, b;
  for (const OperatorSpec* op : ops) {
    OperatorComparison c;
    c.op = op->name;
    try {
      const auto it = filters.find(op->name);
      if (it == filters.end() || !it->second) throw PipelineError("no filter for " + op->name);
      // Same seed, same stream: the arms differ only in what gets executed.
      auto g1 = make_campaign_generator(*op, opt.relaxation, opt.run.seed, opt.bounds);
      c.unfiltered = run_unfiltered(*op, *g1, opt.run);
      auto g2 = make_campaign_generator(*op, opt.relaxation, opt.run.seed, opt.bounds);
      c.filtered = run_filtered(*op, *g2, *it->second, opt.run);
      a.push_back(rate_or_zero(c.unfiltered));
      b.push_back(rate_or_zero(c.filtered));
    } catch (const Error& e) {
      c.complete = false;
      c.error = e.what();
    }
    res.ops.push_back(std::move(c));
  }
  if (a.size() < 2) throw PipelineError("fewer than 2 operators completed");
  res.mean_pass_unfiltered = std::accumulate(a.begin(), a.end(), 0.0) / a.size();
  res.mean_pass_filtered = std::accumulate(b.begin(), b.end(), 0.0) / b.size();
  auto ks = [](const std::vector<double>& xs) {
    try {
      return ks_normal(xs);
    } catch (const std::exception& e) {
      // Too few or constant pass rates: report "not rejected" with the reason.
      return StatResult{0.0, 1.0, std::string("ks-normal unavailable: ") + e.what()};
    }
  };
  res.ks_unfiltered = ks(a);
  res.ks_filtered = ks(b);
  res.wilcoxon = wilcoxon_rank_sum(b, a);
  try {
    res.cohens_d = cohens_d(b, a);
  } catch (const std::exception&) {
    res.cohens_d = 0.0;
  }
  res.effect_size = std::string(effect_size_label(res.cohens_d));
  return res;
}

std::string campaign_summary_csv(const CampaignResult& r) {
  std::ostringstream out;
  out << "operator,arm,avg_time_s,total_time_s,candidates,executed,invalid,pass_rate,"
         "valid_per_s\n";
  struct Acc {
    double time = 0, pass = 0, vps = 0;
    size_t cand = 0, exec = 0, invalid = 0, n = 0;
  } acc[2];
  for (const auto& c : r.ops) {
    if (!c.complete) {
      out << c.op << ",incomplete,,,,,,,\n";
      continue;
    }
    int k = 0;
    for (const FuzzReport* f : {&c.unfiltered, &c.filtered}) {
      const double t = f->timings.total();
      const double avg = f->executed ? t / static_cast<double>(f->executed) : 0.0;
      out << c.op << ',' << fuzz_mode_name(f->mode) << ',' << fmt(avg) << ',' << fmt(t) << ','
          << f->candidates << ',' << f->executed << ',' << f->invalid_executed << ','
          << (f->pass_rate ? fmt(*f->pass_rate) : "") << ',' << fmt(f->valid_per_second)
          << '\n';
      Acc& s = acc[k++];
      s.time += t;
      s.pass += rate_or_zero(*f);
      s.vps += f->valid_per_second;
      s.cand += f->candidates;
      s.exec += f->executed;
      s.invalid += f->invalid_executed;
      ++s.n;
    }
  }
  const char* arm[2] = {"unfiltered", "filtered"};
  for (int k = 0; k < 2; ++k) {
    const Acc& s = acc[k];
    if (s.n == 0) continue;
    const double n = static_cast<double>(s.n);
    out << "MEAN," << arm[k] << ',' << fmt(s.exec ? s.time / s.exec : 0.0) << ','
        << fmt(s.time / n) << ',' << s.cand / s.n << ',' << s.exec / s.n << ','
        << s.invalid / s.n << ',' << fmt(s.pass / n) << ',' << fmt(s.vps / n) << '\n';
  }
  return out.str();
}

BugReport bug_campaign(const OperatorSpec& op, const ValidityFilter& filter, size_t n,
                       uint64_t seed, const Bounds& bounds) {
  if (!op.bug) throw PipelineError(op.name + " has no injected bug");
  if (n == 0) throw PipelineError("bug campaign needs n >= 1");
  GenerationConfig cfg;
  cfg.n_samples = n;
  cfg.seed = derive_seed(seed, "bugs:" + op.name);
  cfg.bounds = bounds;
  std::vector<InputTuple> triggers;
  for (auto& t : gen_weak(op, cfg, Relaxation::kFull)) {
    if (op.bug->trigger(t)) triggers.push_back(std::move(t));
  }
  if (triggers.empty()) {
    throw InsufficientTriggersError(op.name + ": no bug-triggering input among " +
                                    std::to_string(n) + " valid samples");
  }
  FeatureMatrix X;
  if (filter.uses_features()) X = encode_batch(triggers, op.space, build_schema(op.space));
  const std::vector<int> keep = filter.predict(triggers, filter.uses_features() ? &X : nullptr);
  BugReport r;
  r.op = op.name;
  r.description = op.bug->description;
  r.samples = n;
  r.triggers = triggers.size();
  r.predicted_valid = static_cast<size_t>(std::count(keep.begin(), keep.end(), 1));
  r.success_ratio = static_cast<double>(r.predicted_valid) / static_cast<double>(r.triggers);
  r.seed = seed;
  return r;
}

}  // namespace learnfuzz
