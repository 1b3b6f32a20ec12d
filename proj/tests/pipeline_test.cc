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

#include <gtest/gtest.h>

#include "learnfuzz/errors.h"

namespace learnfuzz {
namespace {

OperatorRegistry Registry() {
  BuiltinOptions o;
  o.exec_cost_us = 0;
  o.reject_cost_us = 0;
  return OperatorRegistry::builtin(o);
}

void ExpectInvariants(const FuzzReport& r) {
  EXPECT_EQ(r.executed, r.valid_executed + r.invalid_executed);
  EXPECT_EQ(r.candidates, r.executed + r.filtered_out);
  EXPECT_EQ(r.confusion.total(), r.candidates);
  EXPECT_EQ(r.executed, r.confusion.tp + r.confusion.fp);
  EXPECT_EQ(r.valid_executed, r.confusion.tp);
  EXPECT_EQ(r.timings.executed_count, r.executed);
  if (r.executed == 0) {
    EXPECT_FALSE(r.pass_rate);
  } else {
    EXPECT_DOUBLE_EQ(*r.pass_rate, static_cast<double>(r.valid_executed) / r.executed);
  }
}

TEST(FuzzTest, UnfilteredRunsEverything) {
  const auto reg = Registry();
  for (const auto& op : reg.list()) {
    auto gen = make_campaign_generator(op, Relaxation::kPartial, 3);
    const FuzzReport r = run_unfiltered(op, *gen, {.n = 500, .seed = 3});
    ExpectInvariants(r);
    EXPECT_EQ(r.executed, 500u) << op.name;
    EXPECT_EQ(r.filtered_out, 0u);
    EXPECT_EQ(r.mode, FuzzMode::kUnfiltered);
    EXPECT_TRUE(r.filter.empty());
  }
}

TEST(FuzzTest, OracleFilterIsPerfect) {
  const auto reg = Registry();
  for (const auto& op : reg.list()) {
    const auto oracle = make_oracle_filter(op);
    auto gen = make_campaign_generator(op, Relaxation::kPartial, 4);
    const FuzzReport r = run_filtered(op, *gen, *oracle, {.n = 500, .seed = 4});
    ExpectInvariants(r);
    EXPECT_EQ(r.invalid_executed, 0u) << op.name;
    EXPECT_EQ(r.confusion.fn, 0u);
    if (r.executed > 0) {
      EXPECT_EQ(*r.pass_rate, 1.0);
    }
  }
}

TEST(FuzzTest, ConstantFilters) {
  const auto reg = Registry();
  const auto& op = reg.get("top_k");
  const auto yes = make_constant_filter(true);
  const auto no = make_constant_filter(false);
  auto g0 = make_campaign_generator(op, Relaxation::kPartial, 5);
  auto g1 = make_campaign_generator(op, Relaxation::kPartial, 5);
  auto g2 = make_campaign_generator(op, Relaxation::kPartial, 5);
  const FuzzReport base = run_unfiltered(op, *g0, {.n = 400, .seed = 5});
  const FuzzReport all = run_filtered(op, *g1, *yes, {.n = 400, .seed = 5});
  EXPECT_EQ(all.valid_executed, base.valid_executed);
  EXPECT_EQ(all.confusion, base.confusion);
  const FuzzReport none = run_filtered(op, *g2, *no, {.n = 400, .seed = 5});
  ExpectInvariants(none);
  EXPECT_EQ(none.executed, 0u);
  EXPECT_FALSE(none.pass_rate);
}

TEST(FuzzTest, BatchSizeDoesNotChangeCounts) {
  const auto reg = Registry();
  const auto& op = reg.get("split");
  const DeployedModel dm = fit_deployed(op, Strategy::kRandom, 2000, 6);
  const auto filter = make_model_filter(op, dm.model);
  std::optional<FuzzReport> first;
  for (size_t bs : {0u, 1u, 7u, 64u, 1000u}) {
    auto gen = make_campaign_generator(op, Relaxation::kPartial, 6);
    const FuzzReport r = run_filtered(op, *gen, *filter, {.n = 1000, .batch_size = bs, .seed = 6});
    ExpectInvariants(r);
    if (!first) {
      first = r;
      continue;
    }
    EXPECT_EQ(r.executed, first->executed) << bs;
    EXPECT_EQ(r.valid_executed, first->valid_executed) << bs;
    EXPECT_EQ(r.confusion, first->confusion) << bs;
  }
}

TEST(FuzzTest, AuditListsDiscardedValidCandidates) {
  const auto reg = Registry();
  const auto& op = reg.get("dot");
  const auto no = make_constant_filter(false);
  auto gen = make_campaign_generator(op, Relaxation::kPartial, 7);
  const FuzzReport r = run_filtered(op, *gen, *no, {.n = 300, .seed = 7, .audit_discarded = true});
  EXPECT_EQ(r.discarded_valid.size(), r.confusion.fn);
  auto replay = make_campaign_generator(op, Relaxation::kPartial, 7);
  size_t at = 0;
  for (size_t i = 0; i < 300; ++i) {
    const InputTuple t = replay->next();
    if (at < r.discarded_valid.size() && r.discarded_valid[at] == i) {
      EXPECT_TRUE(validate(op, t).valid);
      ++at;
    }
  }
  EXPECT_EQ(at, r.discarded_valid.size());
}

TEST(FuzzTest, Errors) {
  const auto reg = Registry();
  const auto& op = reg.get("dot");
  auto gen = make_campaign_generator(op, Relaxation::kPartial, 1);
  EXPECT_THROW(run_unfiltered(op, *gen, {.n = 0}), PipelineError);
  // A model fit on another operator's layout.
  const DeployedModel other = fit_deployed(reg.get("top_k"), Strategy::kRandom, 500, 1);
  EXPECT_THROW(make_model_filter(op, other.model), PipelineError);
  EXPECT_THROW(generalize(op, other.model, Strategy::kRandom, 0, 2, 0), PipelineError);
}

TEST(TrainRunTest, HeldOutScoresComeFromTheHeldOutSplit) {
  const auto reg = Registry();
  const TrainRun r = train_and_evaluate(reg.get("bmm"), Strategy::kPairwise, 2000, 0.8, 8);
  EXPECT_EQ(r.train_stats.positives + r.train_stats.negatives +
                r.test_stats.positives + r.test_stats.negatives,
            2000u);
  EXPECT_EQ(r.held_out.confusion.total(), r.test_stats.positives + r.test_stats.negatives);
  EXPECT_EQ(r.held_out.positives_in_eval, r.test_stats.positives);
  ASSERT_TRUE(r.leaderboard.best);
  EXPECT_EQ(r.leaderboard.best->schema_hash(), build_schema(reg.get("bmm").space).hash());
}

TEST(GeneralizeTest, FlagsLowSupport) {
  const auto reg = Registry();
  const auto& op = reg.get("top_k");
  const DeployedModel dm = fit_deployed(op, Strategy::kRandom, 3000, 9);
  const auto g = generalize(op, dm.model, Strategy::kRandom, 2000, 10, 40);
  EXPECT_TRUE(g.low_support);
  EXPECT_EQ(g.eval.confusion.total(), 2000u);
  EXPECT_FALSE(generalize(op, dm.model, Strategy::kRandom, 100, 10, 500).low_support);
}

TEST(CompareTest, TwoOperatorsWithOracleFilters) {
  const auto reg = Registry();
  const std::vector<const OperatorSpec*> ops = {&reg.get("bmm"), &reg.get("top_k"),
                                                &reg.get("split")};
  std::vector<std::unique_ptr<ValidityFilter>> owned;
  std::map<std::string, const ValidityFilter*> filters;
  for (const auto* op : ops) {
    owned.push_back(make_oracle_filter(*op));
    filters[op->name] = owned.back().get();
  }
  CompareOptions opt;
  opt.run.n = 400;
  opt.run.seed = 11;
  const CampaignResult r = compare(ops, filters, opt);
  ASSERT_EQ(r.ops.size(), 3u);
  for (const auto& c : r.ops) {
    EXPECT_TRUE(c.complete) << c.error;
    // Identical streams: the filtered arm executes exactly the valid subset.
    EXPECT_EQ(c.filtered.valid_executed, c.unfiltered.valid_executed);
    EXPECT_EQ(c.filtered.candidates, c.unfiltered.candidates);
  }
  EXPECT_GE(r.mean_pass_filtered, r.mean_pass_unfiltered);
  EXPECT_GT(r.wilcoxon.statistic, 0.0);
  const std::string csv = campaign_summary_csv(r);
  EXPECT_NE(csv.find("bmm"), std::string::npos);
  EXPECT_NE(csv.find("MEAN,filtered"), std::string::npos);
}

TEST(CompareTest, MissingFilterMarksOperatorIncomplete) {
  const auto reg = Registry();
  const std::vector<const OperatorSpec*> ops = {&reg.get("bmm"), &reg.get("top_k"),
                                                &reg.get("dot")};
  const auto yes = make_constant_filter(true);
  const std::map<std::string, const ValidityFilter*> filters = {{"bmm", yes.get()},
                                                                {"top_k", yes.get()}};
  CompareOptions opt;
  opt.run.n = 100;
  const CampaignResult r = compare(ops, filters, opt);
  EXPECT_FALSE(r.ops[2].complete);
  EXPECT_FALSE(r.ops[2].error.empty());
  const std::vector<const OperatorSpec*> one = {&reg.get("bmm")};
  EXPECT_THROW(compare(one, filters, opt), PipelineError);
}

TEST(BugCampaignTest, PerfectAndRejectingFilters) {
  const auto reg = Registry();
  const auto no = make_constant_filter(false);
  for (const auto& op : reg.list()) {
    if (!op.bug) {
      EXPECT_THROW(bug_campaign(op, *no, 100, 1), PipelineError);
      continue;
    }
    const auto oracle = make_oracle_filter(op);
    const BugReport r = bug_campaign(op, *oracle, 3000, 12);
    ASSERT_GT(r.triggers, 0u) << op.name;
    EXPECT_EQ(r.predicted_valid, r.triggers);
    EXPECT_EQ(*r.success_ratio, 1.0);
    const BugReport z = bug_campaign(op, *no, 3000, 12);
    EXPECT_EQ(z.triggers, r.triggers);
    EXPECT_EQ(*z.success_ratio, 0.0);
  }
}

}  // namespace
}  // namespace learnfuzz
