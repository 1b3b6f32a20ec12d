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

#include "learnfuzz/value_model.h"

#include <gtest/gtest.h>

#include <stdexcept>

#include "learnfuzz/rng.h"
#include "learnfuzz/sampling.h"
#include "oracles/oracles.h"

namespace learnfuzz {
namespace {

TEST(ConformsTest, MatchingKind) {
  ParamSpace space({ParamSpec::tensor("a")});
  EXPECT_TRUE(conforms(space, {TensorV{Shape{2, 3}}}).conformant);
}

TEST(ConformsTest, KindMismatchNamesParameter) {
  ParamSpace space({ParamSpec::integer("k")});
  const ConformanceReport r = conforms(space, {FloatV{1.0}});
  EXPECT_FALSE(r.conformant);
  EXPECT_FALSE(r.kinds_ok);
  ASSERT_EQ(r.fields.size(), 1u);
  EXPECT_EQ(r.fields[0].param, "k");
  EXPECT_FALSE(r.fields[0].kind_ok);
}

TEST(ConformsTest, StringOutsideEnumeration) {
  ParamSpace space({ParamSpec::string("m", {"mean", "sum"})});
  const ConformanceReport r = conforms(space, {StrV{"max"}});
  EXPECT_FALSE(r.conformant);
  EXPECT_TRUE(r.kinds_ok);
  EXPECT_FALSE(r.fields[0].bounds_ok);
}

TEST(ConformsTest, ArityAndBounds) {
  ParamSpace space({ParamSpec::tensor("a"), ParamSpec::integer("k", IntRange{0, 5})});
  EXPECT_FALSE(conforms(space, {TensorV{}}).arity_ok);
  EXPECT_FALSE(conforms(space, {TensorV{Shape{11}}, IntV{0}}).conformant);
  EXPECT_FALSE(conforms(space, {TensorV{Shape{1, 1, 1, 1, 1, 1, 1}}, IntV{0}}).conformant);
  EXPECT_FALSE(conforms(space, {TensorV{Shape{1}}, IntV{6}}).conformant);
  EXPECT_TRUE(conforms(space, {TensorV{Shape{10}}, IntV{5}}).conformant);
  // Deterministic.
  const InputTuple t{TensorV{Shape{11}}, IntV{0}};
  EXPECT_EQ(conforms(space, t).summary(), conforms(space, t).summary());
}

TEST(ConformsTest, TensorListArity) {
  ParamSpace space({ParamSpec::tensor_list("ts")});
  EXPECT_FALSE(conforms(space, {TensorListV{}}).conformant);
  EXPECT_TRUE(conforms(space, {TensorListV{{Shape{1}, Shape{2}}}}).conformant);
  EXPECT_FALSE(conforms(space, {TensorListV{std::vector<Shape>(5, Shape{1})}}).conformant);
}

TEST(ParamSpaceTest, RejectsBrokenSpecs) {
  EXPECT_THROW(ParamSpace({ParamSpec::tensor("a"), ParamSpec::tensor("a")}),
               std::invalid_argument);
  EXPECT_THROW(ParamSpace({ParamSpec::string("s", {})}), std::invalid_argument);
  EXPECT_THROW(ParamSpace({ParamSpec::integer("k", IntRange{3, 2})}), std::invalid_argument);
  ParamSpace ok({ParamSpec::tensor("a"), ParamSpec::boolean("b")});
  EXPECT_EQ(ok.index_of("b"), 1u);
  EXPECT_FALSE(ok.index_of("c"));
}

TEST(NumelTest, Examples) {
  EXPECT_EQ(numel(Shape{}), 1);
  EXPECT_EQ(numel(Shape{2, 3}), 6);
  EXPECT_EQ(numel(Shape{4, 0, 5}), 0);
}

TEST(NumelTest, FoldOverSmallGrid) {
  for (const Shape& s : oracles::all_shapes(3, 4)) {
    int64_t p = 1;
    for (int64_t d : s.dims()) p *= d;
    EXPECT_EQ(numel(s), p) << to_string(s);
  }
}

TEST(BroadcastTest, Examples) {
  EXPECT_TRUE(broadcastable(Shape{3, 1}, Shape{1, 4}));
  EXPECT_TRUE(broadcastable(Shape{2, 3}, Shape{2, 3}));
  EXPECT_FALSE(broadcastable(Shape{2, 3}, Shape{3, 2}));
  EXPECT_TRUE(broadcastable(Shape{}, Shape{5, 2}));
}

TEST(BroadcastTest, SymmetricAndMatchesRule) {
  const auto shapes = oracles::all_shapes(3, 3);
  for (const Shape& a : shapes) {
    for (const Shape& b : shapes) {
      bool rule = true;
      for (int k = 1; k <= std::min(a.rank(), b.rank()); ++k) {
        const int64_t x = a.from_end(k), y = b.from_end(k);
        rule &= x == y || x == 1 || y == 1;
      }
      ASSERT_EQ(broadcastable(a, b), rule) << to_string(a) << " " << to_string(b);
      ASSERT_EQ(broadcastable(a, b), broadcastable(b, a));
    }
  }
}

TEST(BroadcastTest, ExpandableTo) {
  EXPECT_TRUE(expandable_to(Shape{3, 1}, Shape{2, 3, 4}));
  EXPECT_FALSE(expandable_to(Shape{1, 4}, Shape{4, 1}));
  EXPECT_FALSE(expandable_to(Shape{1, 1, 1}, Shape{1, 1}));
}

TEST(KindTest, NamesRoundTrip) {
  for (Kind k : {Kind::kTensor, Kind::kTensorList, Kind::kIntList, Kind::kInt, Kind::kFloat,
                 Kind::kBool, Kind::kStr}) {
    EXPECT_EQ(parse_kind(kind_name(k)), k);
  }
  EXPECT_FALSE(parse_kind("complex"));
}

TEST(SamplingTest, GeneratedValuesRespectBounds) {
  const Bounds b;
  Rng rng(11);
  ParamSpace space({ParamSpec::tensor("t"), ParamSpec::tensor_list("ts"),
                    ParamSpec::int_list("l"), ParamSpec::integer("i"),
                    ParamSpec::floating("f"), ParamSpec::boolean("b"),
                    ParamSpec::string("s", {"x", "y"})});
  for (int i = 0; i < 5000; ++i) {
    const InputTuple t = random_tuple(rng, space, b);
    ASSERT_TRUE(conforms(space, t, b).conformant) << to_string(t);
    const double f = std::get<FloatV>(t[4]).value;
    ASSERT_TRUE(std::isfinite(f));
  }
}

TEST(SamplingTest, RankDistributionIsUniform) {
  // Chi-square goodness of fit over ranks 0..6, 10K draws, 6 dof.
  const Bounds b;
  Rng rng(5);
  std::vector<int> counts(kMaxRank + 1, 0);
  const int n = 10000;
  for (int i = 0; i < n; ++i) ++counts[random_shape(rng, b).rank()];
  const double expected = static_cast<double>(n) / counts.size();
  double chi2 = 0;
  for (int c : counts) chi2 += (c - expected) * (c - expected) / expected;
  EXPECT_LT(chi2, 22.46);  // 0.001 critical value, 6 dof
}

TEST(SamplingTest, NonFiniteOnlyWhenAllowed) {
  Bounds b;
  b.allow_nonfinite_floats = true;
  b.special_float_prob = 1.0;
  Rng rng(3);
  bool saw = false;
  for (int i = 0; i < 2000 && !saw; ++i) saw = !std::isfinite(random_float(rng, b));
  EXPECT_TRUE(saw);
}

TEST(BoundsTest, CheckRejectsInconsistent) {
  Bounds b;
  b.max_rank = 7;
  EXPECT_THROW(b.check(), std::invalid_argument);
  b = Bounds{};
  b.int_min = 5;
  b.int_max = 4;
  EXPECT_THROW(b.check(), std::invalid_argument);
  EXPECT_NO_THROW(Bounds{}.check());
}

}  // namespace
}  // namespace learnfuzz
