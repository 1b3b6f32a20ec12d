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

#include "learnfuzz/bridge.h"

#include <gtest/gtest.h>

#include <nlohmann/json.hpp>

#include "learnfuzz/errors.h"

namespace learnfuzz {
namespace {

OperatorRegistry Registry() {
  BuiltinOptions o;
  o.exec_cost_us = 0;
  o.reject_cost_us = 0;
  return OperatorRegistry::builtin(o);
}

std::string Fake(const std::string& args = "") {
  return std::string("'") + FAKE_BRIDGE + "' " + args;
}

TEST(BridgeWireTest, RequestAndResponse) {
  const InputTuple t{TensorV{Shape{2, 3, 4}}, IntV{1}};
  const auto j = nlohmann::json::parse(bridge_request_json("7", "top_k", t));
  EXPECT_EQ(j.at("id"), "7");
  EXPECT_EQ(j.at("op"), "top_k");
  EXPECT_EQ(j.at("args").size(), 2u);
  EXPECT_EQ(j.at("args")[0].at("shape"), nlohmann::json::array({2, 3, 4}));

  const auto r = parse_bridge_response(R"({"id":"7","valid":false,"error":"boom"})");
  EXPECT_EQ(r.id, "7");
  EXPECT_FALSE(r.valid);
  EXPECT_EQ(*r.error, "boom");
  EXPECT_FALSE(r.unsupported());
  EXPECT_TRUE(parse_bridge_response(R"({"id":"1","valid":false,"error":"UNSUPPORTED"})")
                  .unsupported());
  EXPECT_FALSE(parse_bridge_response(R"({"id":"1","valid":true,"error":null})").error);
  // Numeric ids are tolerated.
  EXPECT_EQ(parse_bridge_response(R"({"id":3,"valid":true})").id, "3");
  EXPECT_THROW(parse_bridge_response("oops"), BridgeError);
  EXPECT_THROW(parse_bridge_response(R"({"valid":true})"), BridgeError);
}

TEST(BridgeClientTest, AnswersFromTheFake) {
  const auto reg = Registry();
  BridgeClient c(Fake());
  const auto ok = c.call("bmm", {TensorV{Shape{10, 3, 4}}, TensorV{Shape{10, 4, 5}}});
  EXPECT_TRUE(ok.valid);
  const auto bad = c.call("bmm", {TensorV{Shape{10, 3, 4}}, TensorV{Shape{10, 4}}});
  EXPECT_FALSE(bad.valid);
  EXPECT_EQ(*bad.error, "batch2 must be a 3D tensor");
  EXPECT_TRUE(c.call("sigmoid_grad", {TensorV{Shape{2}}, TensorV{Shape{2}}}).unsupported());
}

TEST(BridgeClientTest, Failures) {
  const InputTuple t{TensorV{Shape{2}}, TensorV{Shape{2}}};
  {
    BridgeClient c(Fake("--garbage"));
    EXPECT_THROW(c.call("dot", t), BridgeError);
  }
  {
    BridgeClient c(Fake("--wrong-id"));
    EXPECT_THROW(c.call("dot", t), BridgeError);
  }
  {
    BridgeClient c(Fake("--exit-after 1"));
    EXPECT_NO_THROW(c.call("dot", t));
    EXPECT_THROW(c.call("dot", t), BridgeError);
  }
  {
    BridgeClient c(Fake("--hang"), 200);
    EXPECT_THROW(c.call("dot", t), BridgeError);
  }
  {
    BridgeClient c("exit 0");
    EXPECT_THROW(c.call("dot", t), BridgeError);
  }
}

TEST(XcheckTest, FullAgreementWithFaithfulBridge) {
  const auto reg = Registry();
  std::vector<const OperatorSpec*> ops;
  for (const auto& op : reg.list()) ops.push_back(&op);
  BridgeClient c(Fake());
  const XcheckReport r = run_xcheck(ops, c, 200, 5);
  ASSERT_EQ(r.ops.size(), 12u);
  for (const auto& o : r.ops) {
    if (o.op == "matrix_inverse" || o.op == "sigmoid_grad") {
      EXPECT_FALSE(o.supported) << o.op;
      EXPECT_FALSE(o.agreement);
      continue;
    }
    EXPECT_TRUE(o.supported) << o.op;
    EXPECT_EQ(o.compared, 200u);
    EXPECT_EQ(*o.agreement, 1.0) << o.op;
    EXPECT_TRUE(o.disagreements.empty());
  }
}

TEST(XcheckTest, DisagreementsAreListed) {
  const auto reg = Registry();
  const std::vector<const OperatorSpec*> ops = {&reg.get("top_k")};
  BridgeClient c(Fake("--flip 10"));
  const XcheckReport r = run_xcheck(ops, c, 100, 6);
  const auto& o = r.ops[0];
  EXPECT_EQ(o.compared, 100u);
  EXPECT_EQ(o.disagreements.size(), 10u);
  EXPECT_DOUBLE_EQ(*o.agreement, 0.9);
  for (const auto& d : o.disagreements) {
    EXPECT_NE(d.stub_valid, d.bridge_valid);
    EXPECT_EQ(validate(reg.get("top_k"), d.tuple).valid, d.stub_valid);
  }
  const auto j = nlohmann::json::parse(xcheck_report_json(r, ArtifactMeta{"xcheck", "0", 6}));
  EXPECT_EQ(j.at("ops")[0].at("disagreements").size(), 10u);
  EXPECT_EQ(j.at("ops")[0].at("agree"), 90);
}

TEST(XcheckTest, SameSeedSameTuples) {
  const auto reg = Registry();
  const std::vector<const OperatorSpec*> ops = {&reg.get("split")};
  BridgeClient a(Fake("--flip 3")), b(Fake("--flip 3"));
  const auto ra = run_xcheck(ops, a, 60, 9), rb = run_xcheck(ops, b, 60, 9);
  EXPECT_EQ(xcheck_report_json(ra, ArtifactMeta{}), xcheck_report_json(rb, ArtifactMeta{}));
}

}  // namespace
}  // namespace learnfuzz
