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

// Client side of the real-framework bridge: a child process speaking one
// JSON object per line on stdin/stdout.
//
//   request:  {"id":"7","op":"bmm","args":[{"kind":"tensor","shape":[2,3,4]},...]}
//   response: {"id":"7","valid":false,"error":"batch2 must be a 3D tensor"}
//
// Unmapped operators answer with error "UNSUPPORTED".

#ifndef LEARNFUZZ_BRIDGE_H_
#define LEARNFUZZ_BRIDGE_H_

#include <sys/types.h>

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "learnfuzz/io.h"
#include "learnfuzz/registry.h"
#include "learnfuzz/value_model.h"

namespace learnfuzz {

inline constexpr const char* kUnsupported = "UNSUPPORTED";

struct BridgeResponse {
  std::string id;
  bool valid = false;
  std::optional<std::string> error;
  bool unsupported() const { return error && *error == kUnsupported; }
};

std::string bridge_request_json(const std::string& id, const std::string& op,
                                const InputTuple& args);
// Throws BridgeError on a malformed line.
BridgeResponse parse_bridge_response(std::string_view line);

class BridgeClient {
 public:
  // Starts `/bin/sh -c command`. Throws BridgeError if that fails.
  explicit BridgeClient(const std::string& command, int timeout_ms = 30000);
  ~BridgeClient();
  BridgeClient(const BridgeClient&) = delete;
  BridgeClient& operator=(const BridgeClient&) = delete;

  // One request, one response. Throws BridgeError if the child exits, times
  // out, or answers with a different id.
  BridgeResponse call(const std::string& op, const InputTuple& args);

 private:
  std::string read_line();

  pid_t pid_ = -1;
  int to_child_ = -1;
  int from_child_ = -1;
  int timeout_ms_;
  uint64_t next_id_ = 0;
  std::string buf_;
};

struct XcheckDisagreement {
  size_t index = 0;
  InputTuple tuple;
  bool stub_valid = false;
  bool bridge_valid = false;
  std::string stub_message;
  std::string bridge_error;
};

struct XcheckOpReport {
  std::string op;
  bool supported = true;
  size_t compared = 0;
  size_t agree = 0;
  std::optional<double> agreement;  // undefined when nothing compared
  std::vector<XcheckDisagreement> disagreements;
};

struct XcheckReport {
  std::vector<XcheckOpReport> ops;
  uint64_t seed = 0;
  size_t n_per_op = 0;
};

// Streams n seeded partial-relaxation tuples per operator through the
// bridge and compares the valid bit with the stub oracle (never messages).
XcheckReport run_xcheck(std::span<const OperatorSpec* const> ops, BridgeClient& bridge,
                        size_t n_per_op, uint64_t seed, const Bounds& bounds = {});

// Agreement report; every disagreement is listed with both verdicts.
std::string xcheck_report_json(const XcheckReport& r, const ArtifactMeta& meta);

}  // namespace learnfuzz

#endif  // LEARNFUZZ_BRIDGE_H_
