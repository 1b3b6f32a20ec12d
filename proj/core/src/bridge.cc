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

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>

#include <nlohmann/json.hpp>

#include "learnfuzz/datagen.h"
#include "learnfuzz/errors.h"
#include "learnfuzz/io.h"
#include "learnfuzz/rng.h"

namespace learnfuzz {

using nlohmann::json;

std::string bridge_request_json(const std::string& id, const std::string& op,
                                const InputTuple& args) {
  // Field order matters to nobody, but keep it stable for logs.
  return R"({"id":)" + json(id).dump() + R"(,"op":)" + json(op).dump() + R"(,"args":)" +
         tuple_json(args) + "}";
}

BridgeResponse parse_bridge_response(std::string_view line) {
  try {
    const json j = json::parse(line);
    BridgeResponse r;
    const json& id = j.at("id");
    r.id = id.is_string() ? id.get<std::string>() : id.dump();
    r.valid = j.value("valid", false);
    if (j.contains("error") && !j.at("error").is_null()) {
      r.error = j.at("error").get<std::string>();
    }
    return r;
  } catch (const json::exception& e) {
    throw BridgeError(std::string("malformed bridge response: ") + e.what());
  }
}

BridgeClient::BridgeClient(const std::string& command, int timeout_ms)
    : timeout_ms_(timeout_ms) {
  // A dead child must surface as an error, not kill us.
  signal(SIGPIPE, SIG_IGN);
  int in[2], out[2];
  if (pipe2(in, O_CLOEXEC) != 0) throw BridgeError("pipe: " + std::string(strerror(errno)));
  if (pipe2(out, O_CLOEXEC) != 0) {
    close(in[0]);
    close(in[1]);
    throw BridgeError("pipe: " + std::string(strerror(errno)));
  }
  pid_ = fork();
  if (pid_ < 0) {
    for (int fd : {in[0], in[1], out[0], out[1]}) close(fd);
    throw BridgeError("fork: " + std::string(strerror(errno)));
  }
  if (pid_ == 0) {
    dup2(in[0], STDIN_FILENO);
    dup2(out[1], STDOUT_FILENO);
    execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
    _exit(127);
  }
  close(in[0]);
  close(out[1]);
  to_child_ = in[1];
  from_child_ = out[0];
}

BridgeClient::~BridgeClient() {
  if (to_child_ >= 0) close(to_child_);  // EOF ends the serve loop
  if (from_child_ >= 0) close(from_child_);
  if (pid_ > 0) {
    int status = 0;
    for (int i = 0; i < 100; ++i) {
      if (waitpid(pid_, &status, WNOHANG) != 0) return;
      usleep(10000);
    }
    kill(pid_, SIGKILL);
    waitpid(pid_, &status, 0);
  }
}

std::string BridgeClient::read_line() {
  for (;;) {
    const size_t nl = buf_.find('\n');
    if (nl != std::string::npos) {
      std::string line = buf_.substr(0, nl);
      buf_.erase(0, nl + 1);
      return line;
    }
    pollfd p{from_child_, POLLIN, 0};
    const int rc = poll(&p, 1, timeout_ms_);
    if (rc == 0) throw BridgeError("bridge timed out");
    if (rc < 0) {
      if (errno == EINTR) continue;
      throw BridgeError("poll: " + std::string(strerror(errno)));
    }
    char chunk[4096];
    const ssize_t n = read(from_child_, chunk, sizeof chunk);
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) throw BridgeError("bridge closed its output");
    buf_.append(chunk, static_cast<size_t>(n));
  }
}

BridgeResponse BridgeClient::call(const std::string& op, const InputTuple& args) {
  const std::string id = std::to_string(next_id_++);
  const std::string line = bridge_request_json(id, op, args) + "\n";
  size_t off = 0;
  while (off < line.size()) {
    const ssize_t n = write(to_child_, line.data() + off, line.size() - off);
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) throw BridgeError("bridge closed its input");
    off += static_cast<size_t>(n);
  }
  BridgeResponse r = parse_bridge_response(read_line());
  if (r.id != id) throw BridgeError("bridge answered id " + r.id + ", expected " + id);
  return r;
}

XcheckReport run_xcheck(std::span<const OperatorSpec* const> ops, BridgeClient& bridge,
                        size_t n_per_op, uint64_t seed, const Bounds& bounds) {
  XcheckReport rep;
  rep.seed = seed;
  rep.n_per_op = n_per_op;
  for (const OperatorSpec* op : ops) {
    XcheckOpReport r;
    r.op = op->name;
    GenerationConfig cfg;
    cfg.seed = derive_seed(seed, "xcheck:" + op->name);
    cfg.bounds = bounds;
    auto gen = make_weak_generator(*op, op->partial ? Relaxation::kPartial : Relaxation::kNone,
                                   cfg);
    for (size_t i = 0; i < n_per_op; ++i) {
      InputTuple t = gen->next();
      const BridgeResponse b = bridge.call(op->name, t);
      if (b.unsupported()) {
        r.supported = false;
        break;
      }
      const ValidationOutcome s = validate(*op, t);
      ++r.compared;
      if (s.valid == b.valid) {
        ++r.agree;
      } else {
        r.disagreements.push_back({i, std::move(t), s.valid, b.valid, s.message,
                                   b.error.value_or("")});
      }
    }
    if (r.compared > 0) r.agreement = static_cast<double>(r.agree) / r.compared;
    rep.ops.push_back(std::move(r));
  }
  return rep;
}

std::string xcheck_report_json(const XcheckReport& r, const ArtifactMeta& meta) {
  nlohmann::ordered_json j;
  j["meta"] = nlohmann::ordered_json::parse(meta_json(meta));
  j["seed"] = r.seed;
  j["n_per_op"] = r.n_per_op;
  auto ops = nlohmann::ordered_json::array();
  for (const auto& o : r.ops) {
    nlohmann::ordered_json x;
    x["op"] = o.op;
    x["supported"] = o.supported;
    x["compared"] = o.compared;
    x["agree"] = o.agree;
    x["agreement"] = o.agreement ? nlohmann::ordered_json(*o.agreement) : nlohmann::ordered_json();
    auto dis = nlohmann::ordered_json::array();
    for (const auto& d : o.disagreements) {
      dis.push_back({{"index", d.index},
                     {"args", nlohmann::ordered_json::parse(tuple_json(d.tuple))},
                     {"stub_valid", d.stub_valid},
                     {"bridge_valid", d.bridge_valid},
                     {"stub_message", d.stub_message},
                     {"bridge_error", d.bridge_error}});
    }
    x["disagreements"] = std::move(dis);
    ops.push_back(std::move(x));
  }
  j["ops"] = std::move(ops);
  return j.dump();
}

}  // namespace learnfuzz
