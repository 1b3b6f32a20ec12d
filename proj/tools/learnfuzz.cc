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

// learnfuzz: command-line front end.
//
// Exit codes: 0 ok, 1 usage/config error, 2 runtime error, 3 a --min-*/
// --max-* gate failed.

#include <cinttypes>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "learnfuzz/bridge.h"
#include "learnfuzz/datagen.h"
#include "learnfuzz/encoder.h"
#include "learnfuzz/errors.h"
#include "learnfuzz/io.h"
#include "learnfuzz/learners.h"
#include "learnfuzz/pipeline.h"
#include "learnfuzz/registry.h"
#include "learnfuzz/rng.h"

namespace fs = std::filesystem;
using namespace learnfuzz;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitRuntime = 2;
constexpr int kExitGate = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::vector<std::string> ops{"all"};
  std::string strategy = "random";
  std::string train_strategy;  // campaigns; empty = per-command default
  size_t n_train = 10000;
  int repetitions = 10;
  uint64_t seed = 0;
  double ratio = 0.8;
  size_t campaign_n = 5000;
  size_t batch_size = 0;
  size_t generalize_n = 50000;
  std::string relaxation = "partial";
  std::string out;
  int64_t exec_cost_us = 1000;
  int64_t reject_cost_us = 100;
  unsigned workers = 1;
  std::string model_path;
  std::string data_path;
  std::string filter = "model";
  std::string bridge;
  bool audit = false;
  // Gates.
  std::optional<double> min_precision, min_recall, min_pass, max_p, min_retention,
      min_agreement;
};

// Everything that influences artifact content, in a fixed order. The
// output directory is deliberately left out.
std::string canonical(const std::string& cmd, const RunConfig& c) {
  std::ostringstream s;
  s << "cmd=" << cmd << ";ops=";
  for (const auto& o : c.ops) s << o << ',';
  s << ";strategy=" << c.strategy << ";train_strategy=" << c.train_strategy
    << ";n_train=" << c.n_train << ";repetitions=" << c.repetitions << ";seed=" << c.seed
    << ";ratio=" << c.ratio << ";campaign_n=" << c.campaign_n
    << ";batch_size=" << c.batch_size << ";generalize_n=" << c.generalize_n
    << ";relaxation=" << c.relaxation << ";exec_cost_us=" << c.exec_cost_us
    << ";reject_cost_us=" << c.reject_cost_us << ";filter=" << c.filter
    << ";model=" << fs::path(c.model_path).filename().string()
    << ";data=" << fs::path(c.data_path).filename().string();
  return s.str();
}

ArtifactMeta make_meta(const std::string& cmd, const RunConfig& c) {
  char hex[17];
  std::snprintf(hex, sizeof hex, "%016" PRIx64, fnv1a64(canonical(cmd, c)));
  return ArtifactMeta{cmd, hex, c.seed, kArtifactFormatVersion};
}

Strategy strategy_of(const std::string& s) {
  const auto v = parse_strategy(s);
  if (!v) throw UsageError("unknown strategy '" + s + "'");
  return *v;
}

Relaxation relaxation_of(const std::string& s) {
  const auto v = parse_relaxation(s);
  if (!v) throw UsageError("unknown relaxation '" + s + "'");
  return *v;
}

std::vector<const OperatorSpec*> select_ops(const OperatorRegistry& reg,
                                            const std::vector<std::string>& names) {
  std::vector<const OperatorSpec*> out;
  for (const auto& n : names) {
    if (n == "all") {
      for (const auto& op : reg.list()) out.push_back(&op);
      continue;
    }
    const OperatorSpec* op = reg.find(n);
    if (!op) throw UsageError("unknown operator '" + n + "' (see `learnfuzz ops`)");
    out.push_back(op);
  }
  if (out.empty()) throw UsageError("no operators selected");
  return out;
}

std::string out_dir(const RunConfig& c) {
  std::string d = c.out;
  if (d.empty()) {
    const char* env = std::getenv("LEARNFUZZ_OUT");
    d = env && *env ? env : "learnfuzz-out";
  }
  fs::create_directories(d);
  return d;
}

std::string path_in(const std::string& dir, const std::string& name) {
  return (fs::path(dir) / name).string();
}

std::string fmt_opt(const std::optional<double>& v) {
  if (!v) return "n/a";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", *v);
  return buf;
}

bool gate(const char* what, const std::optional<double>& value,
          const std::optional<double>& bound, bool at_least) {
  if (!bound) return true;
  const bool ok = value && (at_least ? *value >= *bound : *value <= *bound);
  if (!ok) {
    std::cerr << "gate failed: " << what << " = " << fmt_opt(value)
              << (at_least ? " < " : " > ") << *bound << '\n';
  }
  return ok;
}

GenerationConfig base_config() { return GenerationConfig{}; }

// --- commands ---

int cmd_ops(const OperatorRegistry& reg, bool as_json) {
  for (const auto& op : reg.list()) {
    if (as_json) {
      std::cout << "{\"op\":\"" << op.name << "\",\"params\":[";
      for (size_t i = 0; i < op.space.size(); ++i) {
        const auto& p = op.space.params()[i];
        std::cout << (i ? "," : "") << "{\"name\":\"" << p.name << "\",\"kind\":\""
                  << kind_name(p.kind) << "\"}";
      }
      std::cout << "],\"bug\":" << (op.bug ? "true" : "false") << "}\n";
      continue;
    }
    std::cout << op.name << "  " << op.signature << '\n';
    for (const auto& c : op.constraints) std::cout << "    - " << c << '\n';
    if (op.bug) std::cout << "    bug: " << op.bug->description << '\n';
    if (!op.partial_note.empty()) std::cout << "    partial: " << op.partial_note << '\n';
  }
  return kExitOk;
}

int cmd_gen(const OperatorRegistry& reg, const RunConfig& c) {
  const auto ops = select_ops(reg, c.ops);
  const Strategy st = strategy_of(c.strategy);
  const std::string dir = out_dir(c);
  const ArtifactMeta meta = make_meta("gen", c);
  for (const OperatorSpec* op : ops) {
    GenerationConfig g = base_config();
    g.n_samples = c.n_train;
    g.seed = c.seed;
    Dataset ds = label(*op, generate(*op, st, g), c.workers);
    ds.seed = c.seed;
    ds.strategy = st;
    const std::string stem = op->name + "-" + c.strategy + "-s" + std::to_string(c.seed);
    write_file(path_in(dir, stem + ".csv"), dataset_csv(ds, op->space, meta));
    write_file(path_in(dir, stem + ".jsonl"), dataset_jsonl(ds, meta));
    const ClassStats cs = class_stats(ds);
    std::cout << op->name << ": " << ds.size() << " samples, " << cs.positives
              << " valid (" << fmt_opt(cs.ratio) << ") -> " << path_in(dir, stem + ".csv")
              << '\n';
  }
  return kExitOk;
}

int cmd_train(const OperatorRegistry& reg, const RunConfig& c) {
  const auto ops = select_ops(reg, c.ops);
  const Strategy st = strategy_of(c.strategy);
  const std::string dir = out_dir(c);
  const ArtifactMeta meta = make_meta("train", c);
  if (!c.data_path.empty() && ops.size() != 1) {
    throw UsageError("--data needs exactly one --op");
  }
  bool ok = true;
  for (const OperatorSpec* op : ops) {
    std::string lb_lines, rows;
    std::vector<double> prec, rec;
    bool low_support = false;
    for (int rep = 0; rep < c.repetitions; ++rep) {
      const uint64_t seed = derive_seed(c.seed, op->name, static_cast<uint64_t>(rep));
      TrainRun run;
      if (!c.data_path.empty()) {
        // Pre-generated encoded data: split and fit exactly as for fresh data.
        const EncodedDataset d = read_dataset_csv(read_file(c.data_path));
        if (d.op != op->name) throw UsageError("dataset is for " + d.op);
        auto [tr, te] = stratified_split_indices(d.y, c.ratio, derive_seed(seed, "split"));
        std::vector<int> ytr, yte;
        for (size_t i : tr) ytr.push_back(d.y[i]);
        for (size_t i : te) yte.push_back(d.y[i]);
        run.op = op->name;
        run.seed = seed;
        run.train_stats = class_stats(ytr);
        run.test_stats = class_stats(yte);
        run.leaderboard = fit_leaderboard(d.X.take(tr), ytr, seed,
                                          build_schema(op->space).hash());
        run.held_out = evaluate(*run.leaderboard.best, d.X.take(te), yte);
      } else {
        run = train_and_evaluate(*op, st, c.n_train, c.ratio, seed, base_config(), c.workers);
      }
      low_support |= run.train_stats.positives < kLowSupportPositives;
      if (run.held_out.precision) prec.push_back(*run.held_out.precision);
      if (run.held_out.recall) rec.push_back(*run.held_out.recall);
      lb_lines += leaderboard_json(run.leaderboard, meta, op->name) + "\n";
      std::ostringstream row;
      row << "{\"rep\":" << rep << ",\"seed\":" << seed
          << ",\"train_positives\":" << run.train_stats.positives
          << ",\"train_negatives\":" << run.train_stats.negatives
          << ",\"best\":\"" << family_name(run.leaderboard.top().family)
          << "\",\"held_out\":" << eval_report_json(run.held_out) << "}";
      rows += (rows.empty() ? "" : ",") + row.str();
      if (rep == 0) {
        write_file(path_in(dir, op->name + ".model.json"),
                   model_artifact_json(*run.leaderboard.best, meta, run.train_stats.positives));
      }
    }
    auto mean = [](const std::vector<double>& v) -> std::optional<double> {
      if (v.empty()) return std::nullopt;
      double s = 0;
      for (double x : v) s += x;
      return s / static_cast<double>(v.size());
    };
    const auto mp = mean(prec), mr = mean(rec);
    std::ostringstream rep;
    rep << "{\"meta\":" << meta_json(meta) << ",\"op\":\"" << op->name << "\",\"strategy\":\""
        << c.strategy << "\",\"repetitions\":" << c.repetitions << ",\"mean_precision\":"
        << (mp ? std::to_string(*mp) : "null")
        << ",\"mean_recall\":" << (mr ? std::to_string(*mr) : "null")
        << ",\"defined_precision\":" << prec.size() << ",\"defined_recall\":" << rec.size()
        << ",\"flags\":[" << (low_support ? "\"LOW_SUPPORT\"" : "") << "],\"runs\":[" << rows
        << "]}\n";
    write_file(path_in(dir, op->name + ".train.json"), rep.str());
    write_file(path_in(dir, op->name + ".leaderboard.jsonl"), lb_lines);
    std::cout << op->name << ": precision " << fmt_opt(mp) << " recall " << fmt_opt(mr)
              << (low_support ? "  LOW_SUPPORT" : "") << '\n';
    ok &= gate("precision", mp, c.min_precision, true);
    ok &= gate("recall", mr, c.min_recall, true);
  }
  return ok ? kExitOk : kExitGate;
}

TrainedModel load_or_fit(const OperatorSpec& op, const RunConfig& c, Strategy st,
                         std::optional<size_t>* positives) {
  if (!c.model_path.empty()) {
    if (positives) *positives = model_train_positives(read_file(c.model_path));
    return load_model(c.model_path);
  }
  DeployedModel d = fit_deployed(op, st, c.n_train, derive_seed(c.seed, op.name), base_config(),
                                 c.workers);
  if (positives) *positives = d.stats.positives;
  return std::move(d.model);
}

int cmd_eval(const OperatorRegistry& reg, const RunConfig& c) {
  const auto ops = select_ops(reg, c.ops);
  if (ops.size() != 1) throw UsageError("eval takes exactly one --op");
  if (c.model_path.empty()) throw UsageError("eval needs --model");
  const OperatorSpec& op = *ops.front();
  const std::string dir = out_dir(c);
  const ArtifactMeta meta = make_meta("eval", c);
  const TrainedModel m = load_model(c.model_path);
  EvalReport r;
  if (!c.data_path.empty()) {
    const EncodedDataset d = read_dataset_csv(read_file(c.data_path));
    r = evaluate(m, d.X, d.y);
  } else {
    GenerationConfig g = base_config();
    g.n_samples = c.n_train;
    g.seed = c.seed;
    const Dataset ds = label(op, generate(op, strategy_of(c.strategy), g), c.workers);
    r = evaluate(m, encode_batch(ds.tuples(), op.space, build_schema(op.space)), ds.labels());
  }
  write_file(path_in(dir, op.name + ".eval.json"),
             "{\"meta\":" + meta_json(meta) + ",\"op\":\"" + op.name +
                 "\",\"eval\":" + eval_report_json(r) + "}\n");
  std::cout << op.name << ": precision " << fmt_opt(r.precision) << " recall "
            << fmt_opt(r.recall) << " f1 " << fmt_opt(r.f1) << '\n';
  bool ok = gate("precision", r.precision, c.min_precision, true);
  ok &= gate("recall", r.recall, c.min_recall, true);
  return ok ? kExitOk : kExitGate;
}

int cmd_generalize(const OperatorRegistry& reg, const RunConfig& c) {
  const auto ops = select_ops(reg, c.ops);
  const Strategy st = strategy_of(c.strategy);
  const std::string dir = out_dir(c);
  const ArtifactMeta meta = make_meta("generalize", c);
  std::string lines;
  bool ok = true;
  for (const OperatorSpec* op : ops) {
    std::optional<size_t> pos;
    const TrainedModel m = load_or_fit(*op, c, st, &pos);
    const GeneralizationReport r =
        generalize(*op, m, st, c.generalize_n, derive_seed(c.seed, "generalize:" + op->name),
                   pos, base_config());
    lines += generalization_json(r, meta) + "\n";
    std::cout << op->name << ": precision " << fmt_opt(r.eval.precision) << " recall "
              << fmt_opt(r.eval.recall) << " (positives in eval " << r.eval.positives_in_eval
              << ", in training " << (pos ? std::to_string(*pos) : "unknown") << ")" << (r.low_support ? "  LOW_SUPPORT" : "")
              << '\n';
    ok &= gate("precision", r.eval.precision, c.min_precision, true);
    ok &= gate("recall", r.eval.recall, c.min_recall, true);
  }
  write_file(path_in(dir, "generalize.jsonl"), lines);
  return ok ? kExitOk : kExitGate;
}

std::unique_ptr<ValidityFilter> make_filter(const OperatorSpec& op, const RunConfig& c,
                                            Strategy train) {
  if (c.filter == "oracle") return make_oracle_filter(op);
  if (c.filter == "always-valid") return make_constant_filter(true);
  if (c.filter == "always-invalid") return make_constant_filter(false);
  if (c.filter != "model") throw UsageError("unknown filter '" + c.filter + "'");
  return make_model_filter(op, load_or_fit(op, c, train, nullptr));
}

int cmd_fuzz(const OperatorRegistry& reg, const RunConfig& c) {
  const auto ops = select_ops(reg, c.ops);
  const Relaxation rx = relaxation_of(c.relaxation);
  const Strategy train = strategy_of(c.train_strategy.empty() ? "random" : c.train_strategy);
  const std::string dir = out_dir(c);
  const ArtifactMeta meta = make_meta("fuzz", c);
  RunOptions ro{c.campaign_n, c.batch_size, c.seed, c.audit};
  std::string lines;
  bool ok = true;
  for (const OperatorSpec* op : ops) {
    auto filter = make_filter(*op, c, train);
    auto g1 = make_campaign_generator(*op, rx, c.seed);
    const FuzzReport u = run_unfiltered(*op, *g1, ro);
    auto g2 = make_campaign_generator(*op, rx, c.seed);
    const FuzzReport f = run_filtered(*op, *g2, *filter, ro);
    lines += fuzz_report_json(u, meta) + "\n" + fuzz_report_json(f, meta) + "\n";
    std::cout << op->name << ": pass rate " << fmt_opt(u.pass_rate) << " -> "
              << fmt_opt(f.pass_rate) << " (executed " << u.executed << " -> " << f.executed
              << ")\n";
    ok &= gate("filtered pass rate", f.pass_rate, c.min_pass, true);
  }
  write_file(path_in(dir, "fuzz.jsonl"), lines);
  return ok ? kExitOk : kExitGate;
}

int cmd_compare(const OperatorRegistry& reg, const RunConfig& c) {
  const auto ops = select_ops(reg, c.ops);
  if (ops.size() < 2) throw UsageError("compare needs at least 2 operators");
  const Strategy train = strategy_of(c.train_strategy.empty() ? "random" : c.train_strategy);
  const std::string dir = out_dir(c);
  const ArtifactMeta meta = make_meta("compare", c);
  std::vector<std::unique_ptr<ValidityFilter>> owned;
  std::map<std::string, const ValidityFilter*> filters;
  for (const OperatorSpec* op : ops) {
    owned.push_back(make_filter(*op, c, train));
    filters[op->name] = owned.back().get();
  }
  CompareOptions co;
  co.run = RunOptions{c.campaign_n, c.batch_size, c.seed, c.audit};
  co.relaxation = relaxation_of(c.relaxation);
  const CampaignResult r = compare(ops, filters, co);
  std::string lines;
  for (const auto& x : r.ops) {
    if (!x.complete) continue;
    lines += fuzz_report_json(x.unfiltered, meta) + "\n";
    lines += fuzz_report_json(x.filtered, meta) + "\n";
  }
  write_file(path_in(dir, "compare.jsonl"), lines);
  write_file(path_in(dir, "compare.json"), campaign_json(r, meta) + "\n");
  const std::string csv = campaign_summary_csv(r);
  write_file(path_in(dir, "compare.csv"), "# " + meta_json(meta) + "\n" + csv);
  std::cout << csv;
  std::cout << "wilcoxon p = " << r.wilcoxon.p_value << ", cohen's d = " << r.cohens_d << " ("
            << r.effect_size << ")\n";
  bool ok = gate("mean filtered pass rate", r.mean_pass_filtered, c.min_pass, true);
  ok &= gate("wilcoxon p", r.wilcoxon.p_value, c.max_p, false);
  return ok ? kExitOk : kExitGate;
}

int cmd_bugs(const OperatorRegistry& reg, const RunConfig& c) {
  const auto ops = select_ops(reg, c.ops);
  const Strategy train = strategy_of(c.train_strategy.empty() ? "weak" : c.train_strategy);
  const std::string dir = out_dir(c);
  const ArtifactMeta meta = make_meta("bugs", c);
  std::string lines;
  size_t triggers = 0, kept = 0;
  for (const OperatorSpec* op : ops) {
    if (!op->bug) continue;
    auto filter = make_filter(*op, c, train);
    try {
      const BugReport r = bug_campaign(*op, *filter, c.campaign_n, c.seed);
      triggers += r.triggers;
      kept += r.predicted_valid;
      lines += bug_report_json(r, meta) + "\n";
      std::cout << op->name << ": " << r.predicted_valid << "/" << r.triggers
                << " triggers kept (" << fmt_opt(r.success_ratio) << ")\n";
    } catch (const InsufficientTriggersError& e) {
      std::cerr << "warning: " << e.what() << '\n';
    }
  }
  write_file(path_in(dir, "bugs.jsonl"), lines);
  const std::optional<double> pooled =
      triggers ? std::optional<double>(static_cast<double>(kept) / triggers) : std::nullopt;
  std::cout << "pooled retention " << fmt_opt(pooled) << '\n';
  return gate("retention", pooled, c.min_retention, true) ? kExitOk : kExitGate;
}

int cmd_xcheck(const OperatorRegistry& reg, const RunConfig& c) {
  const auto ops = select_ops(reg, c.ops);
  std::string cmd = c.bridge;
  if (cmd.empty()) {
    const char* env = std::getenv("LEARNFUZZ_BRIDGE");
    cmd = env && *env ? env : "learnfuzz-bridge";
  }
  const std::string dir = out_dir(c);
  const ArtifactMeta meta = make_meta("xcheck", c);
  BridgeClient bridge(cmd);
  const XcheckReport r = run_xcheck(ops, bridge, c.campaign_n, c.seed);
  write_file(path_in(dir, "xcheck.json"), xcheck_report_json(r, meta) + "\n");
  bool ok = true;
  for (const auto& o : r.ops) {
    std::cout << o.op << ": "
              << (o.supported ? fmt_opt(o.agreement) + " agreement, " +
                                    std::to_string(o.disagreements.size()) + " disagreements"
                              : std::string("unsupported by bridge"))
              << '\n';
    if (o.supported) ok &= gate(("agreement " + o.op).c_str(), o.agreement, c.min_agreement, true);
  }
  return ok ? kExitOk : kExitGate;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"learnfuzz: learned input-validity filters for API fuzzing"};
  app.set_config("--config", "", "INI/TOML config file; flags override its values");
  app.require_subcommand(1);
  RunConfig c;

  auto common = [&](CLI::App* s) {
    s->add_option("--op,--ops", c.ops, "operator names or 'all'")->delimiter(',');
    s->add_option("--seed", c.seed, "base seed");
    s->add_option("--out", c.out, "output directory (default $LEARNFUZZ_OUT or ./learnfuzz-out)");
    s->add_option("--workers", c.workers, "labeling threads")->check(CLI::Range(1u, 256u));
    s->add_option("--exec-cost-us", c.exec_cost_us, "simulated cost of an accepted call")
        ->check(CLI::NonNegativeNumber);
    s->add_option("--reject-cost-us", c.reject_cost_us, "simulated cost of a rejected call")
        ->check(CLI::NonNegativeNumber);
  };
  auto training = [&](CLI::App* s) {
    s->add_option("--strategy", c.strategy, "random | pairwise | weak");
    s->add_option("--n,--n-train", c.n_train, "samples per dataset")->check(CLI::PositiveNumber);
  };
  auto campaign = [&](CLI::App* s) {
    s->add_option("--relaxation", c.relaxation, "none | partial | full");
    s->add_option("--campaign-n", c.campaign_n, "candidates per operator")
        ->check(CLI::PositiveNumber);
    s->add_option("--batch-size", c.batch_size, "inference batch size (0 = all)");
    s->add_option("--train-strategy", c.train_strategy, "data used to fit filter models");
    s->add_option("--n-train", c.n_train, "training samples per model")
        ->check(CLI::PositiveNumber);
    s->add_option("--model", c.model_path, "use this model instead of training one");
    s->add_option("--filter", c.filter, "model | oracle | always-valid | always-invalid");
  };

  bool ops_json = false;
  auto* ops = app.add_subcommand("ops", "print the operator catalog");
  ops->add_flag("--json", ops_json, "one JSON object per operator");

  auto* gen = app.add_subcommand("gen", "generate and label datasets");
  common(gen);
  training(gen);

  auto* tr = app.add_subcommand("train", "fit leaderboards over repeated splits");
  common(tr);
  training(tr);
  tr->add_option("--repetitions", c.repetitions)->check(CLI::PositiveNumber);
  tr->add_option("--ratio", c.ratio, "training fraction")->check(CLI::Range(0.0, 1.0));
  tr->add_option("--data", c.data_path, "encoded dataset CSV (from gen)");
  tr->add_option("--min-precision", c.min_precision);
  tr->add_option("--min-recall", c.min_recall);

  auto* ev = app.add_subcommand("eval", "score a saved model");
  common(ev);
  training(ev);
  ev->add_option("--model", c.model_path)->required();
  ev->add_option("--data", c.data_path, "encoded dataset CSV; default: fresh samples");
  ev->add_option("--min-precision", c.min_precision);
  ev->add_option("--min-recall", c.min_recall);

  auto* ge = app.add_subcommand("generalize", "score models on a large fresh sample");
  common(ge);
  training(ge);
  ge->add_option("--generalize-n", c.generalize_n)->check(CLI::PositiveNumber);
  ge->add_option("--model", c.model_path);
  ge->add_option("--min-precision", c.min_precision);
  ge->add_option("--min-recall", c.min_recall);

  auto* fz = app.add_subcommand("fuzz", "unfiltered vs filtered run per operator");
  common(fz);
  campaign(fz);
  fz->add_flag("--audit-discarded", c.audit, "list valid candidates the filter dropped");
  fz->add_option("--min-pass", c.min_pass);

  auto* cp = app.add_subcommand("compare", "cross-operator campaign with statistics");
  common(cp);
  campaign(cp);
  cp->add_flag("--audit-discarded", c.audit);
  cp->add_option("--min-pass", c.min_pass, "gate on the mean filtered pass rate");
  cp->add_option("--max-p", c.max_p, "gate on the Wilcoxon p-value");

  auto* bg = app.add_subcommand("bugs", "injected-bug retention");
  common(bg);
  campaign(bg);
  bg->add_option("--min-retention", c.min_retention);

  auto* xc = app.add_subcommand("xcheck", "compare stub oracles with a real-framework bridge");
  common(xc);
  xc->add_option("--bridge", c.bridge, "bridge command (default $LEARNFUZZ_BRIDGE)");
  xc->add_option("--n", c.campaign_n, "tuples per operator")->check(CLI::PositiveNumber);
  xc->add_option("--min-agreement", c.min_agreement);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    BuiltinOptions bo;
    bo.exec_cost_us = c.exec_cost_us;
    bo.reject_cost_us = c.reject_cost_us;
    const OperatorRegistry reg = OperatorRegistry::builtin(bo);
    if (*ops) return cmd_ops(reg, ops_json);
    if (c.ratio <= 0.0 || c.ratio >= 1.0) throw UsageError("--ratio must be in (0, 1)");
    if (*gen) return cmd_gen(reg, c);
    if (*tr) return cmd_train(reg, c);
    if (*ev) return cmd_eval(reg, c);
    if (*ge) return cmd_generalize(reg, c);
    if (*fz) return cmd_fuzz(reg, c);
    if (*cp) return cmd_compare(reg, c);
    if (*bg) return cmd_bugs(reg, c);
    if (*xc) return cmd_xcheck(reg, c);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitUsage;
}
