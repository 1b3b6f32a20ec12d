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

// Confusion-matrix metrics and the two-sample statistics used to compare
// campaign arms. Undefined ratios are std::nullopt, never 0 or NaN.

#ifndef LEARNFUZZ_METRICS_H_
#define LEARNFUZZ_METRICS_H_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>

namespace learnfuzz {

// Positive class = valid (label 1).
struct ConfusionMatrix {
  size_t tp = 0;
  size_t fp = 0;
  size_t tn = 0;
  size_t fn = 0;
  size_t total() const { return tp + fp + tn + fn; }
  ConfusionMatrix& operator+=(const ConfusionMatrix& o);
  friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;
};

// Throws std::invalid_argument on a length mismatch.
ConfusionMatrix confusion(std::span<const int> predicted, std::span<const int> truth);

struct EvalReport {
  ConfusionMatrix confusion;
  std::optional<double> precision;
  std::optional<double> recall;
  std::optional<double> accuracy;
  std::optional<double> f1;
  size_t positives_in_eval = 0;  // tp + fn
};

EvalReport precision_recall(const ConfusionMatrix& cm);

// valid / total; nullopt when total == 0. Throws if valid > total.
std::optional<double> pass_rate(size_t valid_executed, size_t total_executed);

struct StatResult {
  double statistic = 0.0;
  double p_value = 1.0;
  std::string method;
};

// Standard normal CDF.
double normal_cdf(double x);

// Kolmogorov limiting distribution: P(K > lambda).
double kolmogorov_sf(double lambda);

// One-sample KS against N(mean, sd) with both estimated from the sample
// (sd with n - 1). The p-value is the asymptotic Kolmogorov tail at
// sqrt(n) * D; with estimated parameters it is anti-conservative.
// Requires n >= 5; throws DegenerateSampleError for zero variance.
StatResult ks_normal(std::span<const double> sample);

// Two-sided rank-sum test with midranks, tie-corrected variance and a
// continuity correction. The statistic is the signed z score of a's rank
// sum, so swapping a and b negates it.
StatResult wilcoxon_rank_sum(std::span<const double> a, std::span<const double> b);

// (mean(a) - mean(b)) / pooled sd. Each sample needs n >= 2; throws
// DegenerateSampleError when the pooled variance is zero.
double cohens_d(std::span<const double> a, std::span<const double> b);

// negligible / small / medium / large at |d| thresholds 0.2, 0.5, 0.8.
std::string_view effect_size_label(double d);

}  // namespace learnfuzz

#endif  // LEARNFUZZ_METRICS_H_
