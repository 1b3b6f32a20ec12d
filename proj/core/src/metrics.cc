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

#include "learnfuzz/metrics.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "learnfuzz/errors.h"

namespace learnfuzz {

ConfusionMatrix& ConfusionMatrix::operator+=(const ConfusionMatrix& o) {
  tp += o.tp;
  fp += o.fp;
  tn += o.tn;
  fn += o.fn;
  return *this;
}

ConfusionMatrix confusion(std::span<const int> predicted, std::span<const int> truth) {
  if (predicted.size() != truth.size()) {
    throw std::invalid_argument("confusion: length mismatch");
  }
  ConfusionMatrix cm;
  for (size_t i = 0; i < predicted.size(); ++i) {
    const bool p = predicted[i] != 0;
    const bool t = truth[i] != 0;
    if (p && t) ++cm.tp;
    else if (p) ++cm.fp;
    else if (t) ++cm.fn;
    else ++cm.tn;
  }
  return cm;
}

namespace {

std::optional<double> ratio(size_t num, size_t den) {
  if (den == 0) return std::nullopt;
  return static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

EvalReport precision_recall(const ConfusionMatrix& cm) {
  EvalReport r;
  r.confusion = cm;
  r.precision = ratio(cm.tp, cm.tp + cm.fp);
  r.recall = ratio(cm.tp, cm.tp + cm.fn);
  r.accuracy = ratio(cm.tp + cm.tn, cm.total());
  r.f1 = ratio(2 * cm.tp, 2 * cm.tp + cm.fp + cm.fn);
  r.positives_in_eval = cm.tp + cm.fn;
  return r;
}

std::optional<double> pass_rate(size_t valid_executed, size_t total_executed) {
  if (valid_executed > total_executed) {
    throw std::invalid_argument("pass_rate: valid exceeds total");
  }
  return ratio(valid_executed, total_executed);
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double kolmogorov_sf(double lambda) {
  if (lambda <= 0.0) return 1.0;
  const double pi = std::numbers::pi;
  if (lambda < 1.0) {
    // Jacobi-theta form converges fast for small lambda.
    double sum = 0.0;
    for (int k = 1; k <= 100; ++k) {
      const double m = 2.0 * k - 1.0;
      const double term = std::exp(-m * m * pi * pi / (8.0 * lambda * lambda));
      sum += term;
      if (term < 1e-17) break;
    }
    return std::clamp(1.0 - std::sqrt(2.0 * pi) / lambda * sum, 0.0, 1.0);
  }
  double sum = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    sum += (k % 2 ? 1.0 : -1.0) * term;
    if (term < 1e-17) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

StatResult ks_normal(std::span<const double> sample) {
  const size_t n = sample.size();
  if (n < 5) throw std::invalid_argument("ks_normal: need at least 5 observations");
  const double mean = std::accumulate(sample.begin(), sample.end(), 0.0) / n;
  double ss = 0.0;
  for (double x : sample) ss += (x - mean) * (x - mean);
  const double sd = std::sqrt(ss / static_cast<double>(n - 1));
  if (!(sd > 0.0)) throw DegenerateSampleError("ks_normal: zero variance");

  std::vector<double> xs(sample.begin(), sample.end());
  std::sort(xs.begin(), xs.end());
  double d = 0.0;
  for (size_t i = 0; i < n; ++i) {
    const double f = normal_cdf((xs[i] - mean) / sd);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  return {d, kolmogorov_sf(std::sqrt(static_cast<double>(n)) * d), "ks_normal"};
}

StatResult wilcoxon_rank_sum(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) {
    throw std::invalid_argument("wilcoxon_rank_sum: empty sample");
  }
  const size_t n1 = a.size();
  const size_t n2 = b.size();
  const size_t n = n1 + n2;
  std::vector<std::pair<double, int>> all;
  all.reserve(n);
  for (double x : a) all.emplace_back(x, 0);
  for (double x : b) all.emplace_back(x, 1);
  std::sort(all.begin(), all.end(),
            [](const auto& p, const auto& q) { return p.first < q.first; });

  double r1 = 0.0;
  double tie_term = 0.0;
  for (size_t i = 0; i < n;) {
    size_t j = i;
    while (j < n && all[j].first == all[i].first) ++j;
    const double midrank = 0.5 * static_cast<double>(i + 1 + j);
    for (size_t k = i; k < j; ++k) {
      if (all[k].second == 0) r1 += midrank;
    }
    const double t = static_cast<double>(j - i);
    tie_term += t * t * t - t;
    i = j;
  }
  const double dn = static_cast<double>(n);
  const double mu = n1 * (dn + 1.0) / 2.0;
  const double var =
      static_cast<double>(n1) * n2 / 12.0 * ((dn + 1.0) - tie_term / (dn * (dn - 1.0)));
  StatResult r;
  r.method = "wilcoxon_rank_sum";
  if (!(var > 0.0)) {
    r.statistic = 0.0;
    r.p_value = 1.0;
    return r;
  }
  const double diff = r1 - mu;
  const double z = std::max(0.0, std::abs(diff) - 0.5) / std::sqrt(var);
  r.statistic = diff < 0 ? -z : z;
  r.p_value = std::min(1.0, std::erfc(z / std::numbers::sqrt2));
  return r;
}

double cohens_d(std::span<const double> a, std::span<const double> b) {
  if (a.size() < 2 || b.size() < 2) {
    throw std::invalid_argument("cohens_d: each sample needs n >= 2");
  }
  auto mean_var = [](std::span<const double> x) {
    const double m = std::accumulate(x.begin(), x.end(), 0.0) / x.size();
    double ss = 0.0;
    for (double v : x) ss += (v - m) * (v - m);
    return std::pair{m, ss / static_cast<double>(x.size() - 1)};
  };
  const auto [ma, va] = mean_var(a);
  const auto [mb, vb] = mean_var(b);
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  const double pooled = ((na - 1.0) * va + (nb - 1.0) * vb) / (na + nb - 2.0);
  if (!(pooled > 0.0)) throw DegenerateSampleError("cohens_d: zero pooled variance");
  return (ma - mb) / std::sqrt(pooled);
}

std::string_view effect_size_label(double d) {
  const double x = std::abs(d);
  if (x < 0.2) return "negligible";
  if (x < 0.5) return "small";
  if (x < 0.8) return "medium";
  return "large";
}

}  // namespace learnfuzz
