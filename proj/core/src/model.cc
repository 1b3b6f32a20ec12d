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

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>

#if defined(__x86_64__) || defined(__i386__)
#include <immintrin.h>
#endif

#include "learnfuzz/errors.h"
#include "learnfuzz/learners.h"

namespace learnfuzz {

namespace {

bool cpu_has_avx512() {
#if defined(__GNUC__) && (defined(__x86_64__) || defined(__i386__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx512f") && __builtin_cpu_supports("avx512vl") &&
         __builtin_cpu_supports("avx512dq") && __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

#if defined(__GNUC__) && (defined(__x86_64__) || defined(__i386__))
// Complete-tree walk, 16 rows at a time as two independent 8-lane chains.
// Same comparisons and the same acc += w * leaf as the scalar loop, so the
// result is bit-identical (contraction to FMA is disabled for this file).
// Returns the number of rows handled.
__attribute__((target("avx512f,avx512vl,avx512dq,avx2"))) size_t walk_complete_avx512(
    const double* T, const int32_t* F, const double* L, int depth, const double* X,
    size_t stride, size_t rows, double w, double* acc) {
  const __m256i one = _mm256_set1_epi32(1);
  const __m256i first_leaf = _mm256_set1_epi32((1 << depth) - 1);
  const __m256i lane = _mm256_setr_epi32(0, 1, 2, 3, 4, 5, 6, 7);
  const __m256i off_a = _mm256_mullo_epi32(lane, _mm256_set1_epi32(static_cast<int>(stride)));
  const __m256i off_b =
      _mm256_add_epi32(off_a, _mm256_set1_epi32(static_cast<int>(8 * stride)));
  const __m512d vw = _mm512_set1_pd(w);
  size_t r = 0;
  for (; r + 16 <= rows; r += 16) {
    const double* x = X + r * stride;
    __m256i ia = _mm256_setzero_si256(), ib = _mm256_setzero_si256();
    for (int d = 0; d < depth; ++d) {
      const __m256i fa = _mm256_i32gather_epi32(F, ia, 4);
      const __m256i fb = _mm256_i32gather_epi32(F, ib, 4);
      const __m512d xa = _mm512_i32gather_pd(_mm256_add_epi32(off_a, fa), x, 8);
      const __m512d xb = _mm512_i32gather_pd(_mm256_add_epi32(off_b, fb), x, 8);
      const __m512d ta = _mm512_i32gather_pd(ia, T, 8);
      const __m512d tb = _mm512_i32gather_pd(ib, T, 8);
      const __mmask8 ma = _mm512_cmp_pd_mask(xa, ta, _CMP_GT_OQ);
      const __mmask8 mb = _mm512_cmp_pd_mask(xb, tb, _CMP_GT_OQ);
      ia = _mm256_add_epi32(_mm256_add_epi32(ia, ia), one);
      ib = _mm256_add_epi32(_mm256_add_epi32(ib, ib), one);
      ia = _mm256_mask_add_epi32(ia, ma, ia, one);
      ib = _mm256_mask_add_epi32(ib, mb, ib, one);
    }
    const __m512d la = _mm512_i32gather_pd(_mm256_sub_epi32(ia, first_leaf), L, 8);
    const __m512d lb = _mm512_i32gather_pd(_mm256_sub_epi32(ib, first_leaf), L, 8);
    _mm512_storeu_pd(acc + r, _mm512_add_pd(_mm512_loadu_pd(acc + r), _mm512_mul_pd(vw, la)));
    _mm512_storeu_pd(acc + r + 8,
                     _mm512_add_pd(_mm512_loadu_pd(acc + r + 8), _mm512_mul_pd(vw, lb)));
  }
  return r;
}
#else
size_t walk_complete_avx512(const double*, const int32_t*, const double*, int, const double*,
                            size_t, size_t, double, double*) {
  return 0;
}
#endif

// Tree-parallel layout for forests of shallow trees over at most 32
// features. Trees are grouped 16 to a chunk and interleaved level by level;
// each split is one int32 code (feature | threshold rank << 5). A row is
// first reduced to per-feature threshold ranks, q_f = #{cuts_f < x_f}, so
// that x_f > cut_j exactly when q_f > j.
struct PackedForest {
  static constexpr int kLanes = 16;
  static constexpr int kFeatBits = 5;
  static constexpr int32_t kNever = (1 << 26) - 1;

  struct Chunk {
    int depth;
    int n_trees;
    size_t code_off;
    size_t leaf_off;
  };
  std::vector<std::vector<double>> cuts;  // per feature, sorted, unique
  std::vector<Chunk> chunks;
  std::vector<int32_t> codes;
  std::vector<double> leaves;

  void quantize(const double* x, int32_t* q) const {
    for (size_t f = 0; f < cuts.size(); ++f) {
      q[f] = static_cast<int32_t>(std::lower_bound(cuts[f].begin(), cuts[f].end(), x[f]) -
                                  cuts[f].begin());
    }
  }
};

#if defined(__GNUC__) && (defined(__x86_64__) || defined(__i386__))
// Eight rows per pass so that eight independent gather chains are in flight.
__attribute__((target("avx512f,avx512vl,avx512dq,avx2"))) void walk_packed_avx512(
    const PackedForest& P, const double* X, size_t stride, size_t rows, double w,
    double* acc) {
  constexpr int kR = 8;
  const __m512i lane = _mm512_setr_epi32(0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15);
  const __m512i one = _mm512_set1_epi32(1);
  const __m512i fmask = _mm512_set1_epi32((1 << PackedForest::kFeatBits) - 1);
  alignas(64) int32_t q[kR][32];
  alignas(64) double leaf[kR][16];
  for (size_t r0 = 0; r0 < rows; r0 += kR) {
    const int nr = static_cast<int>(std::min<size_t>(kR, rows - r0));
    __m512i q_lo[kR], q_hi[kR];
    double a[kR];
    for (int j = 0; j < kR; ++j) {
      std::fill_n(q[j], 32, 0);
      // Short groups repeat the last row; its results are dropped.
      const size_t r = r0 + std::min(j, nr - 1);
      P.quantize(X + r * stride, q[j]);
      q_lo[j] = _mm512_load_si512(q[j]);
      q_hi[j] = _mm512_load_si512(q[j] + 16);
      a[j] = acc[r];
    }
    for (const PackedForest::Chunk& c : P.chunks) {
      const int32_t* codes = P.codes.data() + c.code_off;
      __m512i pos[kR];
      for (int j = 0; j < kR; ++j) pos[j] = _mm512_setzero_si512();
      for (int d = 0; d < c.depth; ++d) {
#pragma GCC unroll 8
        for (int j = 0; j < kR; ++j) {
          const __m512i idx = _mm512_or_si512(_mm512_slli_epi32(pos[j], 4), lane);
          const __m512i code = _mm512_i32gather_epi32(idx, codes, 4);
          const __m512i feat = _mm512_and_si512(code, fmask);
          const __m512i tb = _mm512_srli_epi32(code, PackedForest::kFeatBits);
          const __m512i qv = _mm512_permutex2var_epi32(q_lo[j], feat, q_hi[j]);
          const __mmask16 right = _mm512_cmpgt_epi32_mask(qv, tb);
          pos[j] = _mm512_add_epi32(_mm512_add_epi32(pos[j], pos[j]), one);
          pos[j] = _mm512_mask_add_epi32(pos[j], right, pos[j], one);
        }
      }
      const __m512i first = _mm512_set1_epi32((1 << c.depth) - 1);
      const double* L = P.leaves.data() + c.leaf_off;
      for (int j = 0; j < kR; ++j) {
        const __m512i li =
            _mm512_or_si512(_mm512_slli_epi32(_mm512_sub_epi32(pos[j], first), 4), lane);
        _mm512_store_pd(leaf[j], _mm512_i32gather_pd(_mm512_castsi512_si256(li), L, 8));
        _mm512_store_pd(leaf[j] + 8, _mm512_i32gather_pd(_mm512_extracti64x4_epi64(li, 1), L, 8));
      }
      // Tree order matters for rounding.
      for (int j = 0; j < kR; ++j) {
        for (int k = 0; k < c.n_trees; ++k) a[j] += w * leaf[j][k];
      }
    }
    for (int j = 0; j < nr; ++j) acc[r0 + j] = a[j];
  }
}
#else
void walk_packed_avx512(const PackedForest&, const double*, size_t, size_t, double, double*) {}
#endif

}  // namespace

// All trees flattened into one node array.
//
// Trees of bounded depth are additionally laid out as complete binary
// trees (children of i at 2i+1, 2i+2; leaves expanded downwards through
// always-left pass-through nodes), which removes the child lookup from the
// batch walk.
class CompiledForest {
 public:
  explicit CompiledForest(const std::vector<Tree>& trees) {
    for (const Tree& t : trees) {
      roots_.push_back(static_cast<int32_t>(nodes_.size()));
      depth_.push_back(t.depth());
      add_linked(t);
      add_complete(t);
    }
    // Row offsets are gathered with 32-bit indices.
    simd_ok_ = cpu_has_avx512();
    if (simd_ok_) build_packed(trees);
  }

  // Whether the wide kernel may be used for blocks with this row stride.
  bool simd_usable(size_t stride) const {
    return simd_ok_ && stride * kBlock < (size_t{1} << 30);
  }

  size_t n_trees() const { return roots_.size(); }

  // Leaf value of tree t for one row, walking until a leaf.
  double leaf_value(size_t t, const double* x) const {
    const Node* n = &nodes_[roots_[t]];
    while (n->left >= 0) n = &nodes_[n->left + (x[n->feat] > n->thr)];
    return n->thr;
  }

  // acc[r] += w * leaf_t(row r) for every tree in order, over a block of
  // rows starting at X.
  void accumulate_block(const double* X, size_t stride, size_t rows, double w,
                        double* acc) const {
    if (packed_ && stride >= packed_->cuts.size()) {
      walk_packed_avx512(*packed_, X, stride, rows, w, acc);
      return;
    }
    for (size_t t = 0; t < roots_.size(); ++t) {
      if (complete_[t].depth >= 0) {
        accumulate_complete(complete_[t], X, stride, rows, w, acc);
      } else {
        accumulate_linked(t, X, stride, rows, w, acc);
      }
    }
  }

  static constexpr size_t kBlock = 256;

 private:
  static constexpr int kMaxCompleteDepth = 10;
  static constexpr size_t kLanes = 8;

  struct Complete {
    int depth = -1;  // -1: not laid out
    size_t split_off = 0;
    size_t leaf_off = 0;
  };

  void build_packed(const std::vector<Tree>& trees) {
    int max_feat = -1;
    for (const Tree& t : trees) {
      if (t.depth() > kMaxCompleteDepth) return;
      for (const TreeNode& n : t.nodes) {
        if (!n.is_leaf()) max_feat = std::max(max_feat, n.feature);
      }
    }
    if (trees.empty() || max_feat >= 32) return;
    auto P = std::make_unique<PackedForest>();
    P->cuts.resize(static_cast<size_t>(max_feat + 1));
    for (const Tree& t : trees) {
      for (const TreeNode& n : t.nodes) {
        if (!n.is_leaf()) P->cuts[n.feature].push_back(n.threshold);
      }
    }
    for (auto& c : P->cuts) {
      std::sort(c.begin(), c.end());
      c.erase(std::unique(c.begin(), c.end()), c.end());
      if (c.size() >= static_cast<size_t>(PackedForest::kNever)) return;
    }
    constexpr int kL = PackedForest::kLanes;
    for (size_t t0 = 0; t0 < trees.size(); t0 += kL) {
      PackedForest::Chunk ch{0, static_cast<int>(std::min<size_t>(kL, trees.size() - t0)),
                             P->codes.size(), P->leaves.size()};
      for (int k = 0; k < ch.n_trees; ++k) ch.depth = std::max(ch.depth, trees[t0 + k].depth());
      const size_t n_splits = (size_t{1} << ch.depth) - 1;
      P->codes.resize(P->codes.size() + n_splits * kL, PackedForest::kNever << PackedForest::kFeatBits);
      P->leaves.resize(P->leaves.size() + (n_splits + 1) * kL, 0.0);
      for (int k = 0; k < ch.n_trees; ++k) pack_tree(*P, trees[t0 + k], 0, 0, 0, ch, k);
      P->chunks.push_back(ch);
    }
    packed_ = std::move(P);
  }

  static void pack_tree(PackedForest& P, const Tree& t, int src, size_t pos, int lvl,
                        const PackedForest::Chunk& ch, int lane) {
    constexpr int kL = PackedForest::kLanes;
    const TreeNode& n = t.nodes[src];
    if (lvl == ch.depth) {
      P.leaves[ch.leaf_off + (pos - ((size_t{1} << ch.depth) - 1)) * kL + lane] = n.value;
      return;
    }
    if (n.is_leaf()) {  // pass-through, code stays "never go right"
      pack_tree(P, t, src, 2 * pos + 1, lvl + 1, ch, lane);
      return;
    }
    const auto& cuts = P.cuts[n.feature];
    const int32_t rank = static_cast<int32_t>(
        std::lower_bound(cuts.begin(), cuts.end(), n.threshold) - cuts.begin());
    P.codes[ch.code_off + pos * kL + lane] = n.feature | (rank << PackedForest::kFeatBits);
    pack_tree(P, t, n.left, 2 * pos + 1, lvl + 1, ch, lane);
    pack_tree(P, t, n.right, 2 * pos + 2, lvl + 1, ch, lane);
  }

  void add_complete(const Tree& t) {
    Complete c;
    const int d = t.depth();
    if (d > kMaxCompleteDepth) {
      complete_.push_back(c);
      return;
    }
    c.depth = d;
    c.split_off = cthr_.size();
    c.leaf_off = leaves_.size();
    const size_t n_splits = (size_t{1} << d) - 1;
    cthr_.resize(cthr_.size() + n_splits, std::numeric_limits<double>::infinity());
    cfeat_.resize(cfeat_.size() + n_splits, 0);
    leaves_.resize(leaves_.size() + (size_t{1} << d), 0.0);
    fill(t, 0, 0, 0, c);
    complete_.push_back(c);
  }

  // Places original node `src` at complete-tree position `pos` (level `lvl`).
  void fill(const Tree& t, int src, size_t pos, int lvl, const Complete& c) {
    const TreeNode& n = t.nodes[src];
    if (lvl == c.depth) {
      leaves_[c.leaf_off + (pos - ((size_t{1} << c.depth) - 1))] = n.value;
      return;
    }
    if (n.is_leaf()) {
      // Pass-through: +inf sends every row left; only that path matters.
      fill(t, src, 2 * pos + 1, lvl + 1, c);
      return;
    }
    cthr_[c.split_off + pos] = n.threshold;
    cfeat_[c.split_off + pos] = n.feature;
    fill(t, n.left, 2 * pos + 1, lvl + 1, c);
    fill(t, n.right, 2 * pos + 2, lvl + 1, c);
  }

  void accumulate_complete(const Complete& c, const double* X, size_t stride, size_t rows,
                           double w, double* acc) const {
    const double* T = cthr_.data() + c.split_off;
    const int32_t* F = cfeat_.data() + c.split_off;
    const double* L = leaves_.data() + c.leaf_off;
    size_t r = 0;
    if (simd_usable(stride)) r = walk_complete_avx512(T, F, L, c.depth, X, stride, rows, w, acc);
    const size_t first_leaf = (size_t{1} << c.depth) - 1;
    for (; r + kLanes <= rows; r += kLanes) {
      const double* x = X + r * stride;
      size_t i[kLanes] = {};
      for (int d = 0; d < c.depth; ++d) {
#pragma GCC unroll 8
        for (size_t k = 0; k < kLanes; ++k) i[k] = 2 * i[k] + 1 + (x[k * stride + F[i[k]]] > T[i[k]]);
      }
#pragma GCC unroll 8
      for (size_t k = 0; k < kLanes; ++k) acc[r + k] += w * L[i[k] - first_leaf];
    }
    for (; r < rows; ++r) {
      const double* x = X + r * stride;
      size_t i = 0;
      for (int d = 0; d < c.depth; ++d) i = 2 * i + 1 + (x[F[i]] > T[i]);
      acc[r] += w * L[i - first_leaf];
    }
  }

  void accumulate_linked(size_t t, const double* X, size_t stride, size_t rows, double w,
                         double* acc) const {
    const Node* N = nodes_.data();
    size_t r = 0;
    for (; r + kLanes <= rows; r += kLanes) {
      const double* x = X + r * stride;
      int32_t nd[kLanes];
      std::fill_n(nd, kLanes, roots_[t]);
      for (int d = 0; d < depth_[t]; ++d) {
#pragma GCC unroll 8
        for (size_t k = 0; k < kLanes; ++k) {
          const Node& n = N[nd[k]];
          nd[k] = n.left < 0 ? nd[k] : n.left + (x[k * stride + n.feat] > n.thr);
        }
      }
#pragma GCC unroll 8
      for (size_t k = 0; k < kLanes; ++k) acc[r + k] += w * N[nd[k]].thr;
    }
    for (; r < rows; ++r) acc[r] += w * leaf_value(t, X + r * stride);
  }

  // Siblings are stored adjacently: right child = left + 1. Leaves have
  // left = -1 and keep their value in thr.
  void add_linked(const Tree& t) {
    const size_t base = nodes_.size();
    nodes_.push_back({});
    std::vector<std::pair<int, size_t>> todo{{0, base}};
    while (!todo.empty()) {
      const auto [src, dst] = todo.back();
      todo.pop_back();
      const TreeNode& n = t.nodes[src];
      if (n.is_leaf()) {
        nodes_[dst] = Node{n.value, 0, -1};
        continue;
      }
      const int32_t l = static_cast<int32_t>(nodes_.size());
      nodes_.push_back({});
      nodes_.push_back({});
      nodes_[dst] = Node{n.threshold, n.feature, l};
      todo.push_back({n.right, static_cast<size_t>(l) + 1});
      todo.push_back({n.left, static_cast<size_t>(l)});
    }
  }

  struct Node {
    double thr;
    int32_t feat;
    int32_t left;
  };

  std::vector<Node> nodes_;
  std::vector<int32_t> roots_;
  std::vector<int> depth_;
  bool simd_ok_ = false;
  std::unique_ptr<PackedForest> packed_;

  std::vector<Complete> complete_;
  std::vector<double> cthr_;
  std::vector<int32_t> cfeat_;
  std::vector<double> leaves_;
};

TrainedModel::TrainedModel() : TrainedModel(Family::kMajorityBaseline, {}, 1.0, 0.0, 0.5, 0) {}

TrainedModel::TrainedModel(Family family, std::vector<Tree> trees, double tree_weight,
                           double bias, double threshold, size_t n_features,
                           uint64_t schema_hash)
    : family_(family),
      trees_(std::move(trees)),
      tree_weight_(tree_weight),
      bias_(bias),
      threshold_(threshold),
      n_features_(n_features),
      schema_hash_(schema_hash),
      compiled_(std::make_unique<CompiledForest>(trees_)) {}

TrainedModel::TrainedModel(const TrainedModel& o)
    : TrainedModel(o.family_, o.trees_, o.tree_weight_, o.bias_, o.threshold_,
                   o.n_features_, o.schema_hash_) {}

TrainedModel& TrainedModel::operator=(const TrainedModel& o) {
  if (this != &o) *this = TrainedModel(o);
  return *this;
}

TrainedModel::TrainedModel(TrainedModel&&) noexcept = default;
TrainedModel& TrainedModel::operator=(TrainedModel&&) noexcept = default;
TrainedModel::~TrainedModel() = default;

double TrainedModel::link(double raw) const {
  const double s = family_ == Family::kHistGbdt ? 1.0 / (1.0 + std::exp(-raw)) : raw;
  return std::clamp(s, 0.0, 1.0);
}

double TrainedModel::raw_score(std::span<const double> x, size_t tree_limit) const {
  if (x.size() != n_features_) throw PredictError("feature width mismatch");
  double acc = bias_;
  const size_t n = std::min(tree_limit, compiled_->n_trees());
  for (size_t t = 0; t < n; ++t) acc += tree_weight_ * compiled_->leaf_value(t, x.data());
  return acc;
}

double TrainedModel::score(std::span<const double> x) const {
  return link(raw_score(x, compiled_->n_trees()));
}

Prediction TrainedModel::predict_rows(const FeatureMatrix& X) const {
  if (X.cols() != n_features_) {
    throw PredictError("feature width mismatch: model has " + std::to_string(n_features_) +
                       ", input has " + std::to_string(X.cols()));
  }
  Prediction p;
  p.scores.resize(X.rows());
  p.labels.resize(X.rows());
  const size_t nt = compiled_->n_trees();
  for (size_t r = 0; r < X.rows(); ++r) {
    const double* x = X.row(r).data();
    double acc = bias_;
    for (size_t t = 0; t < nt; ++t) acc += tree_weight_ * compiled_->leaf_value(t, x);
    p.scores[r] = link(acc);
    p.labels[r] = p.scores[r] >= threshold_ ? 1 : 0;
  }
  return p;
}

Prediction TrainedModel::predict_batch(const FeatureMatrix& X) const {
  if (X.cols() != n_features_) {
    throw PredictError("feature width mismatch: model has " + std::to_string(n_features_) +
                       ", input has " + std::to_string(X.cols()));
  }
  // Tiny batches gain nothing from blocking.
  if (X.rows() < 8) return predict_rows(X);
  Prediction p;
  p.scores.assign(X.rows(), bias_);
  p.labels.resize(X.rows());
  const double* base = X.data().data();
  for (size_t start = 0; start < X.rows(); start += CompiledForest::kBlock) {
    const size_t rows = std::min(CompiledForest::kBlock, X.rows() - start);
    compiled_->accumulate_block(base + start * X.cols(), X.cols(), rows, tree_weight_,
                                p.scores.data() + start);
  }
  for (size_t r = 0; r < X.rows(); ++r) {
    p.scores[r] = link(p.scores[r]);
    p.labels[r] = p.scores[r] >= threshold_ ? 1 : 0;
  }
  return p;
}

}  // namespace learnfuzz
