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

// The built-in operator catalog. Check order inside each oracle is fixed:
// rank checks, then scalar/size checks, then relational checks. Messages
// follow the wording of the corresponding library errors.

#include <algorithm>
#include <string>

#include "learnfuzz/registry.h"
#include "learnfuzz/sampling.h"

namespace learnfuzz {
namespace {

using V = ValidationOutcome;

std::string s(int64_t x) { return std::to_string(x); }
std::string s(const Shape& x) { return to_string(x); }

// Scalar ranges narrower than the global [-100, 100] so that the valid
// region is not vanishingly small; both signs stay reachable.
constexpr IntRange kTopK{-5, 15};
constexpr IntRange kSplitNum{-1, 6};
constexpr IntRange kAxis{-4, 4};
constexpr IntRange kKernel{0, 6};
constexpr IntRange kStride{0, 4};
constexpr IntRange kPadding{-1, 3};

int64_t draw(Rng& rng, IntRange r) { return rng.uniform_int(r.lo, r.hi); }

// Emulates a solver that satisfies an equality constraint only sometimes.
int64_t copy_or_draw(Rng& rng, const Bounds& b, int64_t src, double p) {
  return rng.bernoulli(p) ? src : rng.uniform_int(0, b.max_dim);
}

Shape shape_with_rank_in(Rng& rng, const Bounds& b, int lo, int hi) {
  hi = std::min(hi, b.max_rank);
  return random_shape_of_rank(rng, b, static_cast<int>(rng.uniform_int(lo, hi)));
}

BugPredicate make_bug(std::string desc, Oracle oracle,
                      std::function<bool(const InputTuple&)> cond) {
  return {std::move(desc),
          [oracle = std::move(oracle), cond = std::move(cond)](const InputTuple& t) {
            return oracle(t).valid && cond(t);
          }};
}

OperatorSpec bmm() {
  OperatorSpec op;
  op.name = "bmm";
  op.signature = "bmm(input: tensor, mat2: tensor)";
  op.space = ParamSpace({ParamSpec::tensor("input"), ParamSpec::tensor("mat2")});
  op.constraints = {"input.dim() == 3", "mat2.dim() == 3",
                    "mat2.shape[0] == input.shape[0] and mat2.shape[1] == input.shape[2]"};
  op.oracle = [](const InputTuple& t) {
    const Shape& a = tensor_arg(t, 0);
    const Shape& b = tensor_arg(t, 1);
    if (a.rank() != 3) return V::Rejected("batch1 must be a 3D tensor");
    if (b.rank() != 3) return V::Rejected("batch2 must be a 3D tensor");
    if (b[0] != a[0] || b[1] != a[2]) {
      return V::Rejected("Expected size for first two dimensions of batch2 tensor to be: [" +
                         s(a[0]) + ", " + s(a[2]) + "] but got: [" + s(b[0]) + ", " +
                         s(b[1]) + "].");
    }
    return V::Valid();
  };
  op.bug = make_bug("empty batch (input.shape[0] == 0)", op.oracle,
                    [](const InputTuple& t) { return tensor_arg(t, 0)[0] == 0; });
  op.partial_note = "ranks enforced; batch and inner dims matched with p=0.5 each";
  op.partial = [](Rng& rng, const Bounds& b) {
    Shape a = random_shape_of_rank(rng, b, 3);
    Shape m({copy_or_draw(rng, b, a[0], 0.5), copy_or_draw(rng, b, a[2], 0.5),
             rng.uniform_int(0, b.max_dim)});
    return InputTuple{TensorV{a}, TensorV{m}};
  };
  return op;
}

OperatorSpec dot() {
  OperatorSpec op;
  op.name = "dot";
  op.signature = "dot(input: tensor, tensor: tensor)";
  op.space = ParamSpace({ParamSpec::tensor("input"), ParamSpec::tensor("tensor")});
  op.constraints = {"input.dim() == 1 and tensor.dim() == 1",
                    "input.numel() == tensor.numel()"};
  op.oracle = [](const InputTuple& t) {
    const Shape& a = tensor_arg(t, 0);
    const Shape& b = tensor_arg(t, 1);
    if (a.rank() != 1 || b.rank() != 1) {
      return V::Rejected("1D tensors expected, but got " + s(a.rank()) + "D and " +
                         s(b.rank()) + "D tensors");
    }
    if (numel(a) != numel(b)) {
      return V::Rejected("inconsistent tensor size, expected tensor [" + s(numel(a)) +
                         "] and src [" + s(numel(b)) +
                         "] to have the same number of elements, but got " +
                         s(numel(a)) + " and " + s(numel(b)) + " elements respectively");
    }
    return V::Valid();
  };
  op.bug = make_bug("empty vectors (numel == 0)", op.oracle,
                    [](const InputTuple& t) { return numel(tensor_arg(t, 0)) == 0; });
  op.partial_note = "ranks enforced; sizes matched with p=0.3";
  op.partial = [](Rng& rng, const Bounds& b) {
    const int64_t n = rng.uniform_int(0, b.max_dim);
    return InputTuple{TensorV{Shape({n})}, TensorV{Shape({copy_or_draw(rng, b, n, 0.3)})}};
  };
  return op;
}

OperatorSpec broadcast_to() {
  OperatorSpec op;
  op.name = "broadcast_to";
  op.signature = "broadcast_to(input: tensor, shape: int_list)";
  op.space = ParamSpace({ParamSpec::tensor("input"), ParamSpec::int_list("shape")});
  op.constraints = {"len(shape) >= input.dim()",
                    "trailing-aligned: input.shape[i] == shape[i] or input.shape[i] == 1"};
  op.oracle = [](const InputTuple& t) {
    const Shape& in = tensor_arg(t, 0);
    const Shape target(int_list_arg(t, 1));
    if (target.rank() < in.rank()) {
      return V::Rejected("the number of sizes provided (" + s(target.rank()) +
                         ") must be greater or equal to the number of dimensions in "
                         "the tensor (" + s(in.rank()) + ")");
    }
    for (int k = in.rank(); k >= 1; --k) {
      const int64_t x = in.from_end(k);
      const int64_t y = target.from_end(k);
      if (x != y && x != 1) {
        return V::Rejected("The expanded size of the tensor (" + s(y) +
                           ") must match the existing size (" + s(x) +
                           ") at non-singleton dimension " + s(target.rank() - k) +
                           ".  Target sizes: " + s(target) + ".  Tensor sizes: " + s(in));
      }
    }
    return V::Valid();
  };
  op.bug = make_bug("zero-length target dimension", op.oracle, [](const InputTuple& t) {
    const auto& v = int_list_arg(t, 1);
    return std::find(v.begin(), v.end(), 0) != v.end();
  });
  op.partial_note = "len(shape) >= input.dim() enforced; aligned dims copied with p=0.5";
  op.partial = [](Rng& rng, const Bounds& b) {
    Shape in = random_shape(rng, b);
    const int len = static_cast<int>(rng.uniform_int(in.rank(), b.max_rank));
    std::vector<int64_t> target(static_cast<size_t>(len));
    const int lead = len - in.rank();
    for (int i = 0; i < len; ++i) {
      target[i] = i < lead ? rng.uniform_int(0, b.max_dim)
                           : copy_or_draw(rng, b, in[i - lead], 0.5);
    }
    return InputTuple{TensorV{in}, IntListV{std::move(target)}};
  };
  return op;
}

OperatorSpec cartesian_prod() {
  OperatorSpec op;
  op.name = "cartesian_prod";
  op.signature = "cartesian_prod(*tensors: tensor_list)";
  op.space = ParamSpace({ParamSpec::tensor_list("tensors")});
  op.constraints = {"all t in tensors: t.dim() == 1"};
  op.oracle = [](const InputTuple& t) {
    for (const Shape& x : tensor_list_arg(t, 0)) {
      if (x.rank() != 1) return V::Rejected("Expect a 1D vector, but got shape " + s(x));
    }
    return V::Valid();
  };
  op.bug = make_bug("single input tensor", op.oracle, [](const InputTuple& t) {
    return tensor_list_arg(t, 0).size() == 1;
  });
  op.partial_note = "each tensor made 1-D with p=0.5";
  op.partial = [](Rng& rng, const Bounds& b) {
    TensorListV out;
    const int64_t arity = rng.uniform_int(1, b.max_arity);
    for (int64_t i = 0; i < arity; ++i) {
      out.items.push_back(rng.bernoulli(0.5) ? random_shape_of_rank(rng, b, 1)
                                             : random_shape(rng, b));
    }
    return InputTuple{std::move(out)};
  };
  return op;
}

OperatorSpec max_pool2d(bool half_kernel_padding) {
  OperatorSpec op;
  op.name = "max_pool2d";
  op.signature = "max_pool2d(input: tensor, kernel_size: int, stride: int, padding: int)";
  op.space = ParamSpace({ParamSpec::tensor("input"),
                         ParamSpec::integer("kernel_size", kKernel),
                         ParamSpec::integer("stride", kStride),
                         ParamSpec::integer("padding", kPadding)});
  op.constraints = {"input.dim() in {3, 4}", "kernel_size >= 1", "stride > 0",
                    "padding >= 0"};
  if (half_kernel_padding) op.constraints.push_back("padding <= kernel_size / 2");
  op.constraints.push_back("kernel_size <= min(H, W) + 2 * padding");
  op.oracle = [half_kernel_padding](const InputTuple& t) {
    const Shape& in = tensor_arg(t, 0);
    const int64_t k = int_arg(t, 1);
    const int64_t st = int_arg(t, 2);
    const int64_t p = int_arg(t, 3);
    if (in.rank() != 3 && in.rank() != 4) {
      return V::Rejected("Expected 3D or 4D (batch mode) tensor with optional 0 dim "
                         "batch size for input, but got: " + s(in));
    }
    if (k < 1) {
      return V::Rejected("kernel_size must be greater than zero, but got kH: " + s(k) +
                         " kW: " + s(k));
    }
    if (st <= 0) {
      return V::Rejected("stride should be greater than zero, but got dH: " + s(st) +
                         " dW: " + s(st));
    }
    if (p < 0) return V::Rejected("pad must be non-negative, but got pad: " + s(p));
    if (half_kernel_padding && p > k / 2) {
      return V::Rejected("pad should be at most half of effective kernel size, but got "
                         "pad=" + s(p) + ", kernel_size=" + s(k) + " and dilation=1");
    }
    const int64_t h = in.from_end(2);
    const int64_t w = in.from_end(1);
    if (k > std::min(h, w) + 2 * p) {
      return V::Rejected("Given input size: (" + s(in.from_end(3)) + "x" + s(h) + "x" +
                         s(w) + "). Calculated output size: (" + s(in.from_end(3)) + "x" +
                         s((h + 2 * p - k) / st + 1) + "x" + s((w + 2 * p - k) / st + 1) +
                         "). Output size is too small");
    }
    return V::Valid();
  };
  op.bug = make_bug("stride larger than kernel", op.oracle,
                    [](const InputTuple& t) { return int_arg(t, 2) > int_arg(t, 1); });
  op.partial_note = "rank in {3, 4}, kernel_size >= 1, stride > 0 enforced";
  op.partial = [](Rng& rng, const Bounds& b) {
    Shape in = shape_with_rank_in(rng, b, 3, 4);
    return InputTuple{TensorV{in}, IntV{draw(rng, {1, kKernel.hi})},
                      IntV{draw(rng, {1, kStride.hi})}, IntV{draw(rng, kPadding)}};
  };
  return op;
}

OperatorSpec matrix_inverse() {
  OperatorSpec op;
  op.name = "matrix_inverse";
  op.signature = "matrix_inverse(tensor: tensor)";
  op.space = ParamSpace({ParamSpec::tensor("tensor")});
  op.constraints = {"tensor.dim() >= 2", "tensor.shape == [..., M, M]"};
  op.oracle = [](const InputTuple& t) {
    const Shape& x = tensor_arg(t, 0);
    if (x.rank() < 2) {
      return V::Rejected("Input tensor 0 must be at least rank 2 but is rank " + s(x.rank()));
    }
    if (x.from_end(1) != x.from_end(2)) {
      return V::Rejected("Input matrices must be squares, got " + s(x.from_end(2)) +
                         " != " + s(x.from_end(1)));
    }
    return V::Valid();
  };
  op.bug = make_bug("trivial matrices (M <= 1)", op.oracle,
                    [](const InputTuple& t) { return tensor_arg(t, 0).from_end(1) <= 1; });
  op.partial_note = "rank >= 2 enforced; squareness with p=0.3";
  op.partial = [](Rng& rng, const Bounds& b) {
    Shape x = shape_with_rank_in(rng, b, 2, kMaxRank);
    std::vector<int64_t> d = x.dims();
    d.back() = copy_or_draw(rng, b, d[d.size() - 2], 0.3);
    return InputTuple{TensorV{Shape(std::move(d))}};
  };
  return op;
}

OperatorSpec top_k() {
  OperatorSpec op;
  op.name = "top_k";
  op.signature = "top_k(input: tensor, k: int)";
  op.space = ParamSpace({ParamSpec::tensor("input"), ParamSpec::integer("k", kTopK)});
  op.constraints = {"input.dim() >= 1", "k >= 0", "input.shape[-1] >= k"};
  op.oracle = [](const InputTuple& t) {
    const Shape& x = tensor_arg(t, 0);
    const int64_t k = int_arg(t, 1);
    if (x.rank() < 1) return V::Rejected("input must be at least 1-D, got shape " + s(x));
    if (k < 0) return V::Rejected("Need k >= 0, got " + s(k));
    if (x.from_end(1) < k) {
      return V::Rejected("input must have at least k columns. Had " + s(x.from_end(1)) +
                         ", needed " + s(k));
    }
    return V::Valid();
  };
  op.bug = make_bug("k equal to the last dimension", op.oracle, [](const InputTuple& t) {
    return int_arg(t, 1) == tensor_arg(t, 0).from_end(1);
  });
  op.partial_note = "rank >= 1 and k >= 0 enforced";
  op.partial = [](Rng& rng, const Bounds& b) {
    return InputTuple{TensorV{shape_with_rank_in(rng, b, 1, kMaxRank)},
                      IntV{draw(rng, {0, kTopK.hi})}};
  };
  return op;
}

OperatorSpec split() {
  OperatorSpec op;
  op.name = "split";
  op.signature = "split(value: tensor, num_splits: int, axis: int)";
  op.space = ParamSpace({ParamSpec::tensor("value"),
                         ParamSpec::integer("num_splits", kSplitNum),
                         ParamSpec::integer("axis", kAxis)});
  op.constraints = {"num_splits >= 1", "-value.dim() <= axis < value.dim()",
                    "value.shape[axis] % num_splits == 0"};
  op.oracle = [](const InputTuple& t) {
    const Shape& x = tensor_arg(t, 0);
    const int64_t n = int_arg(t, 1);
    const int64_t axis = int_arg(t, 2);
    if (n < 1) return V::Rejected("Number of ways to split should be > 0, but got " + s(n));
    if (axis < -x.rank() || axis >= x.rank()) {
      return V::Rejected("-" + s(x.rank()) + " <= split_dim < " + s(x.rank()) +
                         ", but got " + s(axis));
    }
    const int64_t a = axis < 0 ? axis + x.rank() : axis;
    if (x[a] % n != 0) {
      return V::Rejected("Number of ways to split should evenly divide the split "
                         "dimension, but got split_dim " + s(a) + " (size = " + s(x[a]) +
                         ") and num_split " + s(n));
    }
    return V::Valid();
  };
  op.bug = make_bug("splitting an empty dimension", op.oracle, [](const InputTuple& t) {
    const Shape& x = tensor_arg(t, 0);
    const int64_t axis = int_arg(t, 2);
    return x[axis < 0 ? axis + x.rank() : axis] == 0;
  });
  op.partial_note = "axis in range enforced";
  op.partial = [](Rng& rng, const Bounds& b) {
    Shape x = shape_with_rank_in(rng, b, 1, kMaxRank);
    const int64_t lo = std::max<int64_t>(-x.rank(), kAxis.lo);
    const int64_t hi = std::min<int64_t>(x.rank() - 1, kAxis.hi);
    return InputTuple{TensorV{x}, IntV{draw(rng, kSplitNum)},
                      IntV{draw(rng, {lo, hi})}};
  };
  return op;
}

OperatorSpec sigmoid_grad() {
  OperatorSpec op;
  op.name = "sigmoid_grad";
  op.signature = "sigmoid_grad(y: tensor, dy: tensor)";
  op.space = ParamSpace({ParamSpec::tensor("y"), ParamSpec::tensor("dy")});
  op.constraints = {"y.shape == dy.shape"};
  op.oracle = [](const InputTuple& t) {
    const Shape& y = tensor_arg(t, 0);
    const Shape& dy = tensor_arg(t, 1);
    if (y != dy) return V::Rejected("Incompatible shapes: " + s(y) + " vs. " + s(dy));
    return V::Valid();
  };
  op.bug = make_bug("empty gradient (numel == 0)", op.oracle,
                    [](const InputTuple& t) { return numel(tensor_arg(t, 0)) == 0; });
  op.partial_note = "equal ranks enforced; each dim copied with p=0.6";
  op.partial = [](Rng& rng, const Bounds& b) {
    Shape y = random_shape(rng, b);
    std::vector<int64_t> d(y.dims());
    for (auto& x : d) x = copy_or_draw(rng, b, x, 0.6);
    return InputTuple{TensorV{y}, TensorV{Shape(std::move(d))}};
  };
  return op;
}

OperatorSpec addr() {
  OperatorSpec op;
  op.name = "addr";
  op.signature = "addr(input: tensor, vec1: tensor, vec2: tensor)";
  op.space = ParamSpace({ParamSpec::tensor("input"), ParamSpec::tensor("vec1"),
                         ParamSpec::tensor("vec2")});
  op.constraints = {"vec1.dim() == 1", "vec2.dim() == 1",
                    "input broadcastable to [vec1.numel(), vec2.numel()]"};
  op.oracle = [](const InputTuple& t) {
    const Shape& in = tensor_arg(t, 0);
    const Shape& v1 = tensor_arg(t, 1);
    const Shape& v2 = tensor_arg(t, 2);
    if (v1.rank() != 1) {
      return V::Rejected("addr: Expected 1-D argument vec1, but got " + s(v1.rank()) + "-D");
    }
    if (v2.rank() != 1) {
      return V::Rejected("addr: Expected 1-D argument vec2, but got " + s(v2.rank()) + "-D");
    }
    const Shape target({v1[0], v2[0]});
    if (!expandable_to(in, target)) {
      return V::Rejected("The expanded size of the tensor must match the existing size "
                         "at non-singleton dimension.  Target sizes: " + s(target) +
                         ".  Tensor sizes: " + s(in));
    }
    return V::Valid();
  };
  op.partial_note = "vector ranks enforced; input set to [n, m] with p=0.25";
  op.partial = [](Rng& rng, const Bounds& b) {
    const int64_t n = rng.uniform_int(0, b.max_dim);
    const int64_t m = rng.uniform_int(0, b.max_dim);
    Shape in = rng.bernoulli(0.25) ? Shape({n, m}) : random_shape(rng, b);
    return InputTuple{TensorV{in}, TensorV{Shape({n})}, TensorV{Shape({m})}};
  };
  return op;
}

OperatorSpec pairwise_distance() {
  OperatorSpec op;
  op.name = "pairwise_distance";
  op.signature = "pairwise_distance(x1: tensor, x2: tensor)";
  op.space = ParamSpace({ParamSpec::tensor("x1"), ParamSpec::tensor("x2")});
  op.constraints = {"x1.dim() in {1, 2} and x2.dim() in {1, 2}",
                    "x1.shape[-1] == x2.shape[-1]", "x1, x2 broadcastable"};
  op.oracle = [](const InputTuple& t) {
    const Shape& a = tensor_arg(t, 0);
    const Shape& b = tensor_arg(t, 1);
    auto ok_rank = [](int r) { return r == 1 || r == 2; };
    if (!ok_rank(a.rank()) || !ok_rank(b.rank())) {
      return V::Rejected("pairwise_distance expects 1D or 2D inputs, but got x1 " +
                         s(a.rank()) + "D and x2 " + s(b.rank()) + "D");
    }
    if (a.from_end(1) != b.from_end(1)) {
      return V::Rejected("x1 and x2 must have the same last dimension, got " +
                         s(a.from_end(1)) + " and " + s(b.from_end(1)));
    }
    if (!broadcastable(a, b)) {
      return V::Rejected("The size of tensor a (" + s(a[0]) +
                         ") must match the size of tensor b (" + s(b[0]) +
                         ") at non-singleton dimension 0");
    }
    return V::Valid();
  };
  op.bug = make_bug("zero-length feature dimension", op.oracle,
                    [](const InputTuple& t) { return tensor_arg(t, 0).from_end(1) == 0; });
  op.partial_note = "ranks in {1, 2} enforced; last dim copied with p=0.4";
  op.partial = [](Rng& rng, const Bounds& b) {
    Shape a = shape_with_rank_in(rng, b, 1, 2);
    Shape c = shape_with_rank_in(rng, b, 1, 2);
    std::vector<int64_t> d(c.dims());
    d.back() = copy_or_draw(rng, b, a.from_end(1), 0.4);
    return InputTuple{TensorV{a}, TensorV{Shape(std::move(d))}};
  };
  return op;
}

OperatorSpec index_select() {
  OperatorSpec op;
  op.name = "index_select";
  op.signature = "index_select(input: tensor, dim: int, index: tensor)";
  op.space = ParamSpace({ParamSpec::tensor("input"), ParamSpec::integer("dim", kAxis),
                         ParamSpec::tensor("index")});
  op.constraints = {"input.dim() >= 1", "-input.dim() <= dim < input.dim()",
                    "index.dim() <= 1"};
  op.oracle = [](const InputTuple& t) {
    const Shape& in = tensor_arg(t, 0);
    const int64_t dim = int_arg(t, 1);
    const Shape& idx = tensor_arg(t, 2);
    if (in.rank() < 1) {
      return V::Rejected("index_select(): Expected input to have at least one dimension");
    }
    if (dim < -in.rank() || dim >= in.rank()) {
      return V::Rejected("Dimension out of range (expected to be in range of [" +
                         s(-in.rank()) + ", " + s(in.rank() - 1) + "], but got " + s(dim) +
                         ")");
    }
    if (idx.rank() > 1) {
      return V::Rejected("index_select(): Index is supposed to be a vector");
    }
    return V::Valid();
  };
  op.bug = make_bug("empty index", op.oracle,
                    [](const InputTuple& t) { return numel(tensor_arg(t, 2)) == 0; });
  op.partial_note = "input.dim() >= 1 and dim in range enforced";
  op.partial = [](Rng& rng, const Bounds& b) {
    Shape in = shape_with_rank_in(rng, b, 1, kMaxRank);
    const int64_t lo = std::max<int64_t>(-in.rank(), kAxis.lo);
    const int64_t hi = std::min<int64_t>(in.rank() - 1, kAxis.hi);
    return InputTuple{TensorV{in}, IntV{draw(rng, {lo, hi})},
                      TensorV{random_shape(rng, b)}};
  };
  return op;
}

}  // namespace

OperatorRegistry OperatorRegistry::builtin(const BuiltinOptions& opts) {
  OperatorRegistry reg;
  for (auto& op : {bmm(), dot(), broadcast_to(), cartesian_prod(),
                   max_pool2d(opts.max_pool2d_half_kernel_padding), matrix_inverse(),
                   top_k(), split(), sigmoid_grad(), addr(), pairwise_distance(),
                   index_select()}) {
    reg.add(op);
  }
  reg.set_costs(opts.exec_cost_us, opts.reject_cost_us);
  return reg;
}

}  // namespace learnfuzz
