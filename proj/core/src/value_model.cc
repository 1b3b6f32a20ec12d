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

#include <algorithm>
#include <charconv>
#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>

namespace learnfuzz {

void Bounds::check() const {
  if (max_rank < 0 || max_rank > kMaxRank) {
    throw std::invalid_argument("max_rank must be in [0, 6]");
  }
  if (max_arity < 1 || max_arity > kMaxArity) {
    throw std::invalid_argument("max_arity must be in [1, 4]");
  }
  if (max_dim < 0) throw std::invalid_argument("max_dim must be >= 0");
  if (int_min > int_max) throw std::invalid_argument("empty int range");
  if (!(float_min <= float_max)) throw std::invalid_argument("empty float range");
  if (special_float_prob < 0.0 || special_float_prob > 1.0) {
    throw std::invalid_argument("special_float_prob must be in [0, 1]");
  }
}

Kind kind_of(const Value& v) {
  return std::visit(
      [](const auto& x) -> Kind {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, TensorV>) return Kind::kTensor;
        if constexpr (std::is_same_v<T, TensorListV>) return Kind::kTensorList;
        if constexpr (std::is_same_v<T, IntListV>) return Kind::kIntList;
        if constexpr (std::is_same_v<T, IntV>) return Kind::kInt;
        if constexpr (std::is_same_v<T, FloatV>) return Kind::kFloat;
        if constexpr (std::is_same_v<T, BoolV>) return Kind::kBool;
        if constexpr (std::is_same_v<T, StrV>) return Kind::kStr;
      },
      v);
}

std::string_view kind_name(Kind k) {
  switch (k) {
    case Kind::kTensor: return "tensor";
    case Kind::kTensorList: return "tensor_list";
    case Kind::kIntList: return "int_list";
    case Kind::kInt: return "int";
    case Kind::kFloat: return "float";
    case Kind::kBool: return "bool";
    case Kind::kStr: return "str";
  }
  return "?";
}

std::optional<Kind> parse_kind(std::string_view name) {
  for (Kind k : {Kind::kTensor, Kind::kTensorList, Kind::kIntList, Kind::kInt,
                 Kind::kFloat, Kind::kBool, Kind::kStr}) {
    if (kind_name(k) == name) return k;
  }
  return std::nullopt;
}

namespace {

std::string join_ints(const std::vector<int64_t>& xs) {
  std::string out = "[";
  for (size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ", ";
    out += std::to_string(xs[i]);
  }
  out += "]";
  return out;
}

std::string format_double(double d) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), d);
  return std::string(buf, res.ptr);
}

}  // namespace

std::string to_string(const Shape& s) { return join_ints(s.dims()); }

std::string to_string(const Value& v) {
  return std::visit(
      [](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, TensorV>) {
          return "Tensor" + to_string(x.shape);
        } else if constexpr (std::is_same_v<T, TensorListV>) {
          std::string out = "(";
          for (size_t i = 0; i < x.items.size(); ++i) {
            if (i) out += ", ";
            out += "Tensor" + to_string(x.items[i]);
          }
          return out + ")";
        } else if constexpr (std::is_same_v<T, IntListV>) {
          return join_ints(x.values);
        } else if constexpr (std::is_same_v<T, IntV>) {
          return std::to_string(x.value);
        } else if constexpr (std::is_same_v<T, FloatV>) {
          return format_double(x.value);
        } else if constexpr (std::is_same_v<T, BoolV>) {
          return x.value ? "True" : "False";
        } else {
          return "'" + x.value + "'";
        }
      },
      v);
}

std::string to_string(const InputTuple& t) {
  std::string out = "(";
  for (size_t i = 0; i < t.size(); ++i) {
    if (i) out += ", ";
    out += to_string(t[i]);
  }
  return out + ")";
}

ParamSpec ParamSpec::tensor(std::string name) {
  return {std::move(name), Kind::kTensor, {}, std::nullopt};
}
ParamSpec ParamSpec::tensor_list(std::string name) {
  return {std::move(name), Kind::kTensorList, {}, std::nullopt};
}
ParamSpec ParamSpec::int_list(std::string name) {
  return {std::move(name), Kind::kIntList, {}, std::nullopt};
}
ParamSpec ParamSpec::integer(std::string name, std::optional<IntRange> bounds) {
  return {std::move(name), Kind::kInt, {}, bounds};
}
ParamSpec ParamSpec::floating(std::string name) {
  return {std::move(name), Kind::kFloat, {}, std::nullopt};
}
ParamSpec ParamSpec::boolean(std::string name) {
  return {std::move(name), Kind::kBool, {}, std::nullopt};
}
ParamSpec ParamSpec::string(std::string name, std::vector<std::string> choices) {
  return {std::move(name), Kind::kStr, std::move(choices), std::nullopt};
}

IntRange ParamSpec::int_range(const Bounds& b) const {
  if (int_bounds) return *int_bounds;
  return {b.int_min, b.int_max};
}

ParamSpace::ParamSpace(std::vector<ParamSpec> params) : params_(std::move(params)) {
  std::set<std::string> seen;
  for (const auto& p : params_) {
    if (p.name.empty()) throw std::invalid_argument("parameter name is empty");
    if (!seen.insert(p.name).second) {
      throw std::invalid_argument("duplicate parameter name: " + p.name);
    }
    if (p.kind == Kind::kStr && p.str_choices.empty()) {
      throw std::invalid_argument("str parameter needs choices: " + p.name);
    }
    if (p.kind != Kind::kStr && !p.str_choices.empty()) {
      throw std::invalid_argument("choices given for non-str parameter: " + p.name);
    }
    if (p.int_bounds) {
      if (p.kind != Kind::kInt) {
        throw std::invalid_argument("int_bounds on non-int parameter: " + p.name);
      }
      if (p.int_bounds->lo > p.int_bounds->hi) {
        throw std::invalid_argument("empty int_bounds: " + p.name);
      }
    }
  }
}

std::optional<size_t> ParamSpace::index_of(std::string_view name) const {
  for (size_t i = 0; i < params_.size(); ++i) {
    if (params_[i].name == name) return i;
  }
  return std::nullopt;
}

std::string ConformanceReport::summary() const {
  if (conformant) return "conformant";
  std::string out;
  for (const auto& f : fields) {
    if (f.kind_ok && f.bounds_ok) continue;
    if (!out.empty()) out += "; ";
    out += f.param + ": " + f.message;
  }
  if (!arity_ok) {
    if (!out.empty()) out += "; ";
    out += "argument count mismatch";
  }
  return out;
}

namespace {

bool shape_in_bounds(const Shape& s, const Bounds& b, std::string* why) {
  if (s.rank() > b.max_rank) {
    *why = "rank " + std::to_string(s.rank()) + " exceeds " +
           std::to_string(b.max_rank);
    return false;
  }
  for (int64_t d : s.dims()) {
    if (d < 0 || d > b.max_dim) {
      *why = "dimension " + std::to_string(d) + " outside [0, " +
             std::to_string(b.max_dim) + "]";
      return false;
    }
  }
  return true;
}

void check_bounds(const ParamSpec& spec, const Value& v, const Bounds& b,
                  FieldReport& out) {
  std::string why;
  switch (spec.kind) {
    case Kind::kTensor:
      out.bounds_ok = shape_in_bounds(std::get<TensorV>(v).shape, b, &why);
      break;
    case Kind::kTensorList: {
      const auto& items = std::get<TensorListV>(v).items;
      if (items.empty() || static_cast<int>(items.size()) > b.max_arity) {
        out.bounds_ok = false;
        why = "arity " + std::to_string(items.size()) + " outside [1, " +
              std::to_string(b.max_arity) + "]";
        break;
      }
      for (const auto& s : items) {
        if (!shape_in_bounds(s, b, &why)) {
          out.bounds_ok = false;
          break;
        }
      }
      break;
    }
    case Kind::kIntList:
      out.bounds_ok =
          shape_in_bounds(Shape(std::get<IntListV>(v).values), b, &why);
      break;
    case Kind::kInt: {
      const IntRange r = spec.int_range(b);
      const int64_t x = std::get<IntV>(v).value;
      if (x < r.lo || x > r.hi) {
        out.bounds_ok = false;
        why = std::to_string(x) + " outside [" + std::to_string(r.lo) + ", " +
              std::to_string(r.hi) + "]";
      }
      break;
    }
    case Kind::kFloat: {
      const double x = std::get<FloatV>(v).value;
      if (!std::isfinite(x)) {
        out.bounds_ok = b.allow_nonfinite_floats;
        if (!out.bounds_ok) why = "non-finite float";
      } else if (x < b.float_min || x > b.float_max) {
        out.bounds_ok = false;
        why = "float outside generator range";
      }
      break;
    }
    case Kind::kBool:
      break;
    case Kind::kStr: {
      const auto& s = std::get<StrV>(v).value;
      if (std::find(spec.str_choices.begin(), spec.str_choices.end(), s) ==
          spec.str_choices.end()) {
        out.bounds_ok = false;
        why = "'" + s + "' is not in the enumeration";
      }
      break;
    }
  }
  if (!out.bounds_ok) out.message = why;
}

}  // namespace

ConformanceReport conforms(const ParamSpace& space, const InputTuple& tuple,
                           const Bounds& bounds) {
  ConformanceReport report;
  report.arity_ok = tuple.size() == space.size();
  const size_t n = std::min(tuple.size(), space.size());
  for (size_t i = 0; i < space.size(); ++i) {
    FieldReport f;
    f.param = space[i].name;
    if (i >= n) {
      f.kind_ok = false;
      f.bounds_ok = false;
      f.message = "missing argument";
    } else if (kind_of(tuple[i]) != space[i].kind) {
      f.kind_ok = false;
      f.bounds_ok = false;
      f.message = "kind mismatch: expected " +
                  std::string(kind_name(space[i].kind)) + ", got " +
                  std::string(kind_name(kind_of(tuple[i])));
    } else {
      check_bounds(space[i], tuple[i], bounds, f);
    }
    report.kinds_ok = report.kinds_ok && f.kind_ok;
    report.conformant = report.conformant && f.kind_ok && f.bounds_ok;
    report.fields.push_back(std::move(f));
  }
  report.kinds_ok = report.kinds_ok && report.arity_ok;
  report.conformant = report.conformant && report.arity_ok;
  return report;
}

int64_t numel(const Shape& s) {
  int64_t n = 1;
  for (int64_t d : s.dims()) n *= d;
  return n;
}

bool broadcastable(const Shape& a, const Shape& b) {
  const int n = std::min(a.rank(), b.rank());
  for (int k = 1; k <= n; ++k) {
    const int64_t x = a.from_end(k);
    const int64_t y = b.from_end(k);
    if (x != y && x != 1 && y != 1) return false;
  }
  return true;
}

bool expandable_to(const Shape& from, const Shape& to) {
  if (from.rank() > to.rank()) return false;
  for (int k = 1; k <= from.rank(); ++k) {
    const int64_t x = from.from_end(k);
    if (x != to.from_end(k) && x != 1) return false;
  }
  return true;
}

}  // namespace learnfuzz
