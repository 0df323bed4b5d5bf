// Copyright 2026 The GraphReach Authors.
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

// Dense 2-D tensors and a tape for reverse-mode differentiation.
//
// Every primitive checks shapes and that its output is finite, records a
// vector-Jacobian product on the tape, and returns a handle to the result.
// Vectors are 1 x m tensors. There is no broadcasting beyond multiplication
// by a scalar; an outer product with a ones vector expands explicitly.

#ifndef GRAPHREACH_TENSOR_H_
#define GRAPHREACH_TENSOR_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <initializer_list>
#include <deque>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "graphreach/common.h"

namespace graphreach::ad {

class Tensor {
 public:
  Tensor() = default;
  Tensor(std::size_t rows, std::size_t cols, double fill = 0.0);
  Tensor(std::size_t rows, std::size_t cols, std::vector<double> values);
  // Row-major literal, e.g. Tensor::FromRows({{1, 2}, {3, 4}}).
  static Tensor FromRows(std::initializer_list<std::initializer_list<double>> rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return values_.size(); }

  double operator()(std::size_t r, std::size_t c) const { return values_[r * cols_ + c]; }
  double& operator()(std::size_t r, std::size_t c) { return values_[r * cols_ + c]; }

  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }
  std::span<const double> row(std::size_t r) const {
    return {values_.data() + r * cols_, cols_};
  }

  bool requires_grad() const { return requires_grad_; }
  // Enabling allocates a zeroed gradient buffer of the same shape.
  void set_requires_grad(bool on);
  std::span<double> grad() { return grad_; }
  std::span<const double> grad() const { return grad_; }
  void ZeroGrad();

  bool SameShape(const Tensor& o) const { return rows_ == o.rows_ && cols_ == o.cols_; }
  std::string ShapeString() const;

  friend bool operator==(const Tensor& a, const Tensor& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.values_ == b.values_;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> values_;
  std::vector<double> grad_;
  bool requires_grad_ = false;
};

class Tape;

// Handle to a tape node.
class Var {
 public:
  Var() = default;
  Var(Tape* tape, std::size_t id) : tape_(tape), id_(id) {}

  const Tensor& value() const;
  std::size_t rows() const { return value().rows(); }
  std::size_t cols() const { return value().cols(); }
  bool requires_grad() const;
  Tape& tape() const { return *tape_; }
  std::size_t id() const { return id_; }

 private:
  Tape* tape_ = nullptr;
  std::size_t id_ = 0;
};

// Append-only record of executed primitives. Confined to one thread.
class Tape {
 public:
  using BackwardFn = std::function<void(Tape&, std::size_t self)>;

  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  // Copies `value` onto the tape as a constant.
  Var Constant(Tensor value);
  // References an externally owned constant; it must outlive the tape.
  Var Input(const Tensor& value);
  // References a trainable tensor; Backward accumulates into param.grad().
  Var Param(Tensor& param);

  // Records an op result. `backward` reads grad(self) and adds into the
  // gradients of its inputs. Throws NumericError if `value` is not finite.
  Var Push(Tensor value, bool requires_grad, BackwardFn backward,
           const char* op_name);

  const Tensor& value(std::size_t id) const;
  bool requires_grad(std::size_t id) const { return nodes_[id].requires_grad; }
  // Gradient buffer of a node (zero-initialised on first access).
  std::span<double> grad(std::size_t id);

  // Seeds d(loss)/d(loss) = 1 for a 1x1 loss and runs every recorded VJP in
  // reverse order.
  void Backward(Var loss);
  void Clear() { nodes_.clear(); }
  std::size_t size() const { return nodes_.size(); }

 private:
  struct Node {
    Tensor owned;
    const Tensor* external = nullptr;
    Tensor* param = nullptr;
    std::vector<double> grad;
    bool requires_grad = false;
    BackwardFn backward;
  };
  std::deque<Node> nodes_;  // stable references across Push
};

inline const Tensor& Var::value() const { return tape_->value(id_); }
inline bool Var::requires_grad() const { return tape_->requires_grad(id_); }

// (m x k)(k x n).
Var MatMul(Var a, Var b);
Var Add(Var a, Var b);
Var Mul(Var a, Var b);  // elementwise
Var Scale(Var a, double factor);
Var Transpose(Var a);
Var ConcatCols(Var a, Var b);
Var StackRows(std::span<const Var> rows);
Var SelectRow(Var a, std::size_t row);
// Gathers rows by index (repeats allowed).
Var SelectRows(Var a, std::span<const NodeId> rows);
Var SliceRows(Var a, std::size_t begin, std::size_t end);
Var RowSum(Var a);   // n x m -> n x 1
Var RowMean(Var a);  // n x m -> n x 1
// Softmax / log-softmax of each row treated as a vector.
Var Softmax(Var a);
Var LogSoftmax(Var a);
Var LeakyRelu(Var a, double negative_slope);
Var Sigmoid(Var a);
// Inverted dropout: zeroes each entry with probability p and scales the
// survivors by 1/(1-p). Identity when !training or p == 0.
Var Dropout(Var a, double p, bool training, std::uint64_t seed);

// Constant tensor of ones, handy for explicit broadcasting via MatMul.
Var Ones(Tape& tape, std::size_t rows, std::size_t cols);
// Sum of all entries as a 1x1 tensor.
Var SumAll(Var a);

// Max over all parameter entries of |analytic - numeric| / max(1, |numeric|),
// where numeric is the central difference with step h. `f` must build a 1x1
// scalar on the tape it receives and be deterministic.
double GradCheck(const std::function<Var(Tape&)>& f, std::span<Tensor* const> params,
                 double h = 1e-5);

// Versioned binary checkpoint of named tensors: magic, version, count, then
// (name length, name, rows, cols, row-major little-endian doubles) per tensor.
void SaveTensors(const std::map<std::string, Tensor>& tensors,
                 const std::filesystem::path& path);
std::map<std::string, Tensor> LoadTensors(const std::filesystem::path& path);

}  // namespace graphreach::ad

#endif  // GRAPHREACH_TENSOR_H_
