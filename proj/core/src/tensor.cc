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

#include "graphreach/tensor.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <random>

namespace graphreach::ad {
namespace {

void RequireSameShape(const Tensor& a, const Tensor& b, const char* op) {
  if (!a.SameShape(b)) {
    throw NumericError(std::string(op) + ": shape mismatch " + a.ShapeString() +
                       " vs " + b.ShapeString());
  }
}

bool AnyRequiresGrad(std::initializer_list<Var> vars) {
  for (const auto& v : vars) {
    if (v.requires_grad()) return true;
  }
  return false;
}

// out += a * b, a: m x k, b: k x n. Zero entries of `a` are skipped, which
// makes one-hot inputs cheap.
void GemmAccumulate(const double* a, const double* b, double* out, std::size_t m,
                    std::size_t k, std::size_t n) {
  for (std::size_t i = 0; i < m; ++i) {
    double* orow = out + i * n;
    for (std::size_t p = 0; p < k; ++p) {
      const double av = a[i * k + p];
      if (av == 0.0) continue;
      const double* brow = b + p * n;
      for (std::size_t j = 0; j < n; ++j) orow[j] += av * brow[j];
    }
  }
}

constexpr char kCheckpointMagic[8] = {'G', 'R', 'T', 'E', 'N', 'S', 'O', 'R'};
constexpr std::uint32_t kCheckpointVersion = 1;

}  // namespace

Tensor::Tensor(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), values_(rows * cols, fill) {}

Tensor::Tensor(std::size_t rows, std::size_t cols, std::vector<double> values)
    : rows_(rows), cols_(cols), values_(std::move(values)) {
  if (values_.size() != rows * cols) {
    throw NumericError("tensor of shape " + ShapeString() + " given " +
                       std::to_string(values_.size()) + " values");
  }
}

Tensor Tensor::FromRows(std::initializer_list<std::initializer_list<double>> rows) {
  const std::size_t r = rows.size();
  const std::size_t c = r == 0 ? 0 : rows.begin()->size();
  std::vector<double> v;
  v.reserve(r * c);
  for (const auto& row : rows) {
    if (row.size() != c) throw NumericError("ragged tensor literal");
    v.insert(v.end(), row.begin(), row.end());
  }
  return Tensor(r, c, std::move(v));
}

void Tensor::set_requires_grad(bool on) {
  requires_grad_ = on;
  if (on) {
    grad_.assign(values_.size(), 0.0);
  } else {
    grad_.clear();
  }
}

void Tensor::ZeroGrad() { std::fill(grad_.begin(), grad_.end(), 0.0); }

std::string Tensor::ShapeString() const {
  return "[" + std::to_string(rows_) + "x" + std::to_string(cols_) + "]";
}

Var Tape::Constant(Tensor value) { return Push(std::move(value), false, nullptr, "constant"); }

Var Tape::Input(const Tensor& value) {
  for (double x : value.values()) {
    if (!std::isfinite(x)) throw NumericError("input: non-finite value");
  }
  Node node;
  node.external = &value;
  nodes_.push_back(std::move(node));
  return Var(this, nodes_.size() - 1);
}

Var Tape::Param(Tensor& param) {
  if (!param.requires_grad()) param.set_requires_grad(true);
  for (double x : param.values()) {
    if (!std::isfinite(x)) throw NumericError("parameter: non-finite value");
  }
  Node node;
  node.external = &param;
  node.param = &param;
  node.requires_grad = true;
  nodes_.push_back(std::move(node));
  return Var(this, nodes_.size() - 1);
}

Var Tape::Push(Tensor value, bool requires_grad, BackwardFn backward,
               const char* op_name) {
  for (double x : value.values()) {
    if (!std::isfinite(x)) {
      throw NumericError(std::string(op_name) + ": non-finite value");
    }
  }
  Node node;
  node.owned = std::move(value);
  node.requires_grad = requires_grad && backward != nullptr;
  if (node.requires_grad) node.backward = std::move(backward);
  nodes_.push_back(std::move(node));
  return Var(this, nodes_.size() - 1);
}

const Tensor& Tape::value(std::size_t id) const {
  const Node& n = nodes_[id];
  return n.external ? *n.external : n.owned;
}

std::span<double> Tape::grad(std::size_t id) {
  Node& n = nodes_[id];
  if (n.param) return n.param->grad();
  const std::size_t size = value(id).size();
  if (n.grad.size() != size) n.grad.assign(size, 0.0);
  return n.grad;
}

void Tape::Backward(Var loss) {
  if (&loss.tape() != this) throw NumericError("backward: loss from another tape");
  const Tensor& v = value(loss.id());
  if (v.size() != 1) throw NumericError("backward: loss must be 1x1, got " + v.ShapeString());
  if (!requires_grad(loss.id())) return;
  grad(loss.id())[0] += 1.0;
  for (std::size_t i = loss.id() + 1; i-- > 0;) {
    Node& n = nodes_[i];
    if (n.requires_grad && n.backward && !n.grad.empty()) n.backward(*this, i);
  }
}

Var MatMul(Var a, Var b) {
  const Tensor& A = a.value();
  const Tensor& B = b.value();
  if (A.cols() != B.rows()) {
    throw NumericError("matmul: shape mismatch " + A.ShapeString() + " x " + B.ShapeString());
  }
  const std::size_t m = A.rows(), k = A.cols(), n = B.cols();
  Tensor out(m, n);
  GemmAccumulate(A.values().data(), B.values().data(), out.values().data(), m, k, n);
  const std::size_t ia = a.id(), ib = b.id();
  return a.tape().Push(
      std::move(out), AnyRequiresGrad({a, b}),
      [ia, ib, m, k, n](Tape& t, std::size_t self) {
        const double* g = t.grad(self).data();
        if (t.requires_grad(ia)) {
          // dA += dC * B^T
          const double* bv = t.value(ib).values().data();
          std::vector<double> bt(n * k);
          for (std::size_t p = 0; p < k; ++p) {
            for (std::size_t j = 0; j < n; ++j) bt[j * k + p] = bv[p * n + j];
          }
          GemmAccumulate(g, bt.data(), t.grad(ia).data(), m, n, k);
        }
        if (t.requires_grad(ib)) {
          // dB += A^T * dC
          const double* av = t.value(ia).values().data();
          double* gb = t.grad(ib).data();
          for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t p = 0; p < k; ++p) {
              const double x = av[i * k + p];
              if (x == 0.0) continue;
              for (std::size_t j = 0; j < n; ++j) gb[p * n + j] += x * g[i * n + j];
            }
          }
        }
      },
      "matmul");
}

Var Add(Var a, Var b) {
  RequireSameShape(a.value(), b.value(), "add");
  Tensor out = a.value();
  out.set_requires_grad(false);
  const auto bv = b.value().values();
  auto ov = out.values();
  for (std::size_t i = 0; i < ov.size(); ++i) ov[i] += bv[i];
  const std::size_t ia = a.id(), ib = b.id();
  return a.tape().Push(
      std::move(out), AnyRequiresGrad({a, b}),
      [ia, ib](Tape& t, std::size_t self) {
        const auto g = t.grad(self);
        for (std::size_t id : {ia, ib}) {
          if (!t.requires_grad(id)) continue;
          auto gi = t.grad(id);
          for (std::size_t i = 0; i < g.size(); ++i) gi[i] += g[i];
        }
      },
      "add");
}

Var Mul(Var a, Var b) {
  RequireSameShape(a.value(), b.value(), "mul");
  const auto av = a.value().values();
  const auto bv = b.value().values();
  Tensor out(a.rows(), a.cols());
  auto ov = out.values();
  for (std::size_t i = 0; i < ov.size(); ++i) ov[i] = av[i] * bv[i];
  const std::size_t ia = a.id(), ib = b.id();
  return a.tape().Push(
      std::move(out), AnyRequiresGrad({a, b}),
      [ia, ib](Tape& t, std::size_t self) {
        const auto g = t.grad(self);
        if (t.requires_grad(ia)) {
          const auto other = t.value(ib).values();
          auto gi = t.grad(ia);
          for (std::size_t i = 0; i < g.size(); ++i) gi[i] += g[i] * other[i];
        }
        if (t.requires_grad(ib)) {
          const auto other = t.value(ia).values();
          auto gi = t.grad(ib);
          for (std::size_t i = 0; i < g.size(); ++i) gi[i] += g[i] * other[i];
        }
      },
      "mul");
}

Var Scale(Var a, double factor) {
  Tensor out(a.rows(), a.cols());
  const auto av = a.value().values();
  auto ov = out.values();
  for (std::size_t i = 0; i < ov.size(); ++i) ov[i] = av[i] * factor;
  const std::size_t ia = a.id();
  return a.tape().Push(
      std::move(out), a.requires_grad(),
      [ia, factor](Tape& t, std::size_t self) {
        const auto g = t.grad(self);
        auto gi = t.grad(ia);
        for (std::size_t i = 0; i < g.size(); ++i) gi[i] += g[i] * factor;
      },
      "scale");
}

Var Transpose(Var a) {
  const Tensor& A = a.value();
  const std::size_t r = A.rows(), c = A.cols();
  Tensor out(c, r);
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = 0; j < c; ++j) out(j, i) = A(i, j);
  }
  const std::size_t ia = a.id();
  return a.tape().Push(
      std::move(out), a.requires_grad(),
      [ia, r, c](Tape& t, std::size_t self) {
        const auto g = t.grad(self);
        auto gi = t.grad(ia);
        for (std::size_t i = 0; i < r; ++i) {
          for (std::size_t j = 0; j < c; ++j) gi[i * c + j] += g[j * r + i];
        }
      },
      "transpose");
}

Var ConcatCols(Var a, Var b) {
  const Tensor& A = a.value();
  const Tensor& B = b.value();
  if (A.rows() != B.rows()) {
    throw NumericError("concat_cols: row mismatch " + A.ShapeString() + " vs " +
                       B.ShapeString());
  }
  const std::size_t r = A.rows(), ca = A.cols(), cb = B.cols();
  Tensor out(r, ca + cb);
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = 0; j < ca; ++j) out(i, j) = A(i, j);
    for (std::size_t j = 0; j < cb; ++j) out(i, ca + j) = B(i, j);
  }
  const std::size_t ia = a.id(), ib = b.id();
  return a.tape().Push(
      std::move(out), AnyRequiresGrad({a, b}),
      [ia, ib, r, ca, cb](Tape& t, std::size_t self) {
        const auto g = t.grad(self);
        const std::size_t c = ca + cb;
        if (t.requires_grad(ia)) {
          auto gi = t.grad(ia);
          for (std::size_t i = 0; i < r; ++i) {
            for (std::size_t j = 0; j < ca; ++j) gi[i * ca + j] += g[i * c + j];
          }
        }
        if (t.requires_grad(ib)) {
          auto gi = t.grad(ib);
          for (std::size_t i = 0; i < r; ++i) {
            for (std::size_t j = 0; j < cb; ++j) gi[i * cb + j] += g[i * c + ca + j];
          }
        }
      },
      "concat_cols");
}

Var StackRows(std::span<const Var> rows) {
  if (rows.empty()) throw NumericError("stack_rows: no inputs");
  Tape& tape = rows.front().tape();
  const std::size_t c = rows.front().cols();
  std::size_t total = 0;
  bool needs_grad = false;
  std::vector<std::size_t> ids, counts;
  for (const Var& v : rows) {
    if (v.cols() != c) {
      throw NumericError("stack_rows: column mismatch " + v.value().ShapeString());
    }
    total += v.rows();
    needs_grad = needs_grad || v.requires_grad();
    ids.push_back(v.id());
    counts.push_back(v.rows());
  }
  Tensor out(total, c);
  std::size_t at = 0;
  for (const Var& v : rows) {
    const auto vals = v.value().values();
    std::copy(vals.begin(), vals.end(), out.values().begin() + static_cast<std::ptrdiff_t>(at * c));
    at += v.rows();
  }
  return tape.Push(
      std::move(out), needs_grad,
      [ids, counts, c](Tape& t, std::size_t self) {
        const auto g = t.grad(self);
        std::size_t at = 0;
        for (std::size_t n = 0; n < ids.size(); ++n) {
          if (t.requires_grad(ids[n])) {
            auto gi = t.grad(ids[n]);
            for (std::size_t i = 0; i < counts[n] * c; ++i) gi[i] += g[at * c + i];
          }
          at += counts[n];
        }
      },
      "stack_rows");
}

Var SelectRows(Var a, std::span<const NodeId> rows) {
  const Tensor& A = a.value();
  const std::size_t c = A.cols();
  std::vector<NodeId> idx(rows.begin(), rows.end());
  Tensor out(idx.size(), c);
  for (std::size_t i = 0; i < idx.size(); ++i) {
    if (idx[i] >= A.rows()) {
      throw NumericError("select_rows: row " + std::to_string(idx[i]) + " outside " +
                         A.ShapeString());
    }
    const auto src = A.row(idx[i]);
    std::copy(src.begin(), src.end(), out.values().begin() + static_cast<std::ptrdiff_t>(i * c));
  }
  const std::size_t ia = a.id();
  return a.tape().Push(
      std::move(out), a.requires_grad(),
      [ia, idx = std::move(idx), c](Tape& t, std::size_t self) {
        const auto g = t.grad(self);
        auto gi = t.grad(ia);
        for (std::size_t i = 0; i < idx.size(); ++i) {
          for (std::size_t j = 0; j < c; ++j) gi[idx[i] * c + j] += g[i * c + j];
        }
      },
      "select_rows");
}

Var SelectRow(Var a, std::size_t row) {
  const NodeId r = static_cast<NodeId>(row);
  return SelectRows(a, std::span<const NodeId>(&r, 1));
}

Var SliceRows(Var a, std::size_t begin, std::size_t end) {
  const Tensor& A = a.value();
  if (begin > end || end > A.rows()) {
    throw NumericError("slice_rows: [" + std::to_string(begin) + ", " +
                       std::to_string(end) + ") outside " + A.ShapeString());
  }
  const std::size_t c = A.cols();
  Tensor out(end - begin, c,
             std::vector<double>(A.values().begin() + static_cast<std::ptrdiff_t>(begin * c),
                                 A.values().begin() + static_cast<std::ptrdiff_t>(end * c)));
  const std::size_t ia = a.id();
  return a.tape().Push(
      std::move(out), a.requires_grad(),
      [ia, begin, c](Tape& t, std::size_t self) {
        const auto g = t.grad(self);
        auto gi = t.grad(ia);
        for (std::size_t i = 0; i < g.size(); ++i) gi[begin * c + i] += g[i];
      },
      "slice_rows");
}

Var RowSum(Var a) {
  const Tensor& A = a.value();
  const std::size_t r = A.rows(), c = A.cols();
  Tensor out(r, 1);
  for (std::size_t i = 0; i < r; ++i) {
    double s = 0.0;
    for (double x : A.row(i)) s += x;
    out(i, 0) = s;
  }
  const std::size_t ia = a.id();
  return a.tape().Push(
      std::move(out), a.requires_grad(),
      [ia, r, c](Tape& t, std::size_t self) {
        const auto g = t.grad(self);
        auto gi = t.grad(ia);
        for (std::size_t i = 0; i < r; ++i) {
          for (std::size_t j = 0; j < c; ++j) gi[i * c + j] += g[i];
        }
      },
      "row_sum");
}

Var RowMean(Var a) {
  if (a.cols() == 0) throw NumericError("row_mean: no columns");
  return Scale(RowSum(a), 1.0 / static_cast<double>(a.cols()));
}

Var Softmax(Var a) {
  const Tensor& A = a.value();
  const std::size_t r = A.rows(), c = A.cols();
  Tensor out(r, c);
  for (std::size_t i = 0; i < r; ++i) {
    const auto row = A.row(i);
    const double mx = *std::max_element(row.begin(), row.end());
    double z = 0.0;
    for (std::size_t j = 0; j < c; ++j) z += (out(i, j) = std::exp(row[j] - mx));
    for (std::size_t j = 0; j < c; ++j) out(i, j) /= z;
  }
  const std::size_t ia = a.id();
  return a.tape().Push(
      std::move(out), a.requires_grad(),
      [ia, r, c](Tape& t, std::size_t self) {
        const auto g = t.grad(self);
        const auto y = t.value(self).values();
        auto gi = t.grad(ia);
        for (std::size_t i = 0; i < r; ++i) {
          double dot = 0.0;
          for (std::size_t j = 0; j < c; ++j) dot += g[i * c + j] * y[i * c + j];
          for (std::size_t j = 0; j < c; ++j) {
            gi[i * c + j] += y[i * c + j] * (g[i * c + j] - dot);
          }
        }
      },
      "softmax");
}

Var LogSoftmax(Var a) {
  const Tensor& A = a.value();
  const std::size_t r = A.rows(), c = A.cols();
  Tensor out(r, c);
  for (std::size_t i = 0; i < r; ++i) {
    const auto row = A.row(i);
    const double mx = *std::max_element(row.begin(), row.end());
    double z = 0.0;
    for (double x : row) z += std::exp(x - mx);
    const double lse = mx + std::log(z);
    for (std::size_t j = 0; j < c; ++j) out(i, j) = row[j] - lse;
  }
  const std::size_t ia = a.id();
  return a.tape().Push(
      std::move(out), a.requires_grad(),
      [ia, r, c](Tape& t, std::size_t self) {
        const auto g = t.grad(self);
        const auto y = t.value(self).values();
        auto gi = t.grad(ia);
        for (std::size_t i = 0; i < r; ++i) {
          double total = 0.0;
          for (std::size_t j = 0; j < c; ++j) total += g[i * c + j];
          for (std::size_t j = 0; j < c; ++j) {
            gi[i * c + j] += g[i * c + j] - std::exp(y[i * c + j]) * total;
          }
        }
      },
      "log_softmax");
}

Var LeakyRelu(Var a, double negative_slope) {
  const auto av = a.value().values();
  Tensor out(a.rows(), a.cols());
  auto ov = out.values();
  for (std::size_t i = 0; i < ov.size(); ++i) {
    ov[i] = av[i] > 0.0 ? av[i] : negative_slope * av[i];
  }
  const std::size_t ia = a.id();
  return a.tape().Push(
      std::move(out), a.requires_grad(),
      [ia, negative_slope](Tape& t, std::size_t self) {
        const auto g = t.grad(self);
        const auto x = t.value(ia).values();
        auto gi = t.grad(ia);
        for (std::size_t i = 0; i < g.size(); ++i) {
          gi[i] += g[i] * (x[i] > 0.0 ? 1.0 : negative_slope);
        }
      },
      "leaky_relu");
}

Var Sigmoid(Var a) {
  const auto av = a.value().values();
  Tensor out(a.rows(), a.cols());
  auto ov = out.values();
  for (std::size_t i = 0; i < ov.size(); ++i) {
    const double x = av[i];
    if (x >= 0.0) {
      ov[i] = 1.0 / (1.0 + std::exp(-x));
    } else {
      const double e = std::exp(x);
      ov[i] = e / (1.0 + e);
    }
  }
  const std::size_t ia = a.id();
  return a.tape().Push(
      std::move(out), a.requires_grad(),
      [ia](Tape& t, std::size_t self) {
        const auto g = t.grad(self);
        const auto y = t.value(self).values();
        auto gi = t.grad(ia);
        for (std::size_t i = 0; i < g.size(); ++i) gi[i] += g[i] * y[i] * (1.0 - y[i]);
      },
      "sigmoid");
}

Var Dropout(Var a, double p, bool training, std::uint64_t seed) {
  if (p < 0.0 || p >= 1.0) throw NumericError("dropout: p must be in [0, 1)");
  if (!training || p == 0.0) return a;
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution keep(1.0 - p);
  const double scale = 1.0 / (1.0 - p);
  std::vector<double> mask(a.value().size());
  for (double& m : mask) m = keep(rng) ? scale : 0.0;
  const auto av = a.value().values();
  Tensor out(a.rows(), a.cols());
  auto ov = out.values();
  for (std::size_t i = 0; i < ov.size(); ++i) ov[i] = av[i] * mask[i];
  const std::size_t ia = a.id();
  return a.tape().Push(
      std::move(out), a.requires_grad(),
      [ia, mask = std::move(mask)](Tape& t, std::size_t self) {
        const auto g = t.grad(self);
        auto gi = t.grad(ia);
        for (std::size_t i = 0; i < g.size(); ++i) gi[i] += g[i] * mask[i];
      },
      "dropout");
}

Var Ones(Tape& tape, std::size_t rows, std::size_t cols) {
  return tape.Constant(Tensor(rows, cols, 1.0));
}

Var SumAll(Var a) { return RowSum(Transpose(RowSum(a))); }

double GradCheck(const std::function<Var(Tape&)>& f, std::span<Tensor* const> params,
                 double h) {
  for (Tensor* p : params) {
    if (!p->requires_grad()) p->set_requires_grad(true);
    p->ZeroGrad();
  }
  {
    Tape tape;
    tape.Backward(f(tape));
  }
  auto eval = [&f]() {
    Tape tape;
    return f(tape).value()(0, 0);
  };
  double worst = 0.0;
  for (Tensor* p : params) {
    auto vals = p->values();
    const auto g = p->grad();
    for (std::size_t i = 0; i < vals.size(); ++i) {
      const double saved = vals[i];
      vals[i] = saved + h;
      const double up = eval();
      vals[i] = saved - h;
      const double down = eval();
      vals[i] = saved;
      const double numeric = (up - down) / (2.0 * h);
      worst = std::max(worst, std::abs(g[i] - numeric) / std::max(1.0, std::abs(numeric)));
    }
  }
  return worst;
}

void SaveTensors(const std::map<std::string, Tensor>& tensors,
                 const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  auto put_u32 = [&out](std::uint32_t v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof(v));
  };
  out.write(kCheckpointMagic, sizeof(kCheckpointMagic));
  put_u32(kCheckpointVersion);
  put_u32(static_cast<std::uint32_t>(tensors.size()));
  for (const auto& [name, t] : tensors) {
    put_u32(static_cast<std::uint32_t>(name.size()));
    out.write(name.data(), static_cast<std::streamsize>(name.size()));
    put_u32(static_cast<std::uint32_t>(t.rows()));
    put_u32(static_cast<std::uint32_t>(t.cols()));
    out.write(reinterpret_cast<const char*>(t.values().data()),
              static_cast<std::streamsize>(t.size() * sizeof(double)));
  }
  if (!out) throw DataError("failed writing " + path.string());
}

std::map<std::string, Tensor> LoadTensors(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  auto get_u32 = [&in, &path]() {
    std::uint32_t v = 0;
    if (!in.read(reinterpret_cast<char*>(&v), sizeof(v))) {
      throw DataError(path.string() + ": truncated checkpoint");
    }
    return v;
  };
  char magic[sizeof(kCheckpointMagic)];
  if (!in.read(magic, sizeof(magic)) ||
      std::memcmp(magic, kCheckpointMagic, sizeof(magic)) != 0) {
    throw DataError(path.string() + ": not a tensor checkpoint");
  }
  if (const auto v = get_u32(); v != kCheckpointVersion) {
    throw DataError(path.string() + ": unsupported checkpoint version " + std::to_string(v));
  }
  const std::uint32_t count = get_u32();
  std::map<std::string, Tensor> out;
  for (std::uint32_t n = 0; n < count; ++n) {
    std::string name(get_u32(), '\0');
    if (!in.read(name.data(), static_cast<std::streamsize>(name.size()))) {
      throw DataError(path.string() + ": truncated checkpoint");
    }
    const std::uint32_t rows = get_u32(), cols = get_u32();
    std::vector<double> values(static_cast<std::size_t>(rows) * cols);
    if (!in.read(reinterpret_cast<char*>(values.data()),
                 static_cast<std::streamsize>(values.size() * sizeof(double)))) {
      throw DataError(path.string() + ": truncated checkpoint");
    }
    out.emplace(std::move(name), Tensor(rows, cols, std::move(values)));
  }
  return out;
}

}  // namespace graphreach::ad
