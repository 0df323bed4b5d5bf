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

#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>

#include <gtest/gtest.h>

#include "graphreach/common.h"
#include "graphreach/tensor.h"
#include "oracles.h"

namespace graphreach::ad {
namespace {

using Fn = std::function<Var(Tape&, std::vector<Var>&)>;

Tensor Random(std::size_t r, std::size_t c, std::mt19937_64& rng, double lo = -1.0,
              double hi = 1.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  Tensor t(r, c);
  for (double& x : t.values()) x = u(rng);
  return t;
}

// Contracts the primitive's output with fixed random weights so every
// output entry contributes to the checked gradient.
double PrimitiveError(const Fn& fn, std::vector<Tensor> inputs, std::uint64_t seed = 1) {
  std::mt19937_64 rng(seed);
  std::vector<Tensor*> params;
  for (Tensor& t : inputs) {
    t.set_requires_grad(true);
    params.push_back(&t);
  }
  Tensor weights;
  auto loss = [&](bool backward) {
    Tape tape;
    std::vector<Var> vars;
    for (Tensor& t : inputs) vars.push_back(tape.Param(t));
    Var out = fn(tape, vars);
    if (weights.size() == 0) weights = Random(out.rows(), out.cols(), rng);
    Var l = SumAll(Mul(out, tape.Constant(weights)));
    if (backward) tape.Backward(l);
    return l.value()(0, 0);
  };
  return testing::MaxGradError(loss, params);
}

constexpr double kTol = 1e-6;

TEST(PrimitiveGradTest, Binary) {
  std::mt19937_64 rng(2);
  EXPECT_LT(PrimitiveError([](Tape&, auto& v) { return MatMul(v[0], v[1]); },
                           {Random(3, 4, rng), Random(4, 2, rng)}),
            kTol);
  EXPECT_LT(PrimitiveError([](Tape&, auto& v) { return Add(v[0], v[1]); },
                           {Random(3, 4, rng), Random(3, 4, rng)}),
            kTol);
  EXPECT_LT(PrimitiveError([](Tape&, auto& v) { return Mul(v[0], v[1]); },
                           {Random(3, 4, rng), Random(3, 4, rng)}),
            kTol);
  EXPECT_LT(PrimitiveError([](Tape&, auto& v) { return ConcatCols(v[0], v[1]); },
                           {Random(3, 2, rng), Random(3, 4, rng)}),
            kTol);
  EXPECT_LT(PrimitiveError(
                [](Tape&, auto& v) {
                  std::vector<Var> rows = {v[0], v[1], v[0]};
                  return StackRows(rows);
                },
                {Random(1, 3, rng), Random(1, 3, rng)}),
            kTol);
}

TEST(PrimitiveGradTest, Unary) {
  std::mt19937_64 rng(3);
  const std::vector<std::pair<const char*, Fn>> cases = {
      {"scale", [](Tape&, auto& v) { return Scale(v[0], -2.5); }},
      {"transpose", [](Tape&, auto& v) { return Transpose(v[0]); }},
      {"select_row", [](Tape&, auto& v) { return SelectRow(v[0], 2); }},
      {"select_rows",
       [](Tape&, auto& v) {
         const NodeId rows[] = {3, 0, 3};
         return SelectRows(v[0], rows);
       }},
      {"slice_rows", [](Tape&, auto& v) { return SliceRows(v[0], 1, 3); }},
      {"row_sum", [](Tape&, auto& v) { return RowSum(v[0]); }},
      {"row_mean", [](Tape&, auto& v) { return RowMean(v[0]); }},
      {"softmax", [](Tape&, auto& v) { return Softmax(v[0]); }},
      {"log_softmax", [](Tape&, auto& v) { return LogSoftmax(v[0]); }},
      {"sigmoid", [](Tape&, auto& v) { return Sigmoid(v[0]); }},
      {"sum_all", [](Tape&, auto& v) { return SumAll(v[0]); }},
      {"dropout", [](Tape&, auto& v) { return Dropout(v[0], 0.4, true, 77); }},
  };
  for (const auto& [name, fn] : cases) {
    EXPECT_LT(PrimitiveError(fn, {Random(4, 3, rng)}), kTol) << name;
  }
  // Keep inputs away from the kink.
  Tensor x = Random(4, 3, rng, 0.1, 1.0);
  for (std::size_t i = 0; i < x.size(); i += 2) x.values()[i] *= -1.0;
  EXPECT_LT(PrimitiveError([](Tape&, auto& v) { return LeakyRelu(v[0], 0.2); }, {x}), kTol);
}

TEST(PrimitiveTest, SigmoidAtZero) {
  Tensor x(1, 1, 0.0);
  x.set_requires_grad(true);
  Tape tape;
  Var y = Sigmoid(tape.Param(x));
  EXPECT_DOUBLE_EQ(y.value()(0, 0), 0.5);
  tape.Backward(y);
  EXPECT_DOUBLE_EQ(x.grad()[0], 0.25);
}

TEST(PrimitiveTest, SoftmaxOfConstant) {
  Tensor x(1, 5, 3.0);
  x.set_requires_grad(true);
  Tape tape;
  Var s = Softmax(tape.Param(x));
  for (std::size_t j = 0; j < 5; ++j) EXPECT_NEAR(s.value()(0, j), 0.2, 1e-15);
  tape.Backward(SumAll(s));
  for (double g : x.grad()) EXPECT_NEAR(g, 0.0, 1e-15);
}

TEST(PrimitiveTest, ShapeAndFiniteChecks) {
  Tape tape;
  Var a = tape.Constant(Tensor(2, 3, 1.0));
  Var b = tape.Constant(Tensor(2, 3, 1.0));
  EXPECT_THROW(MatMul(a, b), NumericError);
  EXPECT_THROW(Add(a, tape.Constant(Tensor(3, 2))), NumericError);
  EXPECT_THROW(tape.Constant(Tensor(1, 1, std::nan(""))), NumericError);
  EXPECT_THROW(Scale(tape.Constant(Tensor(1, 1, 1e308)), 1e10), NumericError);
  EXPECT_THROW(tape.Backward(a), NumericError);
}

TEST(DropoutTest, IdentityCases) {
  std::mt19937_64 rng(4);
  const Tensor x = Random(5, 5, rng);
  Tape tape;
  Var v = tape.Constant(x);
  EXPECT_EQ(Dropout(v, 0.5, false, 1).value(), x);
  EXPECT_EQ(Dropout(v, 0.0, true, 1).value(), x);
  EXPECT_THROW(Dropout(v, 1.0, true, 1), NumericError);
}

TEST(DropoutTest, PreservesExpectation) {
  Tape tape;
  Var v = tape.Constant(Tensor(200, 200, 2.0));
  double total = 0.0;
  for (std::uint64_t s = 0; s < 5; ++s) {
    Var d = Dropout(v, 0.5, true, s);
    for (double x : d.value().values()) {
      EXPECT_TRUE(x == 0.0 || x == 4.0);
      total += x;
    }
  }
  EXPECT_NEAR(total / (5 * 200 * 200), 2.0, 0.02);
}

TEST(TapeTest, GradientsAccumulate) {
  Tensor x = Tensor::FromRows({{1.5, -2.0}});
  x.set_requires_grad(true);
  Tape tape;
  Var a = tape.Param(x);
  // d/dx sum(x*x + 3x) = 2x + 3
  tape.Backward(SumAll(Add(Mul(a, a), Scale(a, 3.0))));
  EXPECT_DOUBLE_EQ(x.grad()[0], 6.0);
  EXPECT_DOUBLE_EQ(x.grad()[1], -1.0);
  Tape again;
  again.Backward(SumAll(again.Param(x)));
  EXPECT_DOUBLE_EQ(x.grad()[0], 7.0);
  x.ZeroGrad();
  EXPECT_DOUBLE_EQ(x.grad()[0], 0.0);
}

TEST(GradCheckTest, LinearAndConstant) {
  std::mt19937_64 rng(6);
  Tensor w = Random(3, 2, rng);
  const Tensor c = Random(2, 3, rng);
  Tensor* params[] = {&w};
  const double linear = GradCheck(
      [&](Tape& t) { return SumAll(MatMul(t.Constant(c), t.Param(w))); }, params);
  EXPECT_LT(linear, 1e-9);
  const double constant = GradCheck(
      [&](Tape& t) {
        Var p = t.Param(w);
        return Add(Scale(SumAll(p), 0.0), t.Constant(Tensor(1, 1, 4.0)));
      },
      params);
  EXPECT_LT(constant, 1e-12);
  for (double g : w.grad()) EXPECT_EQ(g, 0.0);
}

TEST(GradCheckTest, AgreesWithIndependentOracle) {
  std::mt19937_64 rng(8);
  Tensor a = Random(3, 3, rng), b = Random(3, 2, rng);
  auto build = [&](Tape& t) {
    return SumAll(Sigmoid(MatMul(Softmax(t.Param(a)), t.Param(b))));
  };
  Tensor* params[] = {&a, &b};
  EXPECT_LT(GradCheck(build, params), 1e-8);
  EXPECT_LT(testing::MaxGradError(
                [&](bool backward) {
                  Tape t;
                  Var l = build(t);
                  if (backward) t.Backward(l);
                  return l.value()(0, 0);
                },
                params),
            1e-8);
}

TEST(CheckpointTest, RoundTrip) {
  std::mt19937_64 rng(9);
  const std::map<std::string, Tensor> tensors = {{"a", Random(3, 4, rng)},
                                                 {"b.c", Random(1, 1, rng)}};
  const auto path = std::filesystem::path(::testing::TempDir()) / "t.grt";
  SaveTensors(tensors, path);
  EXPECT_EQ(LoadTensors(path), tensors);
  std::ofstream(path) << "not a checkpoint";
  EXPECT_THROW(LoadTensors(path), DataError);
}

}  // namespace
}  // namespace graphreach::ad
