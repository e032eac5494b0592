// Copyright 2026 The nuadv Authors.
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


#include "nuadv/importance.h"

#include <cmath>
#include <random>

#include "gtest/gtest.h"
#include "nuadv/error.h"

namespace nuadv {
namespace {

TEST(ImportanceTest, PearsonMatchesHandComputation) {
  Matrix x(4, 2);
  x << 1, 4, 2, 3, 3, 2, 4, 1;
  const Dataset d = make_dataset(x, {0, 0, 1, 1}, {"a", "b"});
  const auto imp = pearson_importance(d);
  // corr(a, y) = 2 / sqrt(5) by hand; b is the mirror image.
  EXPECT_NEAR(imp.values(0), 2.0 / std::sqrt(5.0), 1e-12);
  EXPECT_NEAR(imp.values(1), imp.values(0), 1e-12);
  EXPECT_EQ(imp.feature_names, d.feature_names);
}

TEST(ImportanceTest, PearsonRejectsDegenerateColumns) {
  Matrix x(3, 1);
  x << 1, 2, 3;
  EXPECT_THROW(pearson_importance(make_dataset(x, {1, 1, 1}, {"a"})),
               ConstantLabel);
  x << 2, 2, 2;
  EXPECT_THROW(pearson_importance(make_dataset(x, {0, 1, 1}, {"a"})),
               ConstantFeature);
}

// A linear score has exact Shapley values w_i (x_i - mean_i), and every
// permutation gives them, so the estimate is exact.
TEST(ImportanceTest, ShapleyIsExactForLinearScore) {
  MlpModel m = make_zero_model({3, 2});
  m.weights[0] << 0, 0, 0, 1.0, -2.0, 0.5;
  std::mt19937_64 rng(1);
  std::normal_distribution<double> normal;
  Matrix x(30, 3);
  std::vector<int> y(30);
  for (int i = 0; i < 30; ++i) {
    for (int j = 0; j < 3; ++j) x(i, j) = normal(rng);
    y[i] = i % 2;
  }
  const Dataset d = make_dataset(x, y, {"a", "b", "c"});
  const auto imp = shapley_importance(m, d, {20, 3, 200});
  const Vector mean = x.colwise().mean().transpose();
  for (int j = 0; j < 3; ++j) {
    const double w = m.weights[0](1, j);
    const double expected =
        std::abs(w) * (x.col(j).array() - mean(j)).abs().mean();
    EXPECT_NEAR(imp.values(j), expected, 1e-12);
  }
}

TEST(ImportanceTest, ShapleyIsSeededAndEfficient) {
  const MlpModel m = make_he_uniform_model({3, 8, 2}, 0.0, 5);
  std::mt19937_64 rng(2);
  std::normal_distribution<double> normal;
  Matrix x(50, 3);
  std::vector<int> y(50);
  for (int i = 0; i < 50; ++i) {
    for (int j = 0; j < 3; ++j) x(i, j) = normal(rng);
    y[i] = i % 2;
  }
  const Dataset d = make_dataset(x, y, {"a", "b", "c"});
  const auto a = shapley_importance(m, d, {30, 7, 20});
  const auto b = shapley_importance(m, d, {30, 7, 20});
  EXPECT_EQ(a.values, b.values);
  EXPECT_TRUE((a.values.array() >= 0).all());
}

TEST(ImportanceTest, CsvRoundTrip) {
  ImportanceVector v{{"a", "b"}, Vector(2)};
  v.values << 0.1, 1.0 / 3.0;
  const std::string path = ::testing::TempDir() + "imp.csv";
  write_importance_csv(v, path);
  const auto back = read_importance_csv(path);
  EXPECT_EQ(back.feature_names, v.feature_names);
  EXPECT_EQ(back.values, v.values);
}

}  // namespace
}  // namespace nuadv
