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

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <stdexcept>

#include "nuadv/error.h"
#include "nuadv/text.h"

namespace nuadv {

ImportanceVector pearson_importance(const Dataset& data) {
  const double n = static_cast<double>(data.size());
  Vector y(static_cast<Eigen::Index>(data.size()));
  for (std::size_t i = 0; i < data.size(); ++i) y(i) = data.labels[i];
  const Vector yc = (y.array() - y.mean()).matrix();
  const double y_var = yc.squaredNorm() / n;
  if (!(y_var > 0.0)) throw ConstantLabel();

  ImportanceVector out{data.feature_names, Vector(data.dim())};
  for (Eigen::Index j = 0; j < data.features.cols(); ++j) {
    const Vector xc =
        (data.features.col(j).array() - data.features.col(j).mean()).matrix();
    const double x_var = xc.squaredNorm() / n;
    const double scale = std::max(1.0, data.features.col(j).cwiseAbs().maxCoeff());
    if (!(std::sqrt(x_var) > 1e-12 * scale)) {
      throw ConstantFeature(static_cast<std::size_t>(j));
    }
    const double rho = xc.dot(yc) / n / std::sqrt(x_var * y_var);
    out.values(j) = std::min(1.0, std::abs(rho));
  }
  return out;
}

double positive_score(const MlpModel& model, const Vector& x) {
  const Vector logits = forward(model, x).logits;
  return logits.size() > 1 ? logits(1) - logits(0) : logits(0);
}

ImportanceVector shapley_importance(const MlpModel& model, const Dataset& data,
                                    const ShapleyOptions& options) {
  if (model.input_dim() != data.dim()) {
    throw DimensionMismatch("shapley_importance", model.input_dim(),
                            data.dim());
  }
  if (options.permutations < 1) {
    throw std::invalid_argument("permutations must be >= 1");
  }
  const std::size_t d = data.dim();
  const Vector baseline = data.features.colwise().mean().transpose();

  Rng rng(options.seed);
  std::vector<std::size_t> rows(data.size());
  std::iota(rows.begin(), rows.end(), 0);
  if (rows.size() > options.max_samples) {
    std::shuffle(rows.begin(), rows.end(), rng);
    rows.resize(options.max_samples);
    std::sort(rows.begin(), rows.end());
  }

  std::vector<std::size_t> perm(d);
  std::iota(perm.begin(), perm.end(), 0);
  Vector total = Vector::Zero(static_cast<Eigen::Index>(d));
  Vector phi(static_cast<Eigen::Index>(d));
  for (std::size_t r : rows) {
    const Vector x = data.row(r);
    phi.setZero();
    for (int p = 0; p < options.permutations; ++p) {
      std::shuffle(perm.begin(), perm.end(), rng);
      Vector z = baseline;
      double prev = positive_score(model, z);
      for (std::size_t j : perm) {
        z(j) = x(j);
        const double cur = positive_score(model, z);
        phi(j) += cur - prev;
        prev = cur;
      }
    }
    total += (phi / options.permutations).cwiseAbs();
  }
  return {data.feature_names, total / static_cast<double>(rows.size())};
}

void write_importance_csv(const ImportanceVector& importance,
                          const std::string& path) {
  AtomicFile out(path);
  out.stream() << "feature_name,importance\n";
  for (std::size_t i = 0; i < importance.feature_names.size(); ++i) {
    out.stream() << importance.feature_names[i] << ','
                 << format_double(importance.values(i)) << '\n';
  }
  out.commit();
}

ImportanceVector read_importance_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw ParseError(path + ": missing header row");
  const auto header = split_csv_line(line);
  if (header.size() != 2) {
    throw SchemaError(path + ": expected columns feature_name,importance");
  }
  ImportanceVector out;
  std::vector<double> values;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto cells = split_csv_line(line);
    double v = 0.0;
    if (cells.size() != 2 || !parse_double(cells[1], &v)) {
      throw ParseError(path + ": malformed row '" + line + "'");
    }
    out.feature_names.push_back(cells[0]);
    values.push_back(v);
  }
  out.values = Eigen::Map<Vector>(values.data(),
                                  static_cast<Eigen::Index>(values.size()));
  return out;
}

}  // namespace nuadv
