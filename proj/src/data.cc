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

#include "nuadv/data.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iterator>
#include <numeric>
#include <random>
#include <stdexcept>
#include <utility>

#include "nuadv/error.h"
#include "nuadv/text.h"

namespace nuadv {

std::size_t Dataset::count_label(int label) const {
  return static_cast<std::size_t>(
      std::count(labels.begin(), labels.end(), label));
}

Dataset Dataset::subset(const std::vector<std::size_t>& rows) const {
  Dataset out;
  out.features.resize(static_cast<Eigen::Index>(rows.size()), features.cols());
  out.labels.reserve(rows.size());
  for (std::size_t k = 0; k < rows.size(); ++k) {
    out.features.row(static_cast<Eigen::Index>(k)) = features.row(rows[k]);
    out.labels.push_back(labels[rows[k]]);
  }
  out.feature_names = feature_names;
  return out;
}

Dataset make_dataset(Matrix features, std::vector<int> labels,
                     std::vector<std::string> feature_names) {
  if (static_cast<std::size_t>(features.rows()) != labels.size()) {
    throw SchemaError("row count does not match label count");
  }
  if (static_cast<std::size_t>(features.cols()) != feature_names.size()) {
    throw SchemaError("feature count does not match name count");
  }
  if (labels.size() < 2) throw SchemaError("dataset needs at least 2 samples");
  for (int y : labels) {
    if (y != 0 && y != 1) {
      throw SchemaError("label " + std::to_string(y) + " is not binary");
    }
  }
  if (!features.allFinite()) throw SchemaError("non-finite feature value");
  return Dataset{std::move(features), std::move(labels),
                 std::move(feature_names)};
}

Dataset load_csv(const std::string& path, const std::string& label_column,
                 const std::vector<std::string>& drop_columns) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw ParseError(path + ": missing header row");
  const std::vector<std::string> header = split_csv_line(line);

  int label_index = -1;
  std::vector<int> feature_columns;
  std::vector<std::string> names;
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (header[c] == label_column) {
      label_index = static_cast<int>(c);
    } else if (std::find(drop_columns.begin(), drop_columns.end(),
                         header[c]) == drop_columns.end()) {
      feature_columns.push_back(static_cast<int>(c));
      names.push_back(header[c]);
    }
  }
  if (label_index < 0) {
    throw SchemaError(path + ": no label column '" + label_column + "'");
  }
  for (const std::string& drop : drop_columns) {
    if (std::find(header.begin(), header.end(), drop) == header.end()) {
      throw SchemaError(path + ": no column '" + drop + "' to drop");
    }
  }

  std::vector<double> values;
  std::vector<int> labels;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::vector<std::string> cells = split_csv_line(line);
    if (cells.size() != header.size()) {
      throw ParseError(path + ":" + std::to_string(line_no) + ": expected " +
                       std::to_string(header.size()) + " cells, got " +
                       std::to_string(cells.size()));
    }
    double label_value = 0.0;
    if (!parse_double(cells[label_index], &label_value)) {
      throw ParseError(path + ":" + std::to_string(line_no) +
                       ": non-numeric label '" + cells[label_index] + "'");
    }
    if (label_value != 0.0 && label_value != 1.0) {
      throw SchemaError(path + ":" + std::to_string(line_no) + ": label '" +
                        cells[label_index] + "' is not 0 or 1");
    }
    labels.push_back(static_cast<int>(label_value));
    for (int c : feature_columns) {
      double v = 0.0;
      if (!parse_double(cells[c], &v)) {
        throw ParseError(path + ":" + std::to_string(line_no) +
                         ": non-numeric cell '" + cells[c] + "' in column '" +
                         header[c] + "'");
      }
      values.push_back(v);
    }
  }
  const auto n = static_cast<Eigen::Index>(labels.size());
  const auto d = static_cast<Eigen::Index>(feature_columns.size());
  Matrix features = Eigen::Map<Matrix>(values.data(), n, d);
  return make_dataset(std::move(features), std::move(labels), std::move(names));
}

void write_csv(const Dataset& data, const std::string& path,
               const std::string& label_column) {
  AtomicFile out(path);
  for (const std::string& name : data.feature_names) out.stream() << name << ',';
  out.stream() << label_column << '\n';
  for (std::size_t i = 0; i < data.size(); ++i) {
    for (Eigen::Index j = 0; j < data.features.cols(); ++j) {
      out.stream() << format_double(data.features(i, j)) << ',';
    }
    out.stream() << data.labels[i] << '\n';
  }
  out.commit();
}

std::uint64_t file_checksum(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path);
  std::uint64_t hash = 1469598103934665603ULL;
  char buf[4096];
  while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
    for (std::streamsize i = 0; i < in.gcount(); ++i) {
      hash ^= static_cast<unsigned char>(buf[i]);
      hash *= 1099511628211ULL;
    }
  }
  return hash;
}

Vector StandardizationStats::apply(const Vector& x) const {
  if (x.size() != mean.size()) {
    throw DimensionMismatch("standardization", mean.size(), x.size());
  }
  return (x - mean).cwiseQuotient(stddev);
}

Dataset StandardizationStats::apply(const Dataset& data) const {
  if (data.dim() != static_cast<std::size_t>(mean.size())) {
    throw DimensionMismatch("standardization", mean.size(), data.dim());
  }
  Dataset out = data;
  out.features = ((data.features.rowwise() - mean.transpose()).array().rowwise() /
                  stddev.transpose().array())
                     .matrix();
  return out;
}

std::pair<Dataset, StandardizationStats> standardize(const Dataset& data) {
  const double n = static_cast<double>(data.size());
  StandardizationStats stats;
  stats.mean = data.features.colwise().sum().transpose() / n;
  stats.stddev.resize(stats.mean.size());
  for (Eigen::Index j = 0; j < data.features.cols(); ++j) {
    const double var =
        (data.features.col(j).array() - stats.mean(j)).square().sum() / n;
    // Relative test so rounding noise on a constant column is still caught.
    const double scale = std::max(1.0, std::abs(stats.mean(j)));
    if (!(std::sqrt(var) > 1e-12 * scale)) {
      throw ConstantFeature(static_cast<std::size_t>(j));
    }
    stats.stddev(j) = std::sqrt(var);
  }
  Dataset out = stats.apply(data);
  return {std::move(out), std::move(stats)};
}

TrainTestSplit train_test_split(const Dataset& data, double test_fraction,
                                std::uint64_t seed) {
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
    throw std::invalid_argument("test_fraction must lie in (0, 1)");
  }
  std::mt19937_64 rng(seed);
  std::vector<std::size_t> train_rows;
  std::vector<std::size_t> test_rows;
  for (int label : {0, 1}) {
    std::vector<std::size_t> rows;
    for (std::size_t i = 0; i < data.size(); ++i) {
      if (data.labels[i] == label) rows.push_back(i);
    }
    std::shuffle(rows.begin(), rows.end(), rng);
    const auto n_test = static_cast<std::size_t>(
        std::llround(test_fraction * static_cast<double>(rows.size())));
    test_rows.insert(test_rows.end(), rows.begin(), rows.begin() + n_test);
    train_rows.insert(train_rows.end(), rows.begin() + n_test, rows.end());
  }
  std::sort(train_rows.begin(), train_rows.end());
  std::sort(test_rows.begin(), test_rows.end());
  return {data.subset(train_rows), data.subset(test_rows)};
}

Matrix covariance(const Dataset& data, ClassFilter filter) {
  std::vector<std::size_t> rows;
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (filter == ClassFilter::kAll || data.labels[i] == 0) rows.push_back(i);
  }
  if (rows.size() < 2) {
    throw InsufficientSamples("covariance needs at least 2 samples, got " +
                              std::to_string(rows.size()));
  }
  const Matrix x = data.subset(rows).features;
  const Eigen::RowVectorXd mean = x.colwise().mean();
  const Matrix centered = x.rowwise() - mean;
  Matrix cov = centered.transpose() * centered / static_cast<double>(rows.size());
  return 0.5 * (cov + cov.transpose());
}

}  // namespace nuadv
