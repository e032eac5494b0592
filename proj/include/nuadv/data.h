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

// Tabular binary-classification datasets: CSV ingestion, standardization,
// splitting and second-order statistics.
//
// Label convention: 0 is the negative (target) class, 1 the positive class
// an adversary wants to get misclassified.

#ifndef NUADV_DATA_H_
#define NUADV_DATA_H_

#include <cstdint>
#include <string>
#include <vector>

#include "nuadv/numerics.h"

namespace nuadv {

struct Dataset {
  Matrix features;  // n x d
  std::vector<int> labels;
  std::vector<std::string> feature_names;

  std::size_t size() const { return labels.size(); }
  std::size_t dim() const { return static_cast<std::size_t>(features.cols()); }
  Vector row(std::size_t i) const { return features.row(i).transpose(); }
  std::size_t count_label(int label) const;
  Dataset subset(const std::vector<std::size_t>& rows) const;
};

// Builds a dataset and checks its invariants: labels in {0, 1}, one name per
// feature column, at least two samples, finite values. Throws SchemaError.
Dataset make_dataset(Matrix features, std::vector<int> labels,
                     std::vector<std::string> feature_names);

// Reads a comma-separated file with a header row. Every column except the
// label and the dropped columns becomes a feature, in file order.
// Throws ParseError for malformed rows or non-numeric cells and SchemaError
// for a missing label column or a label outside {0, 1}.
Dataset load_csv(const std::string& path, const std::string& label_column,
                 const std::vector<std::string>& drop_columns = {});

// Writes features and labels back out with a header row; values use the
// shortest round-trip representation.
void write_csv(const Dataset& data, const std::string& path,
               const std::string& label_column = "label");

// 64-bit FNV-1a over the file bytes, used for run manifests.
std::uint64_t file_checksum(const std::string& path);

struct StandardizationStats {
  Vector mean;
  Vector stddev;  // population standard deviation

  Vector apply(const Vector& x) const;
  Dataset apply(const Dataset& data) const;
};

// Fits per-feature mean and population standard deviation and returns the
// standardized copy. Throws ConstantFeature for a zero-variance column.
std::pair<Dataset, StandardizationStats> standardize(const Dataset& data);

struct TrainTestSplit {
  Dataset train;
  Dataset test;
};

// Stratified split: each class contributes round(test_fraction * count)
// samples to the test set. Deterministic for a given seed.
TrainTestSplit train_test_split(const Dataset& data, double test_fraction,
                                std::uint64_t seed);

enum class ClassFilter { kAll, kNegativeOnly };

// Population covariance (divide by n) of the selected rows.
// Throws InsufficientSamples when fewer than two rows are selected.
Matrix covariance(const Dataset& data, ClassFilter filter);

}  // namespace nuadv

#endif  // NUADV_DATA_H_
