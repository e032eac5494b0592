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


#include "nuadv/io.h"

#include <fstream>
#include <random>

#include "gtest/gtest.h"
#include "nuadv/error.h"
#include "test_util.h"

namespace nuadv {
namespace {

using testing_util::random_spd;
using testing_util::random_vector;

std::string temp(const std::string& name) { return ::testing::TempDir() + name; }

void expect_same_omega(const OmegaTransform& a, const OmegaTransform& b) {
  EXPECT_EQ(a.kind(), b.kind());
  EXPECT_EQ(a.label(), b.label());
  EXPECT_EQ(a.dense(), b.dense());
  EXPECT_EQ(a.mutable_set(), b.mutable_set());
}

TEST(IoTest, ModelRoundTripIsBitExact) {
  std::mt19937_64 rng(1);
  ModelFile f;
  f.model = make_he_uniform_model({3, 7, 5, 2}, 0.2, 9);
  for (auto& b : f.model.biases) b = random_vector(b.size(), rng, 1e-3);
  f.model.weights[0](0, 0) = 1.0 / 3.0;
  f.model.weights[0](0, 1) = 5e-324;  // denormal
  f.feature_names = {"a", "b", "c"};
  f.standardization = StandardizationStats{random_vector(3, rng),
                                           random_vector(3, rng).cwiseAbs()};
  f.omega = OmegaTransform::full(random_spd(3, rng));
  f.omega->set_label("md-target");
  f.train_epsilon = 0.1;
  const std::string path = temp("model.json");
  save_model(f, path);
  const ModelFile g = load_model(path);
  EXPECT_EQ(g.model.layer_dims, f.model.layer_dims);
  EXPECT_EQ(g.model.dropout_rate, f.model.dropout_rate);
  for (std::size_t i = 0; i < f.model.num_layers(); ++i) {
    EXPECT_EQ(g.model.weights[i], f.model.weights[i]);
    EXPECT_EQ(g.model.biases[i], f.model.biases[i]);
  }
  EXPECT_EQ(g.feature_names, f.feature_names);
  ASSERT_TRUE(g.standardization);
  EXPECT_EQ(g.standardization->mean, f.standardization->mean);
  EXPECT_EQ(g.standardization->stddev, f.standardization->stddev);
  ASSERT_TRUE(g.omega);
  expect_same_omega(*g.omega, *f.omega);
  EXPECT_EQ(g.train_epsilon, 0.1);
  // Saving the loaded copy reproduces the file byte for byte.
  save_model(g, temp("model2.json"));
  EXPECT_EQ(checksum_hex(path), checksum_hex(temp("model2.json")));
}

TEST(IoTest, OmegaRoundTripAllKinds) {
  std::mt19937_64 rng(2);
  std::vector<OmegaTransform> all = {
      OmegaTransform::identity(3),
      OmegaTransform::diagonal(random_vector(3, rng).cwiseAbs().array() + 0.1),
      OmegaTransform::full(random_spd(3, rng)),
      OmegaTransform::mask({true, false, true})};
  for (auto& om : all) {
    om.set_label("x");
    save_omega(om, temp("omega.json"));
    expect_same_omega(load_omega(temp("omega.json")), om);
  }
}

TEST(IoTest, ManifestRoundTrip) {
  RunManifest m;
  m.command = "train";
  m.config = {{"epochs", "5"}, {"omega", "md-target"}};
  m.seed = 0xffffffffffffffffULL;
  m.inputs = {{"d.csv", "0123456789abcdef"}};
  m.outputs = {{"m.json", "fedcba9876543210"}};
  m.tool_version = "1.0.0";
  save_manifest(m, temp("manifest.json"));
  const RunManifest r = load_manifest(temp("manifest.json"));
  EXPECT_EQ(r.command, m.command);
  EXPECT_EQ(r.config, m.config);
  EXPECT_EQ(r.seed, m.seed);
  EXPECT_EQ(r.inputs, m.inputs);
  EXPECT_EQ(r.outputs, m.outputs);
  EXPECT_EQ(r.tool_version, m.tool_version);
}

TEST(IoTest, RejectsMalformedFiles) {
  std::ofstream(temp("bad.json")) << "{not json";
  EXPECT_THROW(load_model(temp("bad.json")), ParseError);
  std::ofstream(temp("other.json")) << R"({"format": "nuadv-omega", "version": 1})";
  EXPECT_THROW(load_model(temp("other.json")), SchemaError);
  std::ofstream(temp("future.json")) << R"({"format": "nuadv-model", "version": 99})";
  EXPECT_THROW(load_model(temp("future.json")), SchemaError);
  std::ofstream(temp("short.json"))
      << R"({"format": "nuadv-model", "version": 1, "layer_dims": [2, 2]})";
  EXPECT_THROW(load_model(temp("short.json")), SchemaError);
  std::ofstream(temp("kind.json"))
      << R"({"format": "nuadv-omega", "version": 1, "kind": "weird", "dim": 2})";
  EXPECT_THROW(load_omega(temp("kind.json")), SchemaError);
  EXPECT_THROW(load_manifest(temp("missing.json")), ParseError);
}

}  // namespace
}  // namespace nuadv
