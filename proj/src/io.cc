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

#include <cstdio>
#include <fstream>
#include <utility>

#include "json.hpp"
#include "nuadv/error.h"
#include "nuadv/text.h"

namespace nuadv {

namespace {

using nlohmann::json;

json vector_json(const Vector& v) {
  return json(std::vector<double>(v.data(), v.data() + v.size()));
}

Vector json_vector(const json& j) {
  const auto values = j.get<std::vector<double>>();
  return Eigen::Map<const Vector>(values.data(),
                                  static_cast<Eigen::Index>(values.size()));
}

json matrix_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    rows.push_back(vector_json(m.row(r).transpose()));
  }
  return rows;
}

Matrix json_matrix(const json& j, Eigen::Index cols) {
  Matrix m(static_cast<Eigen::Index>(j.size()), cols);
  for (std::size_t r = 0; r < j.size(); ++r) {
    const Vector row = json_vector(j[r]);
    if (row.size() != cols) throw SchemaError("ragged matrix row");
    m.row(static_cast<Eigen::Index>(r)) = row.transpose();
  }
  return m;
}

json omega_json(const OmegaTransform& omega) {
  json j;
  j["kind"] = kind_name(omega.kind());
  j["dim"] = omega.dim();
  j["label"] = omega.label();
  switch (omega.kind()) {
    case OmegaTransform::Kind::kIdentity:
      break;
    case OmegaTransform::Kind::kDiagonal:
      j["weights"] = vector_json(omega.weights());
      break;
    case OmegaTransform::Kind::kFull:
      j["matrix"] = matrix_json(omega.matrix());
      break;
    case OmegaTransform::Kind::kMask:
      j["mutable"] = omega.mutable_set();
      break;
  }
  return j;
}

OmegaTransform json_omega(const json& j) {
  const auto kind = j.at("kind").get<std::string>();
  const auto dim = j.at("dim").get<std::size_t>();
  std::optional<OmegaTransform> omega;
  if (kind == kind_name(OmegaTransform::Kind::kIdentity)) {
    omega = OmegaTransform::identity(dim);
  } else if (kind == kind_name(OmegaTransform::Kind::kDiagonal)) {
    omega = OmegaTransform::diagonal(json_vector(j.at("weights")));
  } else if (kind == kind_name(OmegaTransform::Kind::kFull)) {
    omega = OmegaTransform::full(
        json_matrix(j.at("matrix"), static_cast<Eigen::Index>(dim)));
  } else if (kind == kind_name(OmegaTransform::Kind::kMask)) {
    omega = OmegaTransform::mask(j.at("mutable").get<std::vector<bool>>());
  } else {
    throw SchemaError("unknown omega kind '" + kind + "'");
  }
  if (omega->dim() != dim) throw SchemaError("omega dimension mismatch");
  omega->set_label(j.value("label", ""));
  return *std::move(omega);
}

void write_json(const json& j, const std::string& path) {
  AtomicFile out(path);
  out.stream() << j.dump(1) << '\n';
  out.commit();
}

json read_json(const std::string& path, const std::string& format,
               int version) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw ParseError("'" + path + "': " + e.what());
  }
  if (!j.is_object() || j.value("format", "") != format) {
    throw SchemaError("'" + path + "' is not a " + format + " file");
  }
  if (j.value("version", -1) != version) {
    throw SchemaError("'" + path + "': unsupported " + format + " version");
  }
  return j;
}

// Wraps json access errors from a loader into SchemaError.
template <typename F>
auto guarded(const std::string& path, F&& f) {
  try {
    return f();
  } catch (const json::exception& e) {
    throw SchemaError("'" + path + "': " + e.what());
  } catch (const std::invalid_argument& e) {
    throw SchemaError("'" + path + "': " + e.what());
  }
}

}  // namespace

void save_model(const ModelFile& file, const std::string& path) {
  file.model.validate();
  json j;
  j["format"] = "nuadv-model";
  j["version"] = kModelFormatVersion;
  j["layer_dims"] = file.model.layer_dims;
  j["dropout_rate"] = file.model.dropout_rate;
  json layers = json::array();
  for (std::size_t i = 0; i < file.model.num_layers(); ++i) {
    layers.push_back({{"weights", matrix_json(file.model.weights[i])},
                      {"bias", vector_json(file.model.biases[i])}});
  }
  j["layers"] = layers;
  j["feature_names"] = file.feature_names;
  if (file.standardization) {
    j["standardization"] = {{"mean", vector_json(file.standardization->mean)},
                            {"stddev",
                             vector_json(file.standardization->stddev)}};
  }
  if (file.omega) j["omega"] = omega_json(*file.omega);
  j["train_epsilon"] = file.train_epsilon;
  write_json(j, path);
}

ModelFile load_model(const std::string& path) {
  const json j = read_json(path, "nuadv-model", kModelFormatVersion);
  return guarded(path, [&] {
    ModelFile f;
    f.model.layer_dims = j.at("layer_dims").get<std::vector<std::size_t>>();
    f.model.dropout_rate = j.at("dropout_rate").get<double>();
    const json& layers = j.at("layers");
    if (layers.size() + 1 != f.model.layer_dims.size()) {
      throw SchemaError("'" + path + "': layer count mismatch");
    }
    for (std::size_t i = 0; i < layers.size(); ++i) {
      f.model.weights.push_back(json_matrix(
          layers[i].at("weights"),
          static_cast<Eigen::Index>(f.model.layer_dims[i])));
      f.model.biases.push_back(json_vector(layers[i].at("bias")));
    }
    f.model.validate();
    f.feature_names = j.at("feature_names").get<std::vector<std::string>>();
    if (f.feature_names.size() != f.model.input_dim()) {
      throw SchemaError("'" + path + "': feature names do not match input");
    }
    if (j.contains("standardization")) {
      StandardizationStats s{json_vector(j["standardization"].at("mean")),
                             json_vector(j["standardization"].at("stddev"))};
      if (static_cast<std::size_t>(s.mean.size()) != f.model.input_dim() ||
          s.stddev.size() != s.mean.size()) {
        throw SchemaError("'" + path + "': standardization size mismatch");
      }
      f.standardization = std::move(s);
    }
    if (j.contains("omega")) f.omega = json_omega(j["omega"]);
    f.train_epsilon = j.value("train_epsilon", 0.0);
    return f;
  });
}

void save_omega(const OmegaTransform& omega, const std::string& path) {
  json j = omega_json(omega);
  j["format"] = "nuadv-omega";
  j["version"] = kOmegaFormatVersion;
  write_json(j, path);
}

OmegaTransform load_omega(const std::string& path) {
  const json j = read_json(path, "nuadv-omega", kOmegaFormatVersion);
  return guarded(path, [&] { return json_omega(j); });
}

void save_manifest(const RunManifest& m, const std::string& path) {
  json j;
  j["format"] = "nuadv-manifest";
  j["version"] = kManifestFormatVersion;
  j["command"] = m.command;
  j["config"] = m.config;
  j["seed"] = m.seed;
  j["inputs"] = m.inputs;
  j["outputs"] = m.outputs;
  j["tool_version"] = m.tool_version;
  write_json(j, path);
}

RunManifest load_manifest(const std::string& path) {
  const json j = read_json(path, "nuadv-manifest", kManifestFormatVersion);
  return guarded(path, [&] {
    RunManifest m;
    m.command = j.at("command").get<std::string>();
    m.config = j.at("config").get<std::map<std::string, std::string>>();
    m.seed = j.at("seed").get<std::uint64_t>();
    m.inputs = j.at("inputs").get<std::map<std::string, std::string>>();
    m.outputs = j.at("outputs").get<std::map<std::string, std::string>>();
    m.tool_version = j.value("tool_version", "");
    return m;
  });
}

std::string checksum_hex(const std::string& path) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(file_checksum(path)));
  return buf;
}

}  // namespace nuadv
