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


// Versioned JSON files for trained models, constraint transforms and run
// manifests. Doubles are written in shortest round-trip form, so a
// save/load cycle is bit-exact.

#ifndef NUADV_IO_H_
#define NUADV_IO_H_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "nuadv/data.h"
#include "nuadv/net.h"
#include "nuadv/omega.h"

namespace nuadv {

inline constexpr int kModelFormatVersion = 1;
inline constexpr int kOmegaFormatVersion = 1;
inline constexpr int kManifestFormatVersion = 1;

// A trained classifier together with what is needed to apply it to raw
// feature rows.
struct ModelFile {
  MlpModel model;
  std::vector<std::string> feature_names;
  std::optional<StandardizationStats> standardization;
  // Constraint the model was adversarially trained against, if any.
  std::optional<OmegaTransform> omega;
  double train_epsilon = 0.0;
};

// Throws ParseError / SchemaError on malformed or wrong-version files.
void save_model(const ModelFile& file, const std::string& path);
ModelFile load_model(const std::string& path);

void save_omega(const OmegaTransform& omega, const std::string& path);
OmegaTransform load_omega(const std::string& path);

struct RunManifest {
  std::string command;
  std::map<std::string, std::string> config;  // resolved key-values
  std::uint64_t seed = 0;
  std::map<std::string, std::string> inputs;   // path -> checksum (hex)
  std::map<std::string, std::string> outputs;  // path -> checksum (hex)
  std::string tool_version;
};

void save_manifest(const RunManifest& manifest, const std::string& path);
RunManifest load_manifest(const std::string& path);

// 16 lowercase hex digits of file_checksum(path).
std::string checksum_hex(const std::string& path);

}  // namespace nuadv

#endif  // NUADV_IO_H_
