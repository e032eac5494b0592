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

// Small text helpers shared by the file formats.

#ifndef NUADV_TEXT_H_
#define NUADV_TEXT_H_

#include <fstream>
#include <string>
#include <string_view>
#include <vector>

namespace nuadv {

// Splits on commas and trims surrounding whitespace from each cell. Quoting
// is not supported.
std::vector<std::string> split_csv_line(std::string_view line);

// Strict: the whole (trimmed) cell must be a finite number.
bool parse_double(std::string_view cell, double* out);

// Shortest representation that reads back to the same double.
std::string format_double(double v);

// Output file written to "<path>.tmp" and renamed over <path> on commit().
// Dropping it without commit() removes the temporary file.
class AtomicFile {
 public:
  explicit AtomicFile(std::string path);
  ~AtomicFile();
  AtomicFile(const AtomicFile&) = delete;
  AtomicFile& operator=(const AtomicFile&) = delete;

  std::ofstream& stream() { return out_; }
  void commit();

 private:
  std::string path_;
  std::string tmp_path_;
  std::ofstream out_;
  bool committed_ = false;
};

}  // namespace nuadv

#endif  // NUADV_TEXT_H_
