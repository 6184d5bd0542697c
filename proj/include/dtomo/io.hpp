// Copyright 2026 The dtomo Authors
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

// JSON documents for channels and measurements. Matrices are nested arrays
// of rows, each entry a [re, im] pair:
//
//   {"d_in": 2, "d_out": 2, "kind": "kraus",
//    "kraus_ops": [[[[1,0],[0,0]], [[0,0],[1,0]]]]}
//   {"d_in": 2, "d_out": 2, "kind": "choi", "choi": [[[0.5,0], ...], ...]}
//   {"dim": 2, "effects": [[[[1,0],[0,0]], [[0,0],[0,0]]]]}

#ifndef DTOMO_IO_HPP_
#define DTOMO_IO_HPP_

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "dtomo/channels.hpp"

namespace dtomo {

/// Malformed or invalid input document.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

nlohmann::json matrix_to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const nlohmann::json& j, const std::string& where);

struct ChannelDocument {
  DimPair dims;
  ChoiOperator choi;
  std::optional<KrausChannel> kraus;  // set for kind = kraus
};

ChannelDocument parse_channel(const nlohmann::json& doc);
ChannelDocument read_channel_file(const std::string& path);
nlohmann::json channel_to_json(const KrausChannel& c);
void write_json_file(const std::string& path, const nlohmann::json& doc);
nlohmann::json read_json_file(const std::string& path);

struct PovmDocument {
  int dim = 0;
  std::vector<ComplexMatrix> effects;  // one effect: binary {E, I - E}
};

PovmDocument parse_povm(const nlohmann::json& doc);
PovmDocument read_povm_file(const std::string& path);

}  // namespace dtomo

#endif  // DTOMO_IO_HPP_
