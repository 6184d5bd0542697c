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

#include "dtomo/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace dtomo {
namespace {

int read_dim(const nlohmann::json& doc, const char* key) {
  if (!doc.contains(key)) throw ParseError(std::string("missing field '") + key + "'");
  const auto& v = doc.at(key);
  if (!v.is_number_integer() || v.get<long long>() < 1) {
    throw ParseError(std::string("field '") + key + "' must be a positive integer");
  }
  return v.get<int>();
}

}  // namespace

nlohmann::json matrix_to_json(const ComplexMatrix& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Index r = 0; r < m.rows(); ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (Index c = 0; c < m.cols(); ++c) row.push_back({m(r, c).real(), m(r, c).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

ComplexMatrix matrix_from_json(const nlohmann::json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) throw ParseError(where + ": expected a non-empty array of rows");
  const std::size_t rows = j.size();
  if (!j[0].is_array() || j[0].empty()) throw ParseError(where + ": row 0 is not a non-empty array");
  const std::size_t cols = j[0].size();
  ComplexMatrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    if (!j[r].is_array() || j[r].size() != cols) {
      throw ParseError(where + ": row " + std::to_string(r) + " has the wrong length");
    }
    for (std::size_t c = 0; c < cols; ++c) {
      const auto& e = j[r][c];
      if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
        throw ParseError(where + ": entry (" + std::to_string(r) + ", " + std::to_string(c) +
                         ") is not a [re, im] pair");
      }
      const double re = e[0].get<double>();
      const double im = e[1].get<double>();
      if (!std::isfinite(re) || !std::isfinite(im)) {
        throw ParseError(where + ": non-finite entry");
      }
      m(r, c) = Complex(re, im);
    }
  }
  return m;
}

nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError("'" + path + "': " + e.what());
  }
}

void write_json_file(const std::string& path, const nlohmann::json& doc) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << doc.dump(2) << "\n";
}

ChannelDocument parse_channel(const nlohmann::json& doc) {
  if (!doc.is_object()) throw ParseError("channel document must be an object");
  const DimPair dims{read_dim(doc, "d_out"), read_dim(doc, "d_in")};
  if (!doc.contains("kind") || !doc["kind"].is_string()) throw ParseError("missing field 'kind'");
  const std::string kind = doc["kind"].get<std::string>();
  try {
    if (kind == "kraus") {
      if (!doc.contains("kraus_ops") || !doc["kraus_ops"].is_array()) {
        throw ParseError("kind 'kraus' needs an array 'kraus_ops'");
      }
      std::vector<ComplexMatrix> ops;
      for (std::size_t i = 0; i < doc["kraus_ops"].size(); ++i) {
        ops.push_back(matrix_from_json(doc["kraus_ops"][i], "kraus_ops[" + std::to_string(i) + "]"));
      }
      KrausChannel c(dims, std::move(ops));
      ChoiOperator j = kraus_to_choi(c);
      return ChannelDocument{dims, std::move(j), std::move(c)};
    }
    if (kind == "choi") {
      if (!doc.contains("choi")) throw ParseError("kind 'choi' needs a matrix 'choi'");
      return ChannelDocument{dims, ChoiOperator::ingest(dims, matrix_from_json(doc["choi"], "choi")),
                             std::nullopt};
    }
  } catch (const ParseError&) {
    throw;
  } catch (const std::exception& e) {
    throw ParseError(e.what());
  }
  throw ParseError("unknown kind '" + kind + "' (expected 'kraus' or 'choi')");
}

ChannelDocument read_channel_file(const std::string& path) {
  try {
    return parse_channel(read_json_file(path));
  } catch (const ParseError& e) {
    const std::string what = e.what();
    if (what.rfind("'" + path + "'", 0) == 0 || what.rfind("cannot open", 0) == 0) throw;
    throw ParseError("'" + path + "': " + what);
  }
}

nlohmann::json channel_to_json(const KrausChannel& c) {
  nlohmann::json ops = nlohmann::json::array();
  for (const ComplexMatrix& k : c.kraus_ops()) ops.push_back(matrix_to_json(k));
  return {{"d_in", c.dims().d_in}, {"d_out", c.dims().d_out}, {"kind", "kraus"}, {"kraus_ops", ops}};
}

PovmDocument parse_povm(const nlohmann::json& doc) {
  if (!doc.is_object()) throw ParseError("POVM document must be an object");
  PovmDocument out;
  out.dim = read_dim(doc, "dim");
  if (!doc.contains("effects") || !doc["effects"].is_array() || doc["effects"].empty()) {
    throw ParseError("POVM document needs a non-empty array 'effects'");
  }
  for (std::size_t i = 0; i < doc["effects"].size(); ++i) {
    ComplexMatrix e = matrix_from_json(doc["effects"][i], "effects[" + std::to_string(i) + "]");
    if (e.rows() != out.dim || e.cols() != out.dim) {
      throw ParseError("effects[" + std::to_string(i) + "] is not dim x dim");
    }
    out.effects.push_back(std::move(e));
  }
  return out;
}

PovmDocument read_povm_file(const std::string& path) {
  try {
    return parse_povm(read_json_file(path));
  } catch (const ParseError& e) {
    const std::string what = e.what();
    if (what.rfind("'" + path + "'", 0) == 0 || what.rfind("cannot open", 0) == 0) throw;
    throw ParseError("'" + path + "': " + what);
  }
}

}  // namespace dtomo
