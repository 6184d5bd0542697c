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

// Scaling report over a results CSV: per-N error quantiles and a log-log fit.

#ifndef DTOMO_REPORT_HPP_
#define DTOMO_REPORT_HPP_

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace dtomo {

/// Malformed CSV; row() is the 1-based line number (header = 1).
class CsvError : public std::runtime_error {
 public:
  CsvError(std::size_t row, const std::string& what);
  std::size_t row() const { return row_; }

 private:
  std::size_t row_;
};

struct ErrorSample {
  std::int64_t n = 0;
  double half_diamond_error = 0.0;
};

/// Reads (N, diamond_error_final / 2) from a ResultRow CSV.
std::vector<ErrorSample> read_error_samples(const std::string& path);
std::vector<ErrorSample> parse_error_samples(const std::string& text);

struct ScalingPoint {
  std::int64_t n = 0;
  int count = 0;
  double median = 0.0;
  double q10 = 0.0;
  double q90 = 0.0;
};

struct ScalingReport {
  std::vector<ScalingPoint> points;
  double slope = 0.0;  // of log median vs log N
  double slope_stderr = 0.0;
  double intercept = 0.0;
};

/// Needs at least two distinct N with positive median error.
ScalingReport scaling_report(const std::vector<ErrorSample>& samples);

std::string format_report(const ScalingReport& r);

/// Log-log plot: quantile bars, medians and the fitted line.
std::string render_svg(const ScalingReport& r);

}  // namespace dtomo

#endif  // DTOMO_REPORT_HPP_
