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

#include "dtomo/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "dtomo/stats.hpp"

namespace dtomo {
namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

template <typename T>
bool parse_number(const std::string& s, T& v) {
  if (s.empty()) return false;
  if constexpr (std::is_floating_point_v<T>) {
    char* end = nullptr;
    v = std::strtod(s.c_str(), &end);
    return end == s.c_str() + s.size() && std::isfinite(v);
  } else {
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    return ec == std::errc() && p == s.data() + s.size();
  }
}

std::string fmt(double v, int precision = 6) {
  std::ostringstream os;
  os.precision(precision);
  os << v;
  return os.str();
}

}  // namespace

CsvError::CsvError(std::size_t row, const std::string& what)
    : std::runtime_error("CSV row " + std::to_string(row) + ": " + what), row_(row) {}

std::vector<ErrorSample> parse_error_samples(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw CsvError(1, "missing header");
  const std::vector<std::string> header = split(line);
  std::map<std::string, std::size_t> col;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (!col.emplace(header[i], i).second) throw CsvError(1, "duplicate column '" + header[i] + "'");
  }
  for (const char* need : {"N", "diamond_error_final"}) {
    if (!col.count(need)) throw CsvError(1, std::string("missing column '") + need + "'");
  }
  const std::size_t n_col = col["N"];
  const std::size_t e_col = col["diamond_error_final"];
  std::vector<ErrorSample> out;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty() || line == "\r") continue;
    const std::vector<std::string> f = split(line);
    if (f.size() != header.size()) {
      throw CsvError(row, "expected " + std::to_string(header.size()) + " fields, found " +
                              std::to_string(f.size()));
    }
    ErrorSample s;
    double err = 0.0;
    if (!parse_number(f[n_col], s.n) || s.n < 1) throw CsvError(row, "bad N '" + f[n_col] + "'");
    if (!parse_number(f[e_col], err) || err < 0.0) {
      throw CsvError(row, "bad diamond_error_final '" + f[e_col] + "'");
    }
    s.half_diamond_error = 0.5 * err;
    out.push_back(s);
  }
  if (out.empty()) throw CsvError(row, "no data rows");
  return out;
}

std::vector<ErrorSample> read_error_samples(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_error_samples(ss.str());
}

ScalingReport scaling_report(const std::vector<ErrorSample>& samples) {
  std::map<std::int64_t, std::vector<double>> by_n;
  for (const ErrorSample& s : samples) by_n[s.n].push_back(s.half_diamond_error);
  ScalingReport r;
  std::vector<double> x, y;
  for (const auto& [n, errs] : by_n) {
    ScalingPoint p{n, static_cast<int>(errs.size()), median(errs), quantile(errs, 0.1),
                   quantile(errs, 0.9)};
    r.points.push_back(p);
    if (p.median > 0.0) {
      x.push_back(std::log(static_cast<double>(n)));
      y.push_back(std::log(p.median));
    }
  }
  if (x.size() < 2) {
    throw std::invalid_argument("scaling_report: need two N values with positive median error");
  }
  const LinearFit fit = least_squares(x, y);
  r.slope = fit.slope;
  r.slope_stderr = fit.slope_stderr;
  r.intercept = fit.intercept;
  return r;
}

std::string format_report(const ScalingReport& r) {
  std::ostringstream os;
  os << "N,count,median_half_diamond_error,q10,q90\n";
  for (const ScalingPoint& p : r.points) {
    os << p.n << ',' << p.count << ',' << fmt(p.median) << ',' << fmt(p.q10) << ',' << fmt(p.q90)
       << '\n';
  }
  os << "\nlog-log slope: " << fmt(r.slope) << " +/- " << fmt(r.slope_stderr) << " (stderr)\n";
  os << "intercept: " << fmt(r.intercept) << "\n";
  return os.str();
}

std::string render_svg(const ScalingReport& r) {
  constexpr double kW = 640, kH = 440, kLeft = 80, kRight = 20, kTop = 30, kBottom = 60;
  double x0 = 1e300, x1 = -1e300, y0 = 1e300, y1 = -1e300;
  for (const ScalingPoint& p : r.points) {
    const double lx = std::log10(static_cast<double>(p.n));
    x0 = std::min(x0, lx);
    x1 = std::max(x1, lx);
    for (double v : {p.q10, p.median, p.q90}) {
      if (v > 0.0) {
        y0 = std::min(y0, std::log10(v));
        y1 = std::max(y1, std::log10(v));
      }
    }
  }
  x0 = std::floor(x0 * 2.0) / 2.0;
  x1 = std::ceil(x1 * 2.0) / 2.0;
  y0 = std::floor(y0);
  y1 = std::ceil(y1);
  if (x1 <= x0) x1 = x0 + 1.0;
  if (y1 <= y0) y1 = y0 + 1.0;
  auto px = [&](double lx) { return kLeft + (lx - x0) / (x1 - x0) * (kW - kLeft - kRight); };
  auto py = [&](double ly) { return kH - kBottom - (ly - y0) / (y1 - y0) * (kH - kTop - kBottom); };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\"" << kH
     << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<line x1=\"" << kLeft << "\" y1=\"" << kH - kBottom << "\" x2=\"" << kW - kRight
     << "\" y2=\"" << kH - kBottom << "\" stroke=\"black\"/>\n";
  os << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft << "\" y2=\""
     << kH - kBottom << "\" stroke=\"black\"/>\n";
  for (double t = std::ceil(x0 * 2.0) / 2.0; t <= x1 + 1e-9; t += 0.5) {
    os << "<line x1=\"" << px(t) << "\" y1=\"" << kH - kBottom << "\" x2=\"" << px(t) << "\" y2=\""
       << kH - kBottom + 5 << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << px(t) << "\" y=\"" << kH - kBottom + 20
       << "\" text-anchor=\"middle\">1e" << fmt(t, 3) << "</text>\n";
  }
  for (double t = y0; t <= y1 + 1e-9; t += 1.0) {
    os << "<line x1=\"" << kLeft - 5 << "\" y1=\"" << py(t) << "\" x2=\"" << kLeft << "\" y2=\""
       << py(t) << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << kLeft - 8 << "\" y=\"" << py(t) + 4 << "\" text-anchor=\"end\">1e"
       << fmt(t, 3) << "</text>\n";
  }
  os << "<text x=\"" << (kLeft + kW - kRight) / 2 << "\" y=\"" << kH - 15
     << "\" text-anchor=\"middle\">N</text>\n";
  os << "<text x=\"20\" y=\"" << (kTop + kH - kBottom) / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 20 "
     << (kTop + kH - kBottom) / 2 << ")\">median half diamond error</text>\n";
  for (const ScalingPoint& p : r.points) {
    const double x = px(std::log10(static_cast<double>(p.n)));
    if (p.q10 > 0.0 && p.q90 > 0.0) {
      os << "<line x1=\"" << x << "\" y1=\"" << py(std::log10(p.q10)) << "\" x2=\"" << x
         << "\" y2=\"" << py(std::log10(p.q90)) << "\" stroke=\"#888\"/>\n";
    }
    if (p.median > 0.0) {
      os << "<circle cx=\"" << x << "\" cy=\"" << py(std::log10(p.median))
         << "\" r=\"4\" fill=\"#1f77b4\"/>\n";
    }
  }
  // ln-space fit drawn in log10 coordinates.
  const double lx_a = x0, lx_b = x1;
  const double ly_a = (r.intercept + r.slope * lx_a * std::log(10.0)) / std::log(10.0);
  const double ly_b = (r.intercept + r.slope * lx_b * std::log(10.0)) / std::log(10.0);
  os << "<line x1=\"" << px(lx_a) << "\" y1=\"" << py(ly_a) << "\" x2=\"" << px(lx_b) << "\" y2=\""
     << py(ly_b) << "\" stroke=\"#d62728\" stroke-dasharray=\"6 4\"/>\n";
  os << "<text x=\"" << kW - kRight - 5 << "\" y=\"" << kTop + 5
     << "\" text-anchor=\"end\">slope " << fmt(r.slope, 4) << " &#177; " << fmt(r.slope_stderr, 2)
     << "</text>\n";
  os << "</svg>\n";
  return os.str();
}

}  // namespace dtomo
