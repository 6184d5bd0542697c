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

// Goodness-of-fit helpers used by the distribution checks.

#ifndef DTOMO_STATS_HPP_
#define DTOMO_STATS_HPP_

#include <cstdint>
#include <functional>
#include <vector>

namespace dtomo {

double beta_cdf(double x, double alpha, double beta);

struct KsResult {
  double statistic = 0.0;
  double p_value = 0.0;
  std::size_t n = 0;
};

/// One-sample Kolmogorov-Smirnov test of `samples` against `cdf`.
KsResult ks_test(std::vector<double> samples, const std::function<double(double)>& cdf);

/// Asymptotic Kolmogorov survival function with the Stephens small-sample
/// correction.
double ks_p_value(double statistic, std::size_t n);

/// Runs `attempt(seed)` for up to `retries` seeds derived from `base_seed`;
/// passes as soon as one attempt has p > alpha. Returns the last result and
/// whether any attempt passed.
struct RetriedKs {
  bool passed = false;
  int attempts = 0;
  KsResult last;
};
RetriedKs ks_with_retries(const std::function<KsResult(std::uint64_t)>& attempt,
                          std::uint64_t base_seed, double alpha = 0.01, int retries = 3);

/// One-sided exact binomial test of H0: p >= p0 given `successes` out of
/// `trials`. Returns Pr[Bin(trials, p0) <= successes].
double binomial_lower_tail(int successes, int trials, double p0);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_stderr = 0.0;
};

/// Ordinary least squares y = intercept + slope * x.
LinearFit least_squares(const std::vector<double>& x, const std::vector<double>& y);

double quantile(std::vector<double> values, double q);
double median(std::vector<double> values);

}  // namespace dtomo

#endif  // DTOMO_STATS_HPP_
