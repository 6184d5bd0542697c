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

// Fixed-seed property suites run by `dtomo verify`.

#ifndef DTOMO_VERIFY_HPP_
#define DTOMO_VERIFY_HPP_

#include <string>
#include <vector>

namespace dtomo {

struct PropertyResult {
  std::string suite;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

/// sdp, distributions, lemmas, pipeline, povm.
const std::vector<std::string>& verify_suites();

/// Runs `suite` ("all" runs every suite). Throws std::invalid_argument for
/// an unknown name. Each result is passed to `on_result` as it completes.
std::vector<PropertyResult> run_verify(const std::string& suite,
                                       void (*on_result)(const PropertyResult&) = nullptr);

}  // namespace dtomo

#endif  // DTOMO_VERIFY_HPP_
