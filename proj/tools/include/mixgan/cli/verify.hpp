// Copyright 2026 The mixgan Authors
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
#pragma once

#include <functional>
#include <ostream>
#include <string>
#include <vector>

#include "mixgan/divergences.hpp"

namespace mixgan::cli {

struct CheckResult {
  std::string name;
  double observed = 0.0;   // worst deviation seen
  double tolerance = 0.0;
  bool passed = false;
};

/// The closed forms under test. Tests swap in a mutated form to confirm the
/// suite notices.
struct ValueForms {
  std::function<double(const DiscreteDistribution&, const MixtureModel&)> at_optimum = value_at_optimum;
  std::function<double(const DiscreteDistribution&, const MixtureModel&)> kl_form = value_kl_form;
  std::function<double(const DiscreteDistribution&, const MixtureModel&)> js_form = value_js_form;
};

std::vector<CheckResult> run_verification(const ValueForms& forms = {}, unsigned seed = 2017);

/// Prints one line per check; returns 0 when all pass, 1 otherwise.
int report_verification(const std::vector<CheckResult>& results, std::ostream& os);

}  // namespace mixgan::cli
