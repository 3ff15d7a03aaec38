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

#include <filesystem>
#include <ostream>

#include "mixgan/cli/run_config.hpp"
#include "mixgan/cli/verify.hpp"
#include "mixgan/metrics.hpp"

namespace mixgan::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitVerifyFailed = 1,
  kExitUsage = 2,
  kExitNumerical = 3,
};

int cmd_verify(std::ostream& os, const ValueForms& forms = {});

/// Trains one run per seed. A single seed writes into output_root(config);
/// several seeds write into seed_<n>/ subdirectories, trained in parallel.
int cmd_train(const RunConfig& config, std::ostream& os);

/// Writes --n samples from generator --generator (1-based) or from the
/// mixture (with a provenance column) to <out>/samples.csv.
int cmd_sample(const RunConfig& config, std::ostream& os);

/// Scores two sample files, or the first two generators of a checkpoint,
/// against the synthetic centers; writes <out>/report.csv.
int cmd_metrics(const RunConfig& config, std::ostream& os);

/// Dispatch on config.task, mapping exceptions to exit codes.
int run_task(const RunConfig& config, std::ostream& os, std::ostream& err);

/// Report row shared by train-synthetic and metrics.
CsvTable separation_table(const SeparationReport& r, const ModeHistogram& a,
                          const ModeHistogram& b, double hist_js);

}  // namespace mixgan::cli
