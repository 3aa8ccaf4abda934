// Copyright 2026 The rydgate Authors
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

#include <ostream>

namespace rydgate::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kInvalidConfig = 2,
  kNumericFailure = 3,
  kCalibrationFailed = 4,
};

/// Entry point for `rydgate <subcommand> --config PATH [--out DIR]
/// [--workers N] [--seed U64] [--force]`. Artifacts are written only after
/// the whole computation succeeded.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace rydgate::cli
