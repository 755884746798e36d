// Copyright 2026 The cpgate Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <ostream>

namespace cpgate::cli {

enum ExitCode : int {
    kSuccess = 0,
    kVerificationFailed = 1,
    kUsage = 2,
    kSequenceError = 3,
    kNonConvergence = 4,
};

/// Entry point shared by the `cpgate` binary and the tests. Subcommands:
/// levels, truth-table, run, sweep, budget.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace cpgate::cli
