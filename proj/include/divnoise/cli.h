//
// Copyright 2026 The Divnoise Authors
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
//
// Command-line front end: calibration reports, per-mechanism MSE tables,
// sample streams, shuffle experiments, and the verification suite.  The
// entry point is in-process so tests can drive it and capture its output.
//
// Exit codes: 0 success, 2 precondition violation (including bad flags),
// 3 verification failure, 4 sampler abort.  The env var DIVNOISE_SEED
// supplies the default seed; --seed overrides it.

#ifndef DIVNOISE_CLI_H_
#define DIVNOISE_CLI_H_

#include <iosfwd>
#include <string>
#include <vector>

namespace divnoise {

// Runs one CLI invocation.  `args` excludes the program name.  Tabular and
// sample output goes to `out` (or the --out path when given); diagnostics go
// to `err`.  Returns the process exit code.
int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err);

// Convenience wrapper for main(): forwards argv[1..] to std::cout/std::cerr.
int RunCli(int argc, const char* const* argv);

}  // namespace divnoise

#endif  // DIVNOISE_CLI_H_
