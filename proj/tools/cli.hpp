// Copyright 2026 The purelab Authors
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

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace purelab::cli {

enum class Exit : int { Ok = 0, CheckFailed = 1, Usage = 2 };

/// Parsed command line. Unknown options are rejected by the parser.
struct RunConfig {
    std::string command;
    std::string theory = "quantum";
    bool theory_explicit = false;  ///< set when --theory appeared on the command line
    std::vector<int> dims{2};
    uint64_t seed = 0;
    double tol = 1e-9;
    std::string format = "json";
    std::string out;
    std::string expect;

    std::string script;
    std::string kind = "state";
    std::string a;
    std::string b;
    double prior = 0.5;
    int restarts = 50;
    std::string channel = "depolarize(0.2)";
    std::string code = "bitflip3";
    std::string comb_case = "random";
    int memory = 2;
    int env = 0;
    int samples = 50;
};

/// Runs one invocation; `args` excludes the program name. Reports go to `out` (or
/// to --out), diagnostics to `err`.
int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

}  // namespace purelab::cli
