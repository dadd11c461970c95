// Copyright 2026 The Coolcodec Authors. All Rights Reserved.
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

#ifndef COOLCODEC_CLI_CLI_H_
#define COOLCODEC_CLI_CLI_H_

#include <ostream>
#include <string>
#include <vector>

namespace coolcodec::cli {

// Process exit statuses.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitIo = 2;
inline constexpr int kExitCorruptStream = 3;
inline constexpr int kExitDivergence = 4;

// Runs one subcommand. args excludes the program name:
//   encode <image> <stream> [--lambda X | --quality 1..5] [--iterations N]
//          [--seed S] [--width W] [--levels L] [--report PATH]
//   decode <stream> <image> [--threads N]
//   eval <original> <decoded> <stream>
//   info <stream>
int Run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace coolcodec::cli

#endif  // COOLCODEC_CLI_CLI_H_
