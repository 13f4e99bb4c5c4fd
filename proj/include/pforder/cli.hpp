// Copyright 2026 The pforder Authors
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

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace pforder::cli {

/// Exit codes of the command-line front end.
inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntimeError = 1;
inline constexpr int kExitUsageError = 2;

/// Flat `key=value` lines; `#` starts a comment. Keys are flag names without
/// the leading dashes.
std::map<std::string, std::string> parse_config_text(const std::string& text);

/// `args` excludes the program name. CSV or sequence text goes to `out`
/// unless --out is given; usage text and diagnostics go to `err`.
int parse_and_dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pforder::cli
