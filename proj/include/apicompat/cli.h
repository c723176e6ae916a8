/*
 * Copyright (C) 2026 The apicompat Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// The apicompat command line: one entry point per pipeline stage plus
// `pipeline`, which chains extract, diff, classify, detect, kb-export and
// stats into one run directory.

#pragma once

#include <map>
#include <ostream>
#include <string>
#include <vector>

namespace apicompat::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitPartial = 2;
inline constexpr int kExitUsage = 64;
inline constexpr int kExitInterrupted = 130;

inline constexpr const char* kVersion = "0.1.0";

using Environment = std::map<std::string, std::string>;

/// `args` excludes the program name. Option values are resolved with
/// precedence flags > APICOMPAT_<FLAG> environment variables > --config
/// file. When `env` is null the process environment is used.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
        const Environment* env = nullptr);

/// The --help text.
std::string help_text();

}  // namespace apicompat::cli
