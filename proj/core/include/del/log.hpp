// Copyright 2026 The DEL Authors
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

#include <cstdio>
#include <cstdlib>
#include <cstring>

namespace del::log {

enum class Level { debug = 0, info = 1, warn = 2, quiet = 3 };

// Verbosity comes from the DEL_LOG environment variable
// (debug | info | warn | quiet); default is warn.
inline Level threshold() {
  static const Level level = [] {
    const char* env = std::getenv("DEL_LOG");
    if (env == nullptr) return Level::warn;
    if (std::strcmp(env, "debug") == 0) return Level::debug;
    if (std::strcmp(env, "info") == 0) return Level::info;
    if (std::strcmp(env, "quiet") == 0) return Level::quiet;
    return Level::warn;
  }();
  return level;
}

inline bool enabled(Level level) { return level >= threshold(); }

template <typename... Args>
void emit(Level level, const char* tag, const char* fmt, Args... args) {
  if (!enabled(level)) return;
  std::fprintf(stderr, "[del %s] ", tag);
  std::fprintf(stderr, fmt, args...);
  std::fputc('\n', stderr);
}

template <typename... Args>
void debug(const char* fmt, Args... args) {
  emit(Level::debug, "debug", fmt, args...);
}
template <typename... Args>
void info(const char* fmt, Args... args) {
  emit(Level::info, "info", fmt, args...);
}
template <typename... Args>
void warn(const char* fmt, Args... args) {
  emit(Level::warn, "warn", fmt, args...);
}

}  // namespace del::log
