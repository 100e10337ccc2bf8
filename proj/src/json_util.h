// Copyright 2026 The Detfair Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Private helpers shared by the JSON readers.

#ifndef DETFAIR_SRC_JSON_UTIL_H_
#define DETFAIR_SRC_JSON_UTIL_H_

#include <algorithm>
#include <cstddef>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>

#include "detfair/error.h"
#include "json.hpp"

namespace detfair {

inline std::string ReadTextFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw IoError("error while reading '" + path + "'");
  return buffer.str();
}

inline void WriteTextFile(const std::string& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << text;
  if (!out) throw IoError("error while writing '" + path + "'");
}

// Parses `text`, translating parse errors into ValidationError with a
// 1-based line and column.
inline nlohmann::json ParseJsonText(std::string_view text,
                                    const std::string& what) {
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    std::size_t line = 1;
    std::size_t column = 1;
    const std::size_t limit = std::min<std::size_t>(
        e.byte > 0 ? e.byte - 1 : 0, text.size());
    for (std::size_t i = 0; i < limit; ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    std::ostringstream msg;
    msg << what << ": JSON parse error at line " << line << ", column "
        << column << ": " << e.what();
    throw ValidationError(msg.str());
  }
}

inline const nlohmann::json& RequireArray(const nlohmann::json& object,
                                          const char* key,
                                          const std::string& context) {
  if (!object.is_object() || !object.contains(key) ||
      !object[key].is_array()) {
    throw ValidationError(context + ": missing array field '" + key + "'");
  }
  return object[key];
}

inline std::string RequireString(const nlohmann::json& object, const char* key,
                                 const std::string& context) {
  if (!object.is_object() || !object.contains(key) ||
      !object[key].is_string()) {
    throw ValidationError(context + ": missing string field '" + key + "'");
  }
  return object[key].get<std::string>();
}

inline double RequireNumber(const nlohmann::json& object, const char* key,
                            const std::string& context) {
  if (!object.is_object() || !object.contains(key) ||
      !object[key].is_number()) {
    throw ValidationError(context + ": missing numeric field '" + key + "'");
  }
  return object[key].get<double>();
}

inline bool OptionalBool(const nlohmann::json& object, const char* key,
                         bool fallback, const std::string& context) {
  if (!object.contains(key) || object[key].is_null()) return fallback;
  if (!object[key].is_boolean()) {
    throw ValidationError(context + ": field '" + key + "' must be a boolean");
  }
  return object[key].get<bool>();
}

}  // namespace detfair

#endif  // DETFAIR_SRC_JSON_UTIL_H_
