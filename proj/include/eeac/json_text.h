/*
 * Copyright 2026 The EEAC Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef EEAC_JSON_TEXT_H_
#define EEAC_JSON_TEXT_H_

#include <filesystem>
#include <string>

#include "json.hpp"

namespace eeac {

using Json = nlohmann::ordered_json;

// Byte-stable text form: two-space indentation, keys in insertion order,
// scalar-only arrays on one line, doubles printed with 17 significant digits.
std::string DumpCanonical(const Json& value);

// FNV-1a 64 of DumpCanonical(value), as 16 lowercase hex digits.
std::string Checksum(const Json& value);

// Parses a whole file; throws SchemaError on unreadable or malformed input.
Json ReadJsonFile(const std::filesystem::path& path);

// Writes through a sibling temporary and renames, so readers never observe a
// partial file.
void WriteTextFile(const std::filesystem::path& path, const std::string& text);

}  // namespace eeac

#endif  // EEAC_JSON_TEXT_H_
