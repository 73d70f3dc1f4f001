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

#ifndef EEAC_ERRORS_H_
#define EEAC_ERRORS_H_

#include <stdexcept>
#include <string>
#include <vector>

#include "eeac/coalition.h"

namespace eeac {

// A file or record does not conform to its versioned schema.
class SchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Stored checksum disagrees with the document body.
class ChecksumError : public SchemaError {
 public:
  using SchemaError::SchemaError;
};

// Non-finite weights, losses or intermediates.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A pairs-kind oracle was asked for coalitions it does not hold. Carries every
// coalition that was needed so the caller can emit a single request file.
class MissingEntryError : public std::runtime_error {
 public:
  MissingEntryError(std::string case_id, std::vector<Coalition> missing);

  const std::string& case_id() const { return case_id_; }
  const std::vector<Coalition>& missing() const { return missing_; }

 private:
  std::string case_id_;
  std::vector<Coalition> missing_;
};

}  // namespace eeac

#endif  // EEAC_ERRORS_H_
