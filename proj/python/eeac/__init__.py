# Copyright 2026 The EEAC Authors.
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     https://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Concept-level Shapley explanations through a per-input surrogate."""

from eeac._core import (
    DEFAULT_SAMPLES_PER_CONCEPT,
    FORMAT_VERSION,
    MissingEntryError,
    NumericalError,
    SchemaError,
    auc,
    compare,
    evaluate,
    explain,
    load_case,
    merge_response,
    save_case,
    selftest,
    shapley,
    shapley_table,
    synth_case,
    synthesize_cases,
    train_surrogate,
)

__all__ = [
    "DEFAULT_SAMPLES_PER_CONCEPT",
    "FORMAT_VERSION",
    "MissingEntryError",
    "NumericalError",
    "SchemaError",
    "auc",
    "compare",
    "evaluate",
    "explain",
    "load_case",
    "merge_response",
    "save_case",
    "selftest",
    "shapley",
    "shapley_table",
    "synth_case",
    "synthesize_cases",
    "train_surrogate",
]
