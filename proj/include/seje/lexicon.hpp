/* Copyright 2026 The SEJE Authors.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#pragma once

#include <string>
#include <vector>

namespace seje::lexicon {

// Word lists shared by the synthetic generator and the part-of-speech tagger.
const std::vector<std::string>& ingredients();
const std::vector<std::string>& utensils();
const std::vector<std::string>& actions();
const std::vector<std::string>& dishes();
const std::vector<std::string>& descriptors();
const std::vector<std::string>& quantities();
const std::vector<std::string>& units();
const std::vector<std::string>& preparations();
/// Determiners, prepositions, conjunctions, numerals and similar closed-class words.
const std::vector<std::string>& function_words();

/// Pronounceable pseudo-word for index `n` (deterministic, distinct per n).
std::string pseudo_word(int n);

}  // namespace seje::lexicon
