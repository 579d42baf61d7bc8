// Copyright 2026 The BiasLattice Authors
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

#ifndef BIASLATTICE_TEXT_H_
#define BIASLATTICE_TEXT_H_

#include <string>
#include <string_view>
#include <vector>

namespace biaslattice {

// Splits on ASCII whitespace, dropping empty fields.
std::vector<std::string> SplitWords(std::string_view text);

std::string JoinWords(const std::vector<std::string>& words,
                      std::string_view sep = " ");

std::string ToLower(std::string_view text);

// Lowercase, punctuation stripped, whitespace collapsed. Used before scoring.
std::string NormalizeTranscript(std::string_view text);

// Splits one line on tab characters, keeping empty fields.
std::vector<std::string> SplitTabs(std::string_view line);

std::string_view Trim(std::string_view text);

}  // namespace biaslattice

#endif  // BIASLATTICE_TEXT_H_
