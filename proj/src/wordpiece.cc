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

#include "biaslattice/wordpiece.h"

#include <fstream>

#include "biaslattice/error.h"
#include "biaslattice/text.h"

namespace biaslattice {

WordpieceVocab::WordpieceVocab(std::vector<std::string> pieces,
                               std::string delimiter)
    : delimiter_(std::move(delimiter)) {
  if (delimiter_.empty()) throw Error("delimiter must be non-empty");
  for (auto& piece : pieces) {
    if (piece.empty()) throw Error("empty wordpiece");
    if (piece == delimiter_) continue;
    std::string_view body = Content(piece);
    if (body.find(delimiter_) != std::string_view::npos) {
      throw Error("wordpiece '" + piece + "' embeds the delimiter");
    }
    max_piece_length_ = std::max(max_piece_length_, body.size());
    pieces_.insert(std::move(piece));
  }
  for (const auto& piece : pieces_) {
    for (char c : Content(piece)) {
      if (!pieces_.contains(std::string(1, c))) {
        throw Error("character '" + std::string(1, c) +
                    "' has no single-character wordpiece");
      }
    }
  }
  pieces_.insert(delimiter_);
}

bool WordpieceVocab::Contains(std::string_view piece) const {
  return pieces_.contains(std::string(piece));
}

bool WordpieceVocab::IsDelimiter(std::string_view token) const {
  return token.ends_with(delimiter_);
}

std::string_view WordpieceVocab::Content(std::string_view token) const {
  if (token.ends_with(delimiter_)) {
    token.remove_suffix(delimiter_.size());
  }
  return token;
}

std::vector<std::string> WordpieceVocab::Segment(std::string_view word,
                                                 bool fuse_delimiter) const {
  if (word.empty()) throw Error("cannot segment an empty word");
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start < word.size()) {
    std::size_t len = std::min(max_piece_length_, word.size() - start);
    for (; len > 0; --len) {
      if (pieces_.contains(std::string(word.substr(start, len)))) break;
    }
    if (len == 0) {
      throw Error("cannot segment '" + std::string(word) + "' at '" +
                  std::string(1, word[start]) + "'");
    }
    out.emplace_back(word.substr(start, len));
    start += len;
  }
  if (fuse_delimiter && pieces_.contains(out.back() + delimiter_)) {
    out.back() += delimiter_;
  } else {
    out.push_back(delimiter_);
  }
  return out;
}

std::vector<std::string> WordpieceVocab::Detokenize(
    const std::vector<std::string>& tokens) const {
  std::vector<std::string> words;
  std::string cur;
  for (const auto& tok : tokens) {
    cur += Content(tok);
    if (IsDelimiter(tok)) {
      if (!cur.empty()) words.push_back(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) words.push_back(std::move(cur));
  return words;
}

WordpieceVocab ReadVocab(std::istream& in) {
  std::vector<std::string> pieces;
  std::string delimiter(kDefaultDelimiter);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view view = Trim(line);
    if (view.empty()) continue;
    if (view.starts_with("#delimiter")) {
      std::string_view rest = Trim(view.substr(10));
      if (rest.empty()) {
        throw FormatError("#delimiter without a value", lineno,
                          FormatError::Unit::kLine);
      }
      delimiter = std::string(rest);
      continue;
    }
    if (view.find_first_of(" \t") != std::string_view::npos) {
      throw FormatError("wordpiece contains whitespace", lineno,
                        FormatError::Unit::kLine);
    }
    pieces.emplace_back(view);
  }
  try {
    return WordpieceVocab(std::move(pieces), std::move(delimiter));
  } catch (const FormatError&) {
    throw;
  } catch (const Error& e) {
    throw FormatError(e.what(), lineno, FormatError::Unit::kLine);
  }
}

WordpieceVocab ReadVocabFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open vocab '" + path + "'");
  return ReadVocab(in);
}

}  // namespace biaslattice
