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

#ifndef BIASLATTICE_WORDPIECE_H_
#define BIASLATTICE_WORDPIECE_H_

#include <iosfwd>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "biaslattice/word_fst.h"

namespace biaslattice {

// Subword inventory plus the word-boundary marker. A token is a delimiter
// either when it equals the marker (standalone form, "_") or when it ends with
// it (fused form, "er_").
class WordpieceVocab {
 public:
  // Throws Error if a piece is empty, if the delimiter occurs anywhere but at
  // the end of a piece, or if some character used by the pieces is missing as
  // a single-character piece.
  explicit WordpieceVocab(std::vector<std::string> pieces,
                          std::string delimiter = std::string(kDefaultDelimiter));

  const std::string& delimiter() const { return delimiter_; }
  const std::set<std::string>& pieces() const { return pieces_; }
  bool Contains(std::string_view piece) const;
  // True when the vocabulary holds nothing besides the delimiter.
  bool empty() const { return pieces_.size() <= 1; }

  bool IsDelimiter(std::string_view token) const;
  // Piece content of a token: "er_" -> "er", "_" -> "", "pl" -> "pl".
  std::string_view Content(std::string_view token) const;

  // Greedy longest-match left-to-right segmentation, terminated by the
  // standalone delimiter. With `fuse_delimiter`, the last piece is replaced by
  // its fused form when the vocabulary has it. Throws Error if `word` is empty
  // or contains a character with no single-character piece.
  std::vector<std::string> Segment(std::string_view word,
                                   bool fuse_delimiter = false) const;

  // Concatenated pieces of a token sequence, one word per delimiter.
  std::vector<std::string> Detokenize(
      const std::vector<std::string>& tokens) const;

 private:
  std::set<std::string> pieces_;
  std::string delimiter_;
  std::size_t max_piece_length_ = 0;
};

// One piece per line; `#delimiter <str>` overrides the default marker.
WordpieceVocab ReadVocab(std::istream& in);
WordpieceVocab ReadVocabFile(const std::string& path);

}  // namespace biaslattice

#endif  // BIASLATTICE_WORDPIECE_H_
