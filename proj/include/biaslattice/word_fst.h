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

#ifndef BIASLATTICE_WORD_FST_H_
#define BIASLATTICE_WORD_FST_H_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "biaslattice/range_table.h"

namespace biaslattice {

using StateId = std::int32_t;
inline constexpr StateId kNoState = -1;

inline constexpr std::string_view kDefaultDelimiter = "_";
inline constexpr double kDefaultCatalogWeight = -1.0;

struct WordArc {
  std::string word;
  double weight = 0.0;  // tropical cost; negative values boost
  StateId next = kNoState;

  bool operator==(const WordArc&) const = default;
};

struct CatalogEntry {
  std::vector<std::string> phrase;
  double weight = kDefaultCatalogWeight;  // per-word arc weight
};

// Word-level weighted acceptor over catalog phrases. Arcs leaving a state are
// kept in strictly increasing byte-lexicographic order of their words so that
// all words sharing a string prefix occupy one contiguous index range.
// Immutable once constructed; safe to share across threads.
class WordFst {
 public:
  struct State {
    std::vector<WordArc> arcs;
    bool final = false;
    bool phi_loop = false;

    bool operator==(const State&) const = default;
  };

  // A single non-final start state without arcs.
  WordFst();

  // Validates and indexes `states`. Throws Error if arcs are unsorted or
  // duplicated, a target is out of range, a weight is not finite, or a state
  // is unreachable from `start`.
  WordFst(std::vector<State> states, StateId start);

  StateId Start() const { return start_; }
  StateId NumStates() const { return static_cast<StateId>(states_.size()); }
  bool IsFinal(StateId s) const { return state(s).final; }
  bool HasPhiLoop(StateId s) const { return state(s).phi_loop; }
  std::size_t NumArcs(StateId s) const { return state(s).arcs.size(); }
  std::size_t TotalArcs() const;

  std::span<const WordArc> Arcs(StateId s) const { return state(s).arcs; }

  // Half-open slice [lo, hi) of the sorted arcs of `s`.
  std::span<const WordArc> ArcsInRange(StateId s, std::size_t lo,
                                       std::size_t hi) const;

  // Min arc weight and max word length over [lo, hi); O(1). Requires lo < hi.
  double MinWeight(StateId s, std::size_t lo, std::size_t hi) const;
  std::size_t MaxWordLength(StateId s, std::size_t lo, std::size_t hi) const;

  // Index of the arc labelled exactly `word`, if any.
  std::optional<std::size_t> FindArc(StateId s, std::string_view word) const;

  const std::vector<State>& states() const { return states_; }

  // Structural equality (states, arcs, flags, start).
  bool operator==(const WordFst& other) const {
    return start_ == other.start_ && states_ == other.states_;
  }

 private:
  const State& state(StateId s) const;
  void Index();

  std::vector<State> states_;
  StateId start_ = 0;
  std::vector<RangeTable<double, MinOf<double>>> min_weight_;
  std::vector<RangeTable<std::uint32_t, MaxOf<std::uint32_t>>> max_length_;
};

// Builds a trie-shaped FST: phrases share word prefixes, every word arc carries
// the weight of its entry, phrase ends are final, and the start state carries
// the phi self-loop flag. Words are lowercased. Throws Error on an empty entry
// list, an empty phrase or word, a duplicate phrase, a word containing
// `delimiter`, a non-finite weight, or entries that would share an arc with
// different weights.
WordFst BuildCatalogFst(const std::vector<CatalogEntry>& entries,
                        std::string_view delimiter = kDefaultDelimiter);

// Catalog text: one `phrase<TAB>weight` per line, weight optional, `#`
// comments. Throws FormatError with the line number.
std::vector<CatalogEntry> ReadCatalog(std::istream& in);
std::vector<CatalogEntry> ReadCatalogFile(const std::string& path);

// Versioned binary format with magic `BLFST1`, little-endian integers and
// length-prefixed strings.
std::string SerializeFst(const WordFst& fst);
WordFst DeserializeFst(std::string_view bytes);  // FormatError with offset

void WriteFstFile(const WordFst& fst, const std::string& path);
WordFst ReadFstFile(const std::string& path);

// Loads either a serialized FST or a catalog text file (sniffs the magic).
WordFst LoadFstOrCatalog(const std::string& path,
                         std::string_view delimiter = kDefaultDelimiter);

// Every distinct arc label in the FST.
std::vector<std::string> FstWords(const WordFst& fst);

}  // namespace biaslattice

#endif  // BIASLATTICE_WORD_FST_H_
