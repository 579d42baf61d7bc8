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

#ifndef BIASLATTICE_SYNTH_ORACLE_H_
#define BIASLATTICE_SYNTH_ORACLE_H_

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "biaslattice/decode.h"
#include "biaslattice/wordpiece.h"

namespace biaslattice {

struct SynthOracleConfig {
  // Probability mass leaked to confusable pieces; also the probability that a
  // confusable word position favours its confusion over the reference.
  double noise = 0.3;
  std::size_t max_confusions = 3;
  std::size_t max_edit_distance = 2;
  // Shorter words are treated as acoustically unambiguous.
  std::size_t min_confusable_length = 5;
  // Log-odds (nats) by which a favoured confusion beats the reference word,
  // drawn uniformly per position and spread over the differing pieces. The
  // other confusable pieces of a flipped word also outrank the reference
  // piece, by 30-100% of the favoured step.
  double margin_lo = 0.2;
  double margin_hi = 1.5;
};

// Seeded confusion-network oracle. Each reference word is segmented into
// pieces; every piece slot offers the reference piece plus the aligned pieces
// of up to `max_confusions` lexicon words of equal piece count within
// `max_edit_distance` characters. The distribution at step t depends only on
// t, so every hypothesis stays aligned with the reference slots; the final
// step offers only kEndOfSequence. Unflipped words leak `noise` of the slot
// mass to the confusable pieces.
class SynthOracle : public EmissionOracle {
 public:
  SynthOracle(WordpieceVocab vocab, std::vector<std::string> lexicon,
              SynthOracleConfig config, std::uint64_t seed);

  // Throws Error when a transcript word cannot be segmented.
  void AddUtterance(const std::string& id, std::string_view transcript);

  std::vector<TokenScore> Score(
      std::string_view utterance_id,
      std::span<const std::string> history) const override;

  // Confusions chosen for `word`, closest first.
  std::vector<std::string> Confusions(std::string_view word) const;

  std::size_t NumSteps(std::string_view utterance_id) const;

 private:
  using Slot = std::vector<TokenScore>;
  const std::vector<Slot>& Slots(std::string_view id) const;

  WordpieceVocab vocab_;
  std::vector<std::string> lexicon_;
  std::vector<std::vector<std::string>> lexicon_pieces_;
  SynthOracleConfig config_;
  std::uint64_t seed_;
  std::map<std::string, std::vector<Slot>, std::less<>> utterances_;
};

// Character-level Levenshtein distance.
std::size_t EditDistance(std::string_view a, std::string_view b);

// Stable 64-bit FNV-1a hash, used to derive per-utterance seeds.
std::uint64_t StableHash(std::string_view text, std::uint64_t seed = 0);

}  // namespace biaslattice

#endif  // BIASLATTICE_SYNTH_ORACLE_H_
