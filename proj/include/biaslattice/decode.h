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

#ifndef BIASLATTICE_DECODE_H_
#define BIASLATTICE_DECODE_H_

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "biaslattice/context.h"
#include "biaslattice/wordpiece.h"

namespace biaslattice {

inline constexpr std::string_view kEndOfSequence = "</s>";

struct TokenScore {
  std::string token;
  double logp = 0.0;
};

// First-pass model stand-in: next-token log-probabilities given the tokens
// emitted so far. The returned distribution, including kEndOfSequence, must
// normalize.
class EmissionOracle {
 public:
  virtual ~EmissionOracle() = default;
  virtual std::vector<TokenScore> Score(
      std::string_view utterance_id,
      std::span<const std::string> history) const = 0;
};

// Shallow fusion of one step: rnnt_logp + lambda * sf_increment.
double FuseStep(double rnnt_logp, double sf_increment, double lambda);

struct Hypothesis {
  std::vector<std::string> tokens;
  std::string text;
  double rnnt_logp = 0.0;
  double sf_score = 0.0;  // unscaled biasing score; positive boosts
  double fused = 0.0;     // rnnt_logp + lambda * sf_score
};

struct NBestList {
  std::string id;
  std::string ref;
  double lambda = 0.0;
  std::vector<Hypothesis> hyps;  // fused score descending
};

struct DecodeOptions {
  double lambda = 0.0;
  int beam_size = 16;
  int n_best = 8;
  // Apply biasing increments only at word boundaries.
  bool word_level = false;
  bool use_cache = true;
  int max_steps = 512;
};

// Ordering used everywhere for n-best lists: higher fused score first, ties by
// token sequence.
bool BetterHypothesis(const Hypothesis& a, const Hypothesis& b);

// Breadth-synchronous beam search over subword tokens. The biasing score of
// a token is the negated FST weight increment returned by the biaser, so
// catalog matches raise the fused score. `biaser` may be null.
// Throws Error when beam_size < n_best, n_best < 1, the vocabulary is empty,
// lambda is negative or non-finite, or the oracle returns an unnormalized
// distribution.
NBestList BeamSearch(const EmissionOracle& oracle, std::string_view utterance_id,
                     std::string_view reference, const ContextualBiaser* biaser,
                     const WordpieceVocab& vocab, const DecodeOptions& options,
                     LookaheadStats* stats = nullptr);

// Checks that log-sum-exp of the scores is 0 within `tolerance`.
void CheckNormalized(const std::vector<TokenScore>& scores,
                     double tolerance = 1e-6);

}  // namespace biaslattice

#endif  // BIASLATTICE_DECODE_H_
