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

#ifndef BIASLATTICE_SECOND_PASS_H_
#define BIASLATTICE_SECOND_PASS_H_

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "biaslattice/decode.h"
#include "biaslattice/ngram_lm.h"

namespace biaslattice {

struct RescoreConfig {
  double alpha = 1.0;  // weight on the first-pass fused biasing score
  double beta = 0.0;   // weight on the rescoring LM
};

enum class Domain { kGeneric, kContacts };
const char* DomainName(Domain domain);

struct Route {
  Domain domain = Domain::kGeneric;
  const LanguageModel* lm = nullptr;
};

// Contacts LM when any hypothesis contains a catalog word, generic LM
// otherwise. Throws Error if either LM is null.
Route RouteLm(const NBestList& nbest, const LanguageModel* generic,
              const LanguageModel* contacts,
              const std::set<std::string>& catalog_words);

// Second-pass score of one hypothesis:
//   rnnt_logp + alpha * (lambda * sf_score) + beta * lm_logp.
double RescoreScore(const Hypothesis& h, double lambda,
                    const RescoreConfig& config, double lm_logp);

// Re-ranks by RescoreScore (stable), storing the new score in `fused`.
// `lm_logp` holds one LM score per hypothesis. Throws Error on a size
// mismatch or non-finite components.
NBestList Rescore(const NBestList& nbest, const RescoreConfig& config,
                  const std::vector<double>& lm_logp);
// Scores every hypothesis text with `lm`; `lm` may be null when beta is 0.
NBestList Rescore(const NBestList& nbest, const RescoreConfig& config,
                  const LanguageModel* lm);
std::vector<double> LmScores(const NBestList& nbest, const LanguageModel& lm);

// Per-utterance inputs to the tuning objective, precomputed once.
struct TuneItem {
  struct Candidate {
    double rnnt_logp;
    double fused_sf;  // lambda * sf_score
    double lm_logp;
    std::size_t edits;
  };
  std::vector<Candidate> candidates;  // first-pass order
  std::size_t ref_words = 0;
};

// Edits are taken against `nbest.ref`.
TuneItem MakeTuneItem(const NBestList& nbest, const std::vector<double>& lm_logp);

// Total edits of the rescored 1-best over the dev set.
std::size_t Objective(const std::vector<TuneItem>& dev, const RescoreConfig& c);

struct TuneOptions {
  double alpha_lo = -2.0, alpha_hi = 4.0;
  double beta_lo = 0.0, beta_hi = 4.0;
  int budget = 400;  // objective evaluations, seeds included
  std::uint64_t seed = 1;
  bool fix_alpha = false;  // alpha frozen at 1: no de-biasing
  int grid = 5;            // coarse seed grid points per axis
  double initial_temperature = 2.0;
  double final_temperature = 0.02;
  int restarts = 4;
};

struct TunePoint {
  RescoreConfig config;
  std::size_t edits = 0;
};

struct TuneResult {
  TunePoint best;
  std::vector<TunePoint> seeds;  // every explicitly seeded point
  std::size_t ref_words = 0;
  int evaluations = 0;

  double wer() const {
    return ref_words == 0 ? 0.0
                          : static_cast<double>(best.edits) /
                                static_cast<double>(ref_words);
  }
};

// True if `a` is preferred: fewer edits, then smaller |alpha - 1|, then
// smaller |beta|.
bool BetterPoint(const TunePoint& a, const TunePoint& b);

// Simulated annealing over (alpha, beta) with geometric cooling, restarts at
// the seeds and a fixed RNG seed. Seeds are (1,0), (0,0) and a coarse grid,
// clipped into bounds; in fixed-alpha mode only (1,0) and the beta grid. The
// exact optimum of the alpha = 1 line is seeded as well, so the free search
// never ends worse than the fixed-alpha search.
// Throws Error on an empty dev set, invalid bounds or a budget smaller than
// the seed count.
TuneResult Tune(const std::vector<TuneItem>& dev, const TuneOptions& options);

}  // namespace biaslattice

#endif  // BIASLATTICE_SECOND_PASS_H_
