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

#include "biaslattice/decode.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <set>

#include "biaslattice/error.h"
#include "biaslattice/text.h"

namespace biaslattice {

double FuseStep(double rnnt_logp, double sf_increment, double lambda) {
  if (!std::isfinite(rnnt_logp) || !std::isfinite(sf_increment) ||
      !std::isfinite(lambda)) {
    throw Error("fuse_step needs finite inputs");
  }
  return rnnt_logp + lambda * sf_increment;
}

bool BetterHypothesis(const Hypothesis& a, const Hypothesis& b) {
  if (a.fused != b.fused) return a.fused > b.fused;
  return a.tokens < b.tokens;
}

void CheckNormalized(const std::vector<TokenScore>& scores, double tolerance) {
  if (scores.empty()) throw Error("oracle returned an empty distribution");
  double max = -std::numeric_limits<double>::infinity();
  std::set<std::string_view> seen;
  for (const auto& s : scores) {
    if (std::isnan(s.logp) || s.logp > 0.0) {
      throw Error("oracle log-probability out of range");
    }
    if (!seen.insert(s.token).second) {
      throw Error("oracle returned token '" + s.token + "' twice");
    }
    max = std::max(max, s.logp);
  }
  double sum = 0.0;
  for (const auto& s : scores) sum += std::exp(s.logp - max);
  const double lse = max + std::log(sum);
  if (!(std::abs(lse) <= tolerance)) {
    throw Error("oracle distribution does not normalize (log-sum-exp " +
                std::to_string(lse) + ")");
  }
}

namespace {

struct Active {
  Hypothesis hyp;
  std::optional<BiasCursor> cursor;
  double pending = 0.0;  // word-level mode: increments held until a boundary
};

}  // namespace

NBestList BeamSearch(const EmissionOracle& oracle, std::string_view utterance_id,
                     std::string_view reference, const ContextualBiaser* biaser,
                     const WordpieceVocab& vocab, const DecodeOptions& options,
                     LookaheadStats* stats) {
  if (options.n_best < 1) throw Error("n_best must be >= 1");
  if (options.beam_size < options.n_best) {
    throw Error("beam_size must be >= n_best");
  }
  if (vocab.empty()) throw Error("empty wordpiece vocabulary");
  if (!std::isfinite(options.lambda) || options.lambda < 0.0) {
    throw Error("lambda must be finite and non-negative");
  }

  std::optional<BiasSession> session;
  if (biaser != nullptr) session.emplace(*biaser, options.use_cache, stats);
  const double lambda = options.lambda;

  auto add_bias = [&](Active& a, double increment, bool boundary) {
    // Biaser increments are tropical costs; the fusion score is their negation.
    const double score = -increment;
    if (options.word_level) {
      a.pending += score;
      if (boundary) {
        a.hyp.sf_score += a.pending;
        a.pending = 0.0;
      }
    } else {
      a.hyp.sf_score += score;
    }
  };

  std::vector<Active> beam(1);
  if (session) beam[0].cursor = session->Open();
  std::vector<Hypothesis> completed;
  std::vector<Active> candidates;

  for (int step = 0; step < options.max_steps && !beam.empty(); ++step) {
    candidates.clear();
    for (const Active& a : beam) {
      std::vector<TokenScore> scores = oracle.Score(utterance_id, a.hyp.tokens);
      CheckNormalized(scores);
      for (const TokenScore& ts : scores) {
        if (std::isinf(ts.logp)) continue;
        Active b = a;
        b.hyp.rnnt_logp += ts.logp;
        if (ts.token == kEndOfSequence) {
          if (b.cursor && b.cursor->in_word) {
            add_bias(b, session->Advance(*b.cursor, vocab.delimiter()), true);
          } else if (b.pending != 0.0) {
            add_bias(b, 0.0, true);
          }
          b.hyp.fused = b.hyp.rnnt_logp + lambda * b.hyp.sf_score;
          completed.push_back(std::move(b.hyp));
          continue;
        }
        b.hyp.tokens.push_back(ts.token);
        if (b.cursor) {
          add_bias(b, session->Advance(*b.cursor, ts.token),
                   vocab.IsDelimiter(ts.token));
        }
        b.hyp.fused = b.hyp.rnnt_logp + lambda * b.hyp.sf_score;
        candidates.push_back(std::move(b));
      }
    }
    const std::size_t keep =
        std::min(candidates.size(), static_cast<std::size_t>(options.beam_size));
    std::partial_sort(candidates.begin(), candidates.begin() + keep,
                      candidates.end(), [](const Active& x, const Active& y) {
                        return BetterHypothesis(x.hyp, y.hyp);
                      });
    candidates.resize(keep);
    beam.swap(candidates);
  }
  if (completed.empty()) {
    for (Active& a : beam) completed.push_back(std::move(a.hyp));
  }

  std::sort(completed.begin(), completed.end(), BetterHypothesis);
  if (completed.size() > static_cast<std::size_t>(options.n_best)) {
    completed.resize(options.n_best);
  }
  NBestList out;
  out.id = std::string(utterance_id);
  out.ref = std::string(reference);
  out.lambda = lambda;
  for (Hypothesis& h : completed) {
    h.text = JoinWords(vocab.Detokenize(h.tokens));
    out.hyps.push_back(std::move(h));
  }
  return out;
}

}  // namespace biaslattice
