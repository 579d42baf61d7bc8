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

#ifndef BIASLATTICE_LOOKAHEAD_H_
#define BIASLATTICE_LOOKAHEAD_H_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "biaslattice/word_fst.h"
#include "biaslattice/wordpiece.h"

namespace biaslattice {

// Half-open index range into the sorted arcs of one state.
struct ArcRange {
  std::size_t lo = 0;
  std::size_t hi = 0;

  bool empty() const { return lo >= hi; }
  std::size_t size() const { return empty() ? 0 : hi - lo; }
  bool operator==(const ArcRange&) const = default;
};

// w_lookahead * L / N. Throws Error unless 1 <= L <= N.
double PushedWeight(std::size_t prefix_length, std::size_t max_length,
                    double lookahead);

// Narrows [range.lo, range.hi) to the arcs whose word starts with `prefix`,
// by two binary searches. `comparisons`, when given, is incremented once per
// string comparison.
ArcRange PrefixRange(std::span<const WordArc> arcs, ArcRange range,
                     std::string_view prefix,
                     std::uint64_t* comparisons = nullptr);

struct LookaheadStats {
  std::uint64_t expand_steps = 0;
  std::uint64_t comparisons = 0;
  std::uint64_t cache_hits = 0;
  std::uint64_t cache_misses = 0;
};

// One traced expand or finish step.
struct LookaheadStep {
  std::string prefix;
  ArcRange range;
  std::size_t max_length = 0;     // N
  std::size_t prefix_length = 0;  // L
  double lookahead = 0.0;         // min arc weight over the range
  double pushed = 0.0;
  double increment = 0.0;
  bool fallback = false;
  bool final_step = false;
};

std::ostream& operator<<(std::ostream& os, const LookaheadStep& step);

// Subword states created so far, keyed by (word-FST state, prefix). Scoped to
// one decode; not thread-safe.
class LookaheadCache {
 public:
  struct Entry {
    ArcRange range;
    std::size_t max_length = 0;
    double lookahead = 0.0;
  };

  const Entry* Find(StateId state, std::string_view prefix);
  void Insert(StateId state, std::string_view prefix, const Entry& entry);
  std::size_t size() const { return map_.size(); }
  void Clear() { map_.clear(); }

 private:
  const std::string& Key(StateId state, std::string_view prefix);

  std::string key_;
  std::unordered_map<std::string, Entry> map_;
};

struct SessionOptions {
  LookaheadCache* cache = nullptr;
  LookaheadStats* stats = nullptr;
  std::ostream* trace = nullptr;
  std::vector<LookaheadStep>* trace_steps = nullptr;
};

// Result of closing a word. `next` is the word-FST state reached, or empty
// when the word fell back.
struct WordEnd {
  double increment = 0.0;
  std::optional<StateId> next;
};

// Incremental subword expansion of one word from one word-FST state. Each
// Expand extends the prefix, narrows the arc range, and returns the change in
// pushed weight; FinishWord settles the word at its full arc weight or refunds
// everything emitted. emitted() always equals the pushed weight of the current
// prefix (0 after a fallback, the arc weight after a completed word).
class ExpandSession {
 public:
  ExpandSession(const WordFst& fst, StateId state, SessionOptions options = {});

  // Throws Error on an empty piece or when the session is dead or finished.
  double Expand(std::string_view piece);

  // Closes the word on a delimiter. `fused_content` is the piece carried by a
  // fused delimiter token ("er" for "er_"), expanded first.
  WordEnd FinishWord(std::string_view fused_content = {});
  // Same, taking the raw token. Throws Error if it is not a delimiter.
  WordEnd FinishWord(const WordpieceVocab& vocab, std::string_view token);

  double FallbackWeight() const { return -emitted_; }

  StateId state() const { return state_; }
  const std::string& prefix() const { return prefix_; }
  ArcRange range() const { return range_; }
  double w_prev() const { return w_prev_; }
  double emitted() const { return emitted_; }
  bool dead() const { return dead_; }
  bool finished() const { return finished_; }

 private:
  double Fallback(bool final_step);
  void Trace(const LookaheadStep& step) const;

  const WordFst* fst_;
  StateId state_;
  SessionOptions options_;
  std::string prefix_;
  ArcRange range_;
  double w_prev_ = 0.0;
  double emitted_ = 0.0;
  bool dead_ = false;
  bool finished_ = false;
};

// Outcome of the most recent token for a phrase walk.
enum class WordOutcome {
  kInWord,     // mid-word
  kNonFinal,   // word completed at a non-final state
  kFinalOpen,  // word completed at a final state that has further arcs
  kLeaf,       // word completed at a final state without arcs
  kRetreated,  // word failed; path falls back to the last final state
  kDead,       // word failed before any final state; everything refunded
};

// Walks multi-word phrases of one WordFst with one ExpandSession per word.
// total() is the net weight emitted since the start state: the pushed weight
// of the partial path, the kept weight of the last completed phrase after a
// failure, or 0. A session whose outcome is kLeaf, kRetreated or kDead is
// finished and must be restarted before further tokens.
class PhraseSession {
 public:
  PhraseSession(const WordFst& fst, const WordpieceVocab& vocab,
                SessionOptions options = {});

  // Consumes one subword token and returns the increment of total().
  double Step(std::string_view token);

  void Restart();

  double total() const { return total_; }
  WordOutcome outcome() const { return outcome_; }
  StateId state() const { return state_; }
  bool finished() const;
  // False once the path has collapsed to zero (dead word, no final reached).
  bool contributes() const;

 private:
  const WordFst* fst_;
  const WordpieceVocab* vocab_;
  SessionOptions options_;
  StateId state_;
  ExpandSession word_;
  double word_base_ = 0.0;  // total at the start of the current word
  double kept_ = 0.0;       // total at the last final state reached
  double total_ = 0.0;
  bool reached_final_ = false;
  bool word_dead_ = false;
  WordOutcome outcome_ = WordOutcome::kNonFinal;
};

}  // namespace biaslattice

#endif  // BIASLATTICE_LOOKAHEAD_H_
