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

#include "biaslattice/lookahead.h"

#include <algorithm>
#include <cstring>
#include <ostream>

#include "biaslattice/error.h"

namespace biaslattice {

double PushedWeight(std::size_t prefix_length, std::size_t max_length,
                    double lookahead) {
  if (max_length == 0) throw Error("pushed weight with N = 0");
  if (prefix_length == 0 || prefix_length > max_length) {
    throw Error("pushed weight needs 1 <= L <= N");
  }
  return lookahead * static_cast<double>(prefix_length) /
         static_cast<double>(max_length);
}

ArcRange PrefixRange(std::span<const WordArc> arcs, ArcRange range,
                     std::string_view prefix, std::uint64_t* comparisons) {
  if (prefix.empty() || range.empty()) return range;
  auto first = arcs.begin() + static_cast<std::ptrdiff_t>(range.lo);
  auto last = arcs.begin() + static_cast<std::ptrdiff_t>(range.hi);
  std::uint64_t count = 0;
  // Words carrying `prefix` are contiguous: everything before them compares
  // less on the first |prefix| bytes, everything after compares greater.
  auto lo = std::partition_point(first, last, [&](const WordArc& arc) {
    ++count;
    return arc.word.compare(0, prefix.size(), prefix) < 0;
  });
  auto hi = std::partition_point(lo, last, [&](const WordArc& arc) {
    ++count;
    return arc.word.compare(0, prefix.size(), prefix) == 0;
  });
  if (comparisons != nullptr) *comparisons += count;
  return {static_cast<std::size_t>(lo - arcs.begin()),
          static_cast<std::size_t>(hi - arcs.begin())};
}

std::ostream& operator<<(std::ostream& os, const LookaheadStep& step) {
  os << (step.final_step ? "finish" : "expand") << " prefix=" << step.prefix
     << " range=[" << step.range.lo << "," << step.range.hi << ")";
  if (!step.fallback && !step.final_step) {
    os << " N=" << step.max_length << " L=" << step.prefix_length
       << " w_lookahead=" << step.lookahead << " w_pushed=" << step.pushed;
  }
  os << " increment=" << step.increment;
  if (step.fallback) os << " fallback";
  return os;
}

const std::string& LookaheadCache::Key(StateId state, std::string_view prefix) {
  key_.resize(sizeof(state));
  std::memcpy(key_.data(), &state, sizeof(state));
  key_.append(prefix);
  return key_;
}

const LookaheadCache::Entry* LookaheadCache::Find(StateId state,
                                                  std::string_view prefix) {
  auto it = map_.find(Key(state, prefix));
  return it == map_.end() ? nullptr : &it->second;
}

void LookaheadCache::Insert(StateId state, std::string_view prefix,
                            const Entry& entry) {
  map_.emplace(Key(state, prefix), entry);
}

ExpandSession::ExpandSession(const WordFst& fst, StateId state,
                             SessionOptions options)
    : fst_(&fst),
      state_(state),
      options_(options),
      range_{0, fst.NumArcs(state)} {}

void ExpandSession::Trace(const LookaheadStep& step) const {
  if (options_.trace != nullptr) *options_.trace << step << '\n';
  if (options_.trace_steps != nullptr) options_.trace_steps->push_back(step);
}

double ExpandSession::Fallback(bool final_step) {
  const double increment = -emitted_;
  emitted_ = 0.0;
  w_prev_ = 0.0;
  dead_ = true;
  if (options_.trace != nullptr || options_.trace_steps != nullptr) {
    LookaheadStep step;
    step.prefix = prefix_;
    step.range = range_;
    step.increment = increment;
    step.fallback = true;
    step.final_step = final_step;
    Trace(step);
  }
  return increment;
}

double ExpandSession::Expand(std::string_view piece) {
  if (finished_) throw Error("expand on a finished session");
  if (dead_) throw Error("expand on a dead session");
  if (piece.empty()) throw Error("expand with an empty piece");
  if (options_.stats != nullptr) ++options_.stats->expand_steps;

  prefix_.append(piece);
  LookaheadCache::Entry entry;
  const LookaheadCache::Entry* hit =
      options_.cache != nullptr ? options_.cache->Find(state_, prefix_)
                                : nullptr;
  if (hit != nullptr) {
    entry = *hit;
    if (options_.stats != nullptr) ++options_.stats->cache_hits;
  } else {
    entry.range = PrefixRange(fst_->Arcs(state_), range_, prefix_,
                              options_.stats != nullptr
                                  ? &options_.stats->comparisons
                                  : nullptr);
    if (!entry.range.empty()) {
      entry.max_length =
          fst_->MaxWordLength(state_, entry.range.lo, entry.range.hi);
      entry.lookahead = fst_->MinWeight(state_, entry.range.lo, entry.range.hi);
    }
    if (options_.cache != nullptr) {
      options_.cache->Insert(state_, prefix_, entry);
      if (options_.stats != nullptr) ++options_.stats->cache_misses;
    }
  }
  range_ = entry.range;
  if (range_.empty()) return Fallback(/*final_step=*/false);

  const double pushed =
      PushedWeight(prefix_.size(), entry.max_length, entry.lookahead);
  // Difference against the running emitted sum, which tracks w_prev.
  const double increment = pushed - emitted_;
  emitted_ += increment;
  w_prev_ = pushed;
  if (options_.trace != nullptr || options_.trace_steps != nullptr) {
    LookaheadStep step{prefix_,  range_,  entry.max_length, prefix_.size(),
                       entry.lookahead, pushed, increment, false, false};
    Trace(step);
  }
  return increment;
}

WordEnd ExpandSession::FinishWord(std::string_view fused_content) {
  if (finished_) throw Error("finish on a finished session");
  // The token's increment is taken against the sum before it, so a fallback
  // nets exactly zero for callers that accumulate per token.
  const double before = emitted_;
  WordEnd end;
  if (!dead_ && !fused_content.empty()) Expand(fused_content);
  finished_ = true;
  if (dead_) {
    end.increment = -before;
    return end;
  }

  const auto arcs = fst_->Arcs(state_);
  // The exact match, when present, sorts first among words with this prefix.
  if (!prefix_.empty() && !range_.empty() && arcs[range_.lo].word == prefix_) {
    const WordArc& arc = arcs[range_.lo];
    const double increment = arc.weight - emitted_;
    emitted_ += increment;
    w_prev_ = arc.weight;
    end.increment = emitted_ - before;
    end.next = arc.next;
    if (options_.trace != nullptr || options_.trace_steps != nullptr) {
      LookaheadStep step;
      step.prefix = prefix_;
      step.range = range_;
      step.pushed = arc.weight;
      step.increment = increment;
      step.final_step = true;
      Trace(step);
    }
    return end;
  }
  Fallback(/*final_step=*/true);
  end.increment = -before;
  return end;
}

WordEnd ExpandSession::FinishWord(const WordpieceVocab& vocab,
                                  std::string_view token) {
  if (!vocab.IsDelimiter(token)) {
    throw Error("finish_word on non-delimiter token '" + std::string(token) +
                "'");
  }
  return FinishWord(vocab.Content(token));
}

PhraseSession::PhraseSession(const WordFst& fst, const WordpieceVocab& vocab,
                             SessionOptions options)
    : fst_(&fst),
      vocab_(&vocab),
      options_(options),
      state_(fst.Start()),
      word_(fst, fst.Start(), options) {}

void PhraseSession::Restart() {
  state_ = fst_->Start();
  word_ = ExpandSession(*fst_, state_, options_);
  word_base_ = kept_ = total_ = 0.0;
  reached_final_ = word_dead_ = false;
  outcome_ = WordOutcome::kNonFinal;
}

bool PhraseSession::finished() const {
  return outcome_ == WordOutcome::kLeaf || outcome_ == WordOutcome::kRetreated ||
         outcome_ == WordOutcome::kDead;
}

bool PhraseSession::contributes() const {
  if (outcome_ == WordOutcome::kDead) return false;
  return !word_dead_ || reached_final_;
}

double PhraseSession::Step(std::string_view token) {
  if (finished()) throw Error("step on a finished phrase session");
  const double before = total_;
  const bool delimiter = vocab_->IsDelimiter(token);
  const std::string_view content = vocab_->Content(token);

  if (!word_dead_ && !delimiter) {
    word_.Expand(content);
    if (word_.dead()) word_dead_ = true;
    total_ = word_dead_ ? kept_ : word_base_ + word_.emitted();
    outcome_ = WordOutcome::kInWord;
    return total_ - before;
  }
  if (!delimiter) {
    outcome_ = WordOutcome::kInWord;
    return 0.0;
  }

  std::optional<StateId> next;
  if (!word_dead_) next = word_.FinishWord(content).next;
  word_dead_ = false;
  if (!next) {
    total_ = kept_;
    outcome_ = reached_final_ ? WordOutcome::kRetreated : WordOutcome::kDead;
    return total_ - before;
  }
  state_ = *next;
  total_ = word_base_ + word_.emitted();
  word_base_ = total_;
  if (fst_->IsFinal(state_)) {
    reached_final_ = true;
    kept_ = total_;
    outcome_ = fst_->NumArcs(state_) > 0 ? WordOutcome::kFinalOpen
                                         : WordOutcome::kLeaf;
  } else {
    outcome_ = WordOutcome::kNonFinal;
  }
  word_ = ExpandSession(*fst_, state_, options_);
  return total_ - before;
}

}  // namespace biaslattice
