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

#include "biaslattice/synth_oracle.h"

#include <algorithm>
#include <cmath>
#include <random>

#include "biaslattice/error.h"
#include "biaslattice/text.h"

namespace biaslattice {

std::size_t EditDistance(std::string_view a, std::string_view b) {
  std::vector<std::size_t> row(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t up = row[j];
      row[j] = std::min({row[j] + 1, row[j - 1] + 1,
                         diag + (a[i - 1] == b[j - 1] ? 0u : 1u)});
      diag = up;
    }
  }
  return row[b.size()];
}

std::uint64_t StableHash(std::string_view text, std::uint64_t seed) {
  std::uint64_t h = 1469598103934665603ull ^ seed;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

SynthOracle::SynthOracle(WordpieceVocab vocab, std::vector<std::string> lexicon,
                         SynthOracleConfig config, std::uint64_t seed)
    : vocab_(std::move(vocab)), config_(config), seed_(seed) {
  if (!(config_.noise >= 0.0 && config_.noise < 1.0)) {
    throw Error("oracle noise must be in [0, 1)");
  }
  if (config_.margin_hi < config_.margin_lo) {
    throw Error("oracle margin bounds are inverted");
  }
  std::sort(lexicon.begin(), lexicon.end());
  lexicon.erase(std::unique(lexicon.begin(), lexicon.end()), lexicon.end());
  for (auto& word : lexicon) {
    word = ToLower(word);
    std::vector<std::string> pieces;
    try {
      pieces = vocab_.Segment(word);
    } catch (const Error&) {
      continue;  // lexicon words outside the alphabet never become confusions
    }
    lexicon_.push_back(word);
    lexicon_pieces_.push_back(std::move(pieces));
  }
}

std::vector<std::string> SynthOracle::Confusions(std::string_view word) const {
  if (word.size() < config_.min_confusable_length) return {};
  const std::size_t pieces = vocab_.Segment(word).size();
  std::vector<std::pair<std::size_t, std::string>> near;
  for (std::size_t i = 0; i < lexicon_.size(); ++i) {
    const std::string& cand = lexicon_[i];
    if (cand == word || cand.size() < config_.min_confusable_length) continue;
    if (lexicon_pieces_[i].size() != pieces) continue;
    const std::size_t d = EditDistance(word, cand);
    if (d <= config_.max_edit_distance) near.emplace_back(d, cand);
  }
  std::sort(near.begin(), near.end());
  if (near.size() > config_.max_confusions) near.resize(config_.max_confusions);
  std::vector<std::string> out;
  for (auto& [d, w] : near) out.push_back(std::move(w));
  return out;
}

void SynthOracle::AddUtterance(const std::string& id,
                               std::string_view transcript) {
  const std::vector<std::string> words = SplitWords(ToLower(transcript));
  std::vector<Slot> slots;
  std::mt19937_64 rng(StableHash(id, seed_));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double noise = config_.noise;

  for (const std::string& word : words) {
    const std::vector<std::string> ref = vocab_.Segment(word);
    std::vector<std::vector<std::string>> confusions;
    if (noise > 0.0) {
      for (const auto& c : Confusions(word)) confusions.push_back(vocab_.Segment(c));
    }
    // Draw order is fixed so that a seed reproduces the same network.
    const double flip_draw = unit(rng);
    const double pick_draw = unit(rng);
    const double margin =
        config_.margin_lo + (config_.margin_hi - config_.margin_lo) * unit(rng);
    const bool flipped = !confusions.empty() && flip_draw < noise;
    const std::size_t favoured =
        flipped ? std::min(confusions.size() - 1,
                           static_cast<std::size_t>(pick_draw * confusions.size()))
                : 0;
    std::size_t differing = 0;
    if (flipped) {
      for (std::size_t j = 0; j + 1 < ref.size(); ++j) {
        if (confusions[favoured][j] != ref[j]) ++differing;
      }
    }
    const double leak =
        confusions.empty()
            ? 0.0
            : std::log(noise / ((1.0 - noise) * static_cast<double>(confusions.size())));

    const double step =
        margin / static_cast<double>(std::max<std::size_t>(differing, 1));
    for (std::size_t j = 0; j + 1 < ref.size(); ++j) {
      std::vector<std::pair<std::string, double>> logits = {{ref[j], 0.0}};
      for (std::size_t k = 0; k < confusions.size(); ++k) {
        const std::string& piece = confusions[k][j];
        const double jitter = unit(rng);
        if (piece == ref[j]) continue;
        double logit = leak + std::log(0.5 + jitter);
        if (flipped) logit = k == favoured ? step : step * (0.3 + 0.7 * jitter);
        auto it = std::find_if(logits.begin(), logits.end(),
                               [&](const auto& p) { return p.first == piece; });
        if (it == logits.end()) {
          logits.emplace_back(piece, logit);
        } else {
          it->second = std::max(it->second, logit);
        }
      }
      double max = 0.0;
      for (const auto& [p, l] : logits) max = std::max(max, l);
      double sum = 0.0;
      for (const auto& [p, l] : logits) sum += std::exp(l - max);
      const double lse = max + std::log(sum);
      Slot slot;
      for (const auto& [p, l] : logits) slot.push_back({p, l - lse});
      std::sort(slot.begin(), slot.end(),
                [](const TokenScore& a, const TokenScore& b) { return a.token < b.token; });
      slots.push_back(std::move(slot));
    }
    slots.push_back({{vocab_.delimiter(), 0.0}});
  }
  utterances_[id] = std::move(slots);
}

const std::vector<SynthOracle::Slot>& SynthOracle::Slots(
    std::string_view id) const {
  auto it = utterances_.find(id);
  if (it == utterances_.end()) {
    throw Error("oracle has no utterance '" + std::string(id) + "'");
  }
  return it->second;
}

std::size_t SynthOracle::NumSteps(std::string_view utterance_id) const {
  return Slots(utterance_id).size() + 1;
}

std::vector<TokenScore> SynthOracle::Score(
    std::string_view utterance_id, std::span<const std::string> history) const {
  const auto& slots = Slots(utterance_id);
  if (history.size() > slots.size()) {
    throw Error("history longer than the utterance");
  }
  if (history.size() == slots.size()) {
    return {{std::string(kEndOfSequence), 0.0}};
  }
  return slots[history.size()];
}

}  // namespace biaslattice
