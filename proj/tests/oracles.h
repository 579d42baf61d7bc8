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

// Independent reference implementations and random generators for tests.

#ifndef BIASLATTICE_TESTS_ORACLES_H_
#define BIASLATTICE_TESTS_ORACLES_H_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "biaslattice/lookahead.h"
#include "biaslattice/ngram_lm.h"
#include "biaslattice/word_fst.h"
#include "biaslattice/wordpiece.h"

namespace biaslattice::testing {

inline std::string RandomWord(std::mt19937_64& rng, const std::string& alphabet,
                              int min_len, int max_len) {
  std::uniform_int_distribution<int> len(min_len, max_len);
  std::uniform_int_distribution<std::size_t> pick(0, alphabet.size() - 1);
  std::string w;
  for (int i = len(rng); i > 0; --i) w += alphabet[pick(rng)];
  return w;
}

// Distinct single-word entries with weights in [lo, hi].
inline std::vector<CatalogEntry> RandomCatalog(std::mt19937_64& rng,
                                               const std::string& alphabet,
                                               int max_words, double lo,
                                               double hi, int max_len = 8) {
  std::uniform_int_distribution<int> count(1, max_words);
  std::uniform_real_distribution<double> weight(lo, hi);
  std::set<std::string> words;
  const int n = count(rng);
  for (int tries = 0; static_cast<int>(words.size()) < n && tries < 20 * n; ++tries) {
    words.insert(RandomWord(rng, alphabet, 1, max_len));
  }
  std::vector<CatalogEntry> entries;
  for (const auto& w : words) entries.push_back({{w}, weight(rng)});
  return entries;
}

// All single characters of `alphabet`, a few random multi-character pieces and
// some fused-delimiter forms.
inline WordpieceVocab RandomVocab(std::mt19937_64& rng, const std::string& alphabet,
                                  int extra = 12) {
  std::vector<std::string> pieces;
  for (char c : alphabet) pieces.emplace_back(1, c);
  for (int i = 0; i < extra; ++i) {
    std::string p = RandomWord(rng, alphabet, 2, 4);
    pieces.push_back(p);
    if (i % 3 == 0) pieces.push_back(p + "_");
  }
  return WordpieceVocab(pieces);
}

// Every split of `word` into vocabulary pieces (capped), as token lists
// ending with the standalone delimiter; the fused variant is added when the
// vocabulary has the fused last piece.
inline std::vector<std::vector<std::string>> Segmentations(
    const WordpieceVocab& vocab, const std::string& word, std::size_t cap = 64) {
  std::vector<std::vector<std::string>> out;
  std::vector<std::string> cur;
  auto rec = [&](auto&& self, std::size_t pos) -> void {
    if (out.size() >= cap) return;
    if (pos == word.size()) {
      auto seq = cur;
      seq.push_back(vocab.delimiter());
      out.push_back(seq);
      if (!cur.empty() && vocab.Contains(cur.back() + vocab.delimiter())) {
        auto fused = cur;
        fused.back() += vocab.delimiter();
        out.push_back(fused);
      }
      return;
    }
    for (std::size_t len = 1; pos + len <= word.size(); ++len) {
      const std::string piece = word.substr(pos, len);
      if (!vocab.Contains(piece)) continue;
      cur.push_back(piece);
      self(self, pos + len);
      cur.pop_back();
    }
  };
  rec(rec, 0);
  return out;
}

// Distinct (phrase prefix, next word) pairs: the arc set of a prefix trie.
inline std::size_t BruteTrieArcCount(const std::vector<CatalogEntry>& entries) {
  std::set<std::pair<std::vector<std::string>, std::string>> pairs;
  for (const auto& e : entries) {
    std::vector<std::string> prefix;
    for (const auto& w : e.phrase) {
      pairs.emplace(prefix, w);
      prefix.push_back(w);
    }
  }
  return pairs.size();
}

inline ArcRange LinearPrefixRange(std::span<const WordArc> arcs, ArcRange range,
                                  const std::string& prefix) {
  std::size_t lo = range.hi, hi = range.hi;
  bool found = false;
  for (std::size_t i = range.lo; i < range.hi; ++i) {
    const bool match = arcs[i].word.compare(0, prefix.size(), prefix) == 0;
    if (match && !found) {
      lo = i;
      found = true;
    }
    if (match) hi = i + 1;
  }
  if (!found) return {range.hi, range.hi};
  return {lo, hi};
}

// Fully materialized subword-level view of the arcs leaving one word-FST
// state: every character prefix of every arc word becomes a state holding its
// pushed weight, computed by linear scans.
class MaterializedSubwordFst {
 public:
  MaterializedSubwordFst(const WordFst& fst, StateId state) {
    for (const WordArc& a : fst.Arcs(state)) words_.emplace_back(a.word, a.weight);
    for (const auto& [w, wt] : words_) {
      for (std::size_t l = 1; l <= w.size(); ++l) {
        const std::string p = w.substr(0, l);
        if (pushed_.count(p)) continue;
        double lookahead = std::numeric_limits<double>::infinity();
        std::size_t n = 0;
        for (const auto& [v, vw] : words_) {
          if (v.compare(0, p.size(), p) != 0) continue;
          lookahead = std::min(lookahead, vw);
          n = std::max(n, v.size());
        }
        pushed_[p] = lookahead * static_cast<double>(l) / static_cast<double>(n);
      }
      final_[w] = wt;
    }
  }

  // Path weight of a token sequence (pieces then a delimiter token) through the
  // materialized FST, or 0 when the sequence leaves it (fallback).
  double PathWeight(const WordpieceVocab& vocab,
                    const std::vector<std::string>& tokens) const {
    std::string prefix;
    double prev = 0.0, total = 0.0;
    for (const auto& t : tokens) {
      const std::string content(vocab.Content(t));
      prefix += content;
      if (!content.empty()) {
        auto it = pushed_.find(prefix);
        if (it == pushed_.end()) return 0.0;
        total += it->second - prev;
        prev = it->second;
      }
      if (vocab.IsDelimiter(t)) {
        auto f = final_.find(prefix);
        if (f == final_.end()) return 0.0;
        return total + (f->second - prev);
      }
    }
    return total;
  }

  // Pushed weight of the state reached by `prefix`, if it exists.
  std::optional<double> Pushed(const std::string& prefix) const {
    auto it = pushed_.find(prefix);
    if (it == pushed_.end()) return std::nullopt;
    return it->second;
  }

  std::size_t NumStates() const { return pushed_.size() + 1; }

 private:
  std::vector<std::pair<std::string, double>> words_;
  std::map<std::string, double> pushed_;
  std::map<std::string, double> final_;
};

// Quadratic edit distance over words, returning only the total.
inline std::size_t DpEditCount(const std::vector<std::string>& a,
                               const std::vector<std::string>& b) {
  std::vector<std::vector<std::size_t>> d(a.size() + 1,
                                          std::vector<std::size_t>(b.size() + 1));
  for (std::size_t i = 0; i <= a.size(); ++i) {
    for (std::size_t j = 0; j <= b.size(); ++j) {
      if (i == 0 || j == 0) {
        d[i][j] = i + j;
      } else {
        d[i][j] = std::min({d[i - 1][j] + 1, d[i][j - 1] + 1,
                            d[i - 1][j - 1] + (a[i - 1] != b[j - 1])});
      }
    }
  }
  return d[a.size()][b.size()];
}

// Interpolated Kneser-Ney computed directly from the definition rather than
// from back-off tables: recursive over orders, counts recomputed per query.
class ReferenceKn {
 public:
  ReferenceKn(const std::vector<std::vector<std::string>>& sentences, int order)
      : order_(order) {
    for (const auto& s : sentences) {
      std::vector<std::string> padded = {"<s>"};
      padded.insert(padded.end(), s.begin(), s.end());
      padded.push_back("</s>");
      padded_.push_back(padded);
      for (std::size_t i = 1; i < padded.size(); ++i) vocab_.insert(padded[i]);
    }
    vocab_.insert("<unk>");
  }

  const std::set<std::string>& vocab() const { return vocab_; }

  double Prob(std::vector<std::string> history, const std::string& word) const {
    const std::string w = vocab_.count(word) ? word : "<unk>";
    if (static_cast<int>(history.size()) > order_ - 1) {
      history.erase(history.begin(), history.end() - (order_ - 1));
    }
    return P(history, w);
  }

 private:
  // Occurrences of `gram` in the padded corpus.
  double Raw(const std::vector<std::string>& gram) const {
    double c = 0;
    for (const auto& s : padded_) {
      for (std::size_t i = 0; i + gram.size() <= s.size(); ++i) {
        if (std::equal(gram.begin(), gram.end(), s.begin() + i)) ++c;
      }
    }
    return c;
  }

  // Distinct left neighbours of `gram`.
  double Continuation(const std::vector<std::string>& gram) const {
    std::set<std::string> left;
    for (const auto& s : padded_) {
      for (std::size_t i = 1; i + gram.size() <= s.size(); ++i) {
        if (std::equal(gram.begin(), gram.end(), s.begin() + i)) left.insert(s[i - 1]);
      }
    }
    return static_cast<double>(left.size());
  }

  double Count(const std::vector<std::string>& gram) const {
    if (static_cast<int>(gram.size()) == order_ || gram[0] == "<s>") return Raw(gram);
    return Continuation(gram);
  }

  // Every distinct n-gram of length k that the corpus contains, with its count
  // at that order; "<s>" is never a predicted token.
  std::map<std::vector<std::string>, double> Grams(std::size_t k) const {
    std::map<std::vector<std::string>, double> out;
    for (const auto& s : padded_) {
      for (std::size_t i = 0; i + k <= s.size(); ++i) {
        std::vector<std::string> g(s.begin() + i, s.begin() + i + k);
        if (g.back() == "<s>") continue;
        out.emplace(g, 0.0);
      }
    }
    for (auto& [g, c] : out) c = Count(g);
    return out;
  }

  double Discount(std::size_t k) const {
    double n1 = 0, n2 = 0;
    for (const auto& [g, c] : Grams(k)) {
      if (c == 1) ++n1;
      if (c == 2) ++n2;
    }
    return (n1 == 0 || n2 == 0) ? 0.5 : n1 / (n1 + 2 * n2);
  }

  double P(const std::vector<std::string>& h, const std::string& w) const {
    const double base = 1.0 / static_cast<double>(vocab_.size());
    const std::size_t k = h.size() + 1;
    const double lower = h.empty()
                             ? base
                             : P(std::vector<std::string>(h.begin() + 1, h.end()), w);
    double total = 0, types = 0;
    for (const auto& v : vocab_) {
      std::vector<std::string> g = h;
      g.push_back(v);
      const double c = Count(g);
      total += c;
      if (c > 0) ++types;
    }
    if (total == 0) return lower;
    std::vector<std::string> g = h;
    g.push_back(w);
    const double d = Discount(k);
    return (std::max(Count(g) - d, 0.0) + d * types * lower) / total;
  }

  int order_;
  std::vector<std::vector<std::string>> padded_;
  std::set<std::string> vocab_;
};

inline std::vector<std::string> RandomCorpus(std::mt19937_64& rng, int sentences,
                                      const std::vector<std::string>& words) {
  std::uniform_int_distribution<int> len(0, 5);
  std::uniform_int_distribution<std::size_t> pick(0, words.size() - 1);
  std::vector<std::string> out;
  for (int s = 0; s < sentences; ++s) {
    std::string line;
    for (int i = len(rng); i > 0; --i) line += words[pick(rng)] + " ";
    if (line.empty()) line = words[pick(rng)];
    out.push_back(line);
  }
  return out;
}

// Every history of up to order-1 tokens over the vocabulary, optionally
// starting with <s>.
inline std::vector<std::vector<std::string>> Histories(const std::vector<std::string>& vocab,
                                                int order) {
  std::vector<std::vector<std::string>> out = {{}, {"<s>"}};
  for (int len = 1; len < order; ++len) {
    std::vector<std::vector<std::string>> next;
    for (const auto& h : out) {
      if (static_cast<int>(h.size()) != len - 1 && !(h.size() == 1 && h[0] == "<s>" && len == 2)) {
        continue;
      }
      for (const auto& w : vocab) {
        if (w == "</s>") continue;
        auto g = h;
        g.push_back(w);
        next.push_back(g);
      }
    }
    out.insert(out.end(), next.begin(), next.end());
  }
  return out;
}

inline double SumOverVocab(const NGramLM& lm, const std::vector<std::string>& h) {
  double sum = 0.0;
  for (const auto& w : lm.Vocabulary()) sum += std::exp(lm.ConditionalLogProb(h, w));
  return sum;
}

}  // namespace biaslattice::testing

#endif  // BIASLATTICE_TESTS_ORACLES_H_
