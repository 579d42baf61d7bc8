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

#ifndef BIASLATTICE_CONTEXT_H_
#define BIASLATTICE_CONTEXT_H_

#include <cstddef>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "biaslattice/lookahead.h"
#include "biaslattice/word_fst.h"
#include "biaslattice/wordpiece.h"

namespace biaslattice {

// A corpus token: a plain word, or an annotated span `@tag(w1 w2 ...)` whose
// member words are kept in `words`.
struct AnnotatedToken {
  std::string tag;                 // "@contactname", empty for plain words
  std::vector<std::string> words;  // the plain word, or the span members

  bool is_class() const { return !tag.empty(); }
};

// Parses one annotated line. Throws FormatError (line `lineno`) on unbalanced
// parentheses, empty spans, nested spans or empty tag names.
std::vector<AnnotatedToken> ParseAnnotated(std::string_view line,
                                           std::size_t lineno = 1);

// The line with every span replaced by its tag.
std::vector<std::string> TemplateOf(const std::vector<AnnotatedToken>& tokens);

// Unweighted template trie over the utterances whose tag-substituted form
// occurs at least `min_count` times. Arc order and weights do not depend on
// corpus line order. The start state carries the phi flag.
WordFst BuildClassFst(const std::vector<std::string>& corpus,
                      int min_count = 10);
std::vector<std::string> ReadLines(std::istream& in);

inline bool IsClassTag(std::string_view label) {
  return label.size() > 1 && label.front() == '@';
}

using Bindings = std::map<std::string, std::shared_ptr<const WordFst>>;

// Manifest lines `@tag<TAB>path`; relative paths resolve against
// `base_dir`. Each path may be a serialized FST or a catalog text file.
Bindings ReadBindings(std::istream& in, const std::string& base_dir,
                      std::string_view delimiter = kDefaultDelimiter);
Bindings ReadBindingsFile(const std::string& path,
                          std::string_view delimiter = kDefaultDelimiter);

// Per-hypothesis scoring state. Plain value type; copy to branch.
struct BiasCursor {
  struct Thread {
    std::size_t tag;         // index into ContextualBiaser::tags()
    StateId after_tag;       // class-FST state past the tag arc
    PhraseSession session;
  };
  struct Pending {
    StateId after_tag;
    double total;
  };

  StateId class_state = 0;
  bool in_word = false;
  bool tag_mode = false;
  std::string word;
  std::vector<Thread> threads;
  std::optional<Pending> pending;
  double banked = 0.0;   // weight of completed tags
  double emitted = 0.0;  // sum of all returned increments
};

// Class-based contextual biasing: an unweighted class FST whose tag arcs are
// bound to personalized word-level FSTs. All weight comes from the nested
// phrase sessions over the bound FSTs; the class skeleton contributes 0.
// Immutable and shareable once built.
class ContextualBiaser {
 public:
  // Throws Error if a tag of `class_fst` has no binding, a bound FST is null,
  // or a class arc carries a non-zero weight.
  ContextualBiaser(WordFst class_fst, Bindings bindings, WordpieceVocab vocab);

  // Biasing without context: every bound FST is active at every word start.
  static ContextualBiaser Uncontextual(Bindings bindings, WordpieceVocab vocab);

  const WordFst& class_fst() const { return class_fst_; }
  const WordpieceVocab& vocab() const { return vocab_; }
  const std::vector<std::string>& tags() const { return tags_; }
  const WordFst& tag_fst(std::size_t tag) const { return *fsts_[tag]; }

  struct TagArc {
    std::size_t tag;
    StateId next;
  };
  const std::vector<TagArc>& TagArcs(StateId class_state) const {
    return tag_arcs_[class_state];
  }

 private:
  WordFst class_fst_;
  WordpieceVocab vocab_;
  std::vector<std::string> tags_;
  std::vector<std::shared_ptr<const WordFst>> fsts_;
  std::vector<std::vector<TagArc>> tag_arcs_;
};

// Per-decode scoring context over a ContextualBiaser: owns the lookahead
// caches shared by all cursors of that decode. Single-threaded. Must outlive
// the cursors it opens.
class BiasSession {
 public:
  explicit BiasSession(const ContextualBiaser& biaser, bool use_cache = true,
                       LookaheadStats* stats = nullptr);
  BiasSession(const BiasSession&) = delete;
  BiasSession& operator=(const BiasSession&) = delete;

  BiasCursor Open() const;

  // Consumes one subword token (pieces and delimiters alike) and returns the
  // weight increment; Expand and FinishWord are the checked halves.
  double Advance(BiasCursor& cursor, std::string_view token) const;
  double Expand(BiasCursor& cursor, std::string_view piece) const;
  double FinishWord(BiasCursor& cursor, std::string_view token) const;

  const ContextualBiaser& biaser() const { return *biaser_; }

 private:
  void ResolveWord(BiasCursor& cursor) const;
  void MatchPlain(BiasCursor& cursor) const;
  void SkipLeaf(BiasCursor& cursor) const;
  double Potential(const BiasCursor& cursor) const;

  const ContextualBiaser* biaser_;
  std::vector<std::unique_ptr<LookaheadCache>> caches_;
  LookaheadStats* stats_;
};

}  // namespace biaslattice

#endif  // BIASLATTICE_CONTEXT_H_
