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

#ifndef BIASLATTICE_NGRAM_LM_H_
#define BIASLATTICE_NGRAM_LM_H_

#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace biaslattice {

inline constexpr std::string_view kBos = "<s>";
inline constexpr std::string_view kEos = "</s>";
inline constexpr std::string_view kUnk = "<unk>";

// Anything that scores a word sequence. Natural-log probabilities, including
// the end-of-sentence event.
class LanguageModel {
 public:
  virtual ~LanguageModel() = default;
  virtual double LogProb(const std::vector<std::string>& words) const = 0;
};

// Back-off n-gram model with optional word classes. A class tag is an
// ordinary vocabulary token whose members are whole word spans with their own
// in-class distribution.
class NGramLM : public LanguageModel {
 public:
  using Ngram = std::vector<std::string>;

  struct Entry {
    double logp = 0.0;     // natural log
    double backoff = 0.0;  // natural log; 0 when the n-gram is never a context
  };

  NGramLM() = default;
  // `tables[k]` holds the (k+1)-grams. Throws Error if the unigram table is
  // empty or an n-gram has the wrong length.
  NGramLM(std::vector<std::map<Ngram, Entry>> tables,
          std::map<std::string, std::map<std::string, double>> classes = {});

  int order() const { return static_cast<int>(tables_.size()); }
  const std::vector<std::map<Ngram, Entry>>& tables() const { return tables_; }
  const std::map<std::string, std::map<std::string, double>>& classes() const {
    return classes_;
  }

  // Predicted vocabulary: every unigram except <s>.
  std::vector<std::string> Vocabulary() const;
  bool InVocabulary(std::string_view word) const;

  // ln P(word | context); only the last order-1 context tokens are used.
  // Out-of-vocabulary tokens map to <unk>.
  double ConditionalLogProb(const std::vector<std::string>& context,
                            std::string_view word) const;

  // ln P_class(member | tag); -inf for non-members. `member` is space-joined.
  double ClassMemberLogProb(std::string_view tag, std::string_view member) const;

  // Sentence log-probability over LM tokens, tags included, no class expansion.
  double TokenLogProb(const std::vector<std::string>& tokens) const;

  // Sums over every parse of `words` into plain words and class members.
  double LogProb(const std::vector<std::string>& words) const override;

 private:
  std::vector<std::map<Ngram, Entry>> tables_;
  std::map<std::string, std::map<std::string, double>> classes_;
  std::size_t max_member_words_ = 0;
};

// Interpolated Kneser-Ney with per-order discount n1/(n1 + 2 n2), or 0.5
// when either count-of-counts is zero. Lines use
// the annotated `@tag(w ...)` markup; spans become tag tokens and feed the
// class member distributions by maximum likelihood. Throws Error on order < 1
// or an empty corpus and FormatError on bad markup.
NGramLM TrainKnLm(const std::vector<std::string>& corpus, int order = 4);

// ARPA text format (log10). Class members go to a separate sidecar with
// lines `tag<TAB>member<TAB>log10p`.
void WriteArpa(std::ostream& out, const NGramLM& lm);
void WriteClassSidecar(std::ostream& out, const NGramLM& lm);
NGramLM ReadArpa(std::istream& arpa, std::istream* classes = nullptr);

// Writes `path` and, when the model has classes, `path + ".classes"`.
void SaveLm(const std::string& path, const NGramLM& lm);
NGramLM LoadLm(const std::string& path);

}  // namespace biaslattice

#endif  // BIASLATTICE_NGRAM_LM_H_
