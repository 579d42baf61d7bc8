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

#ifndef BIASLATTICE_METRICS_H_
#define BIASLATTICE_METRICS_H_

#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "biaslattice/decode.h"
#include "biaslattice/nbest_io.h"

namespace biaslattice {

struct WerBreakdown {
  std::size_t substitutions = 0;
  std::size_t deletions = 0;
  std::size_t insertions = 0;
  std::size_t ref_words = 0;
  double wer = 0.0;  // errors / max(ref_words, 1)

  std::size_t errors() const { return substitutions + deletions + insertions; }
  WerBreakdown& operator+=(const WerBreakdown& other);
};

// Unit-cost Levenshtein alignment; among optimal alignments the backtrace
// prefers substitution, then insertion, then deletion.
WerBreakdown Wer(const std::vector<std::string>& ref,
                 const std::vector<std::string>& hyp);
// Normalizes both transcripts first.
WerBreakdown Wer(std::string_view ref, std::string_view hyp);

// Best hypothesis of the list against its reference; ties go to the higher
// ranked hypothesis. `index` receives its rank. Throws Error on an empty list.
WerBreakdown OracleWer(const NBestList& nbest, std::size_t* index = nullptr);
WerBreakdown OneBestWer(const NBestList& nbest);

// Pools edit counts.
WerBreakdown CorpusWer(const std::vector<WerBreakdown>& parts);

// Relative change in percent, 100 (system - baseline) / baseline; negative
// values are improvements. Throws Error when baseline is 0.
double Werr(double baseline, double system);

struct SplitReport {
  WerBreakdown wer;
  WerBreakdown oracle;
  std::size_t utterances = 0;
  double werr = 0.0;         // against the baseline run, when given
  double oracle_werr = 0.0;
  bool has_baseline = false;
};

struct EvalReport {
  std::string name;
  std::map<std::string, SplitReport> splits;  // by label; "all" is the union
};

// Scores `run` against `refs` (ids must match one to one); `baseline`, when
// non-null, supplies the WERR reference. Throws Error on id mismatch.
EvalReport Evaluate(const std::vector<NBestList>& run,
                    const std::vector<RefEntry>& refs, std::string name,
                    const std::vector<NBestList>* baseline = nullptr);

std::string FormatTable(const std::vector<EvalReport>& reports);
std::string ReportJson(const std::vector<EvalReport>& reports);

}  // namespace biaslattice

#endif  // BIASLATTICE_METRICS_H_
