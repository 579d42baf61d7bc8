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

#include "biaslattice/metrics.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "biaslattice/error.h"
#include "biaslattice/text.h"
#include "json.hpp"

namespace biaslattice {

WerBreakdown& WerBreakdown::operator+=(const WerBreakdown& other) {
  substitutions += other.substitutions;
  deletions += other.deletions;
  insertions += other.insertions;
  ref_words += other.ref_words;
  wer = static_cast<double>(errors()) /
        static_cast<double>(std::max<std::size_t>(ref_words, 1));
  return *this;
}

WerBreakdown Wer(const std::vector<std::string>& ref,
                 const std::vector<std::string>& hyp) {
  const std::size_t n = ref.size(), m = hyp.size();
  std::vector<std::vector<std::size_t>> d(n + 1, std::vector<std::size_t>(m + 1));
  for (std::size_t i = 0; i <= n; ++i) d[i][0] = i;
  for (std::size_t j = 0; j <= m; ++j) d[0][j] = j;
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = 1; j <= m; ++j) {
      d[i][j] = std::min({d[i - 1][j - 1] + (ref[i - 1] == hyp[j - 1] ? 0u : 1u),
                          d[i][j - 1] + 1, d[i - 1][j] + 1});
    }
  }
  WerBreakdown out;
  out.ref_words = n;
  std::size_t i = n, j = m;
  while (i > 0 || j > 0) {
    if (i > 0 && j > 0 &&
        d[i][j] == d[i - 1][j - 1] + (ref[i - 1] == hyp[j - 1] ? 0u : 1u)) {
      if (ref[i - 1] != hyp[j - 1]) ++out.substitutions;
      --i;
      --j;
    } else if (j > 0 && d[i][j] == d[i][j - 1] + 1) {
      ++out.insertions;
      --j;
    } else {
      ++out.deletions;
      --i;
    }
  }
  out.wer = static_cast<double>(out.errors()) /
            static_cast<double>(std::max<std::size_t>(n, 1));
  return out;
}

WerBreakdown Wer(std::string_view ref, std::string_view hyp) {
  return Wer(SplitWords(NormalizeTranscript(ref)),
             SplitWords(NormalizeTranscript(hyp)));
}

WerBreakdown OracleWer(const NBestList& nbest, std::size_t* index) {
  if (nbest.hyps.empty()) throw Error("empty n-best list '" + nbest.id + "'");
  WerBreakdown best;
  std::size_t best_index = 0;
  for (std::size_t i = 0; i < nbest.hyps.size(); ++i) {
    WerBreakdown w = Wer(nbest.ref, nbest.hyps[i].text);
    if (i == 0 || w.errors() < best.errors()) {
      best = w;
      best_index = i;
    }
  }
  if (index != nullptr) *index = best_index;
  return best;
}

WerBreakdown OneBestWer(const NBestList& nbest) {
  if (nbest.hyps.empty()) throw Error("empty n-best list '" + nbest.id + "'");
  return Wer(nbest.ref, nbest.hyps[0].text);
}

WerBreakdown CorpusWer(const std::vector<WerBreakdown>& parts) {
  WerBreakdown total;
  for (const auto& p : parts) total += p;
  return total;
}

double Werr(double baseline, double system) {
  if (baseline == 0.0) throw Error("WERR needs a non-zero baseline");
  return 100.0 * (system - baseline) / baseline;
}

namespace {

std::map<std::string, SplitReport> Score(const std::vector<NBestList>& run,
                                         const std::vector<RefEntry>& refs) {
  if (run.size() != refs.size()) {
    throw Error("run has " + std::to_string(run.size()) + " utterances, refs " +
                std::to_string(refs.size()));
  }
  std::map<std::string, const NBestList*> by_id;
  for (const auto& l : run) {
    if (!by_id.emplace(l.id, &l).second) throw Error("duplicate id '" + l.id + "'");
  }
  std::map<std::string, SplitReport> splits;
  for (const RefEntry& r : refs) {
    auto it = by_id.find(r.id);
    if (it == by_id.end()) throw Error("no hypotheses for id '" + r.id + "'");
    NBestList list = *it->second;
    list.ref = r.transcript;
    const WerBreakdown one = OneBestWer(list);
    const WerBreakdown oracle = OracleWer(list);
    for (const std::string& key : {std::string("all"), r.label}) {
      if (key.empty()) continue;
      SplitReport& s = splits[key];
      s.wer += one;
      s.oracle += oracle;
      ++s.utterances;
    }
  }
  return splits;
}

}  // namespace

EvalReport Evaluate(const std::vector<NBestList>& run,
                    const std::vector<RefEntry>& refs, std::string name,
                    const std::vector<NBestList>* baseline) {
  EvalReport report;
  report.name = std::move(name);
  report.splits = Score(run, refs);
  if (baseline != nullptr) {
    const auto base = Score(*baseline, refs);
    for (auto& [label, s] : report.splits) {
      const SplitReport& b = base.at(label);
      if (b.wer.wer > 0.0) {
        s.werr = Werr(b.wer.wer, s.wer.wer);
        s.has_baseline = true;
      }
      if (b.oracle.wer > 0.0) s.oracle_werr = Werr(b.oracle.wer, s.oracle.wer);
    }
  }
  return report;
}

namespace {

std::string Fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

std::vector<std::string> Labels(const std::vector<EvalReport>& reports) {
  std::vector<std::string> labels;
  for (const auto& r : reports) {
    for (const auto& [label, s] : r.splits) {
      if (label != "all" &&
          std::find(labels.begin(), labels.end(), label) == labels.end()) {
        labels.push_back(label);
      }
    }
  }
  std::sort(labels.begin(), labels.end());
  labels.push_back("all");
  return labels;
}

}  // namespace

// Table and JSON share the same rounding.
std::string FormatTable(const std::vector<EvalReport>& reports) {
  const std::vector<std::string> labels = Labels(reports);
  std::ostringstream out;
  char buf[128];
  std::snprintf(buf, sizeof(buf), "%-28s", "system");
  out << buf;
  for (const auto& l : labels) {
    std::snprintf(buf, sizeof(buf), " | %-10s %8s %8s %8s %8s", l.c_str(), "WER",
                  "WERR", "oWER", "oWERR");
    out << buf;
  }
  out << '\n';
  for (const auto& r : reports) {
    std::snprintf(buf, sizeof(buf), "%-28s", r.name.c_str());
    out << buf;
    for (const auto& l : labels) {
      auto it = r.splits.find(l);
      if (it == r.splits.end()) {
        std::snprintf(buf, sizeof(buf), " | %-10s %8s %8s %8s %8s", "", "-", "-",
                      "-", "-");
      } else {
        const SplitReport& s = it->second;
        const std::string werr = s.has_baseline ? Fixed(s.werr, 1) : "-";
        const std::string owerr = s.has_baseline ? Fixed(s.oracle_werr, 1) : "-";
        std::snprintf(buf, sizeof(buf), " | %-10s %8s %8s %8s %8s", "",
                      Fixed(100.0 * s.wer.wer, 2).c_str(), werr.c_str(),
                      Fixed(100.0 * s.oracle.wer, 2).c_str(), owerr.c_str());
      }
      out << buf;
    }
    out << '\n';
  }
  return out.str();
}

std::string ReportJson(const std::vector<EvalReport>& reports) {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& r : reports) {
    nlohmann::json splits = nlohmann::json::object();
    for (const auto& [label, s] : r.splits) {
      nlohmann::json js = {
          {"utterances", s.utterances},
          {"ref_words", s.wer.ref_words},
          {"errors", s.wer.errors()},
          {"substitutions", s.wer.substitutions},
          {"deletions", s.wer.deletions},
          {"insertions", s.wer.insertions},
          {"oracle_errors", s.oracle.errors()},
          {"wer", std::stod(Fixed(100.0 * s.wer.wer, 2))},
          {"oracle_wer", std::stod(Fixed(100.0 * s.oracle.wer, 2))},
      };
      if (s.has_baseline) {
        js["werr"] = std::stod(Fixed(s.werr, 1));
        js["oracle_werr"] = std::stod(Fixed(s.oracle_werr, 1));
      }
      splits[label] = std::move(js);
    }
    j.push_back({{"system", r.name}, {"splits", std::move(splits)}});
  }
  return j.dump(2) + "\n";
}

}  // namespace biaslattice
