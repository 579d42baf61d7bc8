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

#include "biaslattice/ngram_lm.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <set>
#include <cstdio>

#include "biaslattice/context.h"
#include "biaslattice/error.h"
#include "biaslattice/text.h"

namespace biaslattice {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
// Written for log10(0) by ARPA convention.
constexpr double kArpaZero = -99.0;

double LogAdd(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  const double m = std::max(a, b);
  return m + std::log1p(std::exp(std::min(a, b) - m));
}

template <typename Key>
void Accumulate(std::map<Key, double>& m, const Key& key, double logp) {
  auto [it, inserted] = m.try_emplace(key, kNegInf);
  it->second = LogAdd(it->second, logp);
}

}  // namespace

NGramLM::NGramLM(std::vector<std::map<Ngram, Entry>> tables,
                 std::map<std::string, std::map<std::string, double>> classes)
    : tables_(std::move(tables)), classes_(std::move(classes)) {
  if (tables_.empty() || tables_[0].empty()) {
    throw Error("language model needs a unigram table");
  }
  for (std::size_t k = 0; k < tables_.size(); ++k) {
    for (const auto& [g, e] : tables_[k]) {
      if (g.size() != k + 1) throw Error("n-gram stored at the wrong order");
    }
  }
  for (const auto& [tag, members] : classes_) {
    for (const auto& [m, lp] : members) {
      max_member_words_ = std::max(max_member_words_, SplitWords(m).size());
    }
  }
}

std::vector<std::string> NGramLM::Vocabulary() const {
  std::vector<std::string> v;
  for (const auto& [g, e] : tables_[0]) {
    if (g[0] != kBos) v.push_back(g[0]);
  }
  return v;
}

bool NGramLM::InVocabulary(std::string_view word) const {
  return word != kBos && tables_[0].count(Ngram{std::string(word)}) > 0;
}

double NGramLM::ConditionalLogProb(const std::vector<std::string>& context,
                                   std::string_view word) const {
  const std::string w =
      InVocabulary(word) ? std::string(word) : std::string(kUnk);
  const std::size_t n = std::min(context.size(), tables_.size() - 1);
  Ngram h(context.end() - static_cast<std::ptrdiff_t>(n), context.end());
  double backoff = 0.0;
  while (true) {
    Ngram g = h;
    g.push_back(w);
    const auto& table = tables_[h.size()];
    if (auto it = table.find(g); it != table.end()) {
      return backoff + it->second.logp;
    }
    if (h.empty()) return kNegInf;
    const auto& ctx = tables_[h.size() - 1];
    if (auto it = ctx.find(h); it != ctx.end()) backoff += it->second.backoff;
    h.erase(h.begin());
  }
}

double NGramLM::ClassMemberLogProb(std::string_view tag,
                                   std::string_view member) const {
  auto c = classes_.find(std::string(tag));
  if (c == classes_.end()) return kNegInf;
  auto m = c->second.find(std::string(member));
  return m == c->second.end() ? kNegInf : m->second;
}

double NGramLM::TokenLogProb(const std::vector<std::string>& tokens) const {
  std::vector<std::string> h = {std::string(kBos)};
  double total = 0.0;
  for (const auto& t : tokens) {
    total += ConditionalLogProb(h, t);
    h.push_back(InVocabulary(t) ? t : std::string(kUnk));
  }
  return total + ConditionalLogProb(h, kEos);
}

double NGramLM::LogProb(const std::vector<std::string>& words) const {
  const std::size_t keep = std::max<std::size_t>(tables_.size() - 1, 1);
  auto extend = [&](const Ngram& h, const std::string& t) {
    Ngram next = h;
    next.push_back(InVocabulary(t) ? t : std::string(kUnk));
    if (next.size() > keep) {
      next.erase(next.begin(),
                 next.end() - static_cast<std::ptrdiff_t>(keep));
    }
    return next;
  };
  // frontier[i]: history -> total log-probability of the parses of words[0,i).
  std::vector<std::map<Ngram, double>> frontier(words.size() + 1);
  frontier[0][Ngram{std::string(kBos)}] = 0.0;
  for (std::size_t i = 0; i < words.size(); ++i) {
    for (const auto& [h, lp] : frontier[i]) {
      if (lp == kNegInf) continue;
      Accumulate(frontier[i + 1], extend(h, words[i]),
                 lp + ConditionalLogProb(h, words[i]));
      std::string member;
      for (std::size_t len = 1;
           len <= max_member_words_ && i + len <= words.size(); ++len) {
        if (len > 1) member += ' ';
        member += words[i + len - 1];
        for (const auto& [tag, members] : classes_) {
          auto m = members.find(member);
          if (m == members.end()) continue;
          Accumulate(frontier[i + len], extend(h, tag),
                     lp + ConditionalLogProb(h, tag) + m->second);
        }
      }
    }
  }
  double total = kNegInf;
  for (const auto& [h, lp] : frontier[words.size()]) {
    total = LogAdd(total, lp + ConditionalLogProb(h, kEos));
  }
  return total;
}

NGramLM TrainKnLm(const std::vector<std::string>& corpus, int order) {
  if (order < 1) throw Error("n-gram order must be >= 1");
  using Ngram = NGramLM::Ngram;
  const std::string bos(kBos), eos(kEos), unk(kUnk);

  std::vector<std::vector<std::string>> sentences;
  std::map<std::string, std::map<std::string, double>> class_counts;
  std::size_t lineno = 0;
  for (const std::string& line : corpus) {
    ++lineno;
    if (Trim(line).empty()) continue;
    std::vector<std::string> sent = {bos};
    for (const AnnotatedToken& t : ParseAnnotated(line, lineno)) {
      if (t.is_class()) {
        sent.push_back(t.tag);
        class_counts[t.tag][JoinWords(t.words)] += 1.0;
      } else {
        sent.push_back(t.words[0]);
      }
    }
    sent.push_back(eos);
    sentences.push_back(std::move(sent));
  }
  if (sentences.empty()) throw Error("empty language model corpus");

  const auto n = static_cast<std::size_t>(order);
  // raw[k]: occurrence counts of (k+1)-grams, excluding those ending in <s>.
  std::vector<std::map<Ngram, double>> raw(n);
  std::set<std::string> vocab = {eos, unk};
  for (const auto& s : sentences) {
    for (std::size_t i = 1; i < s.size(); ++i) {
      vocab.insert(s[i]);
      for (std::size_t k = 0; k < n && k <= i; ++k) {
        raw[k][Ngram(s.begin() + static_cast<std::ptrdiff_t>(i - k),
                     s.begin() + static_cast<std::ptrdiff_t>(i + 1))] += 1.0;
      }
    }
  }

  // Counts used at each order: raw at the top order and for <s>-initial
  // n-grams, distinct left extensions otherwise.
  std::vector<std::map<Ngram, double>> counts(n);
  counts[n - 1] = raw[n - 1];
  for (std::size_t k = 0; k + 1 < n; ++k) {
    for (const auto& [g, c] : raw[k]) {
      if (g[0] == bos) counts[k][g] = c;
    }
    for (const auto& [g, c] : raw[k + 1]) {
      Ngram tail(g.begin() + 1, g.end());
      if (tail[0] != bos) counts[k][tail] += 1.0;
    }
  }

  std::vector<double> discount(n);
  struct ContextStats {
    double total = 0.0;
    double types = 0.0;
  };
  std::vector<std::map<Ngram, ContextStats>> ctx(n);
  for (std::size_t k = 0; k < n; ++k) {
    double n1 = 0, n2 = 0;
    for (const auto& [g, c] : counts[k]) {
      if (c == 1.0) ++n1;
      if (c == 2.0) ++n2;
      auto& st = ctx[k][Ngram(g.begin(), g.end() - 1)];
      st.total += c;
      st.types += 1.0;
    }
    // Undefined or total discounts (n1 = 0 or n2 = 0) fall back to 0.5.
    discount[k] = (n1 == 0 || n2 == 0) ? 0.5 : n1 / (n1 + 2.0 * n2);
  }

  const double base = 1.0 / static_cast<double>(vocab.size());
  // Interpolated probability of g.back() given the rest, in linear space.
  std::vector<std::map<Ngram, double>> prob(n);
  // Every lower-order tail of a counted n-gram is itself counted.
  auto lower = [&](const Ngram& g, std::size_t k) -> double {
    if (k == 0) return base;
    return prob[k - 1].at(Ngram(g.begin() + 1, g.end()));
  };
  for (std::size_t k = 0; k < n; ++k) {
    std::set<Ngram> grams;
    for (const auto& [g, c] : counts[k]) grams.insert(g);
    if (k == 0) {
      for (const auto& w : vocab) grams.insert(Ngram{w});
    }
    for (const Ngram& g : grams) {
      Ngram h(g.begin(), g.end() - 1);
      const auto& st = ctx[k][h];
      const double c = counts[k].count(g) ? counts[k].at(g) : 0.0;
      const double d = discount[k];
      prob[k][g] = (std::max(c - d, 0.0) + d * st.types * lower(g, k)) / st.total;
    }
  }

  std::vector<std::map<Ngram, NGramLM::Entry>> tables(n);
  for (std::size_t k = 0; k < n; ++k) {
    for (const auto& [g, p] : prob[k]) tables[k][g].logp = std::log(p);
  }
  // <s> is never predicted but carries the sentence-start back-off weight.
  tables[0][Ngram{bos}].logp = kNegInf;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    for (auto& [g, e] : tables[k]) {
      auto cs = ctx[k + 1].find(g);
      if (cs != ctx[k + 1].end()) {
        e.backoff = std::log(discount[k + 1] * cs->second.types / cs->second.total);
      }
    }
  }

  std::map<std::string, std::map<std::string, double>> classes;
  for (const auto& [tag, members] : class_counts) {
    double total = 0.0;
    for (const auto& [m, c] : members) total += c;
    for (const auto& [m, c] : members) classes[tag][m] = std::log(c / total);
  }
  return NGramLM(std::move(tables), std::move(classes));
}

namespace {

void WriteLog10(std::ostream& out, double ln) {
  if (ln == kNegInf) {
    out << kArpaZero;
  } else {
    out << ln / std::log(10.0);
  }
}

double ReadLog10(double v) {
  return v <= kArpaZero ? kNegInf : v * std::log(10.0);
}

}  // namespace

void WriteArpa(std::ostream& out, const NGramLM& lm) {
  const auto& tables = lm.tables();
  out << std::setprecision(17);
  out << "\n\\data\\\n";
  for (std::size_t k = 0; k < tables.size(); ++k) {
    out << "ngram " << k + 1 << "=" << tables[k].size() << "\n";
  }
  for (std::size_t k = 0; k < tables.size(); ++k) {
    out << "\n\\" << k + 1 << "-grams:\n";
    for (const auto& [g, e] : tables[k]) {
      WriteLog10(out, e.logp);
      out << '\t' << JoinWords(g);
      if (k + 1 < tables.size()) {
        out << '\t';
        WriteLog10(out, e.backoff);
      }
      out << '\n';
    }
  }
  out << "\n\\end\\\n";
}

void WriteClassSidecar(std::ostream& out, const NGramLM& lm) {
  out << std::setprecision(17);
  for (const auto& [tag, members] : lm.classes()) {
    for (const auto& [m, lp] : members) {
      out << tag << '\t' << m << '\t';
      WriteLog10(out, lp);
      out << '\n';
    }
  }
}

NGramLM ReadArpa(std::istream& arpa, std::istream* classes) {
  using Kind = FormatError::Unit;
  std::vector<std::size_t> declared;
  std::vector<std::map<NGramLM::Ngram, NGramLM::Entry>> tables;
  std::string line;
  std::size_t lineno = 0;
  enum class Section { kPreamble, kData, kGrams, kEnd } section = Section::kPreamble;
  std::size_t current = 0;
  auto parse_double = [&](const std::string& s) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != s.size()) throw FormatError("bad number '" + s + "'", lineno, Kind::kLine);
    return v;
  };
  while (std::getline(arpa, line)) {
    ++lineno;
    const std::string_view t = Trim(line);
    if (t.empty()) continue;
    if (t == "\\data\\") {
      section = Section::kData;
      continue;
    }
    if (t == "\\end\\") {
      section = Section::kEnd;
      break;
    }
    if (t.front() == '\\') {
      const std::string s(t);
      std::size_t k = 0;
      if (std::sscanf(s.c_str(), "\\%zu-grams:", &k) != 1 || k == 0 ||
          k > declared.size()) {
        throw FormatError("bad section header", lineno, Kind::kLine);
      }
      section = Section::kGrams;
      current = k;
      continue;
    }
    if (section == Section::kData) {
      std::size_t k = 0, count = 0;
      if (std::sscanf(std::string(t).c_str(), "ngram %zu=%zu", &k, &count) != 2 ||
          k != declared.size() + 1) {
        throw FormatError("bad ngram count line", lineno, Kind::kLine);
      }
      declared.push_back(count);
      tables.resize(declared.size());
      continue;
    }
    if (section != Section::kGrams) {
      if (section == Section::kPreamble) continue;
      throw FormatError("unexpected line", lineno, Kind::kLine);
    }
    const std::vector<std::string> f = SplitWords(t);
    const bool has_backoff = f.size() == current + 2;
    if (f.size() != current + 1 && !has_backoff) {
      throw FormatError("wrong field count for a " + std::to_string(current) +
                            "-gram", lineno, Kind::kLine);
    }
    NGramLM::Entry e;
    e.logp = ReadLog10(parse_double(f[0]));
    if (has_backoff) e.backoff = ReadLog10(parse_double(f[current + 1]));
    NGramLM::Ngram g(f.begin() + 1, f.begin() + 1 + static_cast<std::ptrdiff_t>(current));
    if (!tables[current - 1].emplace(std::move(g), e).second) {
      throw FormatError("duplicate n-gram", lineno, Kind::kLine);
    }
  }
  if (section != Section::kEnd) throw FormatError("missing \\end\\", lineno, Kind::kLine);
  for (std::size_t k = 0; k < declared.size(); ++k) {
    if (tables[k].size() != declared[k]) {
      throw FormatError("n-gram count mismatch for order " + std::to_string(k + 1),
                        lineno, Kind::kLine);
    }
  }

  std::map<std::string, std::map<std::string, double>> class_table;
  if (classes != nullptr) {
    lineno = 0;
    while (std::getline(*classes, line)) {
      ++lineno;
      if (Trim(line).empty()) continue;
      const std::vector<std::string> f = SplitTabs(line);
      if (f.size() != 3 || !IsClassTag(f[0]) || Trim(f[1]).empty()) {
        throw FormatError("expected tag<TAB>member<TAB>log10p", lineno, Kind::kLine);
      }
      class_table[f[0]][JoinWords(SplitWords(f[1]))] =
          ReadLog10(parse_double(std::string(Trim(f[2]))));
    }
  }
  try {
    return NGramLM(std::move(tables), std::move(class_table));
  } catch (const Error& e) {
    throw FormatError(e.what(), lineno, Kind::kLine);
  }
}

void SaveLm(const std::string& path, const NGramLM& lm) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  WriteArpa(out, lm);
  if (!lm.classes().empty()) {
    std::ofstream side(path + ".classes");
    if (!side) throw Error("cannot write " + path + ".classes");
    WriteClassSidecar(side, lm);
  }
}

NGramLM LoadLm(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  std::ifstream side(path + ".classes");
  return ReadArpa(in, side ? &side : nullptr);
}

}  // namespace biaslattice
