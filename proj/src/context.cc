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

#include "biaslattice/context.h"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <istream>
#include <map>

#include "biaslattice/error.h"
#include "biaslattice/text.h"

namespace biaslattice {

namespace {

bool IsBlank(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; }

[[noreturn]] void Malformed(const std::string& what, std::size_t lineno) {
  throw FormatError("malformed annotation: " + what, lineno,
                    FormatError::Unit::kLine);
}

}  // namespace

std::vector<AnnotatedToken> ParseAnnotated(std::string_view line,
                                           std::size_t lineno) {
  std::vector<AnnotatedToken> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && IsBlank(line[i])) ++i;
    if (i >= line.size()) break;
    std::size_t end = i;
    while (end < line.size() && !IsBlank(line[end]) && line[end] != '(') ++end;
    std::string_view head = line.substr(i, end - i);
    if (end < line.size() && line[end] == '(') {
      if (head.size() < 2 || head.front() != '@') {
        Malformed("'(' must follow a tag name such as @contactname", lineno);
      }
      std::size_t close = line.find(')', end + 1);
      if (close == std::string_view::npos) Malformed("unclosed span", lineno);
      std::string_view inner = line.substr(end + 1, close - end - 1);
      if (inner.find('(') != std::string_view::npos ||
          inner.find('@') != std::string_view::npos) {
        Malformed("nested span", lineno);
      }
      AnnotatedToken tok;
      tok.tag = ToLower(head);
      tok.words = SplitWords(ToLower(inner));
      if (tok.words.empty()) Malformed("empty span", lineno);
      out.push_back(std::move(tok));
      i = close + 1;
      if (i < line.size() && !IsBlank(line[i])) {
        Malformed("text directly after ')'", lineno);
      }
      continue;
    }
    if (head.find(')') != std::string_view::npos) {
      Malformed("unbalanced ')'", lineno);
    }
    AnnotatedToken tok;
    tok.words.push_back(ToLower(head));
    out.push_back(std::move(tok));
    i = end;
  }
  return out;
}

std::vector<std::string> TemplateOf(const std::vector<AnnotatedToken>& tokens) {
  std::vector<std::string> out;
  out.reserve(tokens.size());
  for (const auto& tok : tokens) {
    out.push_back(tok.is_class() ? tok.tag : tok.words.front());
  }
  return out;
}

WordFst BuildClassFst(const std::vector<std::string>& corpus, int min_count) {
  if (min_count < 1) throw Error("min_count must be >= 1");
  std::map<std::vector<std::string>, int> counts;
  for (std::size_t n = 0; n < corpus.size(); ++n) {
    std::vector<std::string> tmpl = TemplateOf(ParseAnnotated(corpus[n], n + 1));
    if (!tmpl.empty()) ++counts[std::move(tmpl)];
  }
  std::vector<CatalogEntry> entries;
  for (const auto& [tmpl, count] : counts) {
    if (count >= min_count) entries.push_back({tmpl, 0.0});
  }
  if (entries.empty()) {
    WordFst::State start;
    start.phi_loop = true;
    return WordFst({start}, 0);
  }
  return BuildCatalogFst(entries);
}

std::vector<std::string> ReadLines(std::istream& in) {
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
  }
  return lines;
}

Bindings ReadBindings(std::istream& in, const std::string& base_dir,
                      std::string_view delimiter) {
  Bindings bindings;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view view = Trim(line);
    if (view.empty() || view.front() == '#') continue;
    std::vector<std::string> fields = SplitTabs(view);
    if (fields.size() != 2 || !IsClassTag(Trim(fields[0])) ||
        Trim(fields[1]).empty()) {
      throw FormatError("binding lines must be '@tag<TAB>path'", lineno,
                        FormatError::Unit::kLine);
    }
    std::string tag = ToLower(Trim(fields[0]));
    std::filesystem::path path(std::string(Trim(fields[1])));
    if (path.is_relative() && !base_dir.empty()) path = base_dir / path;
    if (bindings.contains(tag)) {
      throw FormatError("duplicate binding for " + tag, lineno,
                        FormatError::Unit::kLine);
    }
    bindings[tag] =
        std::make_shared<const WordFst>(LoadFstOrCatalog(path.string(), delimiter));
  }
  return bindings;
}

Bindings ReadBindingsFile(const std::string& path, std::string_view delimiter) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open bindings '" + path + "'");
  return ReadBindings(in, std::filesystem::path(path).parent_path().string(),
                      delimiter);
}

ContextualBiaser::ContextualBiaser(WordFst class_fst, Bindings bindings,
                                   WordpieceVocab vocab)
    : class_fst_(std::move(class_fst)), vocab_(std::move(vocab)) {
  std::map<std::string, std::size_t> index;
  for (const auto& [tag, fst] : bindings) {
    if (fst == nullptr) throw Error("binding for " + tag + " is null");
    index[tag] = tags_.size();
    tags_.push_back(tag);
    fsts_.push_back(fst);
  }
  tag_arcs_.resize(class_fst_.NumStates());
  for (StateId s = 0; s < class_fst_.NumStates(); ++s) {
    for (const auto& arc : class_fst_.Arcs(s)) {
      if (arc.weight != 0.0) throw Error("class FST arcs must be unweighted");
      if (!IsClassTag(arc.word)) continue;
      auto it = index.find(arc.word);
      if (it == index.end()) throw Error("class tag " + arc.word + " is unbound");
      tag_arcs_[s].push_back({it->second, arc.next});
    }
  }
}

ContextualBiaser ContextualBiaser::Uncontextual(Bindings bindings,
                                                WordpieceVocab vocab) {
  if (bindings.empty()) throw Error("no biasing FSTs bound");
  std::vector<WordFst::State> states(2);
  states[0].phi_loop = true;
  states[1].final = true;
  for (const auto& [tag, fst] : bindings) {
    states[0].arcs.push_back({tag, 0.0, 1});
  }
  return ContextualBiaser(WordFst(std::move(states), 0), std::move(bindings),
                          std::move(vocab));
}

BiasSession::BiasSession(const ContextualBiaser& biaser, bool use_cache,
                         LookaheadStats* stats)
    : biaser_(&biaser), stats_(stats) {
  caches_.resize(biaser.tags().size());
  if (use_cache) {
    for (auto& cache : caches_) cache = std::make_unique<LookaheadCache>();
  }
}

BiasCursor BiasSession::Open() const {
  BiasCursor cursor;
  cursor.class_state = biaser_->class_fst().Start();
  SkipLeaf(cursor);
  return cursor;
}

void BiasSession::SkipLeaf(BiasCursor& cursor) const {
  const WordFst& fst = biaser_->class_fst();
  if (fst.NumArcs(cursor.class_state) == 0) cursor.class_state = fst.Start();
}

void BiasSession::MatchPlain(BiasCursor& cursor) const {
  const WordFst& fst = biaser_->class_fst();
  if (IsClassTag(cursor.word)) {
    cursor.class_state = fst.Start();
    return;
  }
  if (auto idx = fst.FindArc(cursor.class_state, cursor.word)) {
    cursor.class_state = fst.Arcs(cursor.class_state)[*idx].next;
    return;
  }
  // Out-of-template word: pass through at zero cost and restart the template.
  cursor.class_state = fst.Start();
  if (auto idx = fst.FindArc(cursor.class_state, cursor.word)) {
    cursor.class_state = fst.Arcs(cursor.class_state)[*idx].next;
  }
}

double BiasSession::Potential(const BiasCursor& cursor) const {
  bool any = false;
  double group = 0.0;
  for (const auto& thread : cursor.threads) {
    if (!thread.session.contributes()) continue;
    group = any ? std::min(group, thread.session.total()) : thread.session.total();
    any = true;
  }
  if (cursor.pending) {
    group = any ? std::min(group, cursor.pending->total) : cursor.pending->total;
    any = true;
  }
  return cursor.banked + (any ? group : 0.0);
}

void BiasSession::ResolveWord(BiasCursor& cursor) const {
  if (!cursor.tag_mode) {
    MatchPlain(cursor);
    SkipLeaf(cursor);
    return;
  }
  std::optional<BiasCursor::Pending> best = cursor.pending;
  bool best_ends_here = false;
  std::vector<BiasCursor::Thread> continuing;
  for (auto& thread : cursor.threads) {
    const WordOutcome outcome = thread.session.outcome();
    if (outcome == WordOutcome::kNonFinal ||
        outcome == WordOutcome::kFinalOpen) {
      continuing.push_back(std::move(thread));
      continue;
    }
    if (outcome == WordOutcome::kLeaf || outcome == WordOutcome::kRetreated) {
      const double total = thread.session.total();
      if (!best || total < best->total) {
        best = BiasCursor::Pending{thread.after_tag, total};
        best_ends_here = outcome == WordOutcome::kLeaf;
      }
    }
  }
  if (!continuing.empty()) {
    cursor.threads = std::move(continuing);
    cursor.pending = best;
    return;
  }
  cursor.threads.clear();
  cursor.pending.reset();
  cursor.tag_mode = false;
  if (best) {
    cursor.banked += best->total;
    cursor.class_state = best->after_tag;
    // A tag that ended on an earlier word leaves this word to the template.
    if (!best_ends_here) MatchPlain(cursor);
  } else {
    MatchPlain(cursor);
  }
  SkipLeaf(cursor);
}

double BiasSession::Advance(BiasCursor& cursor, std::string_view token) const {
  const WordpieceVocab& vocab = biaser_->vocab();
  if (!cursor.in_word) {
    cursor.in_word = true;
    cursor.word.clear();
    if (!cursor.tag_mode) {
      for (const auto& ta : biaser_->TagArcs(cursor.class_state)) {
        SessionOptions options;
        options.cache = caches_[ta.tag].get();
        options.stats = stats_;
        cursor.threads.push_back(
            {ta.tag, ta.next,
             PhraseSession(biaser_->tag_fst(ta.tag), vocab, options)});
      }
      cursor.tag_mode = !cursor.threads.empty();
    }
  }
  cursor.word += vocab.Content(token);
  for (auto& thread : cursor.threads) thread.session.Step(token);
  if (vocab.IsDelimiter(token)) {
    cursor.in_word = false;
    ResolveWord(cursor);
  }
  const double potential = Potential(cursor);
  const double increment = potential - cursor.emitted;
  cursor.emitted = potential;
  return increment;
}

double BiasSession::Expand(BiasCursor& cursor, std::string_view piece) const {
  if (biaser_->vocab().IsDelimiter(piece)) {
    throw Error("context expand on delimiter token; use FinishWord");
  }
  return Advance(cursor, piece);
}

double BiasSession::FinishWord(BiasCursor& cursor,
                               std::string_view token) const {
  if (!biaser_->vocab().IsDelimiter(token)) {
    throw Error("context finish on non-delimiter token");
  }
  return Advance(cursor, token);
}

}  // namespace biaslattice
