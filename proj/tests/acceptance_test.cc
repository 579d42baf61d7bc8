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

// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit status if
// any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "biaslattice/context.h"
#include "biaslattice/decode.h"
#include "biaslattice/lookahead.h"
#include "biaslattice/metrics.h"
#include "biaslattice/ngram_lm.h"
#include "biaslattice/second_pass.h"
#include "biaslattice/text.h"
#include "biaslattice/word_fst.h"
#include "biaslattice/wordpiece.h"
#include "oracles.h"
#include "synthetic_task.h"

namespace biaslattice {
namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = true;
  std::string detail;

  // Records a named check; the first failing check is kept in the detail.
  void Check(bool ok, const std::string& what) {
    if (!ok && pass) detail = "failed: " + what + (detail.empty() ? "" : "; " + detail);
    pass = pass && ok;
  }
  void Note(const std::string& text) { detail += (detail.empty() ? "" : "; ") + text; }
};

std::string Fmt(const char* format, double a, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), format, a, b, c, d);
  return buf;
}

// Feeds one word's tokens into `s` and returns the running sum of increments.
double ScoreWord(ExpandSession& s, const WordpieceVocab& vocab,
                 const std::vector<std::string>& tokens,
                 std::vector<ArcRange>* ranges = nullptr) {
  double total = 0.0;
  for (const auto& t : tokens) {
    if (s.dead() || s.finished()) break;
    total += vocab.IsDelimiter(t) ? s.FinishWord(vocab, t).increment : s.Expand(t);
    if (ranges != nullptr && !s.dead() && !s.finished()) ranges->push_back(s.range());
  }
  return total;
}

Outcome GoldenLookahead() {
  Outcome o;
  const WordFst fst =
      BuildCatalogFst({{{"play"}, -8}, {{"player"}, -8}, {{"playground"}, -8}});
  std::vector<std::string> pieces = {"pl", "ay", "er", "er_"};
  for (char c = 'a'; c <= 'z'; ++c) pieces.emplace_back(1, c);
  const WordpieceVocab vocab(pieces);
  std::vector<LookaheadStep> steps;
  SessionOptions options;
  options.trace_steps = &steps;
  ExpandSession s(fst, fst.Start(), options);
  const double a = s.Expand("pl");
  const double b = s.Expand("ay");
  const double c = s.FinishWord(vocab, "er_").increment;
  o.Check(std::abs(a + 1.6) <= 1e-9 && std::abs(b + 1.6) <= 1e-9 && std::abs(c + 4.8) <= 1e-9,
          "increments");
  o.Check(std::abs(a + b + c + 8.0) <= 1e-9, "sum");
  o.Check(!steps.empty() && steps[0].prefix == "pl" && steps[0].prefix_length == 2 &&
              steps[0].max_length == 10 && std::abs(steps[0].pushed + 1.6) <= 1e-9,
          "first step L, N, w_pushed");
  o.Note(Fmt("increments %.4f %.4f %.4f, sum %.4f", a, b, c, a + b + c));
  if (!steps.empty()) {
    o.Note(Fmt("pl: L=%.0f N=%.0f w_pushed=%.4f", steps[0].prefix_length,
               steps[0].max_length, steps[0].pushed));
  }
  return o;
}

Outcome BruteForceEquivalence() {
  Outcome o;
  std::mt19937_64 rng(20261);
  std::size_t catalogs = 0, words = 0, segmentations = 0, strangers = 0;
  double worst = 0.0;
  bool neutral = true, prefixes = true;
  for (; catalogs < 250; ++catalogs) {
    const std::string alphabet = std::string("abcdef").substr(0, 3 + catalogs % 4);
    const auto entries = testing::RandomCatalog(rng, alphabet, 50, -10, 0);
    const WordFst fst = BuildCatalogFst(entries);
    const WordpieceVocab vocab = testing::RandomVocab(rng, alphabet);
    const testing::MaterializedSubwordFst oracle(fst, fst.Start());
    for (const auto& e : entries) {
      ++words;
      for (const auto& seg : testing::Segmentations(vocab, e.phrase[0])) {
        ++segmentations;
        ExpandSession s(fst, fst.Start());
        std::string prefix;
        double total = 0.0;
        for (const auto& t : seg) {
          if (vocab.IsDelimiter(t)) {
            total += s.FinishWord(vocab, t).increment;
            break;
          }
          total += s.Expand(t);
          prefix += t;
          const auto pushed = oracle.Pushed(prefix);
          prefixes = prefixes && pushed && std::abs(s.emitted() - *pushed) <= 1e-9;
        }
        worst = std::max(worst, std::abs(total - oracle.PathWeight(vocab, seg)));
        worst = std::max(worst, std::abs(total - e.weight));
      }
    }
    std::set<std::string> in_catalog;
    for (const auto& e : entries) in_catalog.insert(e.phrase[0]);
    for (int k = 0; k < 40; ++k) {
      const std::string w = testing::RandomWord(rng, alphabet, 1, 9);
      if (in_catalog.count(w)) continue;
      ++strangers;
      for (const auto& seg : testing::Segmentations(vocab, w, 8)) {
        ExpandSession s(fst, fst.Start());
        const double total = ScoreWord(s, vocab, seg);
        neutral = neutral && total == 0.0 && s.emitted() == 0.0;
      }
    }
  }
  o.Check(worst <= 1e-9, "catalog path weights");
  o.Check(prefixes, "prefix pushed weights");
  o.Check(neutral, "non-catalog words net zero");
  o.Note(Fmt("%.0f catalogs, %.0f words, %.0f segmentations, max |error| %.2e",
             catalogs, words, segmentations, worst));
  o.Note(Fmt("%.0f non-catalog words", strangers));
  return o;
}

Outcome RangeNarrowing() {
  Outcome o;
  std::mt19937_64 rng(20262);
  std::size_t queries = 0;
  bool exact = true, nested = true;
  while (queries < 100000) {
    const WordFst fst = BuildCatalogFst(testing::RandomCatalog(rng, "abcde", 80, -5, 0));
    auto arcs = fst.Arcs(fst.Start());
    std::uniform_int_distribution<std::size_t> idx(0, arcs.size());
    for (int q = 0; q < 500; ++q, ++queries) {
      std::size_t lo = idx(rng), hi = idx(rng);
      if (lo > hi) std::swap(lo, hi);
      const std::string prefix = testing::RandomWord(rng, "abcde", 0, 4);
      const ArcRange got = PrefixRange(arcs, {lo, hi}, prefix);
      const ArcRange want = testing::LinearPrefixRange(arcs, {lo, hi}, prefix);
      exact = exact && got.size() == want.size() && (want.empty() || got == want) &&
              lo <= got.lo && got.hi <= hi;
    }
    const WordpieceVocab vocab = testing::RandomVocab(rng, "abcde");
    for (int k = 0; k < 50; ++k) {
      ExpandSession s(fst, fst.Start());
      std::vector<ArcRange> ranges = {s.range()};
      ScoreWord(s, vocab, vocab.Segment(testing::RandomWord(rng, "abcde", 1, 8)), &ranges);
      for (std::size_t i = 1; i < ranges.size(); ++i) {
        nested = nested && ranges[i - 1].lo <= ranges[i].lo && ranges[i].hi <= ranges[i - 1].hi;
      }
    }
  }
  o.Check(exact, "prefix range equals linear scan");
  o.Check(nested, "ranges never widen");
  o.Note(Fmt("%.0f queries", queries));
  return o;
}

// First-pass and second-pass runs over the synthetic task, computed once.
class Pipeline {
 public:
  static constexpr double kLambdas[] = {0.0, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 4.0};

  Pipeline()
      : test_(task_.Utterances("test")),
        dev_(task_.Utterances("dev")),
        oracle_(task_.MakeOracle(Concat(test_, dev_))),
        contacts_(ContextualBiaser::Uncontextual(task_.ContactBindings(), task_.vocab())),
        no_context_(ContextualBiaser::Uncontextual(task_.AllBindings(), task_.vocab())),
        context_(task_.ClassFst(), task_.AllBindings(), task_.vocab()) {}

  const testing::SyntheticTask& task() const { return task_; }
  const std::vector<testing::SyntheticUtterance>& test() const { return test_; }
  const std::vector<testing::SyntheticUtterance>& dev() const { return dev_; }

  enum System { kContactsSubword, kContactsWord, kNoContext, kContext };

  const std::vector<NBestList>& Decode(System system, double lambda, bool dev = false) {
    auto key = std::make_tuple(system, lambda, dev);
    auto it = runs_.find(key);
    if (it != runs_.end()) return it->second;
    DecodeOptions options;
    options.lambda = lambda;
    options.beam_size = 8;
    options.n_best = 8;
    options.word_level = system == kContactsWord;
    const ContextualBiaser* biaser = system == kContactsSubword || system == kContactsWord
                                         ? &contacts_
                                         : system == kNoContext ? &no_context_ : &context_;
    std::vector<NBestList> out;
    for (const auto& u : dev ? dev_ : test_) {
      out.push_back(BeamSearch(oracle_, u.id, u.transcript, biaser, task_.vocab(), options));
    }
    return runs_.emplace(key, std::move(out)).first->second;
  }

  const EvalReport& Report(System system, double lambda) {
    auto key = std::make_pair(system, lambda);
    auto it = reports_.find(key);
    if (it != reports_.end()) return it->second;
    return reports_.emplace(key, Evaluate(Decode(system, lambda), task_.Refs(test_), "run"))
        .first->second;
  }

  std::vector<const std::vector<NBestList>*> AllRuns() const {
    std::vector<const std::vector<NBestList>*> out;
    for (const auto& [key, run] : runs_) out.push_back(&run);
    return out;
  }

  double SplitWer(System system, double lambda, const std::string& split) {
    return Report(system, lambda).splits.at(split).wer.wer;
  }
  double SplitOracle(System system, double lambda, const std::string& split) {
    return Report(system, lambda).splits.at(split).oracle.wer;
  }

 private:
  static std::vector<testing::SyntheticUtterance> Concat(
      std::vector<testing::SyntheticUtterance> a,
      const std::vector<testing::SyntheticUtterance>& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
  }

  testing::SyntheticTask task_;
  std::vector<testing::SyntheticUtterance> test_, dev_;
  SynthOracle oracle_;
  ContextualBiaser contacts_, no_context_, context_;
  std::map<std::tuple<System, double, bool>, std::vector<NBestList>> runs_;
  std::map<std::pair<System, double>, EvalReport> reports_;
};

Pipeline& SharedPipeline() {
  static Pipeline pipeline;
  return pipeline;
}

Outcome BiasingTrend() {
  Outcome o;
  Pipeline& p = SharedPipeline();
  const double sub15 = p.SplitWer(Pipeline::kContactsSubword, 1.5, "contacts");
  const double base = p.SplitWer(Pipeline::kContactsSubword, 0.0, "contacts");
  double word_best = std::numeric_limits<double>::infinity(), word_lambda = 0.0;
  for (double lambda : Pipeline::kLambdas) {
    const double w = p.SplitWer(Pipeline::kContactsWord, lambda, "contacts");
    if (w < word_best) {
      word_best = w;
      word_lambda = lambda;
    }
  }
  o.Check(sub15 < base, "subword at 1.5 below lambda 0");
  o.Check(sub15 < word_best, "subword at 1.5 below best word-level");
  const double oracle15 = p.SplitOracle(Pipeline::kContactsSubword, 1.5, "contacts");
  const double oracle25 = p.SplitOracle(Pipeline::kContactsSubword, 2.5, "contacts");
  o.Check(oracle25 <= oracle15, "oracle at 2.5 not above 1.5");
  o.Note(Fmt("contacts WER: lambda0 %.2f%%, subword@1.5 %.2f%%, word-level best %.2f%% (lambda %.1f)",
             100 * base, 100 * sub15, 100 * word_best, word_lambda));
  o.Note(Fmt("contacts oracle %.2f%% -> %.2f%% (1.5 -> 2.5)", 100 * oracle15, 100 * oracle25));
  o.Note(Fmt("general 1-best %.2f%% -> %.2f%%",
             100 * p.SplitWer(Pipeline::kContactsSubword, 1.5, "general"),
             100 * p.SplitWer(Pipeline::kContactsSubword, 2.5, "general")));
  return o;
}

Outcome ContextualContainment() {
  Outcome o;
  Pipeline& p = SharedPipeline();
  const double base = p.SplitWer(Pipeline::kNoContext, 0.0, "general");
  const double no_ctx = p.SplitWer(Pipeline::kNoContext, 2.5, "general") - base;
  const double ctx = p.SplitWer(Pipeline::kContext, 2.5, "general") -
                     p.SplitWer(Pipeline::kContext, 0.0, "general");
  const double contacts_no_ctx = p.SplitWer(Pipeline::kNoContext, 2.5, "contacts");
  const double contacts_ctx = p.SplitWer(Pipeline::kContext, 2.5, "contacts");
  o.Check(ctx < no_ctx, "general degradation smaller with context");
  o.Check(contacts_ctx <= contacts_no_ctx, "contacts no worse with context");
  o.Note(Fmt("general degradation at 2.5: %+.2f%% without context, %+.2f%% with", 100 * no_ctx,
             100 * ctx));
  o.Note(Fmt("contacts %.2f%% without, %.2f%% with", 100 * contacts_no_ctx, 100 * contacts_ctx));
  return o;
}

Outcome DegenerateRescore() {
  Outcome o;
  Pipeline& p = SharedPipeline();
  for (double lambda : Pipeline::kLambdas) {
    for (auto s : {Pipeline::kContactsSubword, Pipeline::kContactsWord, Pipeline::kNoContext,
                   Pipeline::kContext}) {
      p.Decode(s, lambda);
    }
  }
  std::size_t lists = 0;
  bool exact = true;
  for (const auto* run : p.AllRuns()) {
    for (const NBestList& l : *run) {
      ++lists;
      const NBestList r = Rescore(l, {1.0, 0.0}, nullptr);
      exact = exact && r.hyps.size() == l.hyps.size();
      for (std::size_t i = 0; exact && i < l.hyps.size(); ++i) {
        exact = r.hyps[i].tokens == l.hyps[i].tokens &&
                RescoreScore(l.hyps[i], l.lambda, {1.0, 0.0}, 0.0) == l.hyps[i].fused;
      }
    }
  }
  o.Check(exact, "ranking and scores bit-exact");
  o.Note(Fmt("%.0f n-best lists", lists));
  return o;
}

Outcome TunerSoundness() {
  Outcome o;
  std::mt19937_64 rng(20263);
  std::uniform_real_distribution<double> score(-6, 0), sf(0, 4), lm(-30, -2);
  std::uniform_int_distribution<int> edits(0, 3);
  std::size_t runs = 0;
  bool seeds_ok = true;
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<TuneItem> dev;
    for (int u = 0; u < 30; ++u) {
      TuneItem item;
      item.ref_words = 3;
      for (int i = 0; i < 8; ++i) {
        item.candidates.push_back(
            {score(rng), sf(rng), lm(rng), static_cast<std::size_t>(edits(rng))});
      }
      dev.push_back(item);
    }
    for (bool fix : {false, true}) {
      TuneOptions options;
      options.fix_alpha = fix;
      options.seed = trial;
      const TuneResult r = Tune(dev, options);
      ++runs;
      bool has_identity = false, has_zero = fix;
      for (const TunePoint& s : r.seeds) {
        seeds_ok = seeds_ok && r.best.edits <= s.edits;
        has_identity = has_identity || (s.config.alpha == 1.0 && s.config.beta == 0.0);
        has_zero = has_zero || (s.config.alpha == 0.0 && s.config.beta == 0.0);
      }
      seeds_ok = seeds_ok && has_identity && has_zero &&
                 r.best.edits == Objective(dev, r.best.config);
    }
  }
  o.Check(seeds_ok, "never above a seeded point");

  // Utterance 1 needs 5b > 0.5 + 2a, utterance 2 needs b < 1.5a - 1.
  std::vector<TuneItem> crafted(2);
  crafted[0].candidates = {{-1.0, 2.0, -10.0, 1}, {-1.5, 0.0, -5.0, 0}};
  crafted[1].candidates = {{-1.0, 0.0, -3.0, 1}, {-2.0, 1.5, -4.0, 0}};
  crafted[0].ref_words = crafted[1].ref_words = 2;
  const TuneOptions defaults;
  std::size_t grid_best = std::numeric_limits<std::size_t>::max();
  for (int i = 0; i <= 600; ++i) {
    for (int j = 0; j <= 400; ++j) {
      const RescoreConfig c{defaults.alpha_lo + (defaults.alpha_hi - defaults.alpha_lo) * i / 600,
                            defaults.beta_lo + (defaults.beta_hi - defaults.beta_lo) * j / 400};
      grid_best = std::min(grid_best, Objective(crafted, c));
    }
  }
  const TuneResult crafted_result = Tune(crafted, defaults);
  o.Check(crafted_result.best.edits == grid_best, "crafted dev reaches the grid optimum");
  o.Note(Fmt("%.0f random tuning runs", runs));
  o.Note(Fmt("crafted dev: grid %.0f edits, annealer %.0f at (%.3f, %.3f)", grid_best,
             crafted_result.best.edits, crafted_result.best.config.alpha,
             crafted_result.best.config.beta));
  return o;
}

Outcome DebiasingDirection() {
  Outcome o;
  Pipeline& p = SharedPipeline();
  const auto& task = p.task();
  const NGramLM generic = TrainKnLm(task.GenericCorpus());
  const NGramLM contacts = TrainKnLm(task.ContactsCorpus());
  const std::set<std::string> catalog(task.contacts().begin(), task.contacts().end());

  auto items = [&](const std::vector<NBestList>& lists) {
    std::vector<TuneItem> out;
    for (const NBestList& l : lists) {
      const Route route = RouteLm(l, &generic, &contacts, catalog);
      out.push_back(MakeTuneItem(l, LmScores(l, *route.lm)));
    }
    return out;
  };
  auto rescore = [&](const std::vector<NBestList>& lists, const RescoreConfig& c) {
    std::vector<NBestList> out;
    for (const NBestList& l : lists) {
      out.push_back(Rescore(l, c, RouteLm(l, &generic, &contacts, catalog).lm));
    }
    return Evaluate(out, task.Refs(p.test()), "rescored");
  };

  const std::vector<TuneItem> dev = items(p.Decode(Pipeline::kNoContext, 2.5, true));
  TuneOptions free_options, fixed_options;
  fixed_options.fix_alpha = true;
  const TuneResult free_tune = Tune(dev, free_options);
  const TuneResult fixed_tune = Tune(dev, fixed_options);
  const auto& test_lists = p.Decode(Pipeline::kNoContext, 2.5);
  const EvalReport free_report = rescore(test_lists, free_tune.best.config);
  const EvalReport fixed_report = rescore(test_lists, fixed_tune.best.config);

  double first_pass_best = std::numeric_limits<double>::infinity();
  for (double lambda : Pipeline::kLambdas) {
    for (auto s : {Pipeline::kContactsSubword, Pipeline::kContactsWord, Pipeline::kNoContext,
                   Pipeline::kContext}) {
      first_pass_best = std::min(first_pass_best, p.SplitWer(s, lambda, "contacts"));
    }
  }
  const double free_contacts = free_report.splits.at("contacts").wer.wer;
  const double fixed_contacts = fixed_report.splits.at("contacts").wer.wer;
  const double free_general = free_report.splits.at("general").wer.wer;
  const double general_base = p.SplitWer(Pipeline::kNoContext, 0.0, "general");
  o.Check(free_contacts <= fixed_contacts, "free alpha contacts not above fixed alpha");
  o.Check(free_general <= general_base, "general recovers to the unbiased baseline");
  o.Check(free_contacts < first_pass_best, "contacts beyond the first-pass best");
  o.Note(Fmt("free (%.3f, %.3f) vs fixed (1, %.3f)", free_tune.best.config.alpha,
             free_tune.best.config.beta, fixed_tune.best.config.beta));
  o.Note(Fmt("contacts %.2f%% free, %.2f%% fixed, first-pass best %.2f%%", 100 * free_contacts,
             100 * fixed_contacts, 100 * first_pass_best));
  o.Note(Fmt("general %.2f%% rescored vs %.2f%% unbiased, %.2f%% at 2.5 first pass",
             100 * free_general, 100 * general_base,
             100 * p.SplitWer(Pipeline::kNoContext, 2.5, "general")));
  return o;
}

Outcome KneserNey() {
  Outcome o;
  std::mt19937_64 rng(20264);
  double worst_norm = 0.0, worst_ref = 0.0;
  std::size_t contexts = 0;
  for (int order = 1; order <= 4; ++order) {
    for (int trial = 0; trial < 5; ++trial) {
      const NGramLM lm = TrainKnLm(testing::RandomCorpus(rng, 8, {"a", "b", "c", "d"}), order);
      for (const auto& h : testing::Histories(lm.Vocabulary(), order)) {
        ++contexts;
        worst_norm = std::max(worst_norm, std::abs(testing::SumOverVocab(lm, h) - 1.0));
      }
    }
  }
  for (int trial = 0; trial < 20; ++trial) {
    const int order = 1 + trial % 4;
    const auto corpus = testing::RandomCorpus(rng, 6 + trial % 5, {"a", "b", "c", "d", "e"});
    std::vector<std::vector<std::string>> sentences;
    for (const auto& l : corpus) sentences.push_back(SplitWords(l));
    const testing::ReferenceKn ref(sentences, order);
    const NGramLM lm = TrainKnLm(corpus, order);
    for (const auto& h : testing::Histories(lm.Vocabulary(), order)) {
      for (const auto& w : lm.Vocabulary()) {
        worst_ref = std::max(worst_ref, std::abs(std::exp(lm.ConditionalLogProb(h, w)) -
                                                 ref.Prob(h, w)));
      }
    }
  }
  o.Check(worst_norm <= 1e-6, "normalization");
  o.Check(worst_ref <= 1e-9, "reference calculator");
  o.Note(Fmt("%.0f contexts, max |sum - 1| %.2e, max |p - p_ref| %.2e on 20 corpora", contexts,
             worst_norm, worst_ref));
  return o;
}

std::vector<std::string> DistinctWords(std::mt19937_64& rng, std::size_t n) {
  std::set<std::string> seen;
  std::vector<std::string> out;
  while (out.size() < n) {
    std::string w = testing::RandomWord(rng, "abcdefghijklmnopqrstuvwxyz", 5, 10);
    if (seen.insert(w).second) out.push_back(w);
  }
  return out;
}

Outcome Performance() {
  Outcome o;
  const testing::SyntheticTask task;
  const WordpieceVocab& vocab = task.vocab();
  std::vector<CatalogEntry> entries;
  for (std::size_t i = 0; i < 600; ++i) entries.push_back({{task.contacts()[i]}, -1.5});
  const WordFst fst = BuildCatalogFst(entries);
  std::vector<std::vector<std::string>> words;
  for (const auto& w : task.Lexicon()) words.push_back(vocab.Segment(w));

  LookaheadStats stats;
  SessionOptions options;
  options.stats = &stats;
  const auto start = Clock::now();
  double elapsed = 0.0, sink = 0.0;
  while (elapsed < 1.0) {
    for (const auto& seg : words) {
      ExpandSession s(fst, fst.Start(), options);
      sink += ScoreWord(s, vocab, seg);
    }
    elapsed = std::chrono::duration<double>(Clock::now() - start).count();
  }
  const double rate = static_cast<double>(stats.expand_steps) / elapsed;
  o.Check(rate >= 1e5 && std::isfinite(sink), "throughput");
  o.Note(Fmt("600 entries: %.3g expand steps/s uncached", rate));

  std::mt19937_64 rng(20265);
  std::string growth;
  std::vector<double> per_step;
  bool bounded = true;
  const std::size_t sizes[] = {10, 100, 1000, 10000};
  std::vector<std::string> alphabet_pieces;
  for (char c = 'a'; c <= 'z'; ++c) alphabet_pieces.emplace_back(1, c);
  const WordpieceVocab letters(alphabet_pieces);
  for (std::size_t n : sizes) {
    std::vector<CatalogEntry> catalog;
    const auto names = DistinctWords(rng, n);
    for (const auto& w : names) catalog.push_back({{w}, -1.0});
    const WordFst big = BuildCatalogFst(catalog);
    LookaheadStats s;
    std::uint64_t worst = 0;
    const std::uint64_t bound =
        2 * static_cast<std::uint64_t>(std::ceil(std::log2(static_cast<double>(n) + 1))) + 2;
    for (std::size_t q = 0; q < 2000; ++q) {
      const std::string w = q % 2 ? names[q % n] : DistinctWords(rng, 1)[0];
      SessionOptions so;
      so.stats = &s;
      ExpandSession session(big, big.Start(), so);
      for (const auto& t : letters.Segment(w)) {
        if (letters.IsDelimiter(t) || session.dead()) break;
        const std::uint64_t before = s.comparisons;
        session.Expand(t);
        worst = std::max(worst, s.comparisons - before);
      }
    }
    bounded = bounded && worst <= bound;
    per_step.push_back(static_cast<double>(s.comparisons) / static_cast<double>(s.expand_steps));
    growth += (growth.empty() ? "" : ", ") + std::to_string(n) + ":" +
              Fmt("%.2f", per_step.back()) + "/" + std::to_string(worst);
  }
  // Linear work would grow 1000x from 10 to 10000 arcs; logarithmic about 4x.
  const double ratio = per_step.back() / per_step.front();
  bool increments_even = true;
  for (std::size_t i = 1; i < per_step.size(); ++i) {
    increments_even = increments_even && per_step[i] - per_step[i - 1] <= 2.0 * std::log2(10.0) + 1;
  }
  o.Check(bounded, "per-step comparisons within the binary-search bound");
  o.Check(ratio <= 2.0 * std::log2(10000.0) / std::log2(10.0) && increments_even,
          "logarithmic growth");
  o.Note("comparisons per step mean/max by arcs " + growth);
  o.Note(Fmt("growth 10 -> 10000 arcs: %.2fx", ratio));
  return o;
}

struct Criterion {
  int number;
  const char* name;
  double budget_seconds;
  std::function<Outcome()> run;
};

}  // namespace
}  // namespace biaslattice

int main() {
  using biaslattice::Criterion;
  const std::vector<Criterion> criteria = {
      {1, "golden lookahead vector", 1, biaslattice::GoldenLookahead},
      {2, "brute-force subword FST equivalence", 60, biaslattice::BruteForceEquivalence},
      {3, "prefix range narrowing", 10, biaslattice::RangeNarrowing},
      {4, "end-to-end biasing trend", 300, biaslattice::BiasingTrend},
      {5, "contextual containment", 300, biaslattice::ContextualContainment},
      {6, "rescoring at (1, 0) reproduces the first pass", 60, biaslattice::DegenerateRescore},
      {7, "tuner soundness", 120, biaslattice::TunerSoundness},
      {8, "de-biasing direction", 600, biaslattice::DebiasingDirection},
      {9, "Kneser-Ney correctness", 60, biaslattice::KneserNey},
      {10, "expand throughput and logarithmic step cost", 60, biaslattice::Performance},
  };
  int failures = 0;
  for (const Criterion& c : criteria) {
    const auto start = biaslattice::Clock::now();
    biaslattice::Outcome outcome;
    try {
      outcome = c.run();
    } catch (const std::exception& e) {
      outcome.Check(false, std::string("exception: ") + e.what());
    }
    const double seconds =
        std::chrono::duration<double>(biaslattice::Clock::now() - start).count();
    outcome.Check(seconds <= c.budget_seconds, "runtime budget");
    failures += !outcome.pass;
    std::printf("%s criterion %d (%s) [%.2fs]: %s\n", outcome.pass ? "PASS" : "FAIL", c.number,
                c.name, seconds, outcome.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
              criteria.size());
  return failures == 0 ? 0 : 1;
}
