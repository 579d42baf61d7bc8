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

#include "cli_commands.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <set>
#include <sstream>

#include "biaslattice/context.h"
#include "biaslattice/decode.h"
#include "biaslattice/error.h"
#include "biaslattice/lookahead.h"
#include "biaslattice/metrics.h"
#include "biaslattice/nbest_io.h"
#include "biaslattice/ngram_lm.h"
#include "biaslattice/second_pass.h"
#include "biaslattice/synth_oracle.h"
#include "biaslattice/text.h"
#include "biaslattice/word_fst.h"
#include "biaslattice/wordpiece.h"

namespace biaslattice::cli {
namespace {

std::ifstream OpenOrThrow(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  return in;
}

std::set<std::string> CatalogWords(const std::vector<std::string>& paths,
                                   std::string_view delimiter = kDefaultDelimiter) {
  std::set<std::string> words;
  for (const auto& p : paths) {
    for (auto& w : FstWords(LoadFstOrCatalog(p, delimiter))) words.insert(std::move(w));
  }
  return words;
}

struct LoadedLms {
  std::unique_ptr<NGramLM> generic;
  std::unique_ptr<NGramLM> contacts;
  std::set<std::string> catalog_words;

  // Null when no LM is configured.
  const LanguageModel* Pick(const NBestList& list) const {
    if (!generic && !contacts) return nullptr;
    const LanguageModel* g = generic ? generic.get() : contacts.get();
    const LanguageModel* c = contacts ? contacts.get() : generic.get();
    const Route r = RouteLm(list, g, c, catalog_words);
    std::cerr << "route id=" << list.id << " domain=" << DomainName(r.domain) << "\n";
    return r.lm;
  }
};

LoadedLms LoadLms(const LmArgs& args) {
  LoadedLms lms;
  if (!args.lm_generic.empty()) lms.generic = std::make_unique<NGramLM>(LoadLm(args.lm_generic));
  if (!args.lm_contacts.empty()) {
    lms.contacts = std::make_unique<NGramLM>(LoadLm(args.lm_contacts));
  }
  lms.catalog_words = CatalogWords(args.catalogs);
  return lms;
}

}  // namespace

std::optional<std::uint64_t> SeedOverride() {
  const char* env = std::getenv("BIASLATTICE_SEED");
  if (env == nullptr || *env == '\0') return std::nullopt;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(env, &end, 10);
  if (*end != '\0') throw Error("BIASLATTICE_SEED must be an unsigned integer");
  return v;
}

int RunBuildFst(const BuildFstArgs& args) {
  if (args.catalog.empty() == args.corpus.empty()) {
    throw Error("give exactly one of --catalog or --corpus");
  }
  WordFst fst;
  if (!args.catalog.empty()) {
    fst = BuildCatalogFst(ReadCatalogFile(args.catalog), args.delimiter);
  } else {
    std::ifstream in = OpenOrThrow(args.corpus);
    fst = BuildClassFst(ReadLines(in), args.min_count);
  }
  if (!args.out.empty()) WriteFstFile(fst, args.out);
  std::cout << "states=" << fst.NumStates() << " arcs=" << fst.TotalArcs() << "\n";

  if (!args.trace.empty()) {
    if (args.vocab.empty()) throw Error("--trace needs --vocab");
    const WordpieceVocab vocab = ReadVocabFile(args.vocab);
    SessionOptions options;
    options.trace = &std::cout;
    ExpandSession session(fst, fst.Start(), options);
    double total = 0.0;
    for (const std::string& token : SplitWords(args.trace)) {
      if (session.finished() || session.dead()) break;
      if (vocab.IsDelimiter(token)) {
        total += session.FinishWord(vocab, token).increment;
      } else {
        total += session.Expand(token);
      }
    }
    std::cout << "total=" << total << "\n";
  }
  return 0;
}

int RunDecode(const DecodeArgs& args) {
  const WordpieceVocab vocab = ReadVocabFile(args.vocab);
  const std::vector<RefEntry> refs = ReadRefsFile(args.refs);

  std::unique_ptr<ContextualBiaser> biaser;
  std::set<std::string> lexicon_words;
  if (!args.catalog.empty() || !args.bindings.empty()) {
    Bindings bindings;
    if (!args.bindings.empty()) bindings = ReadBindingsFile(args.bindings, vocab.delimiter());
    if (!args.catalog.empty()) {
      bindings["@catalog"] = std::make_shared<const WordFst>(
          LoadFstOrCatalog(args.catalog, vocab.delimiter()));
    }
    for (const auto& [tag, fst] : bindings) {
      for (auto& w : FstWords(*fst)) lexicon_words.insert(std::move(w));
    }
    if (!args.class_fst.empty()) {
      biaser = std::make_unique<ContextualBiaser>(ReadFstFile(args.class_fst),
                                                  std::move(bindings), vocab);
    } else {
      biaser = std::make_unique<ContextualBiaser>(
          ContextualBiaser::Uncontextual(std::move(bindings), vocab));
    }
  } else if (!args.class_fst.empty()) {
    throw Error("--class-fst needs --bindings");
  }

  if (!args.lexicon.empty()) {
    std::ifstream in = OpenOrThrow(args.lexicon);
    for (const auto& line : ReadLines(in)) {
      for (auto& w : SplitWords(ToLower(line))) lexicon_words.insert(std::move(w));
    }
  } else {
    for (const auto& r : refs) {
      for (auto& w : SplitWords(NormalizeTranscript(r.transcript))) {
        lexicon_words.insert(std::move(w));
      }
    }
  }

  SynthOracleConfig config;
  config.noise = args.noise;
  const std::uint64_t seed = SeedOverride().value_or(args.oracle_seed);
  SynthOracle oracle(vocab, {lexicon_words.begin(), lexicon_words.end()}, config, seed);

  DecodeOptions options;
  options.lambda = args.lambda;
  options.beam_size = args.beam;
  options.n_best = args.nbest;
  options.word_level = args.word_level;
  options.use_cache = !args.no_cache;

  std::vector<NBestList> lists;
  LookaheadStats stats;
  for (const RefEntry& r : refs) {
    const std::string text = NormalizeTranscript(r.transcript);
    oracle.AddUtterance(r.id, text);
    lists.push_back(BeamSearch(oracle, r.id, text, biaser.get(), vocab, options, &stats));
  }
  if (args.out.empty()) {
    for (const auto& l : lists) WriteNBest(std::cout, l);
  } else {
    WriteNBestFile(args.out, lists);
  }
  std::cerr << "decoded " << lists.size() << " utterances, expand_steps="
            << stats.expand_steps << " cache_hits=" << stats.cache_hits << "\n";
  return 0;
}

int RunRescore(const RescoreArgs& args) {
  const std::vector<NBestList> lists = ReadNBestFile(args.nbest);
  const LoadedLms lms = LoadLms(args.lm);
  const RescoreConfig config{args.alpha, args.beta};
  std::vector<NBestList> out;
  for (const NBestList& l : lists) out.push_back(Rescore(l, config, lms.Pick(l)));
  if (args.out.empty()) {
    for (const auto& l : out) WriteNBest(std::cout, l);
  } else {
    WriteNBestFile(args.out, out);
  }
  return 0;
}

int RunTune(const TuneArgs& args) {
  std::vector<NBestList> dev = ReadNBestFile(args.dev);
  if (!args.refs.empty()) {
    std::map<std::string, std::string> by_id;
    for (const auto& r : ReadRefsFile(args.refs)) by_id[r.id] = r.transcript;
    for (auto& l : dev) {
      auto it = by_id.find(l.id);
      if (it == by_id.end()) throw Error("no reference for id '" + l.id + "'");
      l.ref = it->second;
    }
  }
  TuneOptions options;
  {
    std::vector<double> b;
    std::stringstream ss(args.bounds);
    std::string field;
    while (std::getline(ss, field, ',')) {
      try {
        b.push_back(std::stod(field));
      } catch (const std::exception&) {
        throw Error("bad --bounds value '" + field + "'");
      }
    }
    if (b.size() != 4) throw Error("--bounds takes a0,a1,b0,b1");
    options.alpha_lo = b[0];
    options.alpha_hi = b[1];
    options.beta_lo = b[2];
    options.beta_hi = b[3];
  }
  options.budget = args.budget;
  options.seed = SeedOverride().value_or(args.seed);
  options.fix_alpha = args.fix_alpha;

  const LoadedLms lms = LoadLms(args.lm);
  std::vector<TuneItem> items;
  for (const NBestList& l : dev) {
    const LanguageModel* lm = lms.Pick(l);
    items.push_back(MakeTuneItem(
        l, lm ? LmScores(l, *lm) : std::vector<double>(l.hyps.size(), 0.0)));
  }
  const TuneResult result = Tune(items, options);
  std::cout << "alpha=" << result.best.config.alpha << " beta=" << result.best.config.beta
            << " edits=" << result.best.edits << " words=" << result.ref_words
            << " wer=" << result.wer() << " evaluations=" << result.evaluations << "\n";
  if (!args.out.empty()) {
    std::ofstream out(args.out);
    if (!out) throw Error("cannot write " + args.out);
    out << "alpha\t" << result.best.config.alpha << "\nbeta\t" << result.best.config.beta
        << "\n";
  }
  return 0;
}

int RunEval(const EvalArgs& args) {
  const std::vector<RefEntry> refs = ReadRefsFile(args.refs);
  std::optional<std::vector<NBestList>> baseline;
  if (!args.baseline.empty()) baseline = ReadNBestFile(args.baseline);
  std::vector<EvalReport> reports;
  if (baseline) {
    reports.push_back(Evaluate(*baseline, refs,
                               std::filesystem::path(args.baseline).stem().string(),
                               &*baseline));
  }
  for (const auto& path : args.nbest) {
    reports.push_back(Evaluate(ReadNBestFile(path), refs,
                               std::filesystem::path(path).stem().string(),
                               baseline ? &*baseline : nullptr));
  }
  std::cout << FormatTable(reports);
  if (!args.json.empty()) {
    std::ofstream out(args.json);
    if (!out) throw Error("cannot write " + args.json);
    out << ReportJson(reports);
  }
  return 0;
}

int RunTrainLm(const TrainLmArgs& args) {
  std::ifstream in = OpenOrThrow(args.corpus);
  const NGramLM lm = TrainKnLm(ReadLines(in), args.order);
  SaveLm(args.out, lm);
  std::cout << "order=" << lm.order() << " vocab=" << lm.Vocabulary().size() << "\n";
  return 0;
}

}  // namespace biaslattice::cli
