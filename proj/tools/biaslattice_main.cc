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

#include <iostream>

#include "CLI11.hpp"
#include "biaslattice/error.h"
#include "cli_commands.h"

namespace cli = biaslattice::cli;

namespace {

void AddLmOptions(CLI::App* app, cli::LmArgs& lm) {
  app->add_option("--lm-generic", lm.lm_generic, "generic-domain ARPA LM");
  app->add_option("--lm-contacts", lm.lm_contacts, "contacts-domain ARPA LM");
  app->add_option("--catalog", lm.catalogs,
                  "catalog or FST whose words route an utterance to the contacts LM");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Contextual biasing toolkit: biasing FSTs, decoding, rescoring"};
  app.require_subcommand(1);

  cli::BuildFstArgs build;
  auto* b = app.add_subcommand("build-fst", "build a catalog or class FST");
  b->add_option("--catalog", build.catalog, "catalog file: phrase<TAB>weight");
  b->add_option("--corpus", build.corpus, "annotated corpus for a class FST");
  b->add_option("--min-count", build.min_count, "template count threshold");
  b->add_option("--out", build.out, "serialized FST output");
  b->add_option("--vocab", build.vocab, "wordpiece vocabulary for --trace");
  b->add_option("--trace", build.trace, "subword tokens to trace through the FST");
  b->add_option("--delimiter", build.delimiter, "word-boundary marker");

  cli::DecodeArgs decode;
  auto* d = app.add_subcommand("decode", "beam-search decode with shallow fusion");
  d->add_option("--vocab", decode.vocab, "wordpiece vocabulary")->required();
  d->add_option("--refs", decode.refs, "references driving the synthetic oracle")
      ->required();
  d->add_option("--catalog", decode.catalog, "single catalog or FST");
  d->add_option("--class-fst", decode.class_fst, "class-based context FST");
  d->add_option("--bindings", decode.bindings, "manifest @tag<TAB>path");
  d->add_option("--lexicon", decode.lexicon, "oracle confusion lexicon");
  d->add_option("--lambda", decode.lambda, "biasing weight");
  d->add_option("--beam", decode.beam, "beam size");
  d->add_option("--nbest", decode.nbest, "hypotheses kept per utterance");
  d->add_option("--oracle-seed", decode.oracle_seed, "oracle RNG seed");
  d->add_option("--noise", decode.noise, "oracle confusion noise");
  d->add_flag("--word-level", decode.word_level, "apply biasing at word ends only");
  d->add_flag("--no-cache", decode.no_cache, "disable the lookahead state cache");
  d->add_option("--out", decode.out, "n-best output (JSON lines)");

  cli::RescoreArgs rescore;
  auto* r = app.add_subcommand("rescore", "second-pass n-best rescoring");
  r->add_option("--nbest", rescore.nbest, "n-best input")->required();
  r->add_option("--alpha", rescore.alpha, "biasing score weight");
  r->add_option("--beta", rescore.beta, "LM weight");
  r->add_option("--out", rescore.out, "rescored n-best output");
  AddLmOptions(r, rescore.lm);

  cli::TuneArgs tune;
  auto* t = app.add_subcommand("tune", "anneal (alpha, beta) on a dev set");
  t->add_option("--dev", tune.dev, "dev n-best file")->required();
  t->add_option("--refs", tune.refs, "references overriding the n-best refs");
  t->add_option("--bounds", tune.bounds, "a0,a1,b0,b1");
  t->add_option("--budget", tune.budget, "objective evaluations");
  t->add_option("--seed", tune.seed, "annealer RNG seed");
  t->add_flag("--fix-alpha", tune.fix_alpha, "freeze alpha at 1");
  t->add_option("--out", tune.out, "write the chosen config");
  AddLmOptions(t, tune.lm);

  cli::EvalArgs eval;
  auto* e = app.add_subcommand("eval", "WER, oracle WER and WERR report");
  e->add_option("--nbest", eval.nbest, "n-best runs")->required();
  e->add_option("--refs", eval.refs, "id<TAB>transcript[<TAB>label]")->required();
  e->add_option("--baseline", eval.baseline, "baseline run for WERR");
  e->add_option("--json", eval.json, "machine-readable report");

  cli::TrainLmArgs train;
  auto* l = app.add_subcommand("train-lm", "train a Kneser-Ney n-gram LM");
  l->add_option("--corpus", train.corpus, "annotated text corpus")->required();
  l->add_option("--order", train.order, "n-gram order");
  l->add_option("--out", train.out, "ARPA output path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& err) {
    return app.exit(err);
  } catch (const CLI::ParseError& err) {
    app.exit(err);
    return 2;
  }

  try {
    if (*b) return cli::RunBuildFst(build);
    if (*d) return cli::RunDecode(decode);
    if (*r) return cli::RunRescore(rescore);
    if (*t) return cli::RunTune(tune);
    if (*e) return cli::RunEval(eval);
    if (*l) return cli::RunTrainLm(train);
  } catch (const biaslattice::FormatError& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 2;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 1;
  }
  return 1;
}
