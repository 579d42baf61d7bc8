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

#ifndef BIASLATTICE_TOOLS_CLI_COMMANDS_H_
#define BIASLATTICE_TOOLS_CLI_COMMANDS_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace biaslattice::cli {

struct BuildFstArgs {
  std::string catalog;
  std::string corpus;
  int min_count = 10;
  std::string out;
  std::string vocab;
  std::string trace;  // space-separated subword tokens
  std::string delimiter = "_";
};

struct DecodeArgs {
  std::string vocab;
  std::string catalog;
  std::string class_fst;
  std::string bindings;
  std::string refs;
  std::string lexicon;
  std::string out;
  double lambda = 0.0;
  int beam = 16;
  int nbest = 8;
  std::uint64_t oracle_seed = 1;
  double noise = 0.3;
  bool word_level = false;
  bool no_cache = false;
};

struct LmArgs {
  std::string lm_generic;
  std::string lm_contacts;
  std::vector<std::string> catalogs;  // route to contacts on any hit
};

struct RescoreArgs {
  std::string nbest;
  std::string out;
  LmArgs lm;
  double alpha = 1.0;
  double beta = 0.0;
};

struct TuneArgs {
  std::string dev;
  std::string refs;
  std::string bounds = "-2,4,0,4";
  std::string out;
  LmArgs lm;
  int budget = 400;
  std::uint64_t seed = 1;
  bool fix_alpha = false;
};

struct EvalArgs {
  std::vector<std::string> nbest;
  std::string refs;
  std::string baseline;
  std::string json;
};

struct TrainLmArgs {
  std::string corpus;
  std::string out;
  int order = 4;
};

// BIASLATTICE_SEED, when set, replaces every RNG seed.
std::optional<std::uint64_t> SeedOverride();

int RunBuildFst(const BuildFstArgs& args);
int RunDecode(const DecodeArgs& args);
int RunRescore(const RescoreArgs& args);
int RunTune(const TuneArgs& args);
int RunEval(const EvalArgs& args);
int RunTrainLm(const TrainLmArgs& args);

}  // namespace biaslattice::cli

#endif  // BIASLATTICE_TOOLS_CLI_COMMANDS_H_
