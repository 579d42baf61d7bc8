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

#ifndef BIASLATTICE_NBEST_IO_H_
#define BIASLATTICE_NBEST_IO_H_

#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "biaslattice/decode.h"

namespace biaslattice {

// One JSON object per line:
//   {"id", "ref", "lambda", "hyps": [{"text", "tokens", "rnnt_logp", "sf_score"}]}
// `fused` is recomputed on read from the stored components and `lambda`.
void WriteNBest(std::ostream& out, const NBestList& list);
void WriteNBestFile(const std::string& path, const std::vector<NBestList>& lists);

// Throws FormatError with the offending line number.
std::vector<NBestList> ReadNBest(std::istream& in);
std::vector<NBestList> ReadNBestFile(const std::string& path);

struct RefEntry {
  std::string id;
  std::string transcript;
  std::string label;  // e.g. "contacts" or "general"; may be empty
};

// Lines `id<TAB>transcript[<TAB>label]`; blank lines and `#` lines skipped.
std::vector<RefEntry> ReadRefs(std::istream& in);
std::vector<RefEntry> ReadRefsFile(const std::string& path);
void WriteRefs(std::ostream& out, const std::vector<RefEntry>& refs);

}  // namespace biaslattice

#endif  // BIASLATTICE_NBEST_IO_H_
