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

#include "biaslattice/nbest_io.h"

#include <fstream>

#include "biaslattice/error.h"
#include "biaslattice/text.h"
#include "json.hpp"

namespace biaslattice {

using nlohmann::json;

void WriteNBest(std::ostream& out, const NBestList& list) {
  json hyps = json::array();
  for (const Hypothesis& h : list.hyps) {
    hyps.push_back({{"text", h.text},
                    {"tokens", h.tokens},
                    {"rnnt_logp", h.rnnt_logp},
                    {"sf_score", h.sf_score}});
  }
  json j = {{"id", list.id},
            {"ref", list.ref},
            {"lambda", list.lambda},
            {"hyps", std::move(hyps)}};
  out << j.dump() << '\n';
}

void WriteNBestFile(const std::string& path,
                    const std::vector<NBestList>& lists) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  for (const auto& l : lists) WriteNBest(out, l);
  if (!out) throw Error("write failed: " + path);
}

std::vector<NBestList> ReadNBest(std::istream& in) {
  std::vector<NBestList> lists;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (Trim(line).empty()) continue;
    try {
      const json j = json::parse(line);
      NBestList list;
      list.id = j.at("id").get<std::string>();
      list.ref = j.value("ref", std::string());
      list.lambda = j.value("lambda", 0.0);
      for (const json& jh : j.at("hyps")) {
        Hypothesis h;
        h.text = jh.at("text").get<std::string>();
        h.tokens = jh.value("tokens", std::vector<std::string>());
        h.rnnt_logp = jh.at("rnnt_logp").get<double>();
        h.sf_score = jh.at("sf_score").get<double>();
        h.fused = h.rnnt_logp + list.lambda * h.sf_score;
        list.hyps.push_back(std::move(h));
      }
      lists.push_back(std::move(list));
    } catch (const json::exception& e) {
      throw FormatError(std::string("bad n-best record: ") + e.what(), lineno,
                        FormatError::Unit::kLine);
    }
  }
  return lists;
}

std::vector<NBestList> ReadNBestFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  return ReadNBest(in);
}

std::vector<RefEntry> ReadRefs(std::istream& in) {
  std::vector<RefEntry> refs;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (Trim(line).empty() || line[0] == '#') continue;
    std::vector<std::string> fields = SplitTabs(line);
    if (fields.size() < 2 || fields.size() > 3 || Trim(fields[0]).empty()) {
      throw FormatError("expected id<TAB>transcript[<TAB>label]", lineno,
                        FormatError::Unit::kLine);
    }
    RefEntry r{std::string(Trim(fields[0])), std::string(Trim(fields[1])),
               fields.size() == 3 ? std::string(Trim(fields[2])) : ""};
    refs.push_back(std::move(r));
  }
  return refs;
}

std::vector<RefEntry> ReadRefsFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  return ReadRefs(in);
}

void WriteRefs(std::ostream& out, const std::vector<RefEntry>& refs) {
  for (const auto& r : refs) {
    out << r.id << '\t' << r.transcript;
    if (!r.label.empty()) out << '\t' << r.label;
    out << '\n';
  }
}

}  // namespace biaslattice
