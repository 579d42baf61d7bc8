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

#include "biaslattice/word_fst.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <map>
#include <set>
#include <sstream>

#include "biaslattice/error.h"
#include "biaslattice/text.h"

namespace biaslattice {

namespace {

constexpr std::string_view kMagic = "BLFST1";
constexpr std::uint8_t kFinalFlag = 1;
constexpr std::uint8_t kPhiFlag = 2;

}  // namespace

WordFst::WordFst() : states_(1) { Index(); }

WordFst::WordFst(std::vector<State> states, StateId start)
    : states_(std::move(states)), start_(start) {
  if (states_.empty()) throw Error("WordFst needs at least one state");
  if (start_ < 0 || start_ >= NumStates()) {
    throw Error("WordFst start state out of range");
  }
  for (StateId s = 0; s < NumStates(); ++s) {
    const auto& arcs = states_[s].arcs;
    for (std::size_t i = 0; i < arcs.size(); ++i) {
      if (arcs[i].word.empty()) throw Error("WordFst arc with empty word");
      if (!std::isfinite(arcs[i].weight)) {
        throw Error("WordFst arc weight is not finite");
      }
      if (arcs[i].next < 0 || arcs[i].next >= NumStates()) {
        throw Error("WordFst arc target out of range");
      }
      if (i > 0 && !(arcs[i - 1].word < arcs[i].word)) {
        throw Error("WordFst arcs of state " + std::to_string(s) +
                    " are not strictly sorted at '" + arcs[i].word + "'");
      }
    }
  }
  std::vector<bool> seen(states_.size(), false);
  std::vector<StateId> stack = {start_};
  seen[start_] = true;
  while (!stack.empty()) {
    StateId s = stack.back();
    stack.pop_back();
    for (const auto& arc : states_[s].arcs) {
      if (!seen[arc.next]) {
        seen[arc.next] = true;
        stack.push_back(arc.next);
      }
    }
  }
  if (std::find(seen.begin(), seen.end(), false) != seen.end()) {
    throw Error("WordFst has states unreachable from start");
  }
  Index();
}

void WordFst::Index() {
  min_weight_.clear();
  max_length_.clear();
  min_weight_.reserve(states_.size());
  max_length_.reserve(states_.size());
  std::vector<double> weights;
  std::vector<std::uint32_t> lengths;
  for (const auto& st : states_) {
    weights.clear();
    lengths.clear();
    for (const auto& arc : st.arcs) {
      weights.push_back(arc.weight);
      lengths.push_back(static_cast<std::uint32_t>(arc.word.size()));
    }
    min_weight_.emplace_back(std::span<const double>(weights));
    max_length_.emplace_back(std::span<const std::uint32_t>(lengths));
  }
}

const WordFst::State& WordFst::state(StateId s) const {
  if (s < 0 || s >= NumStates()) {
    throw Error("state " + std::to_string(s) + " out of range");
  }
  return states_[s];
}

std::size_t WordFst::TotalArcs() const {
  std::size_t n = 0;
  for (const auto& st : states_) n += st.arcs.size();
  return n;
}

std::span<const WordArc> WordFst::ArcsInRange(StateId s, std::size_t lo,
                                              std::size_t hi) const {
  const auto& arcs = state(s).arcs;
  if (lo > hi) throw Error("arc range has lo > hi");
  if (hi > arcs.size()) throw Error("arc range exceeds arc count");
  return std::span<const WordArc>(arcs).subspan(lo, hi - lo);
}

double WordFst::MinWeight(StateId s, std::size_t lo, std::size_t hi) const {
  state(s);
  return min_weight_[s].Query(lo, hi);
}

std::size_t WordFst::MaxWordLength(StateId s, std::size_t lo,
                                   std::size_t hi) const {
  state(s);
  return max_length_[s].Query(lo, hi);
}

std::optional<std::size_t> WordFst::FindArc(StateId s,
                                            std::string_view word) const {
  const auto& arcs = state(s).arcs;
  auto it = std::lower_bound(
      arcs.begin(), arcs.end(), word,
      [](const WordArc& arc, std::string_view w) { return arc.word < w; });
  if (it == arcs.end() || it->word != word) return std::nullopt;
  return static_cast<std::size_t>(it - arcs.begin());
}

WordFst BuildCatalogFst(const std::vector<CatalogEntry>& entries,
                        std::string_view delimiter) {
  if (entries.empty()) throw Error("catalog has no entries");

  // Trie with map-ordered children; flattened into sorted arc vectors below.
  struct Node {
    std::map<std::string, std::pair<double, std::size_t>> children;
    bool final = false;
  };
  std::vector<Node> nodes(1);

  for (const auto& entry : entries) {
    if (entry.phrase.empty()) throw Error("catalog entry with empty phrase");
    if (!std::isfinite(entry.weight)) {
      throw Error("catalog entry weight is not finite");
    }
    std::size_t cur = 0;
    for (const auto& raw : entry.phrase) {
      std::string word = ToLower(raw);
      if (word.empty()) throw Error("catalog entry with empty word");
      if (!delimiter.empty() && word.find(delimiter) != std::string::npos) {
        throw Error("catalog word '" + word + "' contains the delimiter");
      }
      auto it = nodes[cur].children.find(word);
      if (it == nodes[cur].children.end()) {
        nodes.emplace_back();
        it = nodes[cur]
                 .children.emplace(word, std::make_pair(entry.weight,
                                                        nodes.size() - 1))
                 .first;
      } else if (it->second.first != entry.weight) {
        throw Error("catalog entries sharing the prefix '" + word +
                    "' disagree on weight");
      }
      cur = it->second.second;
    }
    if (nodes[cur].final) {
      throw Error("duplicate catalog phrase '" + JoinWords(entry.phrase) + "'");
    }
    nodes[cur].final = true;
  }

  std::vector<WordFst::State> states(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    states[i].final = nodes[i].final;
    for (const auto& [word, wn] : nodes[i].children) {
      states[i].arcs.push_back(
          {word, wn.first, static_cast<StateId>(wn.second)});
    }
  }
  states[0].phi_loop = true;
  return WordFst(std::move(states), 0);
}

std::vector<CatalogEntry> ReadCatalog(std::istream& in) {
  std::vector<CatalogEntry> entries;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view view = Trim(line);
    if (view.empty() || view.front() == '#') continue;
    std::vector<std::string> fields = SplitTabs(view);
    if (fields.size() > 2) {
      throw FormatError("catalog line has more than two fields", lineno,
                        FormatError::Unit::kLine);
    }
    CatalogEntry entry;
    entry.phrase = SplitWords(ToLower(fields[0]));
    if (entry.phrase.empty()) {
      throw FormatError("catalog line has an empty phrase", lineno,
                        FormatError::Unit::kLine);
    }
    if (fields.size() == 2 && !Trim(fields[1]).empty()) {
      std::string w(Trim(fields[1]));
      char* end = nullptr;
      entry.weight = std::strtod(w.c_str(), &end);
      if (end != w.c_str() + w.size() || !std::isfinite(entry.weight)) {
        throw FormatError("catalog weight '" + w + "' is not a number", lineno,
                          FormatError::Unit::kLine);
      }
    }
    entries.push_back(std::move(entry));
  }
  return entries;
}

std::vector<CatalogEntry> ReadCatalogFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open catalog '" + path + "'");
  return ReadCatalog(in);
}

namespace {

class ByteWriter {
 public:
  void U8(std::uint8_t v) { out_.push_back(static_cast<char>(v)); }
  void U32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) U8(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void U64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) U8(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void F64(double v) { U64(std::bit_cast<std::uint64_t>(v)); }
  void Str(std::string_view s) {
    U32(static_cast<std::uint32_t>(s.size()));
    out_.append(s);
  }
  void Raw(std::string_view s) { out_.append(s); }
  std::string Take() { return std::move(out_); }

 private:
  std::string out_;
};

class ByteReader {
 public:
  explicit ByteReader(std::string_view bytes) : bytes_(bytes) {}

  std::size_t offset() const { return pos_; }
  bool AtEnd() const { return pos_ == bytes_.size(); }

  void Need(std::size_t n, const char* what) const {
    if (bytes_.size() - pos_ < n) {
      throw FormatError(std::string("truncated ") + what, pos_,
                        FormatError::Unit::kByte);
    }
  }
  std::uint8_t U8(const char* what) {
    Need(1, what);
    return static_cast<std::uint8_t>(bytes_[pos_++]);
  }
  std::uint32_t U32(const char* what) {
    Need(4, what);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) {
      v |= std::uint32_t{static_cast<std::uint8_t>(bytes_[pos_ + i])}
           << (8 * i);
    }
    pos_ += 4;
    return v;
  }
  double F64(const char* what) {
    Need(8, what);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) {
      v |= std::uint64_t{static_cast<std::uint8_t>(bytes_[pos_ + i])}
           << (8 * i);
    }
    pos_ += 8;
    return std::bit_cast<double>(v);
  }
  std::string_view Raw(std::size_t n, const char* what) {
    Need(n, what);
    std::string_view s = bytes_.substr(pos_, n);
    pos_ += n;
    return s;
  }

 private:
  std::string_view bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string SerializeFst(const WordFst& fst) {
  ByteWriter w;
  w.Raw(kMagic);
  w.U32(static_cast<std::uint32_t>(fst.NumStates()));
  w.U32(static_cast<std::uint32_t>(fst.Start()));
  for (const auto& st : fst.states()) {
    std::uint8_t flags = (st.final ? kFinalFlag : 0) | (st.phi_loop ? kPhiFlag : 0);
    w.U8(flags);
    w.U32(static_cast<std::uint32_t>(st.arcs.size()));
    for (const auto& arc : st.arcs) {
      w.Str(arc.word);
      w.F64(arc.weight);
      w.U32(static_cast<std::uint32_t>(arc.next));
    }
  }
  return w.Take();
}

WordFst DeserializeFst(std::string_view bytes) {
  ByteReader r(bytes);
  if (r.Raw(std::min(bytes.size(), kMagic.size()), "magic") != kMagic) {
    throw FormatError("bad magic, expected BLFST1", 0,
                      FormatError::Unit::kByte);
  }
  const std::size_t num_states_at = r.offset();
  const std::uint32_t num_states = r.U32("state count");
  if (num_states == 0 || num_states > bytes.size()) {
    throw FormatError("implausible state count", num_states_at,
                      FormatError::Unit::kByte);
  }
  const std::size_t start_at = r.offset();
  const std::uint32_t start = r.U32("start state");
  if (start >= num_states) {
    throw FormatError("start state out of range", start_at,
                      FormatError::Unit::kByte);
  }
  std::vector<WordFst::State> states(num_states);
  for (auto& st : states) {
    const std::size_t flags_at = r.offset();
    const std::uint8_t flags = r.U8("state flags");
    if (flags & ~(kFinalFlag | kPhiFlag)) {
      throw FormatError("unknown state flags", flags_at,
                        FormatError::Unit::kByte);
    }
    st.final = flags & kFinalFlag;
    st.phi_loop = flags & kPhiFlag;
    const std::size_t count_at = r.offset();
    const std::uint32_t num_arcs = r.U32("arc count");
    if (num_arcs > bytes.size()) {
      throw FormatError("implausible arc count", count_at,
                        FormatError::Unit::kByte);
    }
    st.arcs.reserve(num_arcs);
    for (std::uint32_t a = 0; a < num_arcs; ++a) {
      const std::size_t arc_at = r.offset();
      const std::uint32_t len = r.U32("word length");
      WordArc arc;
      arc.word = std::string(r.Raw(len, "word"));
      arc.weight = r.F64("weight");
      const std::uint32_t next = r.U32("arc target");
      if (next >= num_states) {
        throw FormatError("arc target out of range", arc_at,
                          FormatError::Unit::kByte);
      }
      arc.next = static_cast<StateId>(next);
      if (arc.word.empty() || !std::isfinite(arc.weight) ||
          (!st.arcs.empty() && !(st.arcs.back().word < arc.word))) {
        throw FormatError("invalid or unsorted arc", arc_at,
                          FormatError::Unit::kByte);
      }
      st.arcs.push_back(std::move(arc));
    }
  }
  if (!r.AtEnd()) {
    throw FormatError("trailing bytes", r.offset(), FormatError::Unit::kByte);
  }
  try {
    return WordFst(std::move(states), static_cast<StateId>(start));
  } catch (const FormatError&) {
    throw;
  } catch (const Error& e) {
    throw FormatError(e.what(), bytes.size(), FormatError::Unit::kByte);
  }
}

void WriteFstFile(const WordFst& fst, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  const std::string bytes = SerializeFst(fst);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error("write failed for '" + path + "'");
}

namespace {

std::string ReadAll(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  return std::string(std::istreambuf_iterator<char>(in), {});
}

}  // namespace

WordFst ReadFstFile(const std::string& path) {
  return DeserializeFst(ReadAll(path));
}

WordFst LoadFstOrCatalog(const std::string& path, std::string_view delimiter) {
  std::string bytes = ReadAll(path);
  if (bytes.compare(0, kMagic.size(), kMagic) == 0) {
    return DeserializeFst(bytes);
  }
  std::istringstream in(bytes);
  return BuildCatalogFst(ReadCatalog(in), delimiter);
}

std::vector<std::string> FstWords(const WordFst& fst) {
  std::set<std::string> words;
  for (const auto& st : fst.states()) {
    for (const auto& arc : st.arcs) words.insert(arc.word);
  }
  return {words.begin(), words.end()};
}

}  // namespace biaslattice
