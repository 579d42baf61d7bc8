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

#include "biaslattice/second_pass.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "biaslattice/error.h"
#include "biaslattice/metrics.h"
#include "biaslattice/text.h"

namespace biaslattice {

const char* DomainName(Domain domain) {
  return domain == Domain::kContacts ? "contacts" : "generic";
}

Route RouteLm(const NBestList& nbest, const LanguageModel* generic,
              const LanguageModel* contacts,
              const std::set<std::string>& catalog_words) {
  if (generic == nullptr || contacts == nullptr) {
    throw Error("both generic and contacts LMs must be bound");
  }
  for (const Hypothesis& h : nbest.hyps) {
    for (const std::string& w : SplitWords(NormalizeTranscript(h.text))) {
      if (catalog_words.count(w)) return {Domain::kContacts, contacts};
    }
  }
  return {Domain::kGeneric, generic};
}

double RescoreScore(const Hypothesis& h, double lambda,
                    const RescoreConfig& config, double lm_logp) {
  double score = h.rnnt_logp + config.alpha * (lambda * h.sf_score);
  if (config.beta != 0.0) score += config.beta * lm_logp;
  return score;
}

std::vector<double> LmScores(const NBestList& nbest, const LanguageModel& lm) {
  std::vector<double> out;
  out.reserve(nbest.hyps.size());
  for (const Hypothesis& h : nbest.hyps) {
    out.push_back(lm.LogProb(SplitWords(NormalizeTranscript(h.text))));
  }
  return out;
}

NBestList Rescore(const NBestList& nbest, const RescoreConfig& config,
                  const std::vector<double>& lm_logp) {
  if (lm_logp.size() != nbest.hyps.size()) {
    throw Error("need one LM score per hypothesis");
  }
  if (!std::isfinite(config.alpha) || !std::isfinite(config.beta)) {
    throw Error("rescoring weights must be finite");
  }
  std::vector<std::pair<double, std::size_t>> order;
  for (std::size_t i = 0; i < nbest.hyps.size(); ++i) {
    const Hypothesis& h = nbest.hyps[i];
    if (!std::isfinite(h.rnnt_logp) || !std::isfinite(h.sf_score) ||
        (config.beta != 0.0 && std::isnan(lm_logp[i]))) {
      throw Error("hypothesis " + std::to_string(i) + " of '" + nbest.id +
                  "' lacks a finite score component");
    }
    order.emplace_back(RescoreScore(h, nbest.lambda, config, lm_logp[i]), i);
  }
  std::stable_sort(order.begin(), order.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  NBestList out = nbest;
  out.hyps.clear();
  for (const auto& [score, i] : order) {
    out.hyps.push_back(nbest.hyps[i]);
    out.hyps.back().fused = score;
  }
  return out;
}

NBestList Rescore(const NBestList& nbest, const RescoreConfig& config,
                  const LanguageModel* lm) {
  if (lm == nullptr) {
    if (config.beta != 0.0) throw Error("beta != 0 needs a rescoring LM");
    return Rescore(nbest, config, std::vector<double>(nbest.hyps.size(), 0.0));
  }
  return Rescore(nbest, config, LmScores(nbest, *lm));
}

TuneItem MakeTuneItem(const NBestList& nbest,
                      const std::vector<double>& lm_logp) {
  if (lm_logp.size() != nbest.hyps.size()) {
    throw Error("need one LM score per hypothesis");
  }
  TuneItem item;
  item.ref_words = SplitWords(NormalizeTranscript(nbest.ref)).size();
  for (std::size_t i = 0; i < nbest.hyps.size(); ++i) {
    const Hypothesis& h = nbest.hyps[i];
    item.candidates.push_back({h.rnnt_logp, nbest.lambda * h.sf_score,
                               lm_logp[i], Wer(nbest.ref, h.text).errors()});
  }
  return item;
}

std::size_t Objective(const std::vector<TuneItem>& dev,
                      const RescoreConfig& c) {
  std::size_t edits = 0;
  for (const TuneItem& item : dev) {
    const TuneItem::Candidate* best = nullptr;
    double best_score = 0.0;
    for (const auto& cand : item.candidates) {
      double score = cand.rnnt_logp + c.alpha * cand.fused_sf;
      if (c.beta != 0.0) score += c.beta * cand.lm_logp;
      if (best == nullptr || score > best_score) {
        best = &cand;
        best_score = score;
      }
    }
    edits += best == nullptr ? item.ref_words : best->edits;
  }
  return edits;
}

bool BetterPoint(const TunePoint& a, const TunePoint& b) {
  if (a.edits != b.edits) return a.edits < b.edits;
  const double da = std::abs(a.config.alpha - 1.0);
  const double db = std::abs(b.config.alpha - 1.0);
  if (da != db) return da < db;
  return std::abs(a.config.beta) < std::abs(b.config.beta);
}

namespace {

// Objective is piecewise constant in beta along alpha = 1, changing only where
// two candidates of an utterance swap rank, so probing every swap point and
// the gaps between them finds the exact optimum of the line.
RescoreConfig BestOnAlphaOneLine(const std::vector<TuneItem>& dev, double lo,
                                 double hi) {
  std::vector<double> breaks;
  for (const TuneItem& item : dev) {
    const auto& c = item.candidates;
    for (std::size_t i = 0; i < c.size(); ++i) {
      for (std::size_t j = i + 1; j < c.size(); ++j) {
        const double dl = c[i].lm_logp - c[j].lm_logp;
        if (dl == 0.0 || c[i].edits == c[j].edits) continue;
        const double da = (c[j].rnnt_logp + c[j].fused_sf) -
                          (c[i].rnnt_logp + c[i].fused_sf);
        const double b = da / dl;
        if (b > lo && b < hi) breaks.push_back(b);
      }
    }
  }
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
  std::vector<double> probes = {lo, hi};
  for (std::size_t k = 0; k < breaks.size(); ++k) {
    probes.push_back(breaks[k]);
    const double prev = k == 0 ? lo : breaks[k - 1];
    probes.push_back(0.5 * (prev + breaks[k]));
  }
  if (!breaks.empty()) probes.push_back(0.5 * (breaks.back() + hi));
  TunePoint best{{1.0, lo}, Objective(dev, {1.0, lo})};
  for (double b : probes) {
    const TunePoint p{{1.0, b}, Objective(dev, {1.0, b})};
    if (BetterPoint(p, best)) best = p;
  }
  return best.config;
}

}  // namespace

TuneResult Tune(const std::vector<TuneItem>& dev, const TuneOptions& o) {
  if (dev.empty()) throw Error("empty dev set");
  for (double v : {o.alpha_lo, o.alpha_hi, o.beta_lo, o.beta_hi}) {
    if (!std::isfinite(v)) throw Error("tuning bounds must be finite");
  }
  if (o.alpha_lo > o.alpha_hi || o.beta_lo > o.beta_hi) {
    throw Error("tuning bounds are inverted");
  }
  if (o.grid < 2) throw Error("seed grid needs at least 2 points per axis");
  if (!(o.initial_temperature > 0.0 && o.final_temperature > 0.0)) {
    throw Error("annealing temperatures must be positive");
  }

  auto clip = [&](RescoreConfig c) {
    c.alpha = o.fix_alpha ? 1.0 : std::clamp(c.alpha, o.alpha_lo, o.alpha_hi);
    c.beta = std::clamp(c.beta, o.beta_lo, o.beta_hi);
    return c;
  };
  auto lerp = [&](double lo, double hi, int i) {
    return lo + (hi - lo) * static_cast<double>(i) / (o.grid - 1);
  };

  std::vector<RescoreConfig> seed_configs = {clip({1.0, 0.0})};
  if (!o.fix_alpha) seed_configs.push_back(clip({0.0, 0.0}));
  for (int i = 0; i < (o.fix_alpha ? 1 : o.grid); ++i) {
    for (int j = 0; j < o.grid; ++j) {
      seed_configs.push_back(
          clip({lerp(o.alpha_lo, o.alpha_hi, i), lerp(o.beta_lo, o.beta_hi, j)}));
    }
  }
  if (o.alpha_lo <= 1.0 && 1.0 <= o.alpha_hi) {
    seed_configs.push_back(BestOnAlphaOneLine(dev, o.beta_lo, o.beta_hi));
  }
  if (o.budget < static_cast<int>(seed_configs.size())) {
    throw Error("budget " + std::to_string(o.budget) + " is below the " +
                std::to_string(seed_configs.size()) + " seeded points");
  }

  TuneResult result;
  for (const TuneItem& item : dev) result.ref_words += item.ref_words;
  auto evaluate = [&](const RescoreConfig& c) {
    ++result.evaluations;
    TunePoint p{c, Objective(dev, c)};
    if (result.evaluations == 1 || BetterPoint(p, result.best)) result.best = p;
    return p;
  };
  for (const RescoreConfig& c : seed_configs) result.seeds.push_back(evaluate(c));

  std::vector<TunePoint> starts = result.seeds;
  std::stable_sort(starts.begin(), starts.end(), BetterPoint);

  const int iterations = o.budget - static_cast<int>(seed_configs.size());
  const int restarts = std::max(1, o.restarts);
  const int segment = std::max(1, (iterations + restarts - 1) / restarts);
  const double alpha_span = o.alpha_hi - o.alpha_lo;
  const double beta_span = o.beta_hi - o.beta_lo;
  std::mt19937_64 rng(o.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);

  TunePoint current = starts.front();
  for (int it = 0; it < iterations; ++it) {
    if (it > 0 && it % segment == 0) {
      current = starts[static_cast<std::size_t>(it / segment) % starts.size()];
    }
    const double frac = iterations > 1 ? static_cast<double>(it) / (iterations - 1) : 1.0;
    const double temp = o.initial_temperature *
                        std::pow(o.final_temperature / o.initial_temperature, frac);
    const double scale =
        0.02 + 0.25 * std::sqrt(temp / o.initial_temperature);
    RescoreConfig next;
    if (unit(rng) < 0.1) {
      next = {o.alpha_lo + alpha_span * unit(rng), o.beta_lo + beta_span * unit(rng)};
    } else {
      next = {current.config.alpha + scale * alpha_span * gauss(rng),
              current.config.beta + scale * beta_span * gauss(rng)};
    }
    const TunePoint candidate = evaluate(clip(next));
    const double delta = static_cast<double>(candidate.edits) -
                         static_cast<double>(current.edits);
    if (delta <= 0.0 || unit(rng) < std::exp(-delta / temp)) current = candidate;
  }
  return result;
}

}  // namespace biaslattice
