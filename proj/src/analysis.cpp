/*
 * Copyright 2026 The strongset Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "strongset/analysis.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <sstream>

#include "strongset/error.hpp"

namespace strongset {

namespace {

std::string FormatDouble(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

std::string CsvField(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (const char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

double OddsRatio(const Contingency2x2& t) {
  double a = static_cast<double>(t.a);
  double b = static_cast<double>(t.b);
  double c = static_cast<double>(t.c);
  double d = static_cast<double>(t.d);
  if (t.a == 0 || t.b == 0 || t.c == 0 || t.d == 0) {
    a += 0.5;
    b += 0.5;
    c += 0.5;
    d += 0.5;
  }
  return (a * d) / (b * c);
}

std::string_view ToString(LabelSide side) {
  return side == LabelSide::kWeak ? "weak" : "strong";
}

JoinedPresence JoinCorpora(const Corpus& weak, const Corpus& strong) {
  const auto weak_presence = PresenceByClip(weak);
  const auto strong_presence = PresenceByClip(strong);
  JoinedPresence out;
  // Both clip registries are sorted; walk them together.
  auto wi = weak.clips.begin();
  auto si = strong.clips.begin();
  while (wi != weak.clips.end() && si != strong.clips.end()) {
    if (*wi < *si) {
      ++wi;
    } else if (*si < *wi) {
      ++si;
    } else {
      out.clips.push_back(*wi);
      const auto w = weak_presence.find(*wi);
      const auto s = strong_presence.find(*si);
      out.weak.push_back(w == weak_presence.end() ? ClassSet{} : w->second);
      out.strong.push_back(s == strong_presence.end() ? ClassSet{}
                                                      : s->second);
      ++wi;
      ++si;
    }
  }
  if (out.clips.empty()) {
    throw UndefinedError("the weak and strong corpora share no clips");
  }
  return out;
}

Contingency2x2 Tabulate(const JoinedPresence& joined, const ClassRef& condition,
                        const ClassRef& outcome) {
  Contingency2x2 t;
  const auto& cond = joined.side(condition.side);
  const auto& out = joined.side(outcome.side);
  for (std::size_t i = 0; i < joined.clips.size(); ++i) {
    const bool x = cond[i].contains(condition.class_id);
    const bool y = out[i].contains(outcome.class_id);
    if (x && y) {
      ++t.a;
    } else if (x) {
      ++t.b;
    } else if (y) {
      ++t.c;
    } else {
      ++t.d;
    }
  }
  return t;
}

OddsResult CrossLabelOdds(const Corpus& weak, const Corpus& strong,
                          const ClassRef& condition, const ClassRef& outcome) {
  const JoinedPresence joined = JoinCorpora(weak, strong);
  OddsResult r;
  r.table = Tabulate(joined, condition, outcome);
  r.odds_ratio = OddsRatio(r.table);
  r.shared_clips = joined.clips.size();
  return r;
}

std::vector<ScatterRow> PriorsScatter(const Corpus& weak, const Corpus& strong,
                                      const std::vector<ClassId>& extra_classes) {
  const auto weak_priors =
      weak.empty() ? std::map<ClassId, double>{} : ClassPriors(weak);
  const auto strong_priors =
      strong.empty() ? std::map<ClassId, double>{} : ClassPriors(strong);
  std::set<ClassId> classes(extra_classes.begin(), extra_classes.end());
  for (const auto& [c, p] : weak_priors) classes.insert(c);
  for (const auto& [c, p] : strong_priors) classes.insert(c);

  std::vector<ScatterRow> rows;
  rows.reserve(classes.size());
  for (const ClassId& c : classes) {
    ScatterRow row{c, PriorOf(weak_priors, c), PriorOf(strong_priors, c), {}};
    if (row.weak_prior > 0.0) row.ratio = row.strong_prior / row.weak_prior;
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<OddsRow> TopOddsRatios(const JoinedPresence& joined,
                                   LabelSide condition_side, std::size_t top_k,
                                   std::size_t min_cooccurrence,
                                   const std::vector<ClassId>& only_conditions) {
  const LabelSide outcome_side =
      condition_side == LabelSide::kWeak ? LabelSide::kStrong : LabelSide::kWeak;
  const auto& cond_sets = joined.side(condition_side);
  const auto& out_sets = joined.side(outcome_side);
  const std::uint64_t n = joined.clips.size();

  std::map<ClassId, std::vector<std::size_t>> clips_with_condition;
  for (std::size_t i = 0; i < cond_sets.size(); ++i) {
    for (const ClassId& c : cond_sets[i]) clips_with_condition[c].push_back(i);
  }
  std::map<ClassId, std::uint64_t> outcome_total;
  for (const auto& s : out_sets) {
    for (const ClassId& c : s) ++outcome_total[c];
  }
  const std::set<ClassId> filter(only_conditions.begin(),
                                 only_conditions.end());

  std::vector<OddsRow> rows;
  for (const auto& [condition, clip_idx] : clips_with_condition) {
    if (!filter.empty() && !filter.contains(condition)) continue;
    std::map<ClassId, std::uint64_t> both;
    for (const std::size_t i : clip_idx) {
      for (const ClassId& c : out_sets[i]) ++both[c];
    }
    const std::uint64_t n_cond = clip_idx.size();
    std::vector<OddsRow> candidates;
    for (const auto& [outcome, a] : both) {
      if (a < min_cooccurrence) continue;
      Contingency2x2 t;
      t.a = a;
      t.b = n_cond - a;
      t.c = outcome_total.at(outcome) - a;
      t.d = n - t.a - t.b - t.c;
      candidates.push_back({condition, outcome, t, OddsRatio(t)});
    }
    std::sort(candidates.begin(), candidates.end(),
              [](const OddsRow& x, const OddsRow& y) {
                return x.odds_ratio != y.odds_ratio
                           ? x.odds_ratio > y.odds_ratio
                           : x.outcome < y.outcome;
              });
    if (candidates.size() > top_k) candidates.resize(top_k);
    for (auto& r : candidates) rows.push_back(std::move(r));
  }
  return rows;
}

std::string WriteScatterCsv(const std::vector<ScatterRow>& rows,
                            const Ontology* ontology) {
  std::ostringstream out;
  out << "class_id,name,weak_prior,strong_prior,ratio\n";
  for (const auto& r : rows) {
    out << r.class_id << ','
        << CsvField(ontology ? ontology->NameOr(r.class_id) : "") << ','
        << FormatDouble(r.weak_prior) << ',' << FormatDouble(r.strong_prior)
        << ',' << (r.ratio ? FormatDouble(*r.ratio) : "") << '\n';
  }
  return out.str();
}

std::string WriteOddsCsv(const std::vector<OddsRow>& rows,
                         const Ontology* ontology) {
  std::ostringstream out;
  out << "condition_id,condition_name,outcome_id,outcome_name,a,b,c,d,"
         "odds_ratio\n";
  for (const auto& r : rows) {
    out << r.condition << ','
        << CsvField(ontology ? ontology->NameOr(r.condition) : "") << ','
        << r.outcome << ','
        << CsvField(ontology ? ontology->NameOr(r.outcome) : "") << ','
        << r.table.a << ',' << r.table.b << ',' << r.table.c << ','
        << r.table.d << ',' << FormatDouble(r.odds_ratio) << '\n';
  }
  return out.str();
}

}  // namespace strongset
