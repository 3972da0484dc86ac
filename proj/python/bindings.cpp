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

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "strongset/analysis.hpp"
#include "strongset/corpus.hpp"
#include "strongset/error.hpp"
#include "strongset/framing.hpp"
#include "strongset/metrics.hpp"
#include "strongset/mixing.hpp"
#include "strongset/ontology.hpp"

namespace py = pybind11;

namespace strongset {
namespace {

std::vector<WeightedSample> Samples(const std::vector<double>& scores,
                                    const std::optional<std::vector<double>>& weights) {
  if (weights && weights->size() != scores.size()) {
    throw ValidationError("weights and scores differ in length");
  }
  std::vector<WeightedSample> out(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i) {
    out[i] = {scores[i], weights ? (*weights)[i] : 1.0};
  }
  return out;
}

double PyRocAuc(const std::vector<double>& pos, const std::vector<double>& neg,
                const std::optional<std::vector<double>>& pos_weights,
                const std::optional<std::vector<double>>& neg_weights) {
  return RocAuc(Samples(pos, pos_weights), Samples(neg, neg_weights));
}

std::vector<std::pair<double, double>> PyPoolNegatives(const std::vector<double>& explicit_scores,
                                                       const std::vector<double>& complementary,
                                                       const std::string& mode) {
  const auto pooled = PoolNegatives(Samples(explicit_scores, std::nullopt),
                                    Samples(complementary, std::nullopt),
                                    ParseNegativePooling(mode));
  std::vector<std::pair<double, double>> out;
  out.reserve(pooled.size());
  for (const auto& s : pooled) out.emplace_back(s.score, s.weight);
  return out;
}

// `scores` is units x classes with NaN for a missing score; `truth` has the
// same shape and is non-zero for positives.
py::dict PyLwlrap(py::array_t<double, py::array::c_style | py::array::forcecast> scores,
                  py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast> truth) {
  if (scores.ndim() != 2 || truth.ndim() != 2 || scores.shape(0) != truth.shape(0) ||
      scores.shape(1) != truth.shape(1)) {
    throw ValidationError("scores and truth must be 2-D arrays of the same shape");
  }
  const auto units = static_cast<std::size_t>(scores.shape(0));
  const auto classes = static_cast<std::size_t>(scores.shape(1));
  const LwlrapResult r =
      Lwlrap(std::span<const double>(scores.data(), units * classes),
             std::span<const std::uint8_t>(truth.data(), units * classes), classes);
  py::dict out;
  out["overall"] = r.overall;
  out["per_class"] = r.per_class;
  out["class_weights"] = r.class_weights;
  out["occurrences"] = r.occurrences;
  return out;
}

std::vector<std::size_t> PyPositiveFrames(const std::vector<std::pair<double, double>>& segments,
                                          double clip_duration, double frame_duration) {
  std::vector<Interval> spans;
  for (const auto& [a, b] : segments) spans.push_back({SecondsToMicros(a), SecondsToMicros(b)});
  spans = MergeIntervals(std::move(spans));
  Micros total{0};
  for (const auto& s : spans) total += s.length();
  const FrameGrid grid =
      MakeGrid(SecondsToMicros(clip_duration), SecondsToMicros(frame_duration));
  FramingConfig config;
  config.frame_duration = grid.frame_duration;
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < grid.num_frames; ++k) {
    if (IsFramePositive(grid.Frame(k), spans, total, config)) out.push_back(k);
  }
  return out;
}

std::string PyFrameStrongTsv(const std::string& strong_tsv,
                             const std::optional<std::string>& weak_negatives_csv,
                             bool complementary_negatives, bool diffuse) {
  const Corpus strong = ParseStrongTsv(strong_tsv);
  const Corpus labels = diffuse ? BuildDiffuse(strong) : strong;
  std::optional<Corpus> negatives;
  if (weak_negatives_csv) negatives = ParseWeakCsv(*weak_negatives_csv);
  FramingOptions options;
  options.complementary_negatives = complementary_negatives;
  return WriteFramedTsv(FrameCorpus(labels, negatives ? &*negatives : nullptr, {}, options));
}

std::string PyEvaluate(const std::string& scores_csv, const std::string& labels_text,
                       const std::string& negatives, const std::string& eval_kind,
                       double auc_clamp) {
  EvalConfig config;
  config.pooling = ParseNegativePooling(negatives);
  config.kind = ParseEvalKind(eval_kind);
  config.auc_clamp = auc_clamp;
  const ScoreTable scores = ParseScoreCsv(scores_csv);
  const LabelTable labels = config.kind == EvalKind::kStrong
                                ? ParseFramedTsv(labels_text)
                                : LabelsFromWeak(ParseWeakCsv(labels_text));
  return ReportToJson(Evaluate(scores, labels, config));
}

std::string PyMixManifest(const std::string& weak_csv, const std::string& strong_tsv, double mu,
                          std::uint64_t seed, std::uint64_t epoch,
                          std::optional<std::size_t> rows) {
  MixSpec spec;
  spec.mu = mu;
  spec.seed = seed;
  spec.epoch = epoch;
  spec.rows = rows;
  return WriteManifestTsv(MixManifest(ParseWeakCsv(weak_csv), ParseStrongTsv(strong_tsv), spec),
                          spec);
}

}  // namespace
}  // namespace strongset

PYBIND11_MODULE(_core, m) {
  using namespace strongset;
  m.doc() = "Native core of the strongset toolkit";

  auto& base = py::register_exception<Error>(m, "StrongsetError", PyExc_ValueError);
  py::register_exception<ValidationError>(m, "ValidationError", base.ptr());
  py::register_exception<ParseError>(m, "ParseError", base.ptr());
  py::register_exception<IoError>(m, "IoError", base.ptr());

  m.def("roc_auc", &PyRocAuc, py::arg("positives"), py::arg("negatives"),
        py::arg("positive_weights") = py::none(), py::arg("negative_weights") = py::none(),
        "Weighted ROC AUC, ties counting one half.");
  m.def("probit", &Probit, py::arg("p"), "Inverse standard normal CDF.");
  m.def("dprime", &DPrime, py::arg("auc"), py::arg("clamp") = kDefaultAucClamp,
        "sqrt(2) * probit(auc) with the AUC clamped to [clamp, 1 - clamp].");
  m.def("pool_negatives", &PyPoolNegatives, py::arg("explicit"), py::arg("complementary"),
        py::arg("mode") = "balanced",
        "(score, weight) pairs, explicit negatives first.");
  m.def("lwlrap", &PyLwlrap, py::arg("scores"), py::arg("truth"),
        "Label-weighted label-ranking average precision over a units x classes matrix.");
  m.def(
      "odds_ratio",
      [](std::uint64_t a, std::uint64_t b, std::uint64_t c, std::uint64_t d) {
        return OddsRatio({a, b, c, d});
      },
      py::arg("a"), py::arg("b"), py::arg("c"), py::arg("d"));
  m.def("positive_frames", &PyPositiveFrames, py::arg("segments"),
        py::arg("clip_duration") = 10.0, py::arg("frame_duration") = 0.96,
        "Indices of frames positive for one class given its (start, end) segments in seconds.");
  m.def("frame_strong_tsv", &PyFrameStrongTsv, py::arg("strong_tsv"),
        py::arg("weak_negatives_csv") = py::none(), py::arg("complementary_negatives") = true,
        py::arg("diffuse") = false, "Framed label TSV for a strong label TSV.");
  m.def("evaluate", &PyEvaluate, py::arg("scores_csv"), py::arg("labels"),
        py::arg("negatives") = "balanced", py::arg("eval_kind") = "strong",
        py::arg("auc_clamp") = kDefaultAucClamp, "Evaluation report as JSON text.");
  m.def("mix_manifest", &PyMixManifest, py::arg("weak_csv"), py::arg("strong_tsv"),
        py::arg("mu"), py::arg("seed") = 0, py::arg("epoch") = 0, py::arg("rows") = py::none(),
        "Training manifest TSV mixing weak and strong-like rows.");

  py::class_<Ontology>(m, "Ontology")
      .def_static(
          "from_json", [](const std::string& text) { return LoadOntology(text); },
          py::arg("text"))
      .def("__len__", &Ontology::size)
      .def("__contains__", [](const Ontology& o, const std::string& id) { return o.contains(id); })
      .def("name", [](const Ontology& o, const std::string& id) { return o.NameOr(id); })
      .def("parents", [](const Ontology& o, const std::string& id) { return o.parents(id); })
      .def("children", [](const Ontology& o, const std::string& id) { return o.children(id); })
      .def("ancestors", [](const Ontology& o, const std::string& id) { return o.Ancestors(id); })
      .def("smear", [](const Ontology& o, const ClassSet& labels) { return SmearLabels(labels, o); })
      .def(
          "collapse_music",
          [](const Ontology& o, const ClassSet& labels, const std::string& music_id) {
            return CollapseMusic(labels, o, music_id);
          },
          py::arg("labels"), py::arg("music_id") = std::string(kDefaultMusicId));
}
