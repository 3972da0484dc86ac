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

#ifndef STRONGSET_ONTOLOGY_HPP_
#define STRONGSET_ONTOLOGY_HPP_

#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace strongset {

// Machine identifier of a sound class, e.g. "/m/09x0r".
using ClassId = std::string;
using ClassSet = std::set<ClassId>;

// MID of the "Music" node in the published ontology. Used as the default
// collapse target; callers may override it.
inline constexpr std::string_view kDefaultMusicId = "/m/04rlf";

struct ClassNode {
  ClassId id;
  std::string name;
  std::vector<ClassId> child_ids;
};

// Immutable class hierarchy. Nodes may have several parents; cycles are
// rejected at construction.
class Ontology {
 public:
  // Validates ids (non-empty, unique), child links (must resolve) and
  // acyclicity. Throws ValidationError.
  explicit Ontology(std::vector<ClassNode> nodes);

  std::size_t size() const { return nodes_.size(); }
  bool contains(std::string_view id) const;

  // Throws NotFoundError for unknown ids.
  const ClassNode& node(std::string_view id) const;
  const std::vector<ClassId>& parents(std::string_view id) const;
  const std::vector<ClassId>& children(std::string_view id) const;

  // Nodes in input order.
  const std::vector<ClassNode>& nodes() const { return nodes_; }

  // Transitive closure of parents, not including `id` itself.
  ClassSet Ancestors(std::string_view id) const;

  // Display name, or the id itself when the class is unknown.
  std::string NameOr(std::string_view id) const;

 private:
  std::size_t IndexOf(std::string_view id) const;

  std::vector<ClassNode> nodes_;
  std::map<ClassId, std::size_t, std::less<>> index_;
  std::vector<std::vector<ClassId>> parents_;
};

// Parses the published ontology JSON: an array of objects with at least
// "id", "name" and "child_ids". Other fields are ignored.
// Throws ParseError (malformed JSON, missing fields) or ValidationError.
Ontology LoadOntology(std::string_view json_text);
Ontology LoadOntologyFile(const std::string& path);

// labels ∪ ancestors(labels), following every parent of multi-parent nodes.
ClassSet SmearLabels(const ClassSet& labels, const Ontology& ontology);

// Replaces every label equal to or descending from `music_id` by `music_id`.
ClassSet CollapseMusic(const ClassSet& labels, const Ontology& ontology,
                       std::string_view music_id = kDefaultMusicId);

}  // namespace strongset

#endif  // STRONGSET_ONTOLOGY_HPP_
