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

#include "strongset/ontology.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "strongset/error.hpp"

namespace strongset {

Ontology::Ontology(std::vector<ClassNode> nodes) : nodes_(std::move(nodes)) {
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const ClassId& id = nodes_[i].id;
    if (id.empty()) {
      throw ValidationError("ontology node " + std::to_string(i) +
                            " has an empty id");
    }
    if (!index_.emplace(id, i).second) {
      throw ValidationError("duplicate ontology id " + id);
    }
  }
  parents_.resize(nodes_.size());
  for (const ClassNode& n : nodes_) {
    for (const ClassId& child : n.child_ids) {
      const auto it = index_.find(child);
      if (it == index_.end()) {
        throw ValidationError("ontology node " + n.id +
                              " references unknown child " + child);
      }
      auto& ps = parents_[it->second];
      if (std::find(ps.begin(), ps.end(), n.id) == ps.end()) {
        ps.push_back(n.id);
      }
    }
  }

  // Iterative DFS with three colors; a grey-to-grey edge closes a cycle.
  enum : char { kWhite, kGrey, kBlack };
  std::vector<char> color(nodes_.size(), kWhite);
  for (std::size_t root = 0; root < nodes_.size(); ++root) {
    if (color[root] != kWhite) continue;
    std::vector<std::pair<std::size_t, std::size_t>> stack{{root, 0}};
    color[root] = kGrey;
    while (!stack.empty()) {
      auto& [u, next] = stack.back();
      const auto& kids = nodes_[u].child_ids;
      if (next == kids.size()) {
        color[u] = kBlack;
        stack.pop_back();
        continue;
      }
      const std::size_t v = index_.find(kids[next++])->second;
      if (color[v] == kGrey) {
        throw ValidationError("ontology contains a cycle through " +
                              nodes_[v].id);
      }
      if (color[v] == kWhite) {
        color[v] = kGrey;
        stack.emplace_back(v, 0);
      }
    }
  }
}

std::size_t Ontology::IndexOf(std::string_view id) const {
  const auto it = index_.find(id);
  if (it == index_.end()) {
    throw NotFoundError("unknown class id " + std::string(id));
  }
  return it->second;
}

bool Ontology::contains(std::string_view id) const {
  return index_.find(id) != index_.end();
}

const ClassNode& Ontology::node(std::string_view id) const {
  return nodes_[IndexOf(id)];
}

const std::vector<ClassId>& Ontology::parents(std::string_view id) const {
  return parents_[IndexOf(id)];
}

const std::vector<ClassId>& Ontology::children(std::string_view id) const {
  return nodes_[IndexOf(id)].child_ids;
}

ClassSet Ontology::Ancestors(std::string_view id) const {
  ClassSet out;
  std::vector<std::size_t> frontier{IndexOf(id)};
  while (!frontier.empty()) {
    const std::size_t u = frontier.back();
    frontier.pop_back();
    for (const ClassId& p : parents_[u]) {
      if (out.insert(p).second) frontier.push_back(index_.find(p)->second);
    }
  }
  return out;
}

std::string Ontology::NameOr(std::string_view id) const {
  const auto it = index_.find(id);
  return it == index_.end() ? std::string(id) : nodes_[it->second].name;
}

Ontology LoadOntology(std::string_view json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    // e.byte is the 1-based offset of the failure.
    std::size_t line = 1;
    const std::size_t limit = std::min<std::size_t>(e.byte, json_text.size());
    for (std::size_t i = 0; i + 1 < limit; ++i) {
      if (json_text[i] == '\n') ++line;
    }
    throw ParseError("malformed ontology JSON at byte " +
                         std::to_string(e.byte) + ": " + e.what(),
                     line);
  }
  if (!doc.is_array()) throw ParseError("ontology JSON must be an array");

  std::vector<ClassNode> nodes;
  nodes.reserve(doc.size());
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const auto& entry = doc[i];
    const auto where = "ontology entry " + std::to_string(i);
    if (!entry.is_object()) throw ParseError(where + " is not an object");
    for (const char* key : {"id", "name", "child_ids"}) {
      if (!entry.contains(key)) {
        throw ParseError(where + " lacks \"" + key + "\"");
      }
    }
    if (!entry["id"].is_string() || !entry["name"].is_string() ||
        !entry["child_ids"].is_array()) {
      throw ParseError(where + " has fields of the wrong type");
    }
    ClassNode node{entry["id"].get<std::string>(),
                   entry["name"].get<std::string>(),
                   {}};
    for (const auto& c : entry["child_ids"]) {
      if (!c.is_string()) throw ParseError(where + " has a non-string child id");
      node.child_ids.push_back(c.get<std::string>());
    }
    nodes.push_back(std::move(node));
  }
  return Ontology(std::move(nodes));
}

Ontology LoadOntologyFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return LoadOntology(buf.str());
}

ClassSet SmearLabels(const ClassSet& labels, const Ontology& ontology) {
  ClassSet out = labels;
  for (const ClassId& label : labels) {
    ClassSet up = ontology.Ancestors(label);
    out.insert(up.begin(), up.end());
  }
  return out;
}

ClassSet CollapseMusic(const ClassSet& labels, const Ontology& ontology,
                       std::string_view music_id) {
  if (!ontology.contains(music_id)) {
    throw NotFoundError("music class " + std::string(music_id) +
                        " is not in the ontology");
  }
  ClassSet out;
  for (const ClassId& label : labels) {
    if (label == music_id || ontology.Ancestors(label).contains(
                                 std::string(music_id))) {
      out.emplace(music_id);
    } else {
      out.insert(label);
    }
  }
  return out;
}

}  // namespace strongset
