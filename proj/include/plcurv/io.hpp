/*
plcurv

Copyright 2026 the plcurv authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

   http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/
#pragma once

#include <array>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>
#include <json.hpp>

#include "plcurv/common.hpp"
#include "plcurv/metric.hpp"
#include "plcurv/solver.hpp"
#include "plcurv/surface.hpp"

namespace plcurv {

struct ObjMesh {
  TriangulatedSurface surface;
  DiscreteMetric metric;  // induced edge lengths
  VertexPositions positions;
  std::vector<std::string> warnings;  // ignored element types, one note each
};

struct IntrinsicMesh {
  TriangulatedSurface surface;
  DiscreteMetric metric;
};

namespace detail {

// Twin assignment for embedded meshes: each directed vertex pair must appear
// exactly once, and its reverse must appear in some other face. Edge ids
// follow first appearance in halfedge order.
inline std::vector<std::array<HalfedgeId, 2>> twins_from_vertex_pairs(
    const std::vector<std::array<VertexId, 3>>& faces) {
  std::map<std::pair<VertexId, VertexId>, HalfedgeId> directed;
  for (int f = 0; f < static_cast<int>(faces.size()); ++f) {
    for (int c = 0; c < 3; ++c) {
      VertexId a = faces[f][c], b = faces[f][(c + 1) % 3];
      if (a == b)
        throw InvalidInputError("face " + std::to_string(f) +
                                " repeats vertex " + std::to_string(a));
      auto [it, fresh] = directed.emplace(std::make_pair(a, b), 3 * f + c);
      if (!fresh)
        throw InvalidInputError(
            "non-manifold or inconsistently oriented: directed edge " +
            std::to_string(a) + " -> " + std::to_string(b) + " appears twice");
    }
  }
  const int H = 3 * static_cast<int>(faces.size());
  std::vector<HalfedgeId> twin(H, -1);
  for (const auto& [ab, h] : directed) {
    auto rev = directed.find({ab.second, ab.first});
    if (rev == directed.end())
      throw InvalidInputError("surface has boundary: directed edge " +
                              std::to_string(ab.first) + " -> " +
                              std::to_string(ab.second) + " is unmatched");
    twin[h] = rev->second;
  }
  std::vector<std::array<HalfedgeId, 2>> pairs;
  pairs.reserve(H / 2);
  for (HalfedgeId h = 0; h < H; ++h)
    if (twin[h] > h) pairs.push_back({h, twin[h]});
  return pairs;
}

inline int parse_obj_vertex_ref(const std::string& token, int n_vertices,
                                int line_no) {
  // Accept i, i/t, i/t/n, i//n; only the vertex index is used.
  std::string head = token.substr(0, token.find('/'));
  int idx = 0;
  try {
    size_t pos = 0;
    idx = std::stoi(head, &pos);
    if (pos != head.size()) throw std::invalid_argument(head);
  } catch (const std::exception&) {
    throw InvalidInputError("line " + std::to_string(line_no) +
                            ": bad face vertex reference '" + token + "'");
  }
  if (idx < 1 || idx > n_vertices)
    throw InvalidInputError("line " + std::to_string(line_no) +
                            ": face vertex index " + std::to_string(idx) +
                            " out of range 1.." + std::to_string(n_vertices));
  return idx - 1;
}

}  // namespace detail

/**
 * @brief Load a closed oriented triangle mesh from a Wavefront OBJ file.
 *
 * Only `v` and triangular `f` elements are honored; every other element type
 * is skipped with one warning per type. The PL metric is the induced
 * edge-length metric of the embedding.
 */
inline ObjMesh load_obj(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");

  VertexPositions positions;
  std::vector<std::array<VertexId, 3>> faces;
  std::set<std::string> ignored;
  std::vector<std::string> warnings;

  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string keyword;
    if (!(ls >> keyword) || keyword[0] == '#') continue;
    if (keyword == "v") {
      double x, y, z;
      if (!(ls >> x >> y >> z))
        throw InvalidInputError("line " + std::to_string(line_no) +
                                ": vertex needs three coordinates");
      positions.push_back({x, y, z});
    } else if (keyword == "f") {
      std::vector<std::string> refs;
      std::string tok;
      while (ls >> tok) refs.push_back(tok);
      if (refs.size() != 3)
        throw InvalidInputError("line " + std::to_string(line_no) +
                                ": only triangular faces are supported (got " +
                                std::to_string(refs.size()) + " vertices)");
      std::array<VertexId, 3> face;
      for (int c = 0; c < 3; ++c)
        face[c] = detail::parse_obj_vertex_ref(
            refs[c], static_cast<int>(positions.size()), line_no);
      faces.push_back(face);
    } else if (ignored.insert(keyword).second) {
      warnings.push_back("ignoring OBJ element type '" + keyword + "'");
    }
  }
  if (faces.empty()) throw InvalidInputError("'" + path + "' has no faces");

  auto twins = detail::twins_from_vertex_pairs(faces);
  TriangulatedSurface surface = TriangulatedSurface::from_face_gluing(
      static_cast<int>(positions.size()), faces, twins);
  DiscreteMetric metric = metric_from_positions(surface, positions);
  return {std::move(surface), std::move(metric), std::move(positions),
          std::move(warnings)};
}

/**
 * @brief Intrinsic mesh JSON. Halfedge c of face f is 3 f + c; `edges` lists
 * each edge as its pair of opposite halfedges and carries the ids used by
 * `edge_lengths`. `edges` may be omitted for meshes without self-loops or
 * parallel edges, in which case gluing is reconstructed from vertex pairs.
 */
inline IntrinsicMesh intrinsic_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw InvalidInputError("intrinsic mesh must be a JSON object");
  for (const char* key : {"vertices", "faces", "edge_lengths"})
    if (!j.contains(key))
      throw InvalidInputError(std::string("intrinsic mesh is missing '") + key + "'");

  const int n_vertices = j.at("vertices").get<int>();
  std::vector<std::array<VertexId, 3>> faces;
  for (const auto& jf : j.at("faces")) {
    if (!jf.is_array() || jf.size() != 3)
      throw InvalidInputError("each face must be a triple of vertex ids");
    faces.push_back({jf[0].get<VertexId>(), jf[1].get<VertexId>(),
                     jf[2].get<VertexId>()});
  }
  if (faces.empty()) throw InvalidInputError("intrinsic mesh has no faces");
  const int n_halfedges = 3 * static_cast<int>(faces.size());

  std::vector<std::array<HalfedgeId, 2>> edge_pairs;
  if (j.contains("edges")) {
    std::vector<HalfedgeId> seen(n_halfedges, -1);
    for (const auto& je : j.at("edges")) {
      if (!je.is_array() || je.size() != 2)
        throw InvalidInputError("each edge must be a pair of halfedge ids");
      HalfedgeId h0 = je[0].get<HalfedgeId>(), h1 = je[1].get<HalfedgeId>();
      for (HalfedgeId h : {h0, h1})
        if (h < 0 || h >= n_halfedges)
          throw InvalidInputError("edge halfedge id " + std::to_string(h) +
                                  " out of range");
      if (h0 == h1 || seen[h0] != -1 || seen[h1] != -1)
        throw InvalidInputError("edges must pair every halfedge exactly once");
      seen[h0] = h1;
      seen[h1] = h0;
      edge_pairs.push_back({h0, h1});
    }
    for (HalfedgeId h = 0; h < n_halfedges; ++h)
      if (seen[h] == -1)
        throw InvalidInputError("halfedge " + std::to_string(h) +
                                " is missing from 'edges'");
  } else {
    edge_pairs = detail::twins_from_vertex_pairs(faces);
  }

  // Edge ids are positional in `edges`, matching the gluing's edge order.
  TriangulatedSurface surface =
      TriangulatedSurface::from_face_gluing(n_vertices, faces, edge_pairs);

  const auto& jl = j.at("edge_lengths");
  if (!jl.is_object() ||
      static_cast<int>(jl.size()) != static_cast<int>(edge_pairs.size()))
    throw InvalidInputError("'edge_lengths' must give one length per edge");
  std::vector<double> lengths(surface.n_edges(), 0.0);
  for (int k = 0; k < static_cast<int>(edge_pairs.size()); ++k) {
    const std::string key = std::to_string(k);
    if (!jl.contains(key))
      throw InvalidInputError("'edge_lengths' is missing edge '" + key + "'");
    lengths[surface.edge(edge_pairs[k][0])] = jl.at(key).get<double>();
  }
  DiscreteMetric metric = DiscreteMetric::from_lengths(surface, std::move(lengths));
  return {std::move(surface), std::move(metric)};
}

inline nlohmann::json intrinsic_to_json(const TriangulatedSurface& surface,
                                        const DiscreteMetric& metric) {
  // Canonical form: halfedges renumbered 3 f + c along each face cycle,
  // edges ordered by first appearance of either side.
  std::vector<HalfedgeId> canon(surface.n_halfedges(), -1);
  nlohmann::json jfaces = nlohmann::json::array();
  for (FaceId f = 0; f < surface.n_faces(); ++f) {
    HalfedgeId h = surface.face_halfedge(f);
    nlohmann::json jf = nlohmann::json::array();
    for (int c = 0; c < 3; ++c) {
      canon[h] = 3 * f + c;
      jf.push_back(surface.origin(h));
      h = surface.next(h);
    }
    jfaces.push_back(std::move(jf));
  }

  std::vector<int> order(surface.n_edges(), -1);
  nlohmann::json jedges = nlohmann::json::array();
  nlohmann::json jlengths = nlohmann::json::object();
  int next_id = 0;
  for (FaceId f = 0; f < surface.n_faces(); ++f) {
    HalfedgeId h = surface.face_halfedge(f);
    for (int c = 0; c < 3; ++c, h = surface.next(h)) {
      EdgeId e = surface.edge(h);
      if (order[e] != -1) continue;
      order[e] = next_id;
      jedges.push_back({canon[h], canon[surface.twin(h)]});
      jlengths[std::to_string(next_id)] = metric.length(e);
      ++next_id;
    }
  }

  nlohmann::json j;
  j["vertices"] = surface.n_vertices();
  j["faces"] = std::move(jfaces);
  j["edges"] = std::move(jedges);
  j["edge_lengths"] = std::move(jlengths);
  return j;
}

inline IntrinsicMesh load_intrinsic(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInputError("'" + path + "': " + e.what());
  }
  try {
    return intrinsic_from_json(j);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInputError("'" + path + "': " + e.what());
  }
}

inline void save_intrinsic(const std::string& path,
                           const TriangulatedSurface& surface,
                           const DiscreteMetric& metric) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << intrinsic_to_json(surface, metric).dump(2) << "\n";
}

/** @brief Detect the loader by extension: .obj or intrinsic .json. */
inline IntrinsicMesh load_mesh(const std::string& path,
                               std::vector<std::string>* warnings = nullptr) {
  auto dot = path.rfind('.');
  std::string ext = dot == std::string::npos ? "" : path.substr(dot);
  if (ext == ".obj") {
    ObjMesh m = load_obj(path);
    if (warnings)
      warnings->insert(warnings->end(), m.warnings.begin(), m.warnings.end());
    return {std::move(m.surface), std::move(m.metric)};
  }
  if (ext == ".json") return load_intrinsic(path);
  throw InvalidInputError("'" + path + "': unknown mesh format (expected .obj or .json)");
}

/** @brief Conformal factor files: {"u": [...]} or a bare JSON array. */
inline Eigen::VectorXd load_factors(const std::string& path, int n_expected) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInputError("'" + path + "': " + e.what());
  }
  const nlohmann::json* arr = j.is_object() && j.contains("u") ? &j.at("u") : &j;
  if (!arr->is_array())
    throw InvalidInputError("'" + path + "': expected an array of factors");
  if (static_cast<int>(arr->size()) != n_expected)
    throw InvalidInputError("'" + path + "' has " +
                            std::to_string(arr->size()) + " factors, expected " +
                            std::to_string(n_expected));
  Eigen::VectorXd u(n_expected);
  for (int i = 0; i < n_expected; ++i) u[i] = (*arr)[i].get<double>();
  return u;
}

inline void save_factors(const std::string& path, const Eigen::VectorXd& u) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path + "'");
  nlohmann::json j;
  j["u"] = std::vector<double>(u.data(), u.data() + u.size());
  out << j.dump(2) << "\n";
}

/** @brief Deterministic solve report (no timestamps or environment data). */
inline nlohmann::json report_to_json(const SolveResult& result) {
  const SolveReport& r = result.report;
  nlohmann::json j;
  j["status"] = solve_status_name(r.status);
  j["theorem_case"] =
      r.theorem_case ? nlohmann::json(static_cast<int>(*r.theorem_case))
                     : nlohmann::json(nullptr);
  j["violated_condition"] = r.violated_condition;
  j["alpha"] = r.alpha;
  j["chi"] = r.chi;
  j["tolerance"] = r.tolerance;
  j["final_residual"] = r.final_residual;
  j["flips_total"] = result.flip_log.size();
  nlohmann::json iters = nlohmann::json::array();
  for (const IterationRecord& it : r.iterations) {
    iters.push_back({{"residual", it.residual},
                     {"energy", it.energy},
                     {"step", it.step},
                     {"flips", it.flips}});
  }
  j["iterations"] = std::move(iters);
  return j;
}

inline nlohmann::json verify_to_json(const VerifyReport& r) {
  nlohmann::json j;
  j["curvature_residual"] = r.curvature_residual;
  j["k_residual"] = r.k_residual;
  j["constraint_abs"] = r.constraint_abs;
  j["gauss_bonnet"] = r.gauss_bonnet;
  j["delaunay_violations"] = r.delaunay_violations;
  return j;
}

}  // namespace plcurv
