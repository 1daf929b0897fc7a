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
#include <cstdint>
#include <queue>
#include <string>
#include <vector>

#include "plcurv/common.hpp"

namespace plcurv {

using VertexId = std::int32_t;
using HalfedgeId = std::int32_t;
using EdgeId = std::int32_t;
using FaceId = std::int32_t;

/** @brief Embedded positions, kept only until edge lengths are extracted. */
using VertexPositions = std::vector<std::array<double, 3>>;

class DiscreteMetric;
class TriangulatedSurface;
void flip_edge(TriangulatedSurface& surface, DiscreteMetric& metric, EdgeId e);

/**
 * @brief Closed oriented triangulated marked surface as a halfedge multigraph.
 *
 * Gluing data lives on halfedges: `next` cycles each face once (orbit length
 * three) and `twin` is a fixed-point-free involution pairing oppositely
 * oriented sides. Lengths and combinatorics attach to edge indices, never to
 * vertex pairs, so self-loops and parallel edges (one-vertex torus, polygon
 * identifications) are first-class. Instances are immutable after
 * construction; the delaunay module's edge flips rewire a working copy owned
 * by the caller.
 */
class TriangulatedSurface {
 public:
  /**
   * @brief Build and validate a surface from per-face vertex ids plus twin
   * pairs.
   *
   * Halfedge `3*f + c` runs from `faces[f][c]` to `faces[f][(c+1)%3]`. Each
   * entry of `twins` glues two halfedges that must traverse their common edge
   * in opposite directions; the edge id is the entry's position. Throws
   * InvalidInputError unless the gluing is a connected closed oriented
   * surface whose vertex labels match the gluing orbits exactly.
   */
  static TriangulatedSurface from_face_gluing(
      int n_vertices, const std::vector<std::array<VertexId, 3>>& faces,
      const std::vector<std::array<HalfedgeId, 2>>& twins);

  int n_vertices() const { return n_vertices_; }
  int n_edges() const { return static_cast<int>(edge_h_.size()); }
  int n_faces() const { return static_cast<int>(face_h_.size()); }
  int n_halfedges() const { return static_cast<int>(next_.size()); }

  HalfedgeId next(HalfedgeId h) const { return next_[h]; }
  HalfedgeId prev(HalfedgeId h) const { return next_[next_[h]]; }
  HalfedgeId twin(HalfedgeId h) const { return twin_[h]; }
  VertexId tip(HalfedgeId h) const { return tip_[h]; }
  VertexId origin(HalfedgeId h) const { return tip_[twin_[h]]; }
  FaceId face(HalfedgeId h) const { return face_[h]; }
  EdgeId edge(HalfedgeId h) const { return edge_[h]; }

  /** @brief One of the two halfedges of an edge; side is 0 or 1. */
  HalfedgeId halfedge(EdgeId e, int side) const { return edge_h_[e][side]; }
  HalfedgeId face_halfedge(FaceId f) const { return face_h_[f]; }

  /** @brief The three vertices of a face, in `next` order starting from the
   *  origin of its representative halfedge. Repeats are possible. */
  std::array<VertexId, 3> face_vertices(FaceId f) const {
    HalfedgeId h = face_h_[f];
    return {origin(h), origin(next_[h]), origin(next_[next_[h]])};
  }

  int euler_characteristic() const {
    return n_vertices() - n_edges() + n_faces();
  }

 private:
  TriangulatedSurface() = default;

  int n_vertices_ = 0;
  std::vector<HalfedgeId> next_;
  std::vector<HalfedgeId> twin_;
  std::vector<VertexId> tip_;
  std::vector<FaceId> face_;
  std::vector<EdgeId> edge_;
  std::vector<std::array<HalfedgeId, 2>> edge_h_;
  std::vector<HalfedgeId> face_h_;

  friend void flip_edge(TriangulatedSurface& surface, DiscreteMetric& metric,
                        EdgeId e);
};

inline int euler_characteristic(const TriangulatedSurface& surface) {
  return surface.euler_characteristic();
}

inline TriangulatedSurface TriangulatedSurface::from_face_gluing(
    int n_vertices, const std::vector<std::array<VertexId, 3>>& faces,
    const std::vector<std::array<HalfedgeId, 2>>& twins) {
  if (n_vertices < 1) throw InvalidInputError("surface needs at least one vertex");
  if (faces.empty()) throw InvalidInputError("surface needs at least one face");
  const int F = static_cast<int>(faces.size());
  const int H = 3 * F;
  if (static_cast<int>(twins.size()) * 2 != H)
    throw InvalidInputError("twin list must pair every halfedge exactly once: expected " +
                            std::to_string(H / 2) + " pairs, got " +
                            std::to_string(twins.size()));

  TriangulatedSurface s;
  s.n_vertices_ = n_vertices;
  s.next_.resize(H);
  s.twin_.assign(H, -1);
  s.tip_.resize(H);
  s.face_.resize(H);
  s.edge_.assign(H, -1);
  s.edge_h_.resize(twins.size());
  s.face_h_.resize(F);

  for (FaceId f = 0; f < F; ++f) {
    s.face_h_[f] = 3 * f;
    for (int c = 0; c < 3; ++c) {
      VertexId v = faces[f][c];
      if (v < 0 || v >= n_vertices)
        throw InvalidInputError("face " + std::to_string(f) +
                                " references vertex " + std::to_string(v) +
                                " outside [0, " + std::to_string(n_vertices) + ")");
      HalfedgeId h = 3 * f + c;
      s.next_[h] = 3 * f + (c + 1) % 3;
      s.tip_[h] = faces[f][(c + 1) % 3];
      s.face_[h] = f;
    }
  }

  for (EdgeId e = 0; e < static_cast<int>(twins.size()); ++e) {
    HalfedgeId a = twins[e][0], b = twins[e][1];
    if (a < 0 || a >= H || b < 0 || b >= H)
      throw InvalidInputError("edge " + std::to_string(e) +
                              " references a halfedge outside [0, " +
                              std::to_string(H) + ")");
    if (a == b)
      throw InvalidInputError("edge " + std::to_string(e) +
                              " glues a halfedge to itself");
    if (s.twin_[a] != -1 || s.twin_[b] != -1)
      throw InvalidInputError("edge " + std::to_string(e) +
                              " reuses an already glued halfedge");
    s.twin_[a] = b;
    s.twin_[b] = a;
    s.edge_[a] = e;
    s.edge_[b] = e;
    s.edge_h_[e] = {a, b};
  }

  // Opposite orientation along each glued pair.
  for (HalfedgeId h = 0; h < H; ++h) {
    HalfedgeId t = s.twin_[h];
    VertexId from = s.tip_[s.prev(h)];
    if (s.tip_[t] != from || s.tip_[h] != s.tip_[s.prev(t)])
      throw InvalidInputError(
          "halfedges " + std::to_string(h) + " and " + std::to_string(t) +
          " are glued with mismatched endpoints (inconsistent orientation)");
  }

  // Vertex labels must match the gluing orbits of h -> next(twin(h)),
  // which rotates the outgoing halfedges around a vertex.
  {
    std::vector<int> orbit(H, -1);
    int n_orbits = 0;
    std::vector<VertexId> orbit_vertex;
    for (HalfedgeId h0 = 0; h0 < H; ++h0) {
      if (orbit[h0] != -1) continue;
      VertexId v = s.tip_[s.twin_[h0]];
      HalfedgeId h = h0;
      do {
        orbit[h] = n_orbits;
        if (s.tip_[s.twin_[h]] != v)
          throw InvalidInputError(
              "vertex labels disagree around a vertex umbrella: halfedge " +
              std::to_string(h) + " starts at " +
              std::to_string(s.tip_[s.twin_[h]]) + ", expected " +
              std::to_string(v));
        h = s.next_[s.twin_[h]];
      } while (h != h0);
      orbit_vertex.push_back(v);
      ++n_orbits;
    }
    if (n_orbits != n_vertices)
      throw InvalidInputError("vertex count " + std::to_string(n_vertices) +
                              " does not match the " + std::to_string(n_orbits) +
                              " gluing orbits");
    std::vector<char> seen(n_vertices, 0);
    for (VertexId v : orbit_vertex) {
      if (seen[v])
        throw InvalidInputError("vertex " + std::to_string(v) +
                                " labels two distinct umbrellas");
      seen[v] = 1;
    }
  }

  // Connectivity over {next, twin}.
  {
    std::vector<char> visited(H, 0);
    std::queue<HalfedgeId> q;
    q.push(0);
    visited[0] = 1;
    int count = 0;
    while (!q.empty()) {
      HalfedgeId h = q.front();
      q.pop();
      ++count;
      for (HalfedgeId n : {s.next_[h], s.twin_[h]}) {
        if (!visited[n]) {
          visited[n] = 1;
          q.push(n);
        }
      }
    }
    if (count != H) throw InvalidInputError("surface is not connected");
  }

  return s;
}

}  // namespace plcurv
