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

#include <cmath>
#include <deque>
#include <functional>
#include <string>
#include <vector>

#include "plcurv/common.hpp"
#include "plcurv/metric.hpp"
#include "plcurv/surface.hpp"

namespace plcurv {

using FlipLog = std::vector<EdgeId>;

/** @brief Angle opposite halfedge h inside its own face. */
inline double opposite_angle(const TriangulatedSurface& surface,
                             const DiscreteMetric& metric, HalfedgeId h) {
  double a = metric.length(surface.edge(h));
  double b = metric.length(surface.edge(surface.next(h)));
  double c = metric.length(surface.edge(surface.prev(h)));
  return corner_angles(a, b, c)[0];
}

/**
 * @brief Intrinsic Delaunay predicate: the sum of the two angles opposite an
 * edge is at most pi + eps. Cocircular edges (sum within eps of pi) count as
 * Delaunay. An edge whose two sides lie in one face carries two angles of a
 * single triangle and is always Delaunay.
 */
inline bool is_delaunay_edge(const TriangulatedSurface& surface,
                             const DiscreteMetric& metric, EdgeId e,
                             double eps = kFlipEps) {
  double sum = opposite_angle(surface, metric, surface.halfedge(e, 0)) +
               opposite_angle(surface, metric, surface.halfedge(e, 1));
  return sum <= kPi + eps;
}

/**
 * @brief Length of the opposite diagonal of the glued quadrilateral.
 *
 * The shared edge is placed on (0,0)-(e,0); the apex of the first triangle
 * sits above at x1 = (e^2 + b^2 - a^2) / 2e, y1 = +sqrt(b^2 - x1^2), the apex
 * of the second below at x2 = (e^2 + c^2 - d^2) / 2e, y2 = -sqrt(c^2 - x2^2).
 * Sides b, c are adjacent to the (0,0) endpoint, a, d to (e,0). Returns the
 * apex distance.
 */
inline double opposite_diagonal_length(double e, double a, double b, double c,
                                       double d) {
  double x1 = (e * e + b * b - a * a) / (2.0 * e);
  double y1 = std::sqrt(std::max(b * b - x1 * x1, 0.0));
  double x2 = (e * e + c * c - d * d) / (2.0 * e);
  double y2 = -std::sqrt(std::max(c * c - x2 * x2, 0.0));
  return std::hypot(x1 - x2, y1 - y2);
}

/**
 * @brief Flip an edge in place, preserving the PL metric.
 *
 * The two incident triangles are developed into the plane; the edge is
 * replaced by the opposite diagonal of the resulting quadrilateral, whose
 * length becomes the edge's new length. Purely combinatorial on halfedges, so
 * self-loops and parallel edges need no special handling; the edge keeps its
 * id. Throws NumericError if the two incident faces coincide or the
 * quadrilateral is not strictly convex (the error reports the four corner
 * angles), so a geodesic diagonal would not exist.
 */
inline void flip_edge(TriangulatedSurface& surface, DiscreteMetric& metric,
                      EdgeId e) {
  const HalfedgeId h0 = surface.halfedge(e, 0);
  const HalfedgeId h1 = surface.halfedge(e, 1);
  const FaceId f0 = surface.face(h0);
  const FaceId f1 = surface.face(h1);
  if (f0 == f1)
    throw NumericError("edge " + std::to_string(e) +
                       " bounds a single face on both sides and cannot flip");

  // f0 = (h0: i->j, hjk, hki) with apex k; f1 = (h1: j->i, him, hmj), apex m.
  const HalfedgeId hjk = surface.next(h0);
  const HalfedgeId hki = surface.prev(h0);
  const HalfedgeId him = surface.next(h1);
  const HalfedgeId hmj = surface.prev(h1);

  const double le = metric.length(e);
  const double a = metric.length(surface.edge(hjk));
  const double b = metric.length(surface.edge(hki));
  const double c = metric.length(surface.edge(him));
  const double d = metric.length(surface.edge(hmj));

  auto ang0 = corner_angles(le, a, b);  // opposite (ij, jk, ki) in f0
  auto ang1 = corner_angles(le, c, d);  // opposite (ji, im, mj) in f1
  const double at_i = ang0[1] + ang1[2];
  const double at_j = ang0[2] + ang1[1];
  if (!(at_i < kPi) || !(at_j < kPi))
    throw NumericError(
        "flip of edge " + std::to_string(e) +
        " is non-convex: quadrilateral corner angles (" + std::to_string(at_i) +
        ", " + std::to_string(at_j) + ", " + std::to_string(ang0[0]) + ", " +
        std::to_string(ang1[0]) + ")");

  const double l_new = opposite_diagonal_length(le, a, b, c, d);

  // Rewire to f0 = (h0: m->k, hki, him), f1 = (h1: k->m, hmj, hjk).
  const VertexId k = surface.tip(hjk);
  const VertexId m = surface.tip(him);
  surface.next_[h0] = hki;
  surface.next_[hki] = him;
  surface.next_[him] = h0;
  surface.next_[h1] = hmj;
  surface.next_[hmj] = hjk;
  surface.next_[hjk] = h1;
  surface.face_[him] = f0;
  surface.face_[hjk] = f1;
  surface.face_h_[f0] = h0;
  surface.face_h_[f1] = h1;
  surface.tip_[h0] = k;
  surface.tip_[h1] = m;

  metric.set_length(e, l_new);

  for (FaceId f : {f0, f1}) {
    auto [x, y, z] = face_lengths(surface, metric, f);
    if (!triangle_valid(x, y, z))
      throw NumericError("flip of edge " + std::to_string(e) +
                         " produced a degenerate face");
  }
}

/** @brief Optional observers for make_delaunay, called around each flip. */
struct FlipHooks {
  std::function<void(EdgeId)> before_flip;
  std::function<void(EdgeId)> after_flip;
};

/**
 * @brief Flip until every edge satisfies the Delaunay predicate.
 *
 * Work queue seeded with all edges in index order; each flip re-enqueues the
 * four boundary edges of its quadrilateral. A non-Delaunay edge of a valid
 * metric always admits a convex flip, and the flip preserves the metric, so
 * the sweep terminates; a hard cap of kFlipCapFactor * |E| flips guards
 * against cycling and throws FlipCapError. Returns the flips in order.
 */
inline FlipLog make_delaunay(TriangulatedSurface& surface,
                             DiscreteMetric& metric, double eps = kFlipEps,
                             const FlipHooks* hooks = nullptr) {
  FlipLog log;
  const int cap = kFlipCapFactor * surface.n_edges();
  std::deque<EdgeId> queue;
  std::vector<char> queued(surface.n_edges(), 1);
  for (EdgeId e = 0; e < surface.n_edges(); ++e) queue.push_back(e);

  while (!queue.empty()) {
    EdgeId e = queue.front();
    queue.pop_front();
    queued[e] = 0;
    if (is_delaunay_edge(surface, metric, e, eps)) continue;
    if (static_cast<int>(log.size()) >= cap)
      throw FlipCapError("flip cap of " + std::to_string(cap) +
                         " exceeded while restoring Delaunay");
    if (hooks && hooks->before_flip) hooks->before_flip(e);
    flip_edge(surface, metric, e);
    if (hooks && hooks->after_flip) hooks->after_flip(e);
    log.push_back(e);
    HalfedgeId h0 = surface.halfedge(e, 0), h1 = surface.halfedge(e, 1);
    for (HalfedgeId h : {surface.next(h0), surface.prev(h0), surface.next(h1),
                         surface.prev(h1)}) {
      EdgeId n = surface.edge(h);
      if (!queued[n]) {
        queued[n] = 1;
        queue.push_back(n);
      }
    }
  }
  return log;
}

/** @brief Number of edges violating the Delaunay predicate. */
inline int delaunay_violation_count(const TriangulatedSurface& surface,
                                    const DiscreteMetric& metric,
                                    double eps = kFlipEps) {
  int count = 0;
  for (EdgeId e = 0; e < surface.n_edges(); ++e)
    if (!is_delaunay_edge(surface, metric, e, eps)) ++count;
  return count;
}

}  // namespace plcurv
