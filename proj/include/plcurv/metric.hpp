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

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "plcurv/common.hpp"
#include "plcurv/surface.hpp"

namespace plcurv {

/**
 * @brief PL (flat cone) metric: one positive length per edge index.
 *
 * Positivity and finiteness are invariants of the type. Per-face triangle
 * inequalities are not: vertex_scale can leave them violated, so callers
 * check with metric_is_valid / require_valid_metric where geometry is about
 * to be evaluated.
 */
class DiscreteMetric {
 public:
  static DiscreteMetric from_lengths(const TriangulatedSurface& surface,
                                     std::vector<double> lengths) {
    if (static_cast<int>(lengths.size()) != surface.n_edges())
      throw InvalidInputError("expected " + std::to_string(surface.n_edges()) +
                              " edge lengths, got " +
                              std::to_string(lengths.size()));
    DiscreteMetric m;
    m.len_ = std::move(lengths);
    for (EdgeId e = 0; e < static_cast<int>(m.len_.size()); ++e)
      m.check_(e);
    return m;
  }

  double length(EdgeId e) const { return len_[e]; }
  const std::vector<double>& lengths() const { return len_; }
  int n_edges() const { return static_cast<int>(len_.size()); }

  void set_length(EdgeId e, double l) {
    len_[e] = l;
    check_(e);
  }

 private:
  void check_(EdgeId e) const {
    if (!(len_[e] > 0.0) || !std::isfinite(len_[e]))
      throw InvalidInputError("edge " + std::to_string(e) +
                              " has non-positive or non-finite length");
  }

  std::vector<double> len_;
};

/** @brief Strict triangle inequalities with margin kDegenerateTol * max side. */
inline bool triangle_valid(double a, double b, double c) {
  double m = std::max({a, b, c});
  double tol = kDegenerateTol * m;
  return (a + b - c) > tol && (b + c - a) > tol && (c + a - b) > tol;
}

/**
 * @brief Interior angles opposite the sides (a, b, c).
 *
 * Stable half-angle rearrangement of the law of cosines (Kahan): each angle
 * carries a relative error of a few ulps, so the three angles land in (0, pi)
 * and sum to pi within a few ulps even for thin triangles. Throws
 * NumericError when the triple is degenerate within kDegenerateTol.
 */
inline std::array<double, 3> corner_angles(double a, double b, double c) {
  if (!triangle_valid(a, b, c))
    throw NumericError("degenerate triangle: lengths (" + std::to_string(a) +
                       ", " + std::to_string(b) + ", " + std::to_string(c) +
                       ") violate the triangle inequality within tolerance");
  auto one = [](double opp, double adj1, double adj2) {
    double x = adj1, y = adj2;
    if (x < y) std::swap(x, y);
    double mu = (y >= opp) ? opp - (x - y) : y - (x - opp);
    double t = std::sqrt((((x - y) + opp) * mu) /
                         ((x + (y + opp)) * ((x - opp) + y)));
    return 2.0 * std::atan(t);
  };
  return {one(a, b, c), one(b, c, a), one(c, a, b)};
}

/** @brief The length triple of a face in `next` order from its
 *  representative halfedge. */
inline std::array<double, 3> face_lengths(const TriangulatedSurface& surface,
                                          const DiscreteMetric& metric,
                                          FaceId f) {
  HalfedgeId h = surface.face_halfedge(f);
  return {metric.length(surface.edge(h)),
          metric.length(surface.edge(surface.next(h))),
          metric.length(surface.edge(surface.prev(h)))};
}

/** @brief First face violating a triangle inequality, or -1. */
inline FaceId first_invalid_face(const TriangulatedSurface& surface,
                                 const DiscreteMetric& metric) {
  for (FaceId f = 0; f < surface.n_faces(); ++f) {
    auto [a, b, c] = face_lengths(surface, metric, f);
    if (!triangle_valid(a, b, c)) return f;
  }
  return -1;
}

inline bool metric_is_valid(const TriangulatedSurface& surface,
                            const DiscreteMetric& metric) {
  return first_invalid_face(surface, metric) == -1;
}

inline void require_valid_metric(const TriangulatedSurface& surface,
                                 const DiscreteMetric& metric) {
  FaceId f = first_invalid_face(surface, metric);
  if (f != -1) {
    auto [a, b, c] = face_lengths(surface, metric, f);
    throw NumericError("face " + std::to_string(f) + " with lengths (" +
                       std::to_string(a) + ", " + std::to_string(b) + ", " +
                       std::to_string(c) + ") violates the triangle inequality");
  }
}

/**
 * @brief Angle opposite each halfedge, indexed by halfedge id.
 *
 * For halfedge h in face (h, next h, prev h) this is the interior angle at
 * the vertex not on h. Throws NumericError naming the first degenerate face.
 */
inline std::vector<double> halfedge_angles(const TriangulatedSurface& surface,
                                           const DiscreteMetric& metric) {
  require_valid_metric(surface, metric);
  std::vector<double> angles(surface.n_halfedges());
  for (FaceId f = 0; f < surface.n_faces(); ++f) {
    HalfedgeId h = surface.face_halfedge(f);
    auto [a, b, c] = face_lengths(surface, metric, f);
    auto ang = corner_angles(a, b, c);
    angles[h] = ang[0];
    angles[surface.next(h)] = ang[1];
    angles[surface.prev(h)] = ang[2];
  }
  return angles;
}

/**
 * @brief Discrete Gaussian curvature K_i = 2 pi - (sum of corner angles at i).
 *
 * A vertex meeting a face at several corners (self-loops) accumulates every
 * such corner. Entries lie in (-inf, 2 pi).
 */
inline std::vector<double> curvature(const TriangulatedSurface& surface,
                                     const DiscreteMetric& metric) {
  std::vector<double> angles = halfedge_angles(surface, metric);
  std::vector<double> K(surface.n_vertices(), 2.0 * kPi);
  for (HalfedgeId h = 0; h < surface.n_halfedges(); ++h)
    K[surface.tip(surface.next(h))] -= angles[h];
  return K;
}

/** @brief | sum_i K_i - 2 pi chi(S) |. */
inline double gauss_bonnet_residual(const TriangulatedSurface& surface,
                                    const DiscreteMetric& metric) {
  std::vector<double> K = curvature(surface, metric);
  double sum = 0.0;
  for (double k : K) sum += k;
  return std::abs(sum - 2.0 * kPi * surface.euler_characteristic());
}

/**
 * @brief Vertex scaling: l'_e = l_e * exp((u_i + u_j) / 2) for an edge with
 * endpoints i, j; a self-loop at i picks up exp(u_i).
 *
 * The result can violate triangle inequalities; callers that need geometry
 * must check with metric_is_valid.
 */
inline DiscreteMetric vertex_scale(const TriangulatedSurface& surface,
                                   const DiscreteMetric& metric,
                                   const std::vector<double>& u) {
  if (static_cast<int>(u.size()) != surface.n_vertices())
    throw InvalidInputError("conformal factor has " + std::to_string(u.size()) +
                            " entries, expected " +
                            std::to_string(surface.n_vertices()));
  std::vector<double> lengths(surface.n_edges());
  for (EdgeId e = 0; e < surface.n_edges(); ++e) {
    HalfedgeId h = surface.halfedge(e, 0);
    VertexId i = surface.origin(h), j = surface.tip(h);
    lengths[e] = metric.length(e) * std::exp(0.5 * (u[i] + u[j]));
  }
  return DiscreteMetric::from_lengths(surface, std::move(lengths));
}

/** @brief Combinatorial alpha-curvature R_{alpha,i} = K_i / exp(alpha u_i)
 *  of the metric obtained by scaling `metric` with `u`. */
inline std::vector<double> alpha_curvature(const TriangulatedSurface& surface,
                                           const DiscreteMetric& metric,
                                           const std::vector<double>& u,
                                           double alpha) {
  DiscreteMetric scaled = vertex_scale(surface, metric, u);
  std::vector<double> R = curvature(surface, scaled);
  for (VertexId v = 0; v < surface.n_vertices(); ++v)
    R[v] *= std::exp(-alpha * u[v]);
  return R;
}

/** @brief Triangle area from side lengths, stably parenthesized (Kahan). */
inline double triangle_area(double a, double b, double c) {
  double x = a, y = b, z = c;
  if (x < y) std::swap(x, y);
  if (x < z) std::swap(x, z);
  if (y < z) std::swap(y, z);
  double s = (x + (y + z)) * (z - (x - y)) * (z + (x - y)) * (x + (y - z));
  return 0.25 * std::sqrt(std::max(s, 0.0));
}

inline double total_area(const TriangulatedSurface& surface,
                         const DiscreteMetric& metric) {
  double area = 0.0;
  for (FaceId f = 0; f < surface.n_faces(); ++f) {
    auto [a, b, c] = face_lengths(surface, metric, f);
    area += triangle_area(a, b, c);
  }
  return area;
}

/** @brief Edge lengths induced by embedded positions. Positions are not
 *  consulted afterwards. */
inline DiscreteMetric metric_from_positions(const TriangulatedSurface& surface,
                                            const VertexPositions& positions) {
  if (static_cast<int>(positions.size()) != surface.n_vertices())
    throw InvalidInputError("position count does not match vertex count");
  std::vector<double> lengths(surface.n_edges());
  for (EdgeId e = 0; e < surface.n_edges(); ++e) {
    HalfedgeId h = surface.halfedge(e, 0);
    const auto& p = positions[surface.origin(h)];
    const auto& q = positions[surface.tip(h)];
    double dx = p[0] - q[0], dy = p[1] - q[1], dz = p[2] - q[2];
    lengths[e] = std::sqrt(dx * dx + dy * dy + dz * dz);
  }
  return DiscreteMetric::from_lengths(surface, std::move(lengths));
}

}  // namespace plcurv
