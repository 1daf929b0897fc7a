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

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <cmath>
#include <map>
#include <vector>

#include "plcurv/common.hpp"
#include "plcurv/delaunay.hpp"
#include "plcurv/lobachevsky.hpp"
#include "plcurv/metric.hpp"
#include "plcurv/surface.hpp"

namespace plcurv {

/**
 * @brief Bobenko-Pinkall-Springborn triangle functional
 * f(x, y, z) = alpha x + beta y + gamma z + L(alpha) + L(beta) + L(gamma),
 * where alpha, beta, gamma are the angles opposite the sides e^x, e^y, e^z.
 *
 * Requires (e^x, e^y, e^z) to satisfy the triangle inequalities; its gradient
 * is the angle triple.
 */
inline double bps_f(double x, double y, double z) {
  auto ang = corner_angles(std::exp(x), std::exp(y), std::exp(z));
  return ang[0] * x + ang[1] * y + ang[2] * z + lobachevsky(ang[0]) +
         lobachevsky(ang[1]) + lobachevsky(ang[2]);
}

namespace detail {

// h of one triangle from its scaled lengths:
//   h = 2 sum_corners L(theta) + sum_sides (2 theta_opp - pi) log l~.
inline double triangle_h_from_scaled(double lij, double ljk, double lki) {
  auto ang = corner_angles(lij, ljk, lki);  // opposite (ij, jk, ki) = at (k, i, j)
  return 2.0 * (lobachevsky(ang[0]) + lobachevsky(ang[1]) + lobachevsky(ang[2])) +
         (2.0 * ang[0] - kPi) * std::log(lij) +
         (2.0 * ang[1] - kPi) * std::log(ljk) +
         (2.0 * ang[2] - kPi) * std::log(lki);
}

}  // namespace detail

/**
 * @brief Per-triangle energy h = 2 f(lambda~_ij/2, lambda~_jk/2,
 * lambda~_ki/2) - (pi/2)(lambda~_ij + lambda~_jk + lambda~_ki), with
 * lambda~ = 2 log of the scaled length.
 *
 * Takes the background lengths of the triangle (ij, jk, ki) and the factors
 * at its corners; the scaled triangle must be non-degenerate.
 */
inline double triangle_energy_h(double lij, double ljk, double lki, double ui,
                                double uj, double uk) {
  return detail::triangle_h_from_scaled(lij * std::exp(0.5 * (ui + uj)),
                                        ljk * std::exp(0.5 * (uj + uk)),
                                        lki * std::exp(0.5 * (uk + ui)));
}

/**
 * @brief Closed form of the per-triangle action F_ijk(u) with F(0) = 0 and
 * gradient (-theta_i, -theta_j, -theta_k):
 *
 *   F = -(Theta_i u_i + Theta_j u_j + Theta_k u_k)
 *       + 2 L(Theta_i) + 2 L(Theta_j) + 2 L(Theta_k)
 *       + 2 Theta_i ln l_jk + 2 Theta_j ln l_ik + 2 Theta_k ln l_ij
 *       - 2 L(Theta-_i) - 2 L(Theta-_j) - 2 L(Theta-_k)
 *       - 2 Theta-_k ln l_ij - 2 Theta-_j ln l_ik - 2 Theta-_i ln l_jk,
 *
 * where Theta are the angles of the scaled triangle, Theta- those of the
 * background, and l the background lengths.
 */
inline double triangle_energy_F(double lij, double ljk, double lki, double ui,
                                double uj, double uk) {
  auto bg = corner_angles(lij, ljk, lki);  // opposite (ij, jk, ki) = at (k, i, j)
  auto sc = corner_angles(lij * std::exp(0.5 * (ui + uj)),
                          ljk * std::exp(0.5 * (uj + uk)),
                          lki * std::exp(0.5 * (uk + ui)));
  const double ti = sc[1], tj = sc[2], tk = sc[0];
  const double bi = bg[1], bj = bg[2], bk = bg[0];
  return -(ti * ui + tj * uj + tk * uk) +
         2.0 * (lobachevsky(ti) + lobachevsky(tj) + lobachevsky(tk)) +
         2.0 * (ti * std::log(ljk) + tj * std::log(lki) + tk * std::log(lij)) -
         2.0 * (lobachevsky(bi) + lobachevsky(bj) + lobachevsky(bk)) -
         2.0 * (bk * std::log(lij) + bj * std::log(lki) + bi * std::log(ljk));
}

/**
 * @brief Discrete conformal energy over a background metric, with intrinsic
 * Delaunay maintenance.
 *
 * Holds the working triangulation, the chart lengths at u = 0 on that
 * triangulation (after flips those are formal coordinates and can violate
 * triangle inequalities; only the scaled lengths stay geometric), the current
 * factor u, and the accumulated flip offset C. set_u re-scales and flips back
 * to Delaunay, adding the local two-face energy jump of every flip to C, so
 * energy() = E_T(u) - C varies continuously across chart changes and the
 * reported value at the initial chart has C = 0.
 *
 * The gradient of energy() is the curvature vector of the scaled metric; the
 * Hessian is the half-cotangent Laplacian. A single solve owns its state
 * exclusively; line searches probe on copies.
 */
class EnergyState {
 public:
  EnergyState(const TriangulatedSurface& surface, const DiscreteMetric& background)
      : tri_(surface), bg_(background), scaled_(background),
        u_(Eigen::VectorXd::Zero(surface.n_vertices())) {
    require_valid_metric(tri_, bg_);
    FlipLog initial = make_delaunay(tri_, scaled_, kFlipEps);
    bg_ = scaled_;  // u = 0: chart lengths equal scaled lengths
    flips_.insert(flips_.end(), initial.begin(), initial.end());
    last_flips_ = static_cast<int>(initial.size());
    offset_ = 0.0;  // reported energy is E_T(0) on the initial Delaunay chart
    angles_ = halfedge_angles(tri_, scaled_);
  }

  /**
   * @brief Move to a new factor: re-scale the chart lengths, then flip back
   * to Delaunay with offset accounting.
   *
   * Throws NumericError if some face of the current chart degenerates at the
   * new factor (the state is then unusable; probe on a copy), FlipCapError if
   * the sweep exceeds the cap.
   */
  void set_u(const Eigen::VectorXd& u) {
    if (u.size() != tri_.n_vertices())
      throw InvalidInputError("conformal factor size mismatch");
    for (EdgeId e = 0; e < tri_.n_edges(); ++e) {
      HalfedgeId h = tri_.halfedge(e, 0);
      double s = 0.5 * (u[tri_.origin(h)] + u[tri_.tip(h)]);
      scaled_.set_length(e, bg_.length(e) * std::exp(s));
    }
    require_valid_metric(tri_, scaled_);
    u_ = u;

    double h_before = 0.0;
    FlipHooks hooks;
    hooks.before_flip = [&](EdgeId e) {
      h_before = face_h_(tri_.face(tri_.halfedge(e, 0))) +
                 face_h_(tri_.face(tri_.halfedge(e, 1)));
    };
    hooks.after_flip = [&](EdgeId e) {
      HalfedgeId h0 = tri_.halfedge(e, 0);
      double h_after = face_h_(tri_.face(h0)) + face_h_(tri_.face(tri_.twin(h0)));
      offset_ += h_after - h_before;
      double s = 0.5 * (u_[tri_.origin(h0)] + u_[tri_.tip(h0)]);
      bg_.set_length(e, scaled_.length(e) * std::exp(-s));
    };
    FlipLog log = make_delaunay(tri_, scaled_, kFlipEps, &hooks);
    flips_.insert(flips_.end(), log.begin(), log.end());
    last_flips_ = static_cast<int>(log.size());
    angles_ = halfedge_angles(tri_, scaled_);
  }

  /** @brief E_T(u) - C = sum_faces h + 2 pi sum_i u_i - C. */
  double energy() const {
    double E = 0.0;
    for (FaceId f = 0; f < tri_.n_faces(); ++f) E += face_h_(f);
    return E + 2.0 * kPi * u_.sum() - offset_;
  }

  /** @brief Gradient of energy(): the curvature of the scaled metric. */
  Eigen::VectorXd gradient() const {
    std::vector<double> K = curvature(tri_, scaled_);
    return Eigen::Map<const Eigen::VectorXd>(K.data(), K.size());
  }

  /**
   * @brief Half-cotangent Hessian d K / d u.
   *
   * Off-diagonal entry of edge {ij}: -(cot theta_k + cot theta_l) / 2 over
   * the angles opposite the edge; self-loops contribute nothing. Each
   * diagonal entry is assembled as the exact negative of its row's
   * off-diagonal sum, so row sums vanish identically and the matrix is
   * positive semidefinite with kernel spanned by the constants.
   */
  Eigen::SparseMatrix<double> hessian() const {
    const int n = tri_.n_vertices();
    std::vector<std::map<VertexId, double>> off(n);
    for (HalfedgeId h = 0; h < tri_.n_halfedges(); ++h) {
      VertexId i = tri_.origin(h), j = tri_.tip(h);
      if (i == j) continue;
      double w = -0.5 / std::tan(angles_[h]);
      off[i][j] += w;
      off[j][i] += w;
    }
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(tri_.n_halfedges() * 2 + n);
    for (VertexId i = 0; i < n; ++i) {
      double row = 0.0;
      for (auto [j, w] : off[i]) {
        trips.emplace_back(i, j, w);
        row += w;
      }
      trips.emplace_back(i, i, -row);
    }
    Eigen::SparseMatrix<double> H(n, n);
    H.setFromTriplets(trips.begin(), trips.end());
    return H;
  }

  const Eigen::VectorXd& u() const { return u_; }
  const TriangulatedSurface& triangulation() const { return tri_; }
  const DiscreteMetric& scaled_metric() const { return scaled_; }
  const DiscreteMetric& chart_background() const { return bg_; }
  double flip_offset() const { return offset_; }
  const FlipLog& flip_log() const { return flips_; }
  int last_flip_count() const { return last_flips_; }

 private:
  double face_h_(FaceId f) const {
    auto [a, b, c] = face_lengths(tri_, scaled_, f);
    return detail::triangle_h_from_scaled(a, b, c);
  }

  TriangulatedSurface tri_;
  DiscreteMetric bg_;
  DiscreteMetric scaled_;
  Eigen::VectorXd u_;
  std::vector<double> angles_;
  double offset_ = 0.0;
  FlipLog flips_;
  int last_flips_ = 0;
};

}  // namespace plcurv
