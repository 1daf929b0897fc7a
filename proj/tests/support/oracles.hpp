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

// Independent numerical oracles for the test suite. Everything here is
// deliberately implemented through a different route than the library:
// quadrature instead of closed forms, long-double law of cosines instead of
// the half-angle formula, planar coordinates instead of the flip algebra.

#include <array>
#include <cmath>
#include <cstdlib>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "plcurv/metric.hpp"
#include "plcurv/surface.hpp"

namespace oracles {

inline constexpr long double kPiL = 3.14159265358979323846264338327950288L;

/** tanh-sinh quadrature of -integral_0^x log(2 sin t) dt. Handles the
 *  endpoint log singularity; accurate to ~1e-15 absolute. */
inline double lobachevsky_quadrature(double x) {
  // odd, pi-periodic reduction so the integrand stays one-signed and smooth
  double r = std::remainder(x, static_cast<double>(kPiL));
  double sign = r < 0 ? -1.0 : 1.0;
  r = std::fabs(r);
  if (r == 0.0) return 0.0;

  long double h = 0.5L, prev = 1e300L, best = 0.0L;
  for (int level = 0; level < 12; ++level) {
    long double sum = 0.0L;
    int K = static_cast<int>(std::ceil(7.0 / static_cast<double>(h)));
    for (int k = -K; k <= K; ++k) {
      long double t = k * h;
      long double sh = std::sinh(t);
      long double u = std::tanh(0.5L * kPiL * sh);
      long double w =
          0.5L * kPiL * std::cosh(t) / std::pow(std::cosh(0.5L * kPiL * sh), 2.0L);
      long double tt = 0.5L * r * (u + 1.0L);
      long double st = std::sin(tt);
      if (st <= 0.0L) continue;
      sum += w * (0.5L * r) * std::log(2.0L * st);
    }
    sum *= h;
    best = -sum;
    if (level > 3 &&
        std::fabs(static_cast<double>(best - prev)) <
            1e-16 * (1.0 + std::fabs(static_cast<double>(best))))
      break;
    prev = best;
    h *= 0.5L;
  }
  return sign * static_cast<double>(best);
}

/** Corner angles by the long-double law of cosines; angle[k] is opposite
 *  side k. The extra precision makes this a reference for the library's
 *  double-precision half-angle formula. */
inline std::array<double, 3> angles_long_double(double a, double b, double c) {
  auto one = [](long double opp, long double s1, long double s2) {
    long double cosv = (s1 * s1 + s2 * s2 - opp * opp) / (2.0L * s1 * s2);
    if (cosv > 1.0L) cosv = 1.0L;
    if (cosv < -1.0L) cosv = -1.0L;
    return static_cast<double>(std::acos(cosv));
  };
  return {one(a, b, c), one(b, c, a), one(c, a, b)};
}

/** Triangle area from coordinates: embed (a = |12|, b = |23|, c = |31|) in
 *  the plane and take the cross product. */
inline double area_from_coordinates(double a, double b, double c) {
  long double x = (static_cast<long double>(a) * a + c * static_cast<long double>(c) -
                   b * static_cast<long double>(b)) /
                  (2.0L * a);
  long double y2 = static_cast<long double>(c) * c - x * x;
  long double y = y2 > 0.0L ? std::sqrt(y2) : 0.0L;
  return static_cast<double>(0.5L * a * y);
}

/**
 * Diagonal of the quad formed by triangles (e, a, b) and (e, c, d) glued
 * along e, via explicit planar coordinates: shared edge on the x axis,
 * apexes placed by long-double angles, one above and one below.
 * Sides: b, c adjacent to the origin endpoint; a, d adjacent to the other.
 */
inline double planar_quad_diagonal(double e, double a, double b, double c,
                                   double d) {
  auto place = [&](double adj_origin, double adj_far, double side) {
    // apex of a triangle with |origin-apex| = adj_origin, |far-apex| = adj_far
    long double cosv = (static_cast<long double>(e) * e +
                        static_cast<long double>(adj_origin) * adj_origin -
                        static_cast<long double>(adj_far) * adj_far) /
                       (2.0L * e * adj_origin);
    if (cosv > 1.0L) cosv = 1.0L;
    if (cosv < -1.0L) cosv = -1.0L;
    long double ang = std::acos(cosv);
    return std::array<long double, 2>{adj_origin * std::cos(ang),
                                      side * adj_origin * std::sin(ang)};
  };
  auto p = place(b, a, +1.0);
  auto q = place(c, d, -1.0);
  return static_cast<double>(
      std::sqrt((p[0] - q[0]) * (p[0] - q[0]) + (p[1] - q[1]) * (p[1] - q[1])));
}

/** Composite Gauss-Legendre quadrature of -(theta_i du_i + theta_j du_j +
 *  theta_k du_k) along the straight segment from 0 to u: the defining line
 *  integral of the per-triangle energy. */
inline double line_integral_F(double lij, double ljk, double lki, double ui,
                              double uj, double uk, int panels = 256) {
  // 5-point Gauss nodes/weights on [-1, 1]
  static const double X[5] = {-0.9061798459386640, -0.5384693101056831, 0.0,
                              0.5384693101056831, 0.9061798459386640};
  static const double W[5] = {0.2369268850561891, 0.4786286704993665,
                              0.5688888888888889, 0.4786286704993665,
                              0.2369268850561891};
  double total = 0.0;
  for (int p = 0; p < panels; ++p) {
    double t0 = static_cast<double>(p) / panels;
    double t1 = static_cast<double>(p + 1) / panels;
    double mid = 0.5 * (t0 + t1), half = 0.5 * (t1 - t0);
    for (int g = 0; g < 5; ++g) {
      double t = mid + half * X[g];
      auto ang = plcurv::corner_angles(lij * std::exp(0.5 * t * (ui + uj)),
                                       ljk * std::exp(0.5 * t * (uj + uk)),
                                       lki * std::exp(0.5 * t * (uk + ui)));
      // angle opposite (ij, jk, ki) sits at (k, i, j)
      double integrand = ang[1] * ui + ang[2] * uj + ang[0] * uk;
      total += W[g] * half * integrand;
    }
  }
  return -total;
}

/** Seed shared by every randomized test; override with PLCURV_SEED. */
inline std::uint64_t base_seed() {
  if (const char* s = std::getenv("PLCURV_SEED")) return std::strtoull(s, nullptr, 10);
  return 0;
}

inline std::mt19937_64 make_rng(std::uint64_t stream) {
  std::mt19937_64 rng(base_seed() * 0x9e3779b97f4a7c15ull + stream);
  rng.discard(16);
  return rng;
}

inline std::string data_path(const std::string& name) {
  return std::string(PLCURV_DATA_DIR) + "/" + name;
}

/** Random conformal factor that keeps every triangle inequality intact. */
inline Eigen::VectorXd random_valid_scaling(
    const plcurv::TriangulatedSurface& surface,
    const plcurv::DiscreteMetric& metric, std::mt19937_64& rng,
    double amplitude) {
  std::uniform_real_distribution<double> U(-amplitude, amplitude);
  for (int attempt = 0; attempt < 256; ++attempt) {
    std::vector<double> u(surface.n_vertices());
    for (double& x : u) x = U(rng);
    plcurv::DiscreteMetric scaled = plcurv::vertex_scale(surface, metric, u);
    if (plcurv::metric_is_valid(surface, scaled))
      return Eigen::Map<Eigen::VectorXd>(u.data(), u.size());
    amplitude *= 0.8;
    U = std::uniform_real_distribution<double>(-amplitude, amplitude);
  }
  throw std::runtime_error("random_valid_scaling: no valid draw");
}

/** Random triangle sides with a healthy validity margin. */
inline std::array<double, 3> random_triangle(std::mt19937_64& rng,
                                             double lo = 0.5, double hi = 2.0) {
  std::uniform_real_distribution<double> U(lo, hi);
  for (;;) {
    double a = U(rng), b = U(rng), c = U(rng);
    double m = std::max({a, b, c});
    if (a + b - c > 0.05 * m && b + c - a > 0.05 * m && c + a - b > 0.05 * m)
      return {a, b, c};
  }
}

}  // namespace oracles
