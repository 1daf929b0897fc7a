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
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "plcurv/common.hpp"
#include "plcurv/energy.hpp"
#include "plcurv/metric.hpp"
#include "plcurv/surface.hpp"

namespace plcurv {

inline constexpr double kArmijoC1 = 1e-4;
inline constexpr double kArmijoShrink = 0.5;
inline constexpr double kMinStep = 1e-16;
inline constexpr double kGaussBonnetTargetTol = 1e-9;

/** @brief Existence cases of the prescribed alpha-curvature problem. */
enum class TheoremCase { case1 = 1, case2 = 2, case3 = 3, case4 = 4 };

inline const char* theorem_case_name(TheoremCase c) {
  switch (c) {
    case TheoremCase::case1: return "case (1)";
    case TheoremCase::case2: return "case (2)";
    case TheoremCase::case3: return "case (3)";
    case TheoremCase::case4: return "case (4)";
  }
  return "?";
}

/** @brief Violated-condition messages, quoted verbatim by tests and the CLI. */
namespace reject {
inline constexpr const char* kChiPositiveAlpha =
    "chi > 0 admits only alpha < 0 with Rbar > 0 (case (1)) or alpha = 0 (case (4))";
inline constexpr const char* kCase1Positivity =
    "case (1) requires Rbar > 0 at every vertex";
inline constexpr const char* kCase2Sign =
    "case (2) requires Rbar <= 0 at every vertex";
inline constexpr const char* kCase2NotIdenticallyZero =
    "case (2) requires Rbar not identically zero";
inline constexpr const char* kCase3Zero =
    "case (3) requires Rbar identically zero when chi = 0 and alpha != 0";
inline constexpr const char* kCase4GaussBonnet =
    "case (4) requires sum Rbar = 2 pi chi within 1e-9";
inline constexpr const char* kCase4UpperBound =
    "case (4) requires Rbar < 2 pi at every vertex";
}  // namespace reject

/** @brief Outcome of matching (alpha, Rbar, chi) against the existence cases.
 *  Rejection is a value: `violated_condition` names the failed condition. */
struct Classification {
  std::optional<TheoremCase> theorem_case;
  std::string violated_condition;
  bool accepted() const { return theorem_case.has_value(); }
};

inline Classification classify_target(double alpha, const Eigen::VectorXd& rbar,
                                      int chi) {
  auto rejected = [](const char* why) { return Classification{std::nullopt, why}; };
  const bool any_positive = (rbar.array() > 0.0).any();
  const bool any_nonpositive = (rbar.array() <= 0.0).any();
  const bool identically_zero = (rbar.array() == 0.0).all();

  if (alpha == 0.0) {
    if (std::abs(rbar.sum() - 2.0 * kPi * chi) > kGaussBonnetTargetTol)
      return rejected(reject::kCase4GaussBonnet);
    if ((rbar.array() >= 2.0 * kPi).any())
      return rejected(reject::kCase4UpperBound);
    return {TheoremCase::case4, ""};
  }
  if (chi > 0) {
    if (alpha > 0) return rejected(reject::kChiPositiveAlpha);
    if (any_nonpositive) return rejected(reject::kCase1Positivity);
    return {TheoremCase::case1, ""};
  }
  if (chi < 0) {
    if (any_positive) return rejected(reject::kCase2Sign);
    if (identically_zero) return rejected(reject::kCase2NotIdenticallyZero);
    return {TheoremCase::case2, ""};
  }
  if (!identically_zero) return rejected(reject::kCase3Zero);
  return {TheoremCase::case3, ""};
}

/** @brief Constraint g(u) = sum_i Rbar_i e^{alpha u_i} - 2 pi chi. */
inline double constraint_value(const Eigen::VectorXd& rbar,
                               const Eigen::VectorXd& u, double alpha, int chi) {
  return (rbar.array() * (alpha * u.array()).exp()).sum() - 2.0 * kPi * chi;
}

/**
 * @brief Shift c with g(u + c 1) = 0: c = (1/alpha) log(2 pi chi / sum Rbar
 * e^{alpha u}). Both quantities must be nonzero with equal signs.
 */
inline double projection_shift(const Eigen::VectorXd& rbar,
                               const Eigen::VectorXd& u, double alpha, int chi) {
  double S = (rbar.array() * (alpha * u.array()).exp()).sum();
  double T = 2.0 * kPi * chi;
  if (S == 0.0 || T == 0.0 || (S < 0.0) != (T < 0.0))
    throw NumericError(
        "projection sign mismatch: sum Rbar e^{alpha u} and 2 pi chi must be "
        "nonzero with equal signs");
  return std::log(T / S) / alpha;
}

inline void project_to_constraint(Eigen::VectorXd& u, const Eigen::VectorXd& rbar,
                                  double alpha, int chi) {
  u.array() += projection_shift(rbar, u, alpha, chi);
}

/** @brief Membership of u in the variational sets A, B, C (boundaries
 *  included; the sets can meet at g = 0). */
struct Membership {
  bool in_A = false, in_B = false, in_C = false;
};

inline Membership membership(const Eigen::VectorXd& rbar,
                             const Eigen::VectorXd& u, double alpha, int chi) {
  const double S = (rbar.array() * (alpha * u.array()).exp()).sum();
  const double T = 2.0 * kPi * chi;
  const bool nonpos = (rbar.array() <= 0.0).all();
  const bool pos = (rbar.array() > 0.0).all();
  const bool nonzero = !(rbar.array() == 0.0).all();
  Membership m;
  m.in_A = nonpos && nonzero && S < 0.0 && S >= T;
  m.in_B = pos && S > 0.0 && S <= T;
  m.in_C = nonpos && nonzero && S <= T && T < 0.0;
  return m;
}

enum class SolveStatus {
  converged,
  rejected,
  max_iterations,
  line_search_failed,
  flip_cap_exceeded,
};

inline const char* solve_status_name(SolveStatus s) {
  switch (s) {
    case SolveStatus::converged: return "converged";
    case SolveStatus::rejected: return "rejected";
    case SolveStatus::max_iterations: return "max_iterations";
    case SolveStatus::line_search_failed: return "line_search_failed";
    case SolveStatus::flip_cap_exceeded: return "flip_cap_exceeded";
  }
  return "?";
}

struct IterationRecord {
  double residual = 0.0;  // infinity norm of K - Rbar e^{alpha u} at step start
  double energy = 0.0;    // surface energy at step start
  double step = 0.0;      // accepted Armijo step length
  int flips = 0;          // flips triggered by the accepted move
};

struct SolveOptions {
  double tolerance = 1e-10;
  int max_iterations = 50;
  Eigen::VectorXd start;  // empty means zeros
  double flip_eps = kFlipEps;
};

struct SolveReport {
  SolveStatus status = SolveStatus::rejected;
  std::optional<TheoremCase> theorem_case;
  std::string violated_condition;
  double alpha = 0.0;
  int chi = 0;
  double tolerance = 0.0;
  std::vector<IterationRecord> iterations;
  double final_residual = 0.0;
};

struct SolveResult {
  TriangulatedSurface triangulation;
  DiscreteMetric metric;  // final scaled PL metric on the final triangulation
  Eigen::VectorXd u;      // total conformal factor relative to the input
  FlipLog flip_log;
  SolveReport report;
  bool converged() const { return report.status == SolveStatus::converged; }
};

namespace detail {

/**
 * @brief Advance to `target` along the straight factor segment, taking each
 * chart change at its Delaunay wall.
 *
 * A direct jump flips whatever quads the end point happens to violate, at
 * predicate excesses of the order of the step; a Euclidean flip that far
 * from cocircularity shifts the discrete conformal class by the square of
 * the excess, and solutions then depend on the path taken to reach them.
 * Bracketing the first flip parameter of every wall to 1e-12 and crossing
 * right there keeps each flip within rounding of its cocircular wall, so
 * the walk stays in the class of the start point. Returns the number of
 * flips performed. Throws NumericError where set_u would, FlipCapError if
 * the segment crosses more than kFlipCapFactor * |E| walls.
 */
inline int walk_to(EnergyState& state, const Eigen::VectorXd& target) {
  const Eigen::VectorXd from = state.u();
  const int cap = kFlipCapFactor * state.triangulation().n_edges();
  int flips = 0;
  double done = 0.0;
  for (;;) {
    EnergyState probe = state;
    probe.set_u(target);
    if (probe.last_flip_count() == 0) {
      state = std::move(probe);
      return flips;
    }
    if (flips >= cap)
      throw FlipCapError("flip cap of " + std::to_string(cap) +
                         " exceeded while walking to a factor");
    // bracket the first event in (done, 1]: the low side jumps flip-free,
    // the high side flips or leaves the chart's validity region
    double lo = done, hi = 1.0;
    while (hi - lo > 1e-12) {
      double mid = 0.5 * (lo + hi);
      EnergyState p = state;
      bool event = true;
      try {
        p.set_u((from + mid * (target - from)).eval());
        event = p.last_flip_count() > 0;
      } catch (const NumericError&) {
      }
      (event ? hi : lo) = mid;
    }
    EnergyState crossed = state;
    crossed.set_u((from + hi * (target - from)).eval());  // may rethrow
    flips += crossed.last_flip_count();
    state = std::move(crossed);
    done = hi;
  }
}

struct NewtonBranch {
  std::function<Eigen::VectorXd(const EnergyState&)> residual;
  std::function<double(const EnergyState&)> objective;
  // Returns (direction, objective slope along it); slope must be negative.
  std::function<std::pair<Eigen::VectorXd, double>(const EnergyState&,
                                                   const Eigen::VectorXd&)>
      direction;
  std::function<void(EnergyState&)> post_step;  // may be empty
};

inline SolveStatus newton_loop(EnergyState& state, const NewtonBranch& branch,
                               const SolveOptions& opt, SolveReport& report) {
  for (int iter = 0;; ++iter) {
    Eigen::VectorXd r = branch.residual(state);
    double res = r.lpNorm<Eigen::Infinity>();
    report.final_residual = res;
    if (res <= opt.tolerance) return SolveStatus::converged;
    if (iter >= opt.max_iterations) return SolveStatus::max_iterations;

    auto [delta, slope] = branch.direction(state, r);
    if (!(slope < 0.0)) return SolveStatus::line_search_failed;

    const double obj0 = branch.objective(state);
    const double energy0 = state.energy();
    // When the predicted decrease is below the floating-point resolution of
    // the objective, the Armijo comparison is pure noise; take full Newton
    // steps (still validity-checked) for the quadratic tail.
    const bool tail = std::abs(slope) <= 1e-12 * (1.0 + std::abs(obj0));
    double t = 1.0;
    bool accepted = false;
    while (t >= kMinStep) {
      EnergyState candidate = state;
      bool valid = true;
      int flips = 0;
      try {
        flips = walk_to(candidate, state.u() + t * delta);
        if (branch.post_step) branch.post_step(candidate);
      } catch (const FlipCapError&) {
        throw;
      } catch (const NumericError&) {
        valid = false;  // left the chart's validity region; shrink
      }
      if (valid && (tail || branch.objective(candidate) <=
                                obj0 + kArmijoC1 * t * slope)) {
        report.iterations.push_back({res, energy0, t, flips});
        state = std::move(candidate);
        accepted = true;
        break;
      }
      t *= kArmijoShrink;
    }
    if (!accepted) return SolveStatus::line_search_failed;
  }
}

inline Eigen::VectorXd scaled_target(const EnergyState& state,
                                     const Eigen::VectorXd& rbar, double alpha) {
  return (rbar.array() * (alpha * state.u().array()).exp()).matrix();
}

// Strictly convex branch: minimize E(u) - (1/alpha) sum Rbar_i e^{alpha u_i}.
inline NewtonBranch convex_branch(const Eigen::VectorXd& rbar, double alpha) {
  NewtonBranch b;
  b.residual = [rbar, alpha](const EnergyState& s) -> Eigen::VectorXd {
    return s.gradient() - scaled_target(s, rbar, alpha);
  };
  b.objective = [rbar, alpha](const EnergyState& s) {
    return s.energy() -
           (rbar.array() * (alpha * s.u().array()).exp()).sum() / alpha;
  };
  b.direction = [rbar, alpha](const EnergyState& s, const Eigen::VectorXd& r)
      -> std::pair<Eigen::VectorXd, double> {
    Eigen::SparseMatrix<double> H = s.hessian();
    Eigen::VectorXd d = -alpha * scaled_target(s, rbar, alpha);
    for (int i = 0; i < H.rows(); ++i) H.coeffRef(i, i) += d[i];
    H.makeCompressed();
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(H);
    if (ldlt.info() == Eigen::Success) {
      Eigen::VectorXd delta = ldlt.solve(-r);
      double slope = r.dot(delta);
      if (delta.allFinite() && slope < 0.0) return {delta, slope};
    }
    return {-r, -r.squaredNorm()};  // gradient fallback
  };
  return b;
}

// alpha = 0 path (case (4); also case (3) through Rbar = 0): Newton on
// K - Rbar over the slice sum u = 0, direction pinned by a ones border.
inline NewtonBranch flat_branch(const Eigen::VectorXd& rbar) {
  NewtonBranch b;
  const int n = static_cast<int>(rbar.size());
  b.residual = [rbar](const EnergyState& s) -> Eigen::VectorXd {
    return s.gradient() - rbar;
  };
  b.objective = [rbar](const EnergyState& s) {
    return s.energy() - rbar.dot(s.u());
  };
  b.direction = [n](const EnergyState& s, const Eigen::VectorXd& r)
      -> std::pair<Eigen::VectorXd, double> {
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n + 1, n + 1);
    A.topLeftCorner(n, n) = Eigen::MatrixXd(s.hessian());
    A.block(0, n, n, 1).setOnes();
    A.block(n, 0, 1, n).setOnes();
    Eigen::VectorXd rhs(n + 1);
    rhs.head(n) = -r;
    rhs[n] = 0.0;
    Eigen::VectorXd x = A.partialPivLu().solve(rhs);
    Eigen::VectorXd delta = x.head(n);
    double slope = r.dot(delta);
    if (delta.allFinite() && slope < 0.0) return {delta, slope};
    Eigen::VectorXd sd = -(r.array() - r.mean()).matrix();
    return {sd, r.dot(sd)};
  };
  b.post_step = [](EnergyState& s) {
    Eigen::VectorXd u = s.u();
    double m = u.mean();
    if (m != 0.0) s.set_u((u.array() - m).matrix());
  };
  return b;
}

// Case (2) with alpha < 0 (set C): minimize E on {g = 0} with the multiplier
// pinned at -1/alpha; every iterate is re-projected onto the constraint.
inline NewtonBranch constrained_branch(const Eigen::VectorXd& rbar, double alpha,
                                       int chi) {
  NewtonBranch b;
  const int n = static_cast<int>(rbar.size());
  b.residual = [rbar, alpha](const EnergyState& s) -> Eigen::VectorXd {
    return s.gradient() - scaled_target(s, rbar, alpha);
  };
  b.objective = [](const EnergyState& s) { return s.energy(); };
  b.direction = [rbar, alpha, n](const EnergyState& s, const Eigen::VectorXd& r)
      -> std::pair<Eigen::VectorXd, double> {
    Eigen::VectorXd K = s.gradient();
    Eigen::VectorXd sc = scaled_target(s, rbar, alpha);
    Eigen::VectorXd grad_g = alpha * sc;
    Eigen::MatrixXd H = Eigen::MatrixXd(s.hessian());
    auto kkt_solve = [&](const Eigen::MatrixXd& Hd) -> Eigen::VectorXd {
      Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n + 1, n + 1);
      A.topLeftCorner(n, n) = Hd;
      A.block(0, n, n, 1) = grad_g;
      A.block(n, 0, 1, n) = grad_g.transpose();
      Eigen::VectorXd rhs(n + 1);
      rhs.head(n) = -r;
      rhs[n] = 0.0;
      return A.partialPivLu().solve(rhs).head(n);
    };
    // Lagrangian Hessian at the pinned multiplier; falls back to the plain
    // energy Hessian (always a descent model) if that direction fails.
    Eigen::MatrixXd HL = H;
    HL.diagonal() -= alpha * sc;
    Eigen::VectorXd delta = kkt_solve(HL);
    double slope = K.dot(delta);
    if (delta.allFinite() && slope < 0.0) return {delta, slope};
    delta = kkt_solve(H);
    slope = K.dot(delta);
    if (delta.allFinite() && slope < 0.0) return {delta, slope};
    Eigen::VectorXd proj =
        -(K - (K.dot(grad_g) / grad_g.squaredNorm()) * grad_g);
    return {proj, K.dot(proj)};
  };
  b.post_step = [rbar, alpha, chi](EnergyState& s) {
    double c = projection_shift(rbar, s.u(), alpha, chi);
    if (c != 0.0) s.set_u((s.u().array() + c).matrix());
  };
  return b;
}

}  // namespace detail

/**
 * @brief Solve K = Rbar e^{alpha u} in the discrete conformal class of the
 * input metric.
 *
 * Classifies the target against the existence cases and dispatches:
 * pointwise alpha Rbar <= 0 (not identically zero) runs damped Newton on the
 * strictly convex functional E - (1/alpha) sum Rbar e^{alpha u}; case (2)
 * with alpha < 0 minimizes E constrained to g = 0 through the bordered KKT
 * system with projection after every step; alpha = 0 (and case (3)) runs
 * Newton on K - Rbar normalized to sum u = 0. The triangulation is kept
 * intrinsic-Delaunay at every evaluation, and every move walks the straight
 * factor segment wall to wall so that flips fire at their cocircular
 * configurations and the iterates stay in the discrete conformal class of
 * the input. Iterations stop when ||K - Rbar e^{alpha u}||_inf falls to the
 * tolerance.
 */
inline SolveResult solve_prescribed(const TriangulatedSurface& surface,
                                    const DiscreteMetric& metric, double alpha,
                                    const Eigen::VectorXd& rbar,
                                    const SolveOptions& options = {}) {
  if (rbar.size() != surface.n_vertices())
    throw InvalidInputError("target has " + std::to_string(rbar.size()) +
                            " entries, expected " +
                            std::to_string(surface.n_vertices()));
  const int chi = surface.euler_characteristic();

  SolveReport report;
  report.alpha = alpha;
  report.chi = chi;
  report.tolerance = options.tolerance;

  Classification cls = classify_target(alpha, rbar, chi);
  report.theorem_case = cls.theorem_case;
  if (!cls.accepted()) {
    report.status = SolveStatus::rejected;
    report.violated_condition = cls.violated_condition;
    EnergyState state(surface, metric);
    return {state.triangulation(), state.scaled_metric(), state.u(),
            state.flip_log(), std::move(report)};
  }

  EnergyState state(surface, metric);
  if (options.start.size() > 0) {
    if (options.start.size() != surface.n_vertices())
      throw InvalidInputError("start factor size mismatch");
    detail::walk_to(state, options.start);
  }

  detail::NewtonBranch branch;
  const TheoremCase tc = *cls.theorem_case;
  const bool constrained = (tc == TheoremCase::case2 && alpha < 0.0);
  if (tc == TheoremCase::case4 || tc == TheoremCase::case3) {
    branch = detail::flat_branch(rbar);
  } else if (constrained) {
    branch = detail::constrained_branch(rbar, alpha, chi);
  } else {
    branch = detail::convex_branch(rbar, alpha);
  }

  try {
    // Projection / normalization also applies to the start point.
    if (branch.post_step) branch.post_step(state);
    report.status = detail::newton_loop(state, branch, options, report);
  } catch (const FlipCapError&) {
    report.status = SolveStatus::flip_cap_exceeded;
  }

  return {state.triangulation(), state.scaled_metric(), state.u(),
          state.flip_log(), std::move(report)};
}

/** @brief Residual report for a claimed solution (surface, metric, u). */
struct VerifyReport {
  double curvature_residual = 0.0;  // || K e^{-alpha u} - Rbar ||_inf
  double k_residual = 0.0;          // || K - Rbar e^{alpha u} ||_inf
  double constraint_abs = 0.0;      // |g(u)|, meaningful for alpha != 0
  double gauss_bonnet = 0.0;
  int delaunay_violations = 0;
  bool within(double tol) const {
    return curvature_residual <= tol && delaunay_violations == 0;
  }
};

inline VerifyReport verify_solution(const TriangulatedSurface& surface,
                                    const DiscreteMetric& metric,
                                    const Eigen::VectorXd& u, double alpha,
                                    const Eigen::VectorXd& rbar,
                                    double flip_eps = kFlipEps) {
  if (u.size() != surface.n_vertices() || rbar.size() != surface.n_vertices())
    throw InvalidInputError("factor or target size mismatch");
  const int chi = surface.euler_characteristic();
  std::vector<double> Kv = curvature(surface, metric);
  Eigen::Map<const Eigen::VectorXd> K(Kv.data(), Kv.size());
  Eigen::VectorXd scaled = (rbar.array() * (alpha * u.array()).exp()).matrix();
  VerifyReport rep;
  rep.curvature_residual =
      ((K.array() * (-alpha * u.array()).exp()).matrix() - rbar)
          .lpNorm<Eigen::Infinity>();
  rep.k_residual = (K - scaled).lpNorm<Eigen::Infinity>();
  rep.constraint_abs = alpha != 0.0
                           ? std::abs(constraint_value(rbar, u, alpha, chi))
                           : 0.0;
  rep.gauss_bonnet = gauss_bonnet_residual(surface, metric);
  rep.delaunay_violations = delaunay_violation_count(surface, metric, flip_eps);
  return rep;
}

}  // namespace plcurv
