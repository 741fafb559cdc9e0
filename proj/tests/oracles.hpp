#pragma once

// Independent reference solutions used by both the unit tests and the
// acceptance binary. Nothing here calls the routine it checks.

#include <array>
#include <limits>
#include <vector>

#include <Eigen/Cholesky>

#include "phystrack/contact.hpp"
#include "phystrack/kinematics.hpp"
#include "phystrack/skeleton.hpp"
#include "phystrack/tracking.hpp"

namespace phystrack::oracles {

using Weights = std::array<double, kEndpointCount>;
// Objective being minimized, evaluated with the root actually moved by ṽ dt.
inline double refine_objective(const SkeletonModel& m, const VecX& theta_t,
                               const VecX& theta_prev, const Vec3& v, const Weights& s, double dt, const Vec3& candidate) {
  const VecX q_t = compose_configuration(Vec3::Zero(), theta_t);
  const auto moved = forward_kinematics(m, q_t, Vec3(candidate * dt));
  const auto before = forward_kinematics(m, compose_configuration(Vec3::Zero(), theta_prev));
  double f = (candidate - v).squaredNorm();
  for (Endpoint e : kAllEndpoints) {
    const int j = m.endpoint_joint(e);
    f += s[static_cast<int>(e)] / (dt * dt) * (moved[j] - before[j]).squaredNorm();
  }
  return f;
}

// Gradient descent with central-difference gradients. The objective is a
// convex quadratic in ṽ, so this converges to the unique minimizer.
inline Vec3 numerical_argmin(const SkeletonModel& m, const VecX& theta_t,
                             const VecX& theta_prev, const Vec3& v, const Weights& s, double dt) {
  double total = 0.0;
  for (double si : s) total += si;
  const double step = 0.5 / (1.0 + total);  // Hessian is 2(1 + Σs) I
  Vec3 x = v;
  for (int it = 0; it < 10000; ++it) {
    Vec3 grad;
    for (int k = 0; k < 3; ++k) {
      const double h = 1e-4;
      Vec3 xp = x, xm = x;
      xp(k) += h;
      xm(k) -= h;
      grad(k) = (refine_objective(m, theta_t, theta_prev, v, s, dt, xp) -
                 refine_objective(m, theta_t, theta_prev, v, s, dt, xm)) /
                (2.0 * h);
    }
    x -= step * grad;
    if (grad.norm() < 1e-10) break;
  }
  return x;
}

// Tracking objective
//   |q̈_{3:} - θ̈|² + |J q̈ + J̇q̇ - r̈|² + β |M q̈ + h - f_c|²
// minimized through its normal equations.
inline VecX tracking_normal_equations(const FrameDynamics& d, double beta, const VecX& theta_ddot,
                                      const VecX& r_ddot, const VecX& contact_force) {
  const Eigen::Index n = d.mass.rows();
  MatX lhs = d.jacobian.transpose() * d.jacobian + beta * d.mass.transpose() * d.mass;
  lhs.bottomRightCorner(n - 3, n - 3) += MatX::Identity(n - 3, n - 3);
  VecX rhs = d.jacobian.transpose() * (r_ddot - d.jdot_qdot) +
             beta * d.mass.transpose() * (contact_force - d.bias);
  rhs.tail(n - 3) += theta_ddot;
  return lhs.ldlt().solve(rhs);
}

inline double tracking_objective(const FrameDynamics& d, double beta, const VecX& theta_ddot,
                                 const VecX& r_ddot, const VecX& contact_force, const VecX& qddot) {
  const Eigen::Index n = d.mass.rows();
  return (qddot.tail(n - 3) - theta_ddot).squaredNorm() +
         (d.jacobian * qddot + d.jdot_qdot - r_ddot).squaredNorm() +
         beta * (d.mass * qddot + d.bias - contact_force).squaredNorm();
}

// Contact forces by enumerating which face of each friction pyramid the
// optimum lies on: interior, one of 4 facets, one of 4 edges, or the apex.
// Each choice is an unconstrained least squares over a subspace; the best
// feasible one is the global optimum of the convex problem.
inline bool in_pyramid(const Vec3& lambda, const std::array<Vec3, 4>& edges, const Vec3& up) {
  const double tol = 1e-9 * (1.0 + lambda.norm());
  for (int k = 0; k < 4; ++k) {
    Vec3 m = edges[k].cross(edges[(k + 1) % 4]);
    if (m.dot(up) < 0.0) m = -m;
    if (m.normalized().dot(lambda) < -tol) return false;
  }
  return true;
}

inline std::vector<Vec3> brute_force_contact(const SkeletonModel& model, const VecX& q,
                                             const std::vector<ContactPoint>& points,
                                             const Eigen::Matrix<double, 6, 1>& residual,
                                             double beta, double mu) {
  const int c = static_cast<int>(points.size());
  std::vector<int> joints;
  for (const ContactPoint& p : points) joints.push_back(model.endpoint_joint(p.endpoint));
  MatX root_map(6, 3 * c);
  const MatX full = joint_jacobian(model, q);
  for (int i = 0; i < c; ++i) root_map.middleCols(3 * i, 3) = full.block(3 * joints[i], 0, 3, 6).transpose();
  const auto edges = pyramid_edges(model.up(), mu);

  std::vector<int> choice(c, 0);
  const int faces = 10;  // interior, 4 facets, 4 edges, apex
  double best = std::numeric_limits<double>::infinity();
  std::vector<Vec3> best_forces(c, Vec3::Zero());
  while (true) {
    std::vector<MatX> bases;
    int dims = 0;
    for (int i = 0; i < c; ++i) {
      MatX b;
      const int f = points[i].friction_cone ? choice[i] : 0;
      if (f == 0) {
        b = MatX::Identity(3, 3);
      } else if (f <= 4) {
        b.resize(3, 2);
        b << edges[f - 1], edges[f % 4];
      } else if (f <= 8) {
        b = edges[f - 5];
      } else {
        b.resize(3, 0);
      }
      dims += static_cast<int>(b.cols());
      bases.push_back(b);
    }
    MatX basis = MatX::Zero(3 * c, dims);
    for (int i = 0, col = 0; i < c; ++i) {
      basis.block(3 * i, col, 3, bases[i].cols()) = bases[i];
      col += static_cast<int>(bases[i].cols());
    }
    VecX lambda = VecX::Zero(3 * c);
    if (dims > 0) {
      const MatX g = root_map * basis;
      const MatX h = g.transpose() * g + beta * basis.transpose() * basis;
      lambda = basis * h.ldlt().solve(g.transpose() * residual);
    }
    bool feasible = true;
    for (int i = 0; i < c; ++i) {
      if (points[i].friction_cone && !in_pyramid(lambda.segment<3>(3 * i), edges, model.up())) feasible = false;
    }
    if (feasible) {
      const double f = (root_map * lambda - residual).squaredNorm() + beta * lambda.squaredNorm();
      if (f < best) {
        best = f;
        for (int i = 0; i < c; ++i) best_forces[i] = lambda.segment<3>(3 * i);
      }
    }
    int i = 0;
    while (i < c) {
      const int limit = points[i].friction_cone ? faces : 1;
      if (++choice[i] < limit) break;
      choice[i] = 0;
      ++i;
    }
    if (i == c) break;
  }
  return best_forces;
}

}  // namespace phystrack::oracles
