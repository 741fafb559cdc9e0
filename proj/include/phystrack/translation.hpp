#pragma once

#include <array>
#include <optional>

#include "phystrack/skeleton.hpp"

namespace phystrack {

/// One frame of pose/translation estimates, in the role normally filled by
/// the learned estimators.
struct EstimatorFrame {
  double timestamp = 0.0;  // [s]
  VecX theta_ref;          // joint Euler angles, root first (3k)
  double v_par_mag = 0.0;  // root speed along the gravity direction [m/s]
  Vec3 v_perp = Vec3::Zero();  // root velocity orthogonal to gravity [m/s]
  std::array<double, kEndpointCount> s{};  // stationary probabilities
  /// Refined gravity direction in the root frame. Absent means the raw
  /// orientation is trusted as is.
  std::optional<Vec3> g_root;
};

/// Throws ConfigurationError on wrong theta length, s outside [0, 1] or
/// non-finite values.
void validate_frame(const SkeletonModel& model, const EstimatorFrame& frame);

/// v = v_par_mag * g + (v_perp with its component along g removed).
Vec3 assemble_velocity(double v_par_mag, const Vec3& v_perp, const Vec3& gravity_dir);

/// Root velocity that stays close to `v` while holding stationary endpoints
/// still, weighted by `s`:
///   min |ṽ - v|² + Σ s_i / dt² |FK_i(θ_t, ṽ dt) - FK_i(θ_{t-1})|²
/// with FK taken relative to the root origin. Closed form.
Vec3 refine_velocity(const SkeletonModel& model, const VecX& theta_t, const VecX& theta_prev,
                     const Vec3& v, const std::array<double, kEndpointCount>& s, double dt);

}  // namespace phystrack
