#include "phystrack/translation.hpp"

#include <cmath>
#include <string>

#include "phystrack/error.hpp"
#include "phystrack/kinematics.hpp"

namespace phystrack {

void validate_frame(const SkeletonModel& model, const EstimatorFrame& frame) {
  if (frame.theta_ref.size() != model.dof_count() - 3) {
    throw ConfigurationError("estimator frame has " + std::to_string(frame.theta_ref.size()) +
                             " angles, skeleton needs " + std::to_string(model.dof_count() - 3));
  }
  if (!frame.theta_ref.allFinite() || !frame.v_perp.allFinite() || !std::isfinite(frame.v_par_mag) ||
      !std::isfinite(frame.timestamp)) {
    throw ConfigurationError("estimator frame contains non-finite values");
  }
  for (double si : frame.s) {
    if (!(si >= 0.0 && si <= 1.0)) throw ConfigurationError("stationary probability outside [0, 1]");
  }
  if (frame.g_root && (!frame.g_root->allFinite() || frame.g_root->norm() < 1e-9)) {
    throw ConfigurationError("estimator frame gravity must be a finite nonzero vector");
  }
}

Vec3 assemble_velocity(double v_par_mag, const Vec3& v_perp, const Vec3& gravity_dir) {
  const Vec3 g = gravity_dir.normalized();
  return v_par_mag * g + (v_perp - v_perp.dot(g) * g);
}

Vec3 refine_velocity(const SkeletonModel& model, const VecX& theta_t, const VecX& theta_prev,
                     const Vec3& v, const std::array<double, kEndpointCount>& s, double dt) {
  if (!(dt > 0.0)) throw ConfigurationError("refine_velocity: dt must be positive");
  double total = 0.0;
  for (double si : s) total += si;
  if (total == 0.0) return v;

  const auto now = forward_kinematics(model, compose_configuration(Vec3::Zero(), theta_t));
  const auto before = forward_kinematics(model, compose_configuration(Vec3::Zero(), theta_prev));
  Vec3 pull = Vec3::Zero();
  for (Endpoint e : kAllEndpoints) {
    const int i = static_cast<int>(e);
    if (s[i] == 0.0) continue;
    const int j = model.endpoint_joint(e);
    pull += s[i] * (before[j] - now[j]);
  }
  return (v + pull / dt) / (1.0 + total);
}

}  // namespace phystrack
