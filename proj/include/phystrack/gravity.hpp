#pragma once

#include "phystrack/rotation.hpp"

namespace phystrack {

/// Gravity direction seen from the root frame, g_root = R_rootᵀ g_world.
/// A non-unit g_world is normalized (with a warning).
Vec3 root_frame_gravity(const Mat3& root_rotation, const Vec3& gravity_world);

/// Smallest rotation taking unit vector `from` onto unit vector `to`.
/// Antiparallel inputs turn 180° about the world axis most orthogonal to
/// `from`, projected to be exactly perpendicular to it.
Mat3 minimal_rotation(const Vec3& from, const Vec3& to);

/// Applies a refined root-frame gravity to the root orientation:
/// R_new = R_prev * minimal_rotation(g_refined, g_prev).
Mat3 correct_root_orientation(const Mat3& root_rotation, const Vec3& gravity_refined,
                              const Vec3& gravity_prev);

/// Swing-twist split of R about the world `up` axis: R = twist * swing, with
/// twist a rotation about `up` and swing taking Rᵀup onto up.
struct SwingTwist {
  Mat3 swing;
  Mat3 twist;
};
SwingTwist swing_twist(const Mat3& rotation, const Vec3& up);

/// Signed angle of the twist part about `up`, in (-pi, pi].
double heading_angle(const Mat3& rotation, const Vec3& up);

/// Re-expresses a root-relative vector after the root orientation changed
/// from `root_old` to `root_new`. The world-frame vector is unchanged.
Vec3 reexpress_in_root(const Mat3& root_old, const Mat3& root_new, const Vec3& v);

/// Same for a root-relative orientation (e.g. a root-relative IMU reading).
Mat3 reexpress_in_root(const Mat3& root_old, const Mat3& root_new, const Mat3& r);

}  // namespace phystrack
