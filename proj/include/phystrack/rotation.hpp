#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace phystrack {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using VecX = Eigen::VectorXd;
using MatX = Eigen::MatrixXd;

/// Cross-product matrix: skew(a) * b == a.cross(b).
Mat3 skew(const Vec3& a);

Mat3 rot_x(double angle);
Mat3 rot_y(double angle);
Mat3 rot_z(double angle);

/// Rotation about a unit axis through the origin.
Mat3 axis_angle(const Vec3& axis, double angle);

// Joint rotations use intrinsic XYZ Euler angles: R = Rx(e0) * Ry(e1) * Rz(e2).
// The middle angle hits gimbal lock at +-pi/2.
Mat3 euler_xyz_to_matrix(const Vec3& euler);
Vec3 matrix_to_euler_xyz(const Mat3& rotation);

/// Geodesic distance on SO(3), in radians, in [0, pi].
double geodesic_angle(const Mat3& a, const Mat3& b);

/// Rotation angle of a single rotation matrix, in [0, pi].
double rotation_angle(const Mat3& rotation);

/// Wraps an angle to (-pi, pi].
double wrap_angle(double angle);

/// Max-abs deviation of R^T R from the identity plus |det R - 1|.
double orthonormality_error(const Mat3& rotation);

}  // namespace phystrack
