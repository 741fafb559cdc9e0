#pragma once

#include <array>
#include <vector>

#include "phystrack/rotation.hpp"

namespace phystrack {

inline constexpr int kSensorCount = 6;

/// Sensor order used throughout: left forearm, right forearm, left lower leg,
/// right lower leg, head, pelvis. The pelvis sensor is the heading reference.
inline constexpr std::array<const char*, kSensorCount> kSensorBones = {
    "L_Elbow", "R_Elbow", "L_Knee", "R_Knee", "Head", "Pelvis"};

struct ImuSample {
  Vec3 acc = Vec3::Zero();   // specific force in the sensor frame [m/s²]
  Vec3 gyro = Vec3::Zero();  // [rad/s]
  Mat3 orientation = Mat3::Identity();  // R_IS
};

struct ImuLog {
  double rate = 60.0;  // [Hz]
  std::array<std::vector<ImuSample>, kSensorCount> sensors;

  int length() const { return static_cast<int>(sensors[0].size()); }
  /// Equal lengths, positive rate, finite values, orthonormal orientations
  /// (1e-5). Throws ConfigurationError.
  void validate() const;
};

/// World acceleration a_I = R_IS a_S + g_I.
Vec3 inertial_acceleration(const ImuSample& s, const Vec3& gravity_inertial);

struct StepIntegration {
  Vec3 p = Vec3::Zero();
  Vec3 v = Vec3::Zero();
  double sigma_pv = 0.0;
  double sigma_vv = 0.0;
  int samples = 0;
};

/// Double integration of a_I over samples [begin, end) from rest at the
/// origin, with the scalar position-velocity covariance recursion.
StepIntegration integrate_step(const std::vector<ImuSample>& samples, const Vec3& gravity_inertial,
                               int begin, int end, double dt);

/// Zero-velocity correction p - (σ_pv / σ_vv) v.
Vec3 zupt_correct(const StepIntegration& s);

/// Removes the component along g.
Vec3 horizontal_project(const Vec3& p, const Vec3& g);

/// R_i = minimal rotation taking p̄_i onto p̄_6; R_6 = I. Throws
/// CalibrationError when any displacement is under `min_displacement`.
std::array<Mat3, kSensorCount> heading_align(const std::array<Vec3, kSensorCount>& displacement,
                                             double min_displacement = 0.05);

/// R_IM = [p̂ × ĝ, -ĝ, p̂] for the horizontal step direction p̂.
Mat3 extrinsics(const Vec3& step, const Vec3& g);

/// R_SB = (R_i R_IS⁽¹⁾)ᵀ R_IM R_MB.
Mat3 sensor_to_bone(const Mat3& r_is_standing, const Mat3& heading, const Mat3& r_im, const Mat3& r_mb);

struct PoseCheck {
  bool pass = true;
  std::array<double, kSensorCount> angle_deg{};
};
PoseCheck verify_pose_return(const std::array<Mat3, kSensorCount>& before,
                             const std::array<Mat3, kSensorCount>& after, double tolerance_deg = 10.0);

/// Sample ranges of the stand / step / stand protocol, half-open.
struct StepWindow {
  int stand1_begin = 0, stand1_end = 0;
  int stand2_begin = 0, stand2_end = 0;
};

struct SegmentationOptions {
  double still_threshold = 0.3;  // [m/s²] on the moving-average |a_I|
  double smoothing = 0.1;        // moving-average window [s]
  double min_stand = 0.5;        // [s]
};

/// Finds the first and last still periods (every sensor below threshold for
/// at least min_stand) with motion between them. Throws CalibrationError if
/// the log does not contain stand, step, stand.
StepWindow segment_walk(const ImuLog& log, const Vec3& gravity_inertial,
                        const SegmentationOptions& options = {});

struct CalibrationResult {
  std::array<Mat3, kSensorCount> heading;  // R_1..R_5, R_6 = I
  Mat3 r_im = Mat3::Identity();
  std::array<Mat3, kSensorCount> r_sb;
  std::array<Vec3, kSensorCount> displacement;  // p̄ per sensor [m]
  std::array<double, kSensorCount> terminal_speed{};  // |v| before correction [m/s]
  PoseCheck pose_check;
  StepWindow window;
};

struct CalibrationOptions {
  SegmentationOptions segmentation;
  double pose_tolerance_deg = 10.0;
  double min_displacement = 0.05;  // [m]
  /// Integration starts this long before the end of the first stand and
  /// stops this long after the start of the second. Every extra sample adds
  /// accelerometer noise to p̄.
  double margin = 0.1;  // [s]
  /// Standing-pose bone rotations R_MB; identity for a straight stand.
  std::array<Mat3, kSensorCount> r_mb = {Mat3::Identity(), Mat3::Identity(), Mat3::Identity(),
                                         Mat3::Identity(), Mat3::Identity(), Mat3::Identity()};
};

/// Full walking calibration. Integrates each sensor from the end of the
/// first stand to the start of the second. Throws CalibrationError on
/// protocol violations or a failed pose check.
CalibrationResult calibrate(const ImuLog& log, const Vec3& gravity_inertial,
                            const CalibrationOptions& options = {});

/// Chordal mean of rotations, projected back onto SO(3).
Mat3 mean_rotation(const std::vector<Mat3>& rotations);

}  // namespace phystrack
