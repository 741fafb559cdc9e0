#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "phystrack/calibration.hpp"
#include "phystrack/skeleton.hpp"
#include "phystrack/translation.hpp"

namespace phystrack {

/// Kinematic ground truth sampled at a uniform rate.
struct MotionSequence {
  double rate = 60.0;  // [Hz]
  std::vector<Vec3> root;   // root translation per frame [m]
  std::vector<VecX> theta;  // joint Euler angles per frame, root first
  /// Optional ground-truth contact flags; empty or one entry per frame.
  std::vector<std::array<bool, kEndpointCount>> contacts;

  int length() const { return static_cast<int>(root.size()); }
  double dt() const { return 1.0 / rate; }
  VecX configuration(int frame) const;
  /// Throws ConfigurationError on inconsistent lengths, a non-positive rate
  /// or non-finite values.
  void validate(const SkeletonModel& model) const;
};

/// Where a sensor sits: on the body of `joint`, at `offset` in the joint
/// frame, with sensor-to-bone rotation `r_sb`.
struct SensorAttachment {
  int joint = 0;
  Mat3 r_sb = Mat3::Identity();
  Vec3 offset = Vec3::Zero();
};

/// Sensors on the standard bones with bone-aligned mounting.
std::array<SensorAttachment, kSensorCount> default_attachments(const SkeletonModel& model);

/// Ideal IMU readings. Positions are mapped into the inertial frame by
/// `r_im` (model to inertial); accelerations are central second differences
/// (one-sided at the ends), a_S = R_ISᵀ (a_I - g_I) with g_I = r_im g.
/// Needs at least three frames.
ImuLog synthesize_imu(const SkeletonModel& model, const MotionSequence& motion,
                      const std::array<SensorAttachment, kSensorCount>& attachments,
                      const Mat3& r_im = Mat3::Identity());

/// Rotates every recorded orientation of one sensor about the gravity axis,
/// leaving the sensor-frame readings untouched.
void inject_heading_drift(ImuLog& log, int sensor, double angle, const Vec3& gravity_inertial);

void add_accelerometer_noise(ImuLog& log, double sigma, std::uint64_t seed);

/// A walking-calibration recording with known answers.
struct SyntheticCalibration {
  ImuLog log;
  Vec3 gravity_inertial;
  Mat3 r_im;                           // model to inertial
  std::array<Mat3, kSensorCount> r_sb; // true mountings
  std::array<double, kSensorCount> drift{};  // injected heading drift [rad]
};

struct CalibrationLogOptions {
  double walk_heading = 0.4;  // walking direction about the inertial up axis [rad]
  std::array<double, kSensorCount> drift{};  // [rad]
  double acc_noise = 0.0;  // [m/s²]
  bool random_mounting = true;
  std::uint64_t seed = 0;
};

/// The calibration-walk scenario recorded in a z-up inertial frame.
SyntheticCalibration synthesize_calibration(const SkeletonModel& model,
                                            const CalibrationLogOptions& options = {});

struct EstimatorNoise {
  double angle_sigma = 0.0;     // per Euler angle [rad]
  double velocity_sigma = 0.0;  // per velocity component [m/s]
  std::uint64_t seed = 0;
  /// Copy s from the ground-truth contacts instead of the displacement rule.
  bool ground_truth_contacts = false;
  /// Attach the noise-free root-frame gravity direction.
  bool gravity = true;
  double stationary_step = 0.002;  // [m per frame]

  /// Parses "key=value" pairs separated by commas: angle_deg, angle,
  /// velocity, seed, contacts=truth|displacement, gravity=on|off.
  static EstimatorNoise parse(std::string_view text);
};

/// Stand-in for the learned estimators. Velocity is the backward difference
/// of the root (forward at frame 0) split along gravity; an endpoint is
/// stationary when it moved less than `stationary_step` since the previous
/// frame.
std::vector<EstimatorFrame> synthesize_estimator_frames(const SkeletonModel& model,
                                                        const MotionSequence& motion,
                                                        const EstimatorNoise& noise = {});

/// A named point in a scenario's timeline.
struct ScenarioMarker {
  std::string name;
  int frame = 0;
};

struct Scenario {
  std::string name;
  MotionSequence motion;
  std::vector<ScenarioMarker> markers;
  /// Heights of the horizontal surfaces the feet use, relative to the floor.
  std::vector<double> support_heights;
  std::optional<double> seat_height;
  /// Floor height in the motion's world frame.
  double floor = 0.0;

  /// First marker with this name; throws ConfigurationError when absent.
  int marker(std::string_view name) const;
};

/// Scenario names accepted by make_scenario.
std::vector<std::string> scenario_names();

/// Generated on the bundled humanoid (requires its joint names).
/// stand: 10 s quiet stance. walk-in-place: alternating foot lifts.
/// walk: step-to gait, 8 strides of 0.4 m. stair: three 0.15 m risers, each
/// step placing the lead foot, resting it lightly, shifting weight, then
/// lifting the trailing foot. sit: arms forward, sit down onto a 0.45 m box,
/// lift and swing the feet, set them down.
/// weight-shift: one foot onto a 0.2 m box, then balance on it.
/// calibration-walk: stand, one 0.7 m step in a straight T-pose, stand.
Scenario make_scenario(const SkeletonModel& model, std::string_view name);
std::vector<Scenario> make_scenarios(const SkeletonModel& model);

}  // namespace phystrack
