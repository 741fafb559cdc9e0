#include "phystrack/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/SVD>

#include "phystrack/error.hpp"
#include "phystrack/gravity.hpp"

namespace phystrack {

void ImuLog::validate() const {
  if (!(rate > 0.0) || !std::isfinite(rate)) throw ConfigurationError("IMU rate must be positive");
  for (const auto& s : sensors) {
    if (s.size() != sensors[0].size()) throw ConfigurationError("IMU sensors have different lengths");
    for (const ImuSample& x : s) {
      if (!x.acc.allFinite() || !x.gyro.allFinite() || !x.orientation.allFinite()) {
        throw ConfigurationError("IMU log contains non-finite values");
      }
      if (orthonormality_error(x.orientation) > 1e-5) {
        throw ConfigurationError("IMU orientation is not a rotation");
      }
    }
  }
}

Vec3 inertial_acceleration(const ImuSample& s, const Vec3& gravity_inertial) {
  return s.orientation * s.acc + gravity_inertial;
}

StepIntegration integrate_step(const std::vector<ImuSample>& samples, const Vec3& gravity_inertial,
                               int begin, int end, double dt) {
  if (begin < 0 || end > static_cast<int>(samples.size()) || begin >= end) {
    throw CalibrationError("integration window is empty");
  }
  StepIntegration s;
  for (int t = begin; t < end; ++t) {
    const Vec3 a = inertial_acceleration(samples[t], gravity_inertial);
    s.p += s.v * dt + 0.5 * a * dt * dt;
    s.v += a * dt;
    s.sigma_pv += s.sigma_vv * dt;
    s.sigma_vv += 1.0;
  }
  s.samples = end - begin;
  return s;
}

Vec3 zupt_correct(const StepIntegration& s) {
  if (!(s.sigma_vv > 0.0)) throw NumericalError("zupt_correct: velocity variance is zero");
  return s.p - (s.sigma_pv / s.sigma_vv) * s.v;
}

Vec3 horizontal_project(const Vec3& p, const Vec3& g) {
  const double gg = g.squaredNorm();
  if (!(gg > 0.0)) throw NumericalError("horizontal_project: zero gravity");
  return p - (p.dot(g) / gg) * g;
}

std::array<Mat3, kSensorCount> heading_align(const std::array<Vec3, kSensorCount>& displacement,
                                             double min_displacement) {
  for (int i = 0; i < kSensorCount; ++i) {
    if (displacement[i].norm() < min_displacement) {
      throw CalibrationError("sensor " + std::to_string(i + 1) + " moved only " +
                             std::to_string(displacement[i].norm()) +
                             " m during the step; redo the calibration");
    }
  }
  std::array<Mat3, kSensorCount> out;
  const Vec3 ref = displacement[kSensorCount - 1].normalized();
  for (int i = 0; i < kSensorCount - 1; ++i) out[i] = minimal_rotation(displacement[i].normalized(), ref);
  out[kSensorCount - 1] = Mat3::Identity();
  return out;
}

Mat3 extrinsics(const Vec3& step, const Vec3& g) {
  const Vec3 p = step.normalized(), gh = g.normalized();
  const Vec3 x = p.cross(gh);
  if (!(x.norm() > 1e-9)) throw NumericalError("extrinsics: step direction is parallel to gravity");
  Mat3 r;
  r.col(0) = x;
  r.col(1) = -gh;
  r.col(2) = p;
  return r;
}

Mat3 sensor_to_bone(const Mat3& r_is_standing, const Mat3& heading, const Mat3& r_im, const Mat3& r_mb) {
  return (heading * r_is_standing).transpose() * r_im * r_mb;
}

PoseCheck verify_pose_return(const std::array<Mat3, kSensorCount>& before,
                             const std::array<Mat3, kSensorCount>& after, double tolerance_deg) {
  PoseCheck out;
  for (int i = 0; i < kSensorCount; ++i) {
    out.angle_deg[i] = geodesic_angle(before[i], after[i]) * 180.0 / std::numbers::pi;
    if (out.angle_deg[i] > tolerance_deg) out.pass = false;
  }
  return out;
}

Mat3 mean_rotation(const std::vector<Mat3>& rotations) {
  if (rotations.empty()) throw NumericalError("mean_rotation: no samples");
  Mat3 sum = Mat3::Zero();
  for (const Mat3& r : rotations) sum += r;
  Eigen::JacobiSVD<Mat3> svd(sum, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Mat3 d = Mat3::Identity();
  d(2, 2) = (svd.matrixU() * svd.matrixV().transpose()).determinant() < 0.0 ? -1.0 : 1.0;
  return svd.matrixU() * d * svd.matrixV().transpose();
}

StepWindow segment_walk(const ImuLog& log, const Vec3& gravity_inertial,
                        const SegmentationOptions& options) {
  const int n = log.length();
  const int half = std::max(0, static_cast<int>(std::lround(options.smoothing * log.rate / 2.0)));
  const int min_run = std::max(1, static_cast<int>(std::lround(options.min_stand * log.rate)));

  std::vector<bool> still(n, true);
  for (const auto& sensor : log.sensors) {
    std::vector<Vec3> acc(n);
    for (int t = 0; t < n; ++t) acc[t] = inertial_acceleration(sensor[t], gravity_inertial);
    for (int t = 0; t < n; ++t) {
      const int lo = std::max(0, t - half), hi = std::min(n - 1, t + half);
      Vec3 mean = Vec3::Zero();
      for (int k = lo; k <= hi; ++k) mean += acc[k];
      mean /= static_cast<double>(hi - lo + 1);
      if (mean.norm() >= options.still_threshold) still[t] = false;
    }
  }

  std::vector<std::pair<int, int>> runs;
  for (int t = 0; t < n;) {
    if (!still[t]) {
      ++t;
      continue;
    }
    int e = t;
    while (e < n && still[e]) ++e;
    if (e - t >= min_run) runs.emplace_back(t, e);
    t = e;
  }
  if (runs.size() < 2) {
    throw CalibrationError("recording does not contain stand, step, stand (found " +
                           std::to_string(runs.size()) + " still periods)");
  }
  StepWindow w;
  w.stand1_begin = runs.front().first;
  w.stand1_end = runs.front().second;
  w.stand2_begin = runs.back().first;
  w.stand2_end = runs.back().second;
  return w;
}

CalibrationResult calibrate(const ImuLog& log, const Vec3& gravity_inertial,
                            const CalibrationOptions& options) {
  log.validate();
  CalibrationResult out;
  out.window = segment_walk(log, gravity_inertial, options.segmentation);
  const StepWindow& w = out.window;
  const double dt = 1.0 / log.rate;

  // Start and stop a little inside the still periods so the smoothing
  // window cannot clip the onset of motion.
  const int margin = static_cast<int>(std::lround(options.margin * log.rate));
  const int begin = std::max(w.stand1_begin, w.stand1_end - margin);
  const int end = std::min(w.stand2_end, w.stand2_begin + margin);

  std::array<Mat3, kSensorCount> before, after;
  for (int i = 0; i < kSensorCount; ++i) {
    const auto& s = log.sensors[i];
    const StepIntegration step = integrate_step(s, gravity_inertial, begin, end, dt);
    out.terminal_speed[i] = step.v.norm();
    out.displacement[i] = horizontal_project(zupt_correct(step), gravity_inertial);

    std::vector<Mat3> first, second;
    for (int t = w.stand1_begin; t < w.stand1_end; ++t) first.push_back(s[t].orientation);
    for (int t = w.stand2_begin; t < w.stand2_end; ++t) second.push_back(s[t].orientation);
    before[i] = mean_rotation(first);
    after[i] = mean_rotation(second);
  }

  out.pose_check = verify_pose_return(before, after, options.pose_tolerance_deg);
  if (!out.pose_check.pass) {
    throw CalibrationError("standing pose changed between the two stands; redo the calibration");
  }
  out.heading = heading_align(out.displacement, options.min_displacement);
  out.r_im = extrinsics(out.displacement[kSensorCount - 1], gravity_inertial);
  for (int i = 0; i < kSensorCount; ++i) {
    out.r_sb[i] = sensor_to_bone(before[i], out.heading[i], out.r_im, options.r_mb[i]);
  }
  return out;
}

}  // namespace phystrack
