#include "phystrack/synth.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "phystrack/error.hpp"
#include "phystrack/kinematics.hpp"

namespace phystrack {

VecX MotionSequence::configuration(int frame) const {
  return compose_configuration(root.at(frame), theta.at(frame));
}

void MotionSequence::validate(const SkeletonModel& model) const {
  if (!(rate > 0.0) || !std::isfinite(rate)) throw ConfigurationError("motion: rate must be positive");
  if (theta.size() != root.size()) throw ConfigurationError("motion: root and theta lengths differ");
  if (!contacts.empty() && contacts.size() != root.size()) {
    throw ConfigurationError("motion: contact flags do not cover every frame");
  }
  const auto k = static_cast<Eigen::Index>(3 * model.joint_count());
  for (std::size_t i = 0; i < root.size(); ++i) {
    if (theta[i].size() != k) throw ConfigurationError("motion: wrong number of joint angles");
    if (!root[i].allFinite() || !theta[i].allFinite()) {
      throw ConfigurationError("motion: non-finite value at frame " + std::to_string(i));
    }
  }
}

std::array<SensorAttachment, kSensorCount> default_attachments(const SkeletonModel& model) {
  std::array<SensorAttachment, kSensorCount> out;
  for (int i = 0; i < kSensorCount; ++i) {
    out[i].joint = model.find_joint(kSensorBones[i]);
    if (out[i].joint < 0) {
      throw ConfigurationError(std::string("skeleton has no joint named ") + kSensorBones[i]);
    }
  }
  return out;
}

namespace {

Vec3 rotation_log(const Mat3& r) {
  const Eigen::AngleAxisd aa(r);
  return aa.axis() * aa.angle();
}

}  // namespace

ImuLog synthesize_imu(const SkeletonModel& model, const MotionSequence& motion,
                      const std::array<SensorAttachment, kSensorCount>& attachments,
                      const Mat3& r_im) {
  motion.validate(model);
  const int n = motion.length();
  if (n < 3) throw ConfigurationError("synthesize_imu: need at least three frames");
  for (const auto& a : attachments) {
    if (a.joint < 0 || a.joint >= model.joint_count()) {
      throw ConfigurationError("synthesize_imu: attachment joint out of range");
    }
  }
  const double dt = motion.dt();
  const Vec3 g = r_im * model.gravity();

  std::array<std::vector<Vec3>, kSensorCount> pos;
  std::array<std::vector<Mat3>, kSensorCount> rot;
  for (int t = 0; t < n; ++t) {
    const KinematicFrames f = compute_frames(model, motion.configuration(t));
    for (int i = 0; i < kSensorCount; ++i) {
      const auto& a = attachments[i];
      pos[i].push_back(r_im * (f.position[a.joint] + f.rotation[a.joint] * a.offset));
      rot[i].push_back(r_im * f.rotation[a.joint] * a.r_sb.transpose());
    }
  }

  ImuLog log;
  log.rate = motion.rate;
  for (int i = 0; i < kSensorCount; ++i) {
    const auto& p = pos[i];
    const auto& r = rot[i];
    log.sensors[i].resize(n);
    for (int t = 0; t < n; ++t) {
      // Second difference centred where possible; at the ends the nearest
      // interior stencil is reused.
      const int c = std::clamp(t, 1, n - 2);
      const Vec3 a = (p[c + 1] - 2.0 * p[c] + p[c - 1]) / (dt * dt);
      Vec3 w;
      if (t == 0) {
        w = rotation_log(r[0].transpose() * r[1]) / dt;
      } else if (t == n - 1) {
        w = rotation_log(r[n - 2].transpose() * r[n - 1]) / dt;
      } else {
        w = rotation_log(r[t - 1].transpose() * r[t + 1]) / (2.0 * dt);
      }
      ImuSample& s = log.sensors[i][t];
      s.orientation = r[t];
      s.acc = r[t].transpose() * (a - g);
      s.gyro = w;
    }
  }
  return log;
}

void inject_heading_drift(ImuLog& log, int sensor, double angle, const Vec3& gravity_inertial) {
  if (sensor < 0 || sensor >= kSensorCount) throw ConfigurationError("inject_heading_drift: bad sensor");
  const Mat3 d = axis_angle(-gravity_inertial.normalized(), angle);
  for (ImuSample& s : log.sensors[sensor]) s.orientation = d * s.orientation;
}

void add_accelerometer_noise(ImuLog& log, double sigma, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, sigma);
  for (auto& sensor : log.sensors) {
    for (ImuSample& s : sensor) s.acc += Vec3(noise(rng), noise(rng), noise(rng));
  }
}

EstimatorNoise EstimatorNoise::parse(std::string_view text) {
  EstimatorNoise out;
  std::string item;
  std::istringstream in{std::string(text)};
  auto number = [](const std::string& key, const std::string& value) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
    if (ec != std::errc() || ptr != value.data() + value.size() || !std::isfinite(v) || v < 0.0) {
      throw ConfigurationError("noise spec: bad value for " + key + ": '" + value + "'");
    }
    return v;
  };
  while (std::getline(in, item, ',')) {
    if (item.empty() || item == "none") continue;
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw ConfigurationError("noise spec: expected key=value, got '" + item + "'");
    const std::string key = item.substr(0, eq), value = item.substr(eq + 1);
    if (key == "angle_deg") {
      out.angle_sigma = number(key, value) * std::numbers::pi / 180.0;
    } else if (key == "angle") {
      out.angle_sigma = number(key, value);
    } else if (key == "velocity") {
      out.velocity_sigma = number(key, value);
    } else if (key == "seed") {
      std::uint64_t v = 0;
      const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
      if (ec != std::errc() || ptr != value.data() + value.size()) {
        throw ConfigurationError("noise spec: bad seed '" + value + "'");
      }
      out.seed = v;
    } else if (key == "contacts") {
      if (value != "truth" && value != "displacement") {
        throw ConfigurationError("noise spec: contacts must be truth or displacement");
      }
      out.ground_truth_contacts = value == "truth";
    } else if (key == "gravity") {
      if (value != "on" && value != "off") throw ConfigurationError("noise spec: gravity must be on or off");
      out.gravity = value == "on";
    } else {
      throw ConfigurationError("noise spec: unknown key '" + key + "'");
    }
  }
  return out;
}

std::vector<EstimatorFrame> synthesize_estimator_frames(const SkeletonModel& model,
                                                        const MotionSequence& motion,
                                                        const EstimatorNoise& noise) {
  motion.validate(model);
  const int n = motion.length();
  if (noise.ground_truth_contacts && motion.contacts.empty()) {
    throw ConfigurationError("synthesize_estimator_frames: motion has no ground-truth contacts");
  }
  const double dt = motion.dt();
  const Vec3 g = model.gravity_direction();
  std::mt19937_64 rng(noise.seed);
  std::normal_distribution<double> unit(0.0, 1.0);

  std::vector<std::array<Vec3, kEndpointCount>> ends(n);
  for (int t = 0; t < n; ++t) {
    const auto p = forward_kinematics(model, motion.configuration(t));
    for (Endpoint e : kAllEndpoints) ends[t][static_cast<int>(e)] = p[model.endpoint_joint(e)];
  }

  std::vector<EstimatorFrame> out(n);
  for (int t = 0; t < n; ++t) {
    EstimatorFrame& f = out[t];
    f.timestamp = t * dt;
    f.theta_ref = motion.theta[t];
    if (noise.angle_sigma > 0.0) {
      for (Eigen::Index i = 0; i < f.theta_ref.size(); ++i) f.theta_ref[i] += noise.angle_sigma * unit(rng);
    }
    Vec3 v = Vec3::Zero();
    if (n > 1) v = t > 0 ? (motion.root[t] - motion.root[t - 1]) / dt : (motion.root[1] - motion.root[0]) / dt;
    if (noise.velocity_sigma > 0.0) v += noise.velocity_sigma * Vec3(unit(rng), unit(rng), unit(rng));
    f.v_par_mag = v.dot(g);
    f.v_perp = v - f.v_par_mag * g;

    const int other = t > 0 ? t - 1 : std::min(1, n - 1);
    for (int e = 0; e < kEndpointCount; ++e) {
      if (noise.ground_truth_contacts) {
        f.s[e] = motion.contacts[t][e] ? 1.0 : 0.0;
      } else {
        f.s[e] = (ends[t][e] - ends[other][e]).norm() < noise.stationary_step ? 1.0 : 0.0;
      }
    }
    if (noise.gravity) {
      f.g_root = euler_xyz_to_matrix(motion.theta[t].head<3>()).transpose() * g;
    }
  }
  return out;
}

int Scenario::marker(std::string_view wanted) const {
  for (const auto& m : markers) {
    if (m.name == wanted) return m.frame;
  }
  throw ConfigurationError("scenario " + name + " has no marker " + std::string(wanted));
}

namespace {

double minimum_jerk(double s) { return s * s * s * (10.0 + s * (-15.0 + 6.0 * s)); }

// Smooth bump peaking at 1 when s = 0.5, flat to second order at both ends.
double bump(double s) {
  if (s <= 0.0 || s >= 1.0) return 0.0;
  return 64.0 * std::pow(s * (1.0 - s), 3);
}

// Keyframed point moved between keys along minimum-jerk profiles.
class Track {
 public:
  explicit Track(const Vec3& start) { keys_.push_back({0.0, start}); }

  void to(const Vec3& target, double duration) { keys_.push_back({keys_.back().t + duration, target}); }
  void hold(double duration) { to(last(), duration); }
  // Lift over the higher of the two ends by `clearance`, then set down.
  void swing(const Vec3& target, double duration, double clearance, const Vec3& up) {
    const Vec3 from = last();
    const double top = std::max(from.dot(up), target.dot(up)) + clearance;
    Vec3 apex = 0.5 * (from + target);
    apex += (top - apex.dot(up)) * up;
    to(apex, 0.5 * duration);
    to(target, 0.5 * duration);
  }
  const Vec3& last() const { return keys_.back().p; }

  Vec3 at(double t) const {
    if (t <= keys_.front().t) return keys_.front().p;
    for (std::size_t i = 1; i < keys_.size(); ++i) {
      if (t <= keys_[i].t) {
        const double span = keys_[i].t - keys_[i - 1].t;
        const double s = span > 0.0 ? (t - keys_[i - 1].t) / span : 1.0;
        return keys_[i - 1].p + minimum_jerk(s) * (keys_[i].p - keys_[i - 1].p);
      }
    }
    return keys_.back().p;
  }

 private:
  struct Key {
    double t;
    Vec3 p;
  };
  std::vector<Key> keys_;
};

int joint_or_throw(const SkeletonModel& model, const char* name) {
  const int j = model.find_joint(name);
  if (j < 0) throw ConfigurationError(std::string("scenarios need a joint named ") + name);
  return j;
}

struct Leg {
  int hip, knee, ankle, foot;
  Vec3 hip_offset, foot_offset;
  double thigh, shank;

  Leg(const SkeletonModel& model, const char* side) {
    const std::string s(side);
    hip = joint_or_throw(model, (s + "_Hip").c_str());
    knee = joint_or_throw(model, (s + "_Knee").c_str());
    ankle = joint_or_throw(model, (s + "_Ankle").c_str());
    foot = joint_or_throw(model, (s + "_Foot").c_str());
    hip_offset = model.joint(hip).offset;
    foot_offset = model.joint(foot).offset;
    thigh = model.joint(knee).offset.norm();
    shank = model.joint(ankle).offset.norm();
  }

  // Sagittal two-link IK with the root unrotated, keeping the foot flat.
  // Knee angle is non-negative (shank behind the thigh).
  void solve(const Vec3& pelvis, const Vec3& foot_target, VecX& theta) const {
    const Vec3 d = foot_target - foot_offset - (pelvis + hip_offset);
    if (std::abs(d.x()) > 1e-9) throw ConfigurationError("leg IK: foot target is off the sagittal plane");
    const double dist = std::hypot(d.y(), d.z());
    const double c = (dist * dist - thigh * thigh - shank * shank) / (2.0 * thigh * shank);
    if (c > 1.0 + 1e-12 || c < -1.0 - 1e-12) throw ConfigurationError("leg IK: foot target out of reach");
    const double k = std::acos(std::clamp(c, -1.0, 1.0));
    const double phi = std::atan2(-d.z(), -d.y());
    const double h = phi - std::atan2(shank * std::sin(k), thigh + shank * std::cos(k));
    theta[3 * hip] = h;
    theta[3 * knee] = k;
    theta[3 * ankle] = -(h + k);
  }
};

constexpr double kStance = 0.88;      // pelvis height while moving about [m]
constexpr double kQuietStance = 0.90; // pelvis height while standing still [m]
constexpr double kArmsDown = 1.3;     // shoulder roll bringing the arms to the sides [rad]

// Pelvis and both feet keyframed in a shared clock; legs follow by IK.
class Rig {
 public:
  Rig(const SkeletonModel& model, double pelvis_height, bool arms_forward = false)
      : model_(model),
        arms_forward_(arms_forward),
        left_(model, "L"),
        right_(model, "R"),
        l_shoulder_(joint_or_throw(model, "L_Shoulder")),
        r_shoulder_(joint_or_throw(model, "R_Shoulder")),
        pelvis_(Vec3(0.0, pelvis_height, 0.0)),
        lfoot_(standing_foot(left_, Vec3(0.0, pelvis_height, 0.0))),
        rfoot_(standing_foot(right_, Vec3(0.0, pelvis_height, 0.0))) {
    if (model.up().dot(Vec3::UnitY()) < 1.0 - 1e-12) throw ConfigurationError("scenarios assume y up");
  }

  // Foot joint on the floor (height 0) below the hip.
  Vec3 standing_foot(const Leg& leg, const Vec3& pelvis) const {
    Vec3 f = pelvis + leg.hip_offset + leg.foot_offset;
    f.y() = 0.0;
    return f;
  }

  Track& pelvis() { return pelvis_; }
  Track& foot(bool left) { return left ? lfoot_ : rfoot_; }
  const Leg& leg(bool left) const { return left ? left_ : right_; }
  double now() const { return now_; }

  void mark(const std::string& name) { markers_.push_back({name, now_}); }

  // Tracks not moved during a phase hold still; call after setting up the
  // moving ones.
  void advance(double duration, bool pelvis_moved, bool left_moved, bool right_moved) {
    now_ += duration;
    if (!pelvis_moved) pelvis_.hold(duration);
    if (!left_moved) lfoot_.hold(duration);
    if (!right_moved) rfoot_.hold(duration);
  }
  void rest(double duration) { advance(duration, false, false, false); }

  MotionSequence sample(double rate) const {
    MotionSequence m;
    m.rate = rate;
    const int n = static_cast<int>(std::lround(now_ * rate)) + 1;
    for (int i = 0; i < n; ++i) {
      const double t = i / rate;
      VecX theta = VecX::Zero(3 * model_.joint_count());
      if (arms_forward_) {
        theta[3 * l_shoulder_ + 1] = -0.5 * std::numbers::pi;
        theta[3 * r_shoulder_ + 1] = 0.5 * std::numbers::pi;
      } else {
        theta[3 * l_shoulder_ + 2] = -kArmsDown;
        theta[3 * r_shoulder_ + 2] = kArmsDown;
      }
      const Vec3 p = pelvis_.at(t);
      left_.solve(p, lfoot_.at(t), theta);
      right_.solve(p, rfoot_.at(t), theta);
      m.root.push_back(p);
      m.theta.push_back(theta);
    }
    return m;
  }

  std::vector<ScenarioMarker> markers(double rate) const {
    std::vector<ScenarioMarker> out;
    for (const auto& [name, t] : markers_) out.push_back({name, static_cast<int>(std::lround(t * rate))});
    return out;
  }

 private:
  const SkeletonModel& model_;
  bool arms_forward_;
  Leg left_, right_;
  int l_shoulder_, r_shoulder_;
  Track pelvis_, lfoot_, rfoot_;
  double now_ = 0.0;
  std::vector<std::pair<std::string, double>> markers_;
};

constexpr double kRate = 60.0;

void label_contacts(const SkeletonModel& model, Scenario& sc) {
  MotionSequence& m = sc.motion;
  const int n = m.length();
  std::vector<std::vector<Vec3>> p(n);
  for (int t = 0; t < n; ++t) p[t] = forward_kinematics(model, m.configuration(t));
  m.contacts.assign(n, {});
  for (int t = 0; t < n; ++t) {
    const int other = t > 0 ? t - 1 : std::min(1, n - 1);
    for (Endpoint e : kAllEndpoints) {
      const int j = model.endpoint_joint(e);
      if ((p[t][j] - p[other][j]).norm() >= 0.002) continue;
      const double h = p[t][j].y() - sc.floor;
      bool on = false;
      if (e == Endpoint::kLeftFoot || e == Endpoint::kRightFoot) {
        for (double s : sc.support_heights) on = on || std::abs(h - s) <= 0.01;
      } else if (e == Endpoint::kPelvis && sc.seat_height) {
        on = std::abs(h - *sc.seat_height) <= 0.01;
      }
      m.contacts[t][static_cast<int>(e)] = on;
    }
  }
}

Scenario finish(const SkeletonModel& model, const std::string& name, const Rig& rig,
                std::vector<double> supports, std::optional<double> seat = std::nullopt) {
  Scenario sc;
  sc.name = name;
  sc.motion = rig.sample(kRate);
  sc.markers = rig.markers(kRate);
  sc.support_heights = std::move(supports);
  sc.seat_height = seat;
  label_contacts(model, sc);
  return sc;
}

Scenario stand(const SkeletonModel& model) {
  Rig rig(model, kQuietStance);
  rig.rest(10.0);
  return finish(model, "stand", rig, {0.0});
}

Scenario walk_in_place(const SkeletonModel& model) {
  Rig rig(model, kQuietStance);
  const Vec3 up = Vec3::UnitY();
  rig.rest(1.0);
  for (int i = 0; i < 4; ++i) {
    const bool left = i % 2 == 0;
    Track& f = rig.foot(left);
    const Vec3 home = f.last();
    f.to(home + 0.10 * up, 0.4);
    f.to(home, 0.4);
    rig.advance(0.8, false, left, !left);
    rig.rest(0.3);
  }
  rig.rest(1.0);
  return finish(model, "walk-in-place", rig, {0.0});
}

Scenario walk(const SkeletonModel& model, int steps, double stride) {
  Rig rig(model, kStance);
  const Vec3 up = Vec3::UnitY(), fwd = Vec3::UnitZ();
  rig.rest(1.0);
  for (int i = 0; i < steps; ++i) {
    const bool lead = i % 2 == 0;
    rig.mark("step_" + std::to_string(i + 1));
    rig.foot(lead).swing(rig.foot(lead).last() + stride * fwd, 0.5, 0.06, up);
    rig.pelvis().to(rig.pelvis().last() + 0.5 * stride * fwd, 0.5);
    rig.advance(0.5, true, lead, !lead);
    rig.foot(!lead).swing(rig.foot(!lead).last() + stride * fwd, 0.5, 0.06, up);
    rig.pelvis().to(rig.pelvis().last() + 0.5 * stride * fwd, 0.5);
    rig.advance(0.5, true, !lead, lead);
  }
  rig.rest(1.0);
  return finish(model, "walk", rig, {0.0});
}

// Lead foot up one riser, rest it lightly, shift weight, then bring the
// trailing foot up.
void climb(Rig& rig, bool lead, double riser, double tread, const std::string& tag) {
  const Vec3 up = Vec3::UnitY(), fwd = Vec3::UnitZ();
  rig.mark("place_" + tag);
  Track& a = rig.foot(lead);
  a.swing(a.last() + riser * up + tread * fwd, 0.8, 0.08, up);
  rig.advance(0.8, false, lead, !lead);
  rig.mark("rest_" + tag);
  rig.rest(0.6);
  rig.mark("shift_" + tag);
  rig.pelvis().to(rig.pelvis().last() + 0.6 * tread * fwd, 0.8);
  rig.advance(0.8, true, false, false);
  rig.mark("lift_" + tag);
  Track& b = rig.foot(!lead);
  b.swing(b.last() + riser * up + tread * fwd, 0.8, 0.08, up);
  rig.pelvis().to(rig.pelvis().last() + riser * up + 0.4 * tread * fwd, 0.8);
  rig.advance(0.8, true, !lead, lead);
  rig.mark("settle_" + tag);
  rig.rest(0.6);
}

Scenario stair(const SkeletonModel& model) {
  constexpr double riser = 0.15, tread = 0.30;
  Rig rig(model, kStance);
  rig.rest(1.0);
  std::vector<double> supports{0.0};
  for (int i = 0; i < 3; ++i) {
    climb(rig, i % 2 == 0, riser, tread, std::to_string(i + 1));
    supports.push_back(riser * (i + 1));
  }
  rig.rest(1.0);
  return finish(model, "stair", rig, supports);
}

// Arms held forward throughout. Seated with the feet down the feet carry
// enough of the load on their own; the seat is only needed once the feet
// come off the floor.
Scenario sit(const SkeletonModel& model) {
  constexpr double seat = 0.45;
  const Vec3 up = Vec3::UnitY(), fwd = Vec3::UnitZ();
  Rig rig(model, kQuietStance, true);
  rig.rest(1.0);
  rig.mark("sit");
  rig.pelvis().to(Vec3(0.0, seat, -0.30), 1.5);
  rig.advance(1.5, true, false, false);
  rig.mark("seated");
  rig.rest(1.0);
  rig.mark("lift");
  const Vec3 lhome = rig.foot(true).last(), rhome = rig.foot(false).last();
  rig.foot(true).to(lhome + 0.06 * up, 0.5);
  rig.foot(false).to(rhome + 0.06 * up, 0.5);
  rig.advance(0.5, false, true, true);
  for (int i = 0; i < 8; ++i) {
    const double sign = i % 2 == 0 ? 1.0 : -1.0;
    rig.foot(true).to(lhome + 0.06 * up + sign * 0.05 * fwd, 0.25);
    rig.foot(false).to(rhome + 0.06 * up - sign * 0.05 * fwd, 0.25);
    rig.advance(0.25, false, true, true);
  }
  rig.mark("down");
  rig.foot(true).to(lhome, 0.5);
  rig.foot(false).to(rhome, 0.5);
  rig.advance(0.5, false, true, true);
  rig.rest(1.5);
  return finish(model, "sit", rig, {0.0}, seat);
}

Scenario weight_shift(const SkeletonModel& model) {
  constexpr double box = 0.2, depth = 0.3;
  const Vec3 up = Vec3::UnitY(), fwd = Vec3::UnitZ();
  Rig rig(model, kStance);
  rig.rest(1.0);
  rig.mark("place");
  Track& lead = rig.foot(true);
  lead.swing(lead.last() + box * up + depth * fwd, 0.8, 0.08, up);
  rig.advance(0.8, false, true, false);
  rig.mark("rest");
  rig.rest(1.0);
  rig.mark("shift");
  rig.pelvis().to(rig.pelvis().last() + 0.6 * depth * fwd, 0.8);
  rig.advance(0.8, true, false, false);
  rig.mark("lift");
  Track& trail = rig.foot(false);
  trail.to(trail.last() + 0.25 * up + 0.15 * fwd, 0.8);
  rig.pelvis().to(Vec3(0.0, box + 0.84, depth), 0.8);
  rig.advance(0.8, true, false, true);
  rig.mark("balance");
  rig.rest(2.0);
  return finish(model, "weight-shift", rig, {0.0, box});
}

// Straight T-pose so the standing bone rotations are the identity; the legs
// swing during the step but the recorded stands are identical.
Scenario calibration_walk(const SkeletonModel& model) {
  constexpr double before = 1.5, step = 0.8, after = 1.5, length = 0.7;
  const int lhip = joint_or_throw(model, "L_Hip"), rhip = joint_or_throw(model, "R_Hip");
  const int lknee = joint_or_throw(model, "L_Knee"), rknee = joint_or_throw(model, "R_Knee");
  const int lankle = joint_or_throw(model, "L_Ankle"), rankle = joint_or_throw(model, "R_Ankle");
  const int lfoot = joint_or_throw(model, "L_Foot");
  const VecX zero = VecX::Zero(3 * model.joint_count());
  const double height = -forward_kinematics(model, compose_configuration(Vec3::Zero(), zero))[lfoot].y();

  Scenario sc;
  sc.name = "calibration-walk";
  sc.support_heights = {0.0};
  sc.motion.rate = kRate;
  const int n = static_cast<int>(std::lround((before + step + after) * kRate)) + 1;
  for (int i = 0; i < n; ++i) {
    const double t = i / kRate;
    const double s = std::clamp((t - before) / step, 0.0, 1.0);
    VecX theta = zero;
    theta[3 * lhip] = -0.5 * bump(2.0 * s);
    theta[3 * lknee] = 0.7 * bump(2.0 * s);
    theta[3 * rhip] = -0.5 * bump(2.0 * s - 1.0);
    theta[3 * rknee] = 0.7 * bump(2.0 * s - 1.0);
    theta[3 * lankle] = -(theta[3 * lhip] + theta[3 * lknee]);
    theta[3 * rankle] = -(theta[3 * rhip] + theta[3 * rknee]);
    sc.motion.root.push_back(Vec3(0.0, height + 0.03 * bump(s), length * minimum_jerk(s)));
    sc.motion.theta.push_back(theta);
  }
  sc.markers = {{"step", static_cast<int>(std::lround(before * kRate))},
                {"stand", static_cast<int>(std::lround((before + step) * kRate))}};
  label_contacts(model, sc);
  return sc;
}

}  // namespace

std::vector<std::string> scenario_names() {
  return {"stand", "walk-in-place", "walk", "stair", "sit", "weight-shift", "calibration-walk"};
}

Scenario make_scenario(const SkeletonModel& model, std::string_view name) {
  if (name == "stand") return stand(model);
  if (name == "walk-in-place") return walk_in_place(model);
  if (name == "walk") return walk(model, 8, 0.4);
  if (name == "stair") return stair(model);
  if (name == "sit") return sit(model);
  if (name == "weight-shift") return weight_shift(model);
  if (name == "calibration-walk") return calibration_walk(model);
  throw ConfigurationError("unknown scenario '" + std::string(name) + "'");
}

std::vector<Scenario> make_scenarios(const SkeletonModel& model) {
  std::vector<Scenario> out;
  for (const auto& name : scenario_names()) out.push_back(make_scenario(model, name));
  return out;
}

SyntheticCalibration synthesize_calibration(const SkeletonModel& model,
                                            const CalibrationLogOptions& options) {
  SyntheticCalibration out;
  out.gravity_inertial = Vec3(0.0, 0.0, -model.gravity().norm());
  const Vec3 heading(std::cos(options.walk_heading), std::sin(options.walk_heading), 0.0);
  out.r_im = extrinsics(heading, out.gravity_inertial);
  out.drift = options.drift;

  auto attachments = default_attachments(model);
  std::mt19937_64 rng(options.seed);
  std::normal_distribution<double> unit(0.0, 1.0);
  for (int i = 0; i < kSensorCount; ++i) {
    if (options.random_mounting) {
      Eigen::Quaterniond q(unit(rng), unit(rng), unit(rng), unit(rng));
      attachments[i].r_sb = q.normalized().toRotationMatrix();
    }
    out.r_sb[i] = attachments[i].r_sb;
  }
  const Scenario sc = make_scenario(model, "calibration-walk");
  out.log = synthesize_imu(model, sc.motion, attachments, out.r_im);
  for (int i = 0; i < kSensorCount; ++i) {
    if (options.drift[i] != 0.0) inject_heading_drift(out.log, i, options.drift[i], out.gravity_inertial);
  }
  if (options.acc_noise > 0.0) add_accelerometer_noise(out.log, options.acc_noise, rng());
  return out;
}

}  // namespace phystrack
