#include "phystrack/metrics.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "phystrack/error.hpp"
#include "phystrack/kinematics.hpp"

namespace phystrack {
namespace {

constexpr double kDeg = 180.0 / std::numbers::pi;

ErrorStats summarize(const std::vector<double>& xs) {
  ErrorStats s;
  if (xs.empty()) return s;
  for (double x : xs) s.mean += x;
  s.mean /= static_cast<double>(xs.size());
  for (double x : xs) s.std += (x - s.mean) * (x - s.mean);
  s.std = std::sqrt(s.std / static_cast<double>(xs.size()));
  return s;
}

void check_sequences(const SkeletonModel& model, const std::vector<VecX>& a, const std::vector<VecX>& b) {
  if (a.size() != b.size()) throw ConfigurationError("metrics: sequences differ in length");
  for (const auto* seq : {&a, &b}) {
    for (const VecX& q : *seq) {
      if (q.size() != model.dof_count()) throw ConfigurationError("metrics: configuration does not match skeleton");
    }
  }
}

}  // namespace

PoseErrors pose_errors(const SkeletonModel& model, const std::vector<VecX>& pred,
                       const std::vector<VecX>& truth, Alignment alignment) {
  check_sequences(model, pred, truth);
  std::vector<int> sip;
  for (const char* name : {"L_Hip", "R_Hip", "L_Shoulder", "R_Shoulder"}) {
    const int j = model.find_joint(name);
    if (j >= 0) sip.push_back(j);
  }
  const int k = model.joint_count();
  std::vector<double> sip_err, ang_err, pos_err;
  for (std::size_t t = 0; t < pred.size(); ++t) {
    const KinematicFrames p = compute_frames(model, pred[t]);
    const KinematicFrames g = compute_frames(model, truth[t]);
    // Rigid map applied to the whole predicted body.
    const Mat3 turn = alignment == Alignment::kLocal ? Mat3(g.rotation[0] * p.rotation[0].transpose())
                                                     : Mat3::Identity();
    std::vector<double> ang(k);
    double pos = 0.0;
    for (int j = 0; j < k; ++j) {
      ang[j] = geodesic_angle(turn * p.rotation[j], g.rotation[j]) * kDeg;
      const Vec3 x = g.position[0] + turn * (p.position[j] - p.position[0]);
      pos += (x - g.position[j]).norm();
    }
    double a = 0.0, s = 0.0;
    for (double v : ang) a += v;
    for (int j : sip) s += ang[j];
    ang_err.push_back(a / k);
    sip_err.push_back(sip.empty() ? 0.0 : s / static_cast<double>(sip.size()));
    pos_err.push_back(100.0 * pos / k);
  }
  return {summarize(sip_err), summarize(ang_err), summarize(pos_err)};
}

double jitter(const std::vector<Vec3>& track, double dt) {
  if (track.size() < 4) throw ConfigurationError("jitter: need at least four samples");
  if (!(dt > 0.0)) throw ConfigurationError("jitter: dt must be positive");
  double sum = 0.0;
  for (std::size_t t = 3; t < track.size(); ++t) {
    sum += (track[t] - 3.0 * track[t - 1] + 3.0 * track[t - 2] - track[t - 3]).norm();
  }
  return sum / static_cast<double>(track.size() - 3) / (dt * dt * dt) * 1e-3;
}

double joint_jitter(const SkeletonModel& model, const std::vector<VecX>& q, double dt) {
  const int k = model.joint_count();
  std::vector<std::vector<Vec3>> tracks(k);
  for (const VecX& x : q) {
    const auto p = forward_kinematics(model, x);
    for (int j = 0; j < k; ++j) tracks[j].push_back(p[j]);
  }
  double sum = 0.0;
  for (const auto& tr : tracks) sum += jitter(tr, dt);
  return sum / k;
}

DriftReport translation_drift(const std::vector<Vec3>& pred_root, const std::vector<Vec3>& truth_root,
                              double reference_distance) {
  if (pred_root.size() != truth_root.size()) throw ConfigurationError("translation_drift: lengths differ");
  if (truth_root.empty()) throw ConfigurationError("translation_drift: empty trajectory");
  if (!(reference_distance > 0.0)) throw ConfigurationError("translation_drift: reference distance must be positive");
  DriftReport r;
  r.reference_distance = reference_distance;
  double travelled = 0.0;
  for (std::size_t t = 0; t < truth_root.size(); ++t) {
    if (t > 0) travelled += (truth_root[t] - truth_root[t - 1]).norm();
    r.curve.push_back({travelled, (pred_root[t] - truth_root[t]).norm()});
  }
  for (std::size_t t = 1; t < r.curve.size(); ++t) {
    const DriftPoint& a = r.curve[t - 1];
    const DriftPoint& b = r.curve[t];
    if (b.distance >= reference_distance && b.distance > a.distance) {
      const double u = (reference_distance - a.distance) / (b.distance - a.distance);
      r.percent = 100.0 * (a.error + u * (b.error - a.error)) / reference_distance;
      r.reached_reference = true;
      return r;
    }
  }
  const DriftPoint& end = r.curve.back();
  r.percent = end.distance > 0.0 ? 100.0 * end.error / end.distance : 0.0;
  return r;
}

EvalReport evaluate(const SkeletonModel& model, const std::vector<VecX>& pred, const std::vector<VecX>& truth,
                    double dt, double reference_distance) {
  check_sequences(model, pred, truth);
  if (pred.empty()) throw ConfigurationError("evaluate: empty sequences");
  auto rebase = [](std::vector<VecX> seq) {
    const Vec3 origin = seq.front().head<3>();
    for (VecX& q : seq) q.head<3>() -= origin;
    return seq;
  };
  const std::vector<VecX> p = rebase(pred), g = rebase(truth);
  EvalReport r;
  r.local = pose_errors(model, p, g, Alignment::kLocal);
  r.global = pose_errors(model, p, g, Alignment::kGlobal);
  std::vector<Vec3> pr, gr;
  for (std::size_t t = 0; t < p.size(); ++t) {
    pr.push_back(p[t].head<3>());
    gr.push_back(g[t].head<3>());
  }
  if (p.size() >= 4) {
    r.root_jitter = jitter(pr, dt);
    r.joint_jitter = joint_jitter(model, p, dt);
  }
  r.drift = translation_drift(pr, gr, reference_distance);
  return r;
}

std::string format_report(const EvalReport& r) {
  std::ostringstream out;
  out.precision(4);
  out << std::fixed;
  auto line = [&](const char* name, const ErrorStats& s, const char* unit) {
    out << name << ' ' << s.mean << " +- " << s.std << ' ' << unit << '\n';
  };
  line("local_sip_error", r.local.sip_deg, "deg");
  line("local_ang_error", r.local.ang_deg, "deg");
  line("local_pos_error", r.local.pos_cm, "cm");
  line("global_sip_error", r.global.sip_deg, "deg");
  line("global_ang_error", r.global.ang_deg, "deg");
  line("global_pos_error", r.global.pos_cm, "cm");
  out << "root_jitter " << r.root_jitter << " km/s^3\n";
  out << "joint_jitter " << r.joint_jitter << " km/s^3\n";
  out << "travelled " << (r.drift.curve.empty() ? 0.0 : r.drift.curve.back().distance) << " m\n";
  out << "drift " << r.drift.percent << " % at "
      << (r.drift.reached_reference ? r.drift.reference_distance
                                    : (r.drift.curve.empty() ? 0.0 : r.drift.curve.back().distance))
      << " m\n";
  return out.str();
}

std::string format_drift_csv(const DriftReport& drift) {
  std::ostringstream out;
  out.precision(6);
  out << "distance_m,error_m\n";
  for (const DriftPoint& p : drift.curve) out << p.distance << ',' << p.error << '\n';
  return out.str();
}

}  // namespace phystrack
