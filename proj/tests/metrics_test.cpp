#include "phystrack/metrics.hpp"

#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "phystrack/error.hpp"
#include "phystrack/kinematics.hpp"
#include "test_support.hpp"

namespace phystrack {
namespace {

using std::numbers::pi;

const SkeletonModel& humanoid() { return SkeletonModel::humanoid(); }

std::vector<VecX> random_sequence(std::mt19937& rng, int frames) {
  std::vector<VecX> out;
  for (int i = 0; i < frames; ++i) out.push_back(testing::random_configuration(humanoid(), rng, 0.8));
  return out;
}

TEST(MetricsTest, IdenticalSequencesHaveNoError) {
  std::mt19937 rng(81);
  const auto seq = random_sequence(rng, 20);
  for (Alignment a : {Alignment::kLocal, Alignment::kGlobal}) {
    const PoseErrors e = pose_errors(humanoid(), seq, seq, a);
    EXPECT_LT(e.sip_deg.mean, 1e-5);
    EXPECT_LT(e.ang_deg.mean, 1e-5);
    EXPECT_LT(e.pos_cm.mean, 1e-9);
  }
}

TEST(MetricsTest, YawedRootOnlyShowsUpGlobally) {
  std::mt19937 rng(82);
  std::vector<VecX> truth, pred;
  for (int i = 0; i < 10; ++i) {
    VecX q = testing::random_configuration(humanoid(), rng, 0.5);
    q.segment<3>(3).setZero();
    truth.push_back(q);
    q[4] = pi / 6.0;  // root yaw about y, the up axis
    pred.push_back(q);
  }
  const PoseErrors local = pose_errors(humanoid(), pred, truth, Alignment::kLocal);
  EXPECT_LT(local.ang_deg.mean, 1e-5);
  EXPECT_LT(local.pos_cm.mean, 1e-9);
  const PoseErrors global = pose_errors(humanoid(), pred, truth, Alignment::kGlobal);
  EXPECT_NEAR(global.ang_deg.mean, 30.0, 1e-9);
  EXPECT_NEAR(global.sip_deg.mean, 30.0, 1e-9);
  EXPECT_LT(global.ang_deg.std, 1e-9);
  EXPECT_GT(global.pos_cm.mean, 1.0);
}

double quat_angle_deg(const Mat3& a, const Mat3& b) {
  const Eigen::Quaterniond qa(a), qb(b);
  return 2.0 * std::acos(std::min(1.0, std::abs(qa.dot(qb)))) * 180.0 / pi;
}

TEST(MetricsTest, MatchesRootFrameOracle) {
  // Local alignment compared in each body's own root frame instead of
  // moving the prediction onto the truth.
  std::mt19937 rng(83);
  const auto truth = random_sequence(rng, 15);
  auto pred = truth;
  for (VecX& q : pred) q += testing::random_vector(rng, humanoid().dof_count(), 0.1);
  const PoseErrors e = pose_errors(humanoid(), pred, truth, Alignment::kLocal);
  const PoseErrors eg = pose_errors(humanoid(), pred, truth, Alignment::kGlobal);
  const std::vector<int> sip = {1, 2, 16, 17};
  double ang = 0, sp = 0, pos = 0, gang = 0;
  const int k = humanoid().joint_count();
  for (std::size_t t = 0; t < truth.size(); ++t) {
    const auto fp = compute_frames(humanoid(), pred[t]);
    const auto fg = compute_frames(humanoid(), truth[t]);
    double a = 0, s = 0, p = 0, ga = 0;
    for (int j = 0; j < k; ++j) {
      const double d = quat_angle_deg(fp.rotation[0].transpose() * fp.rotation[j],
                                      fg.rotation[0].transpose() * fg.rotation[j]);
      a += d;
      if (std::find(sip.begin(), sip.end(), j) != sip.end()) s += d;
      p += (fp.rotation[0].transpose() * (fp.position[j] - fp.position[0]) -
            fg.rotation[0].transpose() * (fg.position[j] - fg.position[0])).norm();
      ga += quat_angle_deg(fp.rotation[j], fg.rotation[j]);
    }
    ang += a / k;
    sp += s / 4;
    pos += 100.0 * p / k;
    gang += ga / k;
  }
  const double n = static_cast<double>(truth.size());
  EXPECT_NEAR(e.ang_deg.mean, ang / n, 1e-6);
  EXPECT_NEAR(e.sip_deg.mean, sp / n, 1e-6);
  EXPECT_NEAR(e.pos_cm.mean, pos / n, 1e-9);
  EXPECT_NEAR(eg.ang_deg.mean, gang / n, 1e-6);
}

TEST(MetricsTest, AlignmentIsIdempotent) {
  std::mt19937 rng(84);
  const auto truth = random_sequence(rng, 10);
  auto pred = truth;
  for (std::size_t t = 0; t < pred.size(); ++t) {
    pred[t].tail(pred[t].size() - 6) += testing::random_vector(rng, humanoid().dof_count() - 6, 0.1);
  }
  // Root already aligned: local and global agree.
  const PoseErrors l = pose_errors(humanoid(), pred, truth, Alignment::kLocal);
  const PoseErrors g = pose_errors(humanoid(), pred, truth, Alignment::kGlobal);
  EXPECT_NEAR(l.ang_deg.mean, g.ang_deg.mean, 1e-9);
  EXPECT_NEAR(l.pos_cm.mean, g.pos_cm.mean, 1e-9);
}

TEST(MetricsTest, JitterOfPolynomials) {
  const double dt = 1.0 / 60.0;
  std::vector<Vec3> line, parabola;
  for (int i = 0; i < 100; ++i) {
    const double t = i * dt;
    line.push_back(Vec3(1.0, 2.0, 3.0) + Vec3(0.5, -1.0, 2.0) * t);
    parabola.push_back(Vec3(0.1, 0.0, 0.0) + Vec3(1.0, 0.0, 0.5) * t + Vec3(-4.9, 2.0, 1.0) * t * t);
  }
  EXPECT_LT(jitter(line, dt), 1e-6);
  EXPECT_LT(jitter(parabola, dt), 1e-6);
  EXPECT_THROW(jitter({Vec3::Zero(), Vec3::Zero(), Vec3::Zero()}, dt), ConfigurationError);
}

TEST(MetricsTest, JitterOfSinusoid) {
  const double dt = 1.0 / 60.0, amp = 0.05;
  for (double w : {2.0, 5.0, 10.0}) {
    std::vector<Vec3> track;
    // Whole number of periods so the mean of |cos| is exact.
    const int n = static_cast<int>(std::lround(4.0 * 2.0 * pi / w / dt));
    for (int i = 0; i < n; ++i) track.push_back(Vec3(amp * std::sin(w * i * dt), 0.0, 0.0));
    const double expected = amp * w * w * w * 2.0 / pi * 1e-3;
    EXPECT_NEAR(jitter(track, dt), expected, 0.02 * expected) << w;
  }
}

TEST(MetricsTest, JitterIgnoresRigidMotionOfTheWholeTrajectory) {
  std::mt19937 rng(85);
  std::vector<Vec3> track, moved;
  const Mat3 r = testing::random_rotation(rng);
  const Vec3 shift(3.0, -1.0, 0.5);
  for (int i = 0; i < 50; ++i) {
    track.push_back(testing::random_vector(rng, 3, 0.01));
    moved.push_back(r * track.back() + shift);
  }
  EXPECT_NEAR(jitter(track, 1.0 / 60.0), jitter(moved, 1.0 / 60.0), 1e-9);
}

std::vector<Vec3> straight_walk(int frames, double length) {
  std::vector<Vec3> out;
  for (int i = 0; i < frames; ++i) out.push_back(Vec3(0.0, 0.0, length * i / (frames - 1)));
  return out;
}

TEST(MetricsTest, DriftOfIdenticalAndOffsetTrajectories) {
  const auto truth = straight_walk(701, 7.0);
  const DriftReport same = translation_drift(truth, truth);
  EXPECT_EQ(same.percent, 0.0);
  EXPECT_TRUE(same.reached_reference);
  auto pred = truth;
  for (Vec3& p : pred) p += Vec3(0.07, 0.0, 0.0);
  EXPECT_NEAR(translation_drift(pred, truth).percent, 1.0, 1e-9);
}

TEST(MetricsTest, DriftWithSlipPerStep) {
  // Ten 0.7 m steps of 35 frames; each step the prediction falls 1 cm
  // further behind, linearly over the step.
  std::vector<Vec3> truth, pred;
  for (int step = 0; step < 10; ++step) {
    for (int i = 0; i < 35; ++i) {
      const double u = static_cast<double>(i) / 35.0;
      truth.push_back(Vec3(0.0, 0.0, 0.7 * (step + u)));
      pred.push_back(Vec3(0.0, 0.0, 0.69 * (step + u)));
    }
  }
  truth.push_back(Vec3(0.0, 0.0, 7.0));
  pred.push_back(Vec3(0.0, 0.0, 6.9));
  const DriftReport r = translation_drift(pred, truth);
  for (int step = 1; step <= 10; ++step) {
    const DriftPoint& p = r.curve[35 * step];
    EXPECT_NEAR(p.distance, 0.7 * step, 1e-9);
    EXPECT_NEAR(p.error, 0.01 * step, 1e-9);
  }
  EXPECT_NEAR(r.percent, 0.1 / 7.0 * 100.0, 1e-9);
  const DriftReport shorter = translation_drift(pred, truth, 10.0);
  EXPECT_FALSE(shorter.reached_reference);
  EXPECT_NEAR(shorter.percent, 0.1 / 7.0 * 100.0, 1e-9);
}

TEST(MetricsTest, EvaluateRebasesAndFormats) {
  std::mt19937 rng(86);
  auto seq = random_sequence(rng, 30);
  const EvalReport self = evaluate(humanoid(), seq, seq, 1.0 / 60.0);
  EXPECT_LT(self.local.ang_deg.mean, 1e-5);
  EXPECT_EQ(self.drift.percent, 0.0);
  auto shifted = seq;
  for (VecX& q : shifted) q.head<3>() += Vec3(0.0, 0.9, 0.0);
  EXPECT_LT(evaluate(humanoid(), shifted, seq, 1.0 / 60.0).drift.percent, 1e-12);
  EXPECT_NE(format_report(self).find("local_ang_error"), std::string::npos);
  EXPECT_EQ(format_drift_csv(self.drift).rfind("distance_m,error_m\n", 0), 0u);
  seq.pop_back();
  EXPECT_THROW(evaluate(humanoid(), seq, shifted, 1.0 / 60.0), ConfigurationError);
}

}  // namespace
}  // namespace phystrack
