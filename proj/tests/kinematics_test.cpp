#include "phystrack/kinematics.hpp"

#include <gtest/gtest.h>

#include "phystrack/error.hpp"
#include "test_support.hpp"

namespace phystrack {
namespace {

using testing::random_configuration;
using testing::random_vector;

// Independent FK: compose 4x4 homogeneous transforms built from angle-axis
// factors, without touching the library's frame recursion.
std::vector<Vec3> homogeneous_fk(const SkeletonModel& m, const VecX& q) {
  std::vector<Eigen::Isometry3d> world(m.joint_count());
  for (int j = 0; j < m.joint_count(); ++j) {
    Eigen::Isometry3d local = Eigen::Isometry3d::Identity();
    const int parent = m.joint(j).parent;
    local.translate(parent < 0 ? Vec3(q.head<3>()) : m.joint(j).offset);
    const int d = SkeletonModel::rotation_dof(j);
    local.rotate(Eigen::AngleAxisd(q(d), Vec3::UnitX()));
    local.rotate(Eigen::AngleAxisd(q(d + 1), Vec3::UnitY()));
    local.rotate(Eigen::AngleAxisd(q(d + 2), Vec3::UnitZ()));
    world[j] = parent < 0 ? local : world[parent] * local;
  }
  std::vector<Vec3> out;
  for (const auto& t : world) out.push_back(t.translation());
  return out;
}

TEST(KinematicsTest, IdentityPoseIsCumulativeOffsets) {
  const SkeletonModel& m = SkeletonModel::humanoid();
  const auto r = forward_kinematics(m, VecX::Zero(m.dof_count()));
  for (int j = 0; j < m.joint_count(); ++j) {
    Vec3 expected = Vec3::Zero();
    for (int a = j; a > 0; a = m.joint(a).parent) expected += m.joint(a).offset;
    EXPECT_TRUE(r[j].isApprox(expected, 1e-15) || (r[j] - expected).norm() < 1e-15) << j;
  }
  // Standing straight, the feet sit 0.92 m below the pelvis.
  EXPECT_NEAR(r[m.endpoint_joint(Endpoint::kLeftFoot)].y(), -0.92, 1e-12);
}

TEST(KinematicsTest, RootTranslationShiftsEveryJoint) {
  const SkeletonModel& m = SkeletonModel::humanoid();
  std::mt19937 rng(3);
  VecX q = random_configuration(m, rng, 0.5);
  const Vec3 t(0.3, -1.2, 2.5);
  const auto base = forward_kinematics(m, q, Vec3::Zero());
  const auto moved = forward_kinematics(m, q, t);
  for (int j = 0; j < m.joint_count(); ++j) EXPECT_LT((moved[j] - base[j] - t).norm(), 1e-12);
  EXPECT_LT((moved[0] - t).norm(), 1e-15);
}

TEST(KinematicsTest, MatchesHomogeneousTransformOracle) {
  std::mt19937 rng(11);
  for (const SkeletonModel* m : {&SkeletonModel::test_chain(), &SkeletonModel::humanoid()}) {
    for (int trial = 0; trial < 20; ++trial) {
      const VecX q = random_configuration(*m, rng, 3.0);
      const auto r = forward_kinematics(*m, q);
      const auto oracle = homogeneous_fk(*m, q);
      for (int j = 0; j < m->joint_count(); ++j) EXPECT_LT((r[j] - oracle[j]).norm(), 1e-12);
    }
  }
}

TEST(KinematicsTest, RejectsWrongLength) {
  EXPECT_THROW(forward_kinematics(SkeletonModel::test_chain(), VecX::Zero(7)),
               ConfigurationError);
}

TEST(KinematicsTest, TranslationColumnsAreIdentityBlocks) {
  const SkeletonModel& m = SkeletonModel::humanoid();
  std::mt19937 rng(5);
  const MatX jac = joint_jacobian(m, random_configuration(m, rng));
  for (int j = 0; j < m.joint_count(); ++j) {
    EXPECT_EQ(Mat3(jac.block<3, 3>(3 * j, 0)), Mat3::Identity());
  }
}

TEST(KinematicsTest, JacobianIsExactlyZeroOutsideAncestors) {
  std::mt19937 rng(6);
  for (const SkeletonModel* m : {&SkeletonModel::test_chain(), &SkeletonModel::humanoid()}) {
    const MatX jac = joint_jacobian(*m, random_configuration(*m, rng));
    for (int j = 0; j < m->joint_count(); ++j) {
      for (int a = 0; a < m->joint_count(); ++a) {
        const bool strict_ancestor = a != j && m->is_ancestor_or_self(a, j);
        if (strict_ancestor) continue;
        const int col = SkeletonModel::rotation_dof(a);
        EXPECT_TRUE((jac.block<3, 3>(3 * j, col).array() == 0.0).all()) << j << " " << a;
      }
    }
  }
}

TEST(KinematicsTest, JacobianMatchesCentralDifferences) {
  constexpr double kStep = 1e-6;
  std::mt19937 rng(7);
  for (const SkeletonModel* m : {&SkeletonModel::test_chain(), &SkeletonModel::humanoid()}) {
    for (int trial = 0; trial < 25; ++trial) {
      const VecX q = random_configuration(*m, rng, 2.0);
      const VecX qdot = random_vector(rng, m->dof_count(), 1.0);
      const VecX fd = (stack_positions(forward_kinematics(*m, q + kStep * qdot)) -
                       stack_positions(forward_kinematics(*m, q - kStep * qdot))) /
                      (2.0 * kStep);
      EXPECT_LE((joint_jacobian(*m, q) * qdot - fd).norm(), 1e-5);
    }
  }
}

TEST(KinematicsTest, JacobianRowsSubsetMatchesFullJacobian) {
  const SkeletonModel& m = SkeletonModel::humanoid();
  std::mt19937 rng(8);
  const VecX q = random_configuration(m, rng);
  const MatX full = joint_jacobian(m, q);
  const std::vector<int> joints = {10, 0, 23};
  const MatX rows = joint_jacobian_rows(m, q, joints);
  for (std::size_t i = 0; i < joints.size(); ++i) {
    EXPECT_EQ(MatX(rows.middleRows(3 * i, 3)), MatX(full.middleRows(3 * joints[i], 3)));
  }
}

TEST(KinematicsTest, JdotQdotVanishesWithoutVelocity) {
  const SkeletonModel& m = SkeletonModel::humanoid();
  std::mt19937 rng(9);
  const VecX q = random_configuration(m, rng);
  EXPECT_EQ(jdot_qdot(m, q, VecX::Zero(m.dof_count())).norm(), 0.0);
  VecX qdot = VecX::Zero(m.dof_count());
  qdot.head<3>() = Vec3(1.0, -2.0, 0.5);
  EXPECT_LT(jdot_qdot(m, q, qdot).norm(), 1e-12);
}

TEST(KinematicsTest, JdotQdotCentripetalTerm) {
  // Spin link1 about its z axis; link2's centre circles the axis at radius 0.25.
  const SkeletonModel& m = SkeletonModel::test_chain();
  const double omega = 3.0;
  VecX qdot = VecX::Zero(m.dof_count());
  qdot(SkeletonModel::rotation_dof(1) + 2) = omega;
  const VecX acc = jdot_qdot(m, VecX::Zero(m.dof_count()), qdot);
  const Vec3 link2 = acc.segment<3>(6);
  EXPECT_NEAR(link2.norm(), omega * omega * 0.25, 1e-12);
  EXPECT_NEAR(link2.y(), omega * omega * 0.25, 1e-12);  // points back toward the axis
  EXPECT_LT(acc.segment<3>(3).norm(), 1e-15);          // link1 sits on the axis
}

TEST(KinematicsTest, SecondDerivativeMatchesJqddotPlusJdotQdot) {
  constexpr double kStep = 1e-4;
  std::mt19937 rng(10);
  for (const SkeletonModel* m : {&SkeletonModel::test_chain(), &SkeletonModel::humanoid()}) {
    for (int trial = 0; trial < 25; ++trial) {
      const VecX q = random_configuration(*m, rng, 2.0);
      const VecX qdot = random_vector(rng, m->dof_count(), 1.0);
      const VecX qddot = random_vector(rng, m->dof_count(), 1.0);
      auto at = [&](double t) {
        return stack_positions(forward_kinematics(*m, q + t * qdot + 0.5 * t * t * qddot));
      };
      const VecX fd = (at(kStep) - 2.0 * at(0.0) + at(-kStep)) / (kStep * kStep);
      const VecX analytic = joint_jacobian(*m, q) * qddot + jdot_qdot(*m, q, qdot);
      EXPECT_LE((analytic - fd).norm(), 1e-4);
    }
  }
}

}  // namespace
}  // namespace phystrack
