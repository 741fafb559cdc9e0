#include "phystrack/skeleton.hpp"

#include <gtest/gtest.h>

#include "phystrack/error.hpp"

namespace phystrack {
namespace {

TEST(SkeletonTest, BundledHumanoidLayout) {
  const SkeletonModel& m = SkeletonModel::humanoid();
  EXPECT_EQ(m.joint_count(), 24);
  EXPECT_EQ(m.dof_count(), 75);
  EXPECT_NEAR(m.total_mass(), 80.0, 1e-6);
  EXPECT_EQ(m.joint(m.endpoint_joint(Endpoint::kPelvis)).name, "Pelvis");
  EXPECT_EQ(m.joint(m.endpoint_joint(Endpoint::kLeftFoot)).name, "L_Foot");
  EXPECT_EQ(m.joint(m.endpoint_joint(Endpoint::kRightHand)).name, "R_Hand");
  for (int j = 1; j < m.joint_count(); ++j) EXPECT_LT(m.joint(j).parent, j);
  EXPECT_EQ(m.gravity(), Vec3(0.0, -9.8, 0.0));
}

TEST(SkeletonTest, TestChainLayout) {
  const SkeletonModel& m = SkeletonModel::test_chain();
  EXPECT_EQ(m.joint_count(), 4);
  EXPECT_EQ(m.dof_count(), 15);
  EXPECT_TRUE(m.is_ancestor_or_self(0, 3));
  EXPECT_TRUE(m.is_ancestor_or_self(3, 3));
  EXPECT_FALSE(m.is_ancestor_or_self(3, 1));
}

TEST(SkeletonTest, ParsesCommentsAndDefaultEndpoints) {
  const char* text = R"(
    # comment line
    joint Pelvis - 0 0 0   # trailing comment
    joint L_Hand Pelvis 0.1 0 0
    joint R_Hand Pelvis -0.1 0 0
    joint L_Foot Pelvis 0.1 -0.9 0
    joint R_Foot Pelvis -0.1 -0.9 0
    mass Pelvis 10 0 0 0 1 1 1 0 0 0
    mass L_Hand 1 0 0 0 0.1 0.1 0.1 0 0 0
    mass R_Hand 1 0 0 0 0.1 0.1 0.1 0 0 0
    mass L_Foot 1 0 0 0 0.1 0.1 0.1 0 0 0
    mass R_Foot 1 0 0 0 0.1 0.1 0.1 0 0 0
    gravity 0 0 -9.81
  )";
  const SkeletonModel m = SkeletonModel::parse(text);
  EXPECT_EQ(m.joint_count(), 5);
  EXPECT_EQ(m.endpoint_joint(Endpoint::kRightFoot), 4);
  EXPECT_EQ(m.up(), Vec3(0, 0, 1));
  EXPECT_NEAR(m.total_mass(), 14.0, 1e-12);
}

TEST(SkeletonTest, RejectsMalformedInput) {
  EXPECT_THROW(SkeletonModel::parse("joint a - 0 0 0\njoint b c 0 0 0\n"), ConfigurationError);
  EXPECT_THROW(SkeletonModel::parse("joint a - 0 0 0\n"), ConfigurationError);  // no mass
  EXPECT_THROW(SkeletonModel::parse("joint a - 0 0 0\nmass a -1 0 0 0 1 1 1 0 0 0\n"
                                    "endpoints a a a a a\n"),
               ConfigurationError);
  EXPECT_THROW(SkeletonModel::parse("joint a - 0 0 0\nmass a 1 0 0 0 1 1 -1 0 0 0\n"
                                    "endpoints a a a a a\n"),
               ConfigurationError);
  EXPECT_THROW(SkeletonModel::parse("joint a - 0 0 nan\n"), ConfigurationError);
  EXPECT_THROW(SkeletonModel::parse("bogus 1 2 3\n"), ConfigurationError);
  EXPECT_THROW(SkeletonModel::parse("joint a - 0 0 0\nmass a 1 0 0 0 1 1 1 0 0 0\n"),
               ConfigurationError);  // default endpoint names absent
  EXPECT_THROW(SkeletonModel::load("/nonexistent/file.skel"), IoError);
}

TEST(SkeletonTest, StateValidation) {
  const SkeletonModel& m = SkeletonModel::test_chain();
  CharacterState s = CharacterState::zero(m);
  EXPECT_NO_THROW(s.validate(m));
  s.q(4) = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(s.validate(m), ConfigurationError);
  s.q.resize(3);
  EXPECT_THROW(s.validate(m), ConfigurationError);
}

}  // namespace
}  // namespace phystrack
