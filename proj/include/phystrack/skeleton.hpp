#pragma once

#include <array>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "phystrack/rotation.hpp"

namespace phystrack {

/// The five stationary-candidate joints tracked by the estimator.
enum class Endpoint { kLeftHand = 0, kRightHand, kLeftFoot, kRightFoot, kPelvis };
inline constexpr int kEndpointCount = 5;
inline constexpr std::array<Endpoint, kEndpointCount> kAllEndpoints = {
    Endpoint::kLeftHand, Endpoint::kRightHand, Endpoint::kLeftFoot,
    Endpoint::kRightFoot, Endpoint::kPelvis};

std::string_view endpoint_name(Endpoint e);
bool is_hand(Endpoint e);

struct Joint {
  std::string name;
  int parent = -1;  // -1 for the root
  Vec3 offset = Vec3::Zero();  // rest offset from the parent joint, parent frame [m]
};

/// Rigid body attached to a joint, expressed in that joint's frame.
struct BodyInertia {
  double mass = 0.0;                     // [kg]
  Vec3 com = Vec3::Zero();               // [m]
  Mat3 inertia = Mat3::Identity();       // about the CoM [kg m^2]
};

/// Articulated floating-base character.
///
/// Generalized coordinates: q[0:3] root translation, then three intrinsic XYZ
/// Euler angles per joint starting with the root, so n = 3 + 3 * joint_count.
/// Immutable after construction.
class SkeletonModel {
 public:
  /// Validates topology, offsets, inertia and endpoint indices.
  SkeletonModel(std::vector<Joint> joints, std::vector<BodyInertia> bodies,
                std::array<int, kEndpointCount> endpoints,
                Vec3 gravity = Vec3(0.0, -9.8, 0.0));

  /// Parses the line-based skeleton description format.
  static SkeletonModel parse(std::string_view text);
  static SkeletonModel load(const std::string& path);

  /// Bundled 24-joint SMPL-topology humanoid (80 kg).
  static const SkeletonModel& humanoid();
  /// Bundled four-joint floating chain used by tests.
  static const SkeletonModel& test_chain();

  int joint_count() const { return static_cast<int>(joints_.size()); }
  int dof_count() const { return 3 + 3 * joint_count(); }
  /// Index of the first Euler DOF of joint j.
  static int rotation_dof(int joint) { return 3 + 3 * joint; }

  const Joint& joint(int j) const { return joints_[j]; }
  std::span<const Joint> joints() const { return joints_; }
  const BodyInertia& body(int j) const { return bodies_[j]; }
  std::span<const BodyInertia> bodies() const { return bodies_; }
  std::span<const int> children(int j) const { return children_[j]; }

  int endpoint_joint(Endpoint e) const { return endpoints_[static_cast<int>(e)]; }

  /// Gravity acceleration in the world frame [m/s^2].
  const Vec3& gravity() const { return gravity_; }
  Vec3 gravity_direction() const { return gravity_.normalized(); }
  Vec3 up() const { return -gravity_direction(); }
  double total_mass() const { return total_mass_; }

  /// Returns -1 when the name is unknown.
  int find_joint(std::string_view name) const;
  /// True when `ancestor` lies on the path from `joint` to the root (inclusive).
  bool is_ancestor_or_self(int ancestor, int joint) const;

  SkeletonModel with_gravity(const Vec3& gravity) const;

 private:
  std::vector<Joint> joints_;
  std::vector<BodyInertia> bodies_;
  std::vector<std::vector<int>> children_;
  std::array<int, kEndpointCount> endpoints_{};
  Vec3 gravity_;
  double total_mass_ = 0.0;
};

/// Generalized position and velocity of the physics character.
struct CharacterState {
  VecX q;
  VecX qdot;

  static CharacterState zero(const SkeletonModel& model);
  /// Throws ConfigurationError on length mismatch or non-finite entries.
  void validate(const SkeletonModel& model) const;
};

}  // namespace phystrack
