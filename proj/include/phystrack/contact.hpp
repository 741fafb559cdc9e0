#pragma once

#include <array>
#include <optional>
#include <vector>

#include "phystrack/skeleton.hpp"

namespace phystrack {

using Vec6 = Eigen::Matrix<double, 6, 1>;

struct ContactConfig {
  double beta_lambda = 0.4;
  double mu = 0.7;
  double e_th = 400.0;  // on the unweighted 6-vector norm (N and N·m mixed)
  double stationary_threshold = 0.7;
  double height_tolerance = 0.05;  // [m]
  int counter_threshold = 5;
  int pyramid_edges = 4;
  double pairing_distance = 0.3;  // horizontal [m]

  /// Throws ConfigurationError on out-of-range values. Only 4 pyramid edges
  /// are supported.
  void validate() const;
};

enum class ContactStatus { kFree, kPotential, kContact };
const char* status_name(ContactStatus s);

struct EndpointContact {
  ContactStatus status = ContactStatus::kFree;
  int counter = 0;
  /// Height of the horizontal surface the endpoint rests on, or last rested
  /// on. Set for every contact.
  std::optional<double> surface_height;
  Vec3 lambda = Vec3::Zero();  // last solved force [N]
};

struct ContactSet {
  std::array<EndpointContact, kEndpointCount> endpoints;
  EndpointContact& operator[](Endpoint e) { return endpoints[static_cast<int>(e)]; }
  const EndpointContact& operator[](Endpoint e) const { return endpoints[static_cast<int>(e)]; }
};

/// Height along the model's up axis (minus gravity).
double height_of(const SkeletonModel& model, const Vec3& p);

/// Rule-based labelling. A stationary endpoint (s above threshold) becomes a
/// contact if it was one last frame or touches the ground or its remembered
/// surface; a stationary endpoint beside a contact at the same height joins
/// it; other stationary endpoints become potential contacts; the rest are
/// freed and their counters cleared.
ContactSet mark_contacts(const SkeletonModel& model, const ContactSet& previous,
                         const std::array<double, kEndpointCount>& s, const VecX& positions,
                         double ground_height, const ContactConfig& config);

struct ContactPoint {
  Endpoint endpoint;
  bool friction_cone = true;
};

struct ContactForces {
  std::vector<ContactPoint> points;
  std::vector<Vec3> forces;  // world frame [N], one per point
  MatX jacobian;             // stacked 3c x n contact Jacobian
  VecX generalized_force;    // Jᵀλ, length n
  Vec6 e = Vec6::Zero();     // unexplained root residual
  double e_norm = 0.0;
};

/// Contact forces explaining the root residual:
///   min |(Jᵀλ)_{:6} - τ_{:6}|² + β_λ |λ|²
/// with coned points restricted to the 4-edge friction pyramid about
/// minus gravity. Solved as NNLS over edge weights plus free hand forces.
ContactForces solve_contact_forces(const SkeletonModel& model, const VecX& q,
                                   const std::vector<ContactPoint>& points, const Vec6& residual,
                                   const ContactConfig& config);

/// e = τ_{:6} - (Jᵀλ)_{:6}.
Vec6 residual_after(const Vec6& residual, const MatX& jacobian, const VecX& lambda);

/// Unit pyramid edge directions n + μ t_k (not normalized), n = up.
std::array<Vec3, 4> pyramid_edges(const Vec3& up, double mu);

struct ContactEvent {
  enum class Kind { kAccepted, kRejected, kCommitted };
  Kind kind;
  Endpoint endpoint;
  double e_before = 0.0;
  double e_after = 0.0;
  int counter = 0;
};
const char* event_name(ContactEvent::Kind k);

struct ContactEstimate {
  ContactSet set;
  ContactForces forces;  // from committed contacts only
  std::vector<ContactEvent> events;
};

/// Iterative acceptance. Starting from the committed contacts, potentials are
/// tried nearest-to-ground first while |e| > e_th; one is kept if it more
/// than halves |e|. A kept potential counts up and becomes a contact (with
/// its surface at its current height) once the counter reaches the
/// threshold. Potentials that are rejected or not needed restart at 0.
ContactEstimate estimate_contacts(const SkeletonModel& model, const VecX& q,
                                  const ContactSet& marked, const Vec6& residual,
                                  double ground_height, const ContactConfig& config);

/// Pulls contact endpoint references toward their surface: a gap in
/// (0, d_th] shrinks by `pull_factor`, penetration is clamped to the surface.
VecX adjust_references(const SkeletonModel& model, const VecX& r_ref, const ContactSet& contacts,
                       double d_th, double pull_factor);

}  // namespace phystrack
